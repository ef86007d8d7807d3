use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use presstype_cli::config::ConfigArgs;
use presstype_cli::service::{Server, ServiceConfig};
use presstype_core::{
    experiment_report, generate_session, read_samples, read_session, replay_full, sweep,
    write_samples, write_session, ConfigOverrides, EngineConfig, Hand, MotorModelParams, Symbol,
};

#[derive(Parser)]
#[command(name = "presstype", version, about = "Pressure-based text entry engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the live session server.
    Serve {
        #[arg(long, default_value = "127.0.0.1:7878")]
        bind: String,
        /// Write each session's log here when the client ends it.
        #[arg(long)]
        log_dir: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Turn a raw sample file into a session log.
    Replay {
        samples: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write samples outside every episode to `<out>.idle`.
        #[arg(long)]
        keep_idle: bool,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Accuracy and speed summary of a session log.
    Report {
        log: PathBuf,
        #[arg(long)]
        target: Symbol,
        /// Also report the error rate with bins this many times wider.
        #[arg(long)]
        scale: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Generate synthetic attempts at one symbol and log them.
    Simulate {
        #[arg(long)]
        target: Symbol,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the raw samples.
        #[arg(long)]
        samples_out: Option<PathBuf>,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Error rate and timing over a grid of engine and motor settings.
    Sweep {
        /// TOML file with `[[point]]` tables holding `config` and `model`.
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// CSV output.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    /// One JSON object.
    Lines,
}

#[derive(Clone, Copy, ValueEnum)]
enum HandArg {
    L,
    R,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    rise_rate: Option<f64>,
    #[arg(long)]
    overshoot_sd: Option<f64>,
    #[arg(long)]
    tremor_sd: Option<f64>,
    #[arg(long)]
    dwell_s: Option<f64>,
    #[arg(long)]
    release_rate: Option<f64>,
    #[arg(long)]
    sample_rate: Option<f64>,
    #[arg(long, value_enum)]
    hand: Option<HandArg>,
}

impl ModelArgs {
    fn params(&self, target: Symbol, seed: u64) -> MotorModelParams {
        let d = MotorModelParams::default();
        MotorModelParams {
            target,
            seed,
            rise_rate: self.rise_rate.unwrap_or(d.rise_rate),
            overshoot_sd: self.overshoot_sd.unwrap_or(d.overshoot_sd),
            tremor_sd: self.tremor_sd.unwrap_or(d.tremor_sd),
            dwell_s: self.dwell_s.unwrap_or(d.dwell_s),
            release_rate: self.release_rate.unwrap_or(d.release_rate),
            sample_rate: self.sample_rate.unwrap_or(d.sample_rate),
            hand: match self.hand {
                Some(HandArg::L) => Hand::Left,
                Some(HandArg::R) => Hand::Right,
                None => d.hand,
            },
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Grid {
    point: Vec<GridPoint>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridPoint {
    #[serde(default)]
    config: ConfigOverrides,
    #[serde(default)]
    model: MotorModelParams,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("opening {}", path.display()))?,
    ))
}

fn idle_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".idle");
    PathBuf::from(name)
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Serve {
            bind,
            log_dir,
            config,
        } => {
            let server = Server::bind(
                &bind,
                ServiceConfig {
                    engine: config.resolve()?,
                    log_dir,
                },
            )
            .with_context(|| format!("binding {bind}"))?;
            eprintln!("listening on {}", server.local_addr()?);
            server.run()?;
        }
        Command::Replay {
            samples,
            out,
            keep_idle,
            config,
        } => {
            let cfg = config.resolve()?;
            let samples = read_samples(open(&samples)?)
                .with_context(|| format!("reading {}", samples.display()))?;
            let output = replay_full(&samples, &cfg, keep_idle)?;
            write_session(&output.log, create(&out)?)?;
            if keep_idle {
                write_samples(&output.idle, create(&idle_path(&out))?)?;
            }
            eprintln!("{} records", output.log.records.len());
        }
        Command::Report {
            log,
            target,
            scale,
            format,
        } => {
            let log = read_session(open(&log)?).with_context(|| format!("reading {}", log.display()))?;
            let mut report = experiment_report(&log, target)?;
            if let Some(scale) = scale {
                report = report.with_scale(&log, scale)?;
            }
            match format {
                Format::Table => print!("{}", report.to_table()),
                Format::Lines => println!("{}", serde_json::to_string(&report)?),
            }
        }
        Command::Simulate {
            target,
            trials,
            seed,
            out,
            samples_out,
            model,
            config,
        } => {
            let cfg = config.resolve()?;
            let params = model.params(target, seed);
            let samples = generate_session(&params, &cfg.layout, &cfg.remap, trials)?;
            if let Some(path) = samples_out {
                write_samples(&samples, create(&path)?)?;
            }
            let output = replay_full(&samples, &cfg, false)?;
            write_session(&output.log, create(&out)?)?;
            eprintln!("{} records from {trials} trials", output.log.records.len());
        }
        Command::Sweep { grid, trials, out } => {
            let text = std::fs::read_to_string(&grid)
                .with_context(|| format!("reading {}", grid.display()))?;
            let grid: Grid = toml::from_str(&text).context("parsing grid")?;
            if grid.point.is_empty() {
                bail!("grid has no points");
            }
            let points = grid
                .point
                .into_iter()
                .map(|p| Ok((p.config.apply(&EngineConfig::default())?, p.model)))
                .collect::<Result<Vec<_>>>()?;
            let rows = sweep(&points, trials)?;
            let mut w = csv::Writer::from_writer(create(&out)?);
            w.write_record([
                "point", "target", "layout_len", "remap_lo", "remap_hi", "buffer_size",
                "overshoot_sd", "tremor_sd", "rise_rate", "dwell_s", "release_rate",
                "sample_rate", "seed", "trials", "errors", "error_rate", "median_time_s",
            ])?;
            for (i, r) in rows.iter().enumerate() {
                let p = &r.params;
                let c = &r.config;
                w.write_record([
                    i.to_string(),
                    p.target.to_string(),
                    c.layout.len().to_string(),
                    c.remap.lo.to_string(),
                    c.remap.hi.to_string(),
                    c.buffer_size.to_string(),
                    p.overshoot_sd.to_string(),
                    p.tremor_sd.to_string(),
                    p.rise_rate.to_string(),
                    p.dwell_s.to_string(),
                    p.release_rate.to_string(),
                    p.sample_rate.to_string(),
                    p.seed.to_string(),
                    r.trials.to_string(),
                    r.errors.to_string(),
                    r.error_rate.to_string(),
                    r.median_time_s.map_or(String::new(), |t| t.to_string()),
                ])?;
            }
            w.into_inner()
                .map_err(|e| anyhow::anyhow!("writing {}: {}", out.display(), e.error()))?
                .flush()?;
        }
    }
    Ok(())
}
