//! Session logs: one header line followed by one line per entered
//! character, each a JSON object.
//!
//! ```text
//! {"version":1,"layout":["A",...,"SP","BS"],"remap_lo":0.05,...}
//! {"symbol":"F","selection_pressure":0.19,"duration_s":0.54,"gap_s":null,"hand":"R","samples":[[0.013889,0.31],...]}
//! ```
//!
//! Numbers are written in their shortest round-trip form, so
//! `read_session(write_session(log)) == log` holds exactly. Timestamps are
//! seconds with microsecond resolution.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{
    DeleteSource, Engine, EngineConfig, EngineError, Hand, InputEvent, PressureSample, RemapConfig,
    Timestamp,
};
use crate::layout::{LayoutConfig, Symbol};

pub const LOG_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: field `{field}`: {message}")]
    Malformed {
        line: usize,
        field: String,
        message: String,
    },
    #[error("unsupported log version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("missing header line")]
    MissingHeader,
    #[error("line {line}: {source}")]
    Config {
        line: usize,
        #[source]
        source: EngineError,
    },
}

/// Flat, serializable view of an [`EngineConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    pub layout: LayoutConfig,
    pub remap_lo: f64,
    pub remap_hi: f64,
    pub buffer_size: usize,
    pub nominal_rate: f64,
    pub hold_delete_delay: f64,
    pub hold_delete_rate: f64,
    pub hold_threshold: f64,
}

impl From<&EngineConfig> for ConfigSnapshot {
    fn from(cfg: &EngineConfig) -> Self {
        Self {
            layout: cfg.layout.clone(),
            remap_lo: cfg.remap.lo,
            remap_hi: cfg.remap.hi,
            buffer_size: cfg.buffer_size,
            nominal_rate: cfg.nominal_rate,
            hold_delete_delay: cfg.hold_delete_delay,
            hold_delete_rate: cfg.hold_delete_rate,
            hold_threshold: cfg.hold_threshold,
        }
    }
}

impl TryFrom<ConfigSnapshot> for EngineConfig {
    type Error = EngineError;

    fn try_from(s: ConfigSnapshot) -> Result<Self, Self::Error> {
        let cfg = EngineConfig {
            layout: s.layout,
            remap: RemapConfig {
                lo: s.remap_lo,
                hi: s.remap_hi,
            },
            buffer_size: s.buffer_size,
            nominal_rate: s.nominal_rate,
            hold_delete_delay: s.hold_delete_delay,
            hold_delete_rate: s.hold_delete_rate,
            hold_threshold: s.hold_threshold,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Partial configuration: every field present replaces the base value.
/// Used by config files and by the session handshake.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<LayoutConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub remap_lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub remap_hi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub buffer_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nominal_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hold_delete_delay: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hold_delete_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hold_threshold: Option<f64>,
}

impl ConfigOverrides {
    /// Later overrides win field by field.
    pub fn merge(self, later: ConfigOverrides) -> ConfigOverrides {
        ConfigOverrides {
            layout: later.layout.or(self.layout),
            remap_lo: later.remap_lo.or(self.remap_lo),
            remap_hi: later.remap_hi.or(self.remap_hi),
            buffer_size: later.buffer_size.or(self.buffer_size),
            nominal_rate: later.nominal_rate.or(self.nominal_rate),
            hold_delete_delay: later.hold_delete_delay.or(self.hold_delete_delay),
            hold_delete_rate: later.hold_delete_rate.or(self.hold_delete_rate),
            hold_threshold: later.hold_threshold.or(self.hold_threshold),
        }
    }

    /// Applies the overrides to `base`. A new layout without an explicit
    /// hold threshold gets that layout's default threshold.
    pub fn apply(&self, base: &EngineConfig) -> Result<EngineConfig, EngineError> {
        let mut cfg = base.clone();
        if let Some(layout) = &self.layout {
            cfg.hold_threshold = EngineConfig::default_hold_threshold(layout);
            cfg.layout = layout.clone();
        }
        cfg.remap.lo = self.remap_lo.unwrap_or(cfg.remap.lo);
        cfg.remap.hi = self.remap_hi.unwrap_or(cfg.remap.hi);
        cfg.buffer_size = self.buffer_size.unwrap_or(cfg.buffer_size);
        cfg.nominal_rate = self.nominal_rate.unwrap_or(cfg.nominal_rate);
        cfg.hold_delete_delay = self.hold_delete_delay.unwrap_or(cfg.hold_delete_delay);
        cfg.hold_delete_rate = self.hold_delete_rate.unwrap_or(cfg.hold_delete_rate);
        cfg.hold_threshold = self.hold_threshold.unwrap_or(cfg.hold_threshold);
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionHeader {
    pub config: EngineConfig,
    /// Unix seconds. Left empty by replay so identical inputs give
    /// identical bytes.
    pub created_at: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct HeaderLine {
    version: u32,
    #[serde(flatten)]
    config: ConfigSnapshot,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    created_at: Option<u64>,
}

/// One entered symbol and the pressure graph of its episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterRecord {
    pub symbol: Symbol,
    pub selection_pressure: f64,
    /// Arming to confirmation.
    pub duration_s: f64,
    /// Since the previous record's confirmation; `None` for the first.
    pub gap_s: Option<f64>,
    pub hand: Hand,
    pub samples: Vec<(Timestamp, f64)>,
    /// Hold-repeat deletions fired during this episode.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub hold_repeats: u32,
}

fn is_zero(n: &u32) -> bool {
    *n == 0
}

impl CharacterRecord {
    /// Time of the confirming frame.
    pub fn committed_at(&self) -> Option<Timestamp> {
        self.samples.last().map(|&(t, _)| t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionLog {
    pub header: SessionHeader,
    pub records: Vec<CharacterRecord>,
}

impl SessionLog {
    pub fn new(config: EngineConfig) -> Self {
        Self {
            header: SessionHeader {
                config,
                created_at: None,
            },
            records: Vec::new(),
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.header.config
    }

    pub fn layout(&self) -> &LayoutConfig {
        &self.header.config.layout
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        write_session(self, &mut buf).expect("writing to a Vec cannot fail");
        buf
    }
}

pub fn write_session<W: Write>(log: &SessionLog, mut sink: W) -> Result<(), TraceError> {
    let header = HeaderLine {
        version: LOG_VERSION,
        config: ConfigSnapshot::from(&log.header.config),
        created_at: log.header.created_at,
    };
    write_line(&mut sink, &header)?;
    for record in &log.records {
        write_line(&mut sink, record)?;
    }
    sink.flush()?;
    Ok(())
}

fn write_line<W: Write, T: Serialize>(sink: &mut W, value: &T) -> Result<(), TraceError> {
    serde_json::to_writer(&mut *sink, value).map_err(io::Error::from)?;
    sink.write_all(b"\n")?;
    Ok(())
}

/// Parses one JSON line, reporting the offending field path on failure.
pub(crate) fn parse_line<T: for<'de> Deserialize<'de>>(
    text: &str,
    line: usize,
) -> Result<T, TraceError> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let field = err.path().to_string();
        TraceError::Malformed {
            line,
            field,
            message: err.into_inner().to_string(),
        }
    })
}

pub fn read_session<R: BufRead>(source: R) -> Result<SessionLog, TraceError> {
    let mut lines = source.lines().enumerate();
    let (header, mut records) = loop {
        let Some((i, text)) = lines.next() else {
            return Err(TraceError::MissingHeader);
        };
        let text = text?;
        if text.trim().is_empty() {
            continue;
        }
        let raw: serde_json::Value = parse_line(&text, i + 1)?;
        let version = raw.get("version").and_then(serde_json::Value::as_u64);
        match version {
            Some(v) if v == u64::from(LOG_VERSION) => {}
            Some(v) => {
                return Err(TraceError::Version {
                    found: u32::try_from(v).unwrap_or(u32::MAX),
                    expected: LOG_VERSION,
                })
            }
            None => {
                return Err(TraceError::Malformed {
                    line: i + 1,
                    field: "version".into(),
                    message: "missing or not an integer".into(),
                })
            }
        }
        let header: HeaderLine = parse_line(&text, i + 1)?;
        let config = EngineConfig::try_from(header.config)
            .map_err(|source| TraceError::Config { line: i + 1, source })?;
        break (
            SessionHeader {
                config,
                created_at: header.created_at,
            },
            Vec::new(),
        );
    };
    for (i, text) in lines {
        let text = text?;
        if text.trim().is_empty() {
            continue;
        }
        let record: CharacterRecord = parse_line(&text, i + 1)?;
        if !(0.0..=1.0).contains(&record.selection_pressure) {
            return Err(TraceError::Malformed {
                line: i + 1,
                field: "selection_pressure".into(),
                message: format!("{} outside [0, 1]", record.selection_pressure),
            });
        }
        if record.samples.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(TraceError::Malformed {
                line: i + 1,
                field: "samples".into(),
                message: "timestamps must strictly increase".into(),
            });
        }
        records.push(record);
    }
    Ok(SessionLog { header, records })
}

pub fn write_samples<W: Write>(samples: &[PressureSample], mut sink: W) -> Result<(), TraceError> {
    for s in samples {
        write_line(&mut sink, s)?;
    }
    sink.flush()?;
    Ok(())
}

/// Reads a raw sample stream: one `{"t":..,"raw":..,"hand":"L"|"R"}` per line.
pub fn read_samples<R: BufRead>(source: R) -> Result<Vec<PressureSample>, TraceError> {
    let mut out = Vec::new();
    for (i, text) in source.lines().enumerate() {
        let text = text?;
        if text.trim().is_empty() {
            continue;
        }
        out.push(parse_line(&text, i + 1)?);
    }
    Ok(out)
}

/// Result of feeding one sample through a [`Recorder`].
#[derive(Debug, Clone, PartialEq)]
pub struct RecorderStep {
    pub events: Vec<InputEvent>,
    /// Set on the confirming frame of an episode.
    pub record: Option<CharacterRecord>,
}

/// Wraps an [`Engine`] and cuts its output into per-episode records.
#[derive(Debug, Clone)]
pub struct Recorder {
    engine: Engine,
    episode: Vec<(Timestamp, f64)>,
    hold_repeats: u32,
    last_commit: Option<Timestamp>,
    records: Vec<CharacterRecord>,
    idle: Option<Vec<PressureSample>>,
}

impl Recorder {
    pub fn new(cfg: EngineConfig) -> Result<Self, EngineError> {
        Ok(Self {
            engine: Engine::new(cfg)?,
            episode: Vec::new(),
            hold_repeats: 0,
            last_commit: None,
            records: Vec::new(),
            idle: None,
        })
    }

    /// Also keep samples that fall outside every episode.
    pub fn keep_idle(mut self) -> Self {
        self.idle = Some(Vec::new());
        self
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn records(&self) -> &[CharacterRecord] {
        &self.records
    }

    /// Samples of the episode in progress.
    pub fn episode(&self) -> &[(Timestamp, f64)] {
        &self.episode
    }

    /// Resets the engine and drops the open episode. Finished records stay.
    pub fn reset(&mut self) {
        self.engine.reset();
        self.episode.clear();
        self.hold_repeats = 0;
    }

    pub fn step(&mut self, sample: &PressureSample) -> Result<RecorderStep, EngineError> {
        let before = self.engine.state().clone();
        let events = self.engine.step(sample)?;
        let mut committed = None;
        for e in &events {
            match *e {
                InputEvent::CharacterCommitted {
                    symbol,
                    selection_pressure,
                    duration_s,
                    hand,
                    timestamp,
                } => committed = Some((symbol, selection_pressure, duration_s, hand, timestamp)),
                InputEvent::CharacterDeleted {
                    source: DeleteSource::Commit,
                    timestamp,
                    ..
                } => {
                    let arm = before.arm_time().unwrap_or(timestamp);
                    committed = Some((
                        Symbol::Backspace,
                        before.highlight_pressure(),
                        timestamp.secs_since(arm),
                        sample.hand,
                        timestamp,
                    ));
                }
                InputEvent::CharacterDeleted {
                    source: DeleteSource::HoldRepeat,
                    ..
                } => self.hold_repeats += 1,
                InputEvent::HighlightChanged { .. } => {}
            }
        }

        let in_episode = committed.is_some() || self.engine.state().is_armed();
        if in_episode {
            self.episode.push((sample.t, sample.raw));
        } else if let Some(idle) = &mut self.idle {
            idle.push(*sample);
        }

        let record = committed.map(|(symbol, selection_pressure, duration_s, hand, at)| {
            let record = CharacterRecord {
                symbol,
                selection_pressure,
                duration_s,
                gap_s: self.last_commit.map(|prev| at.secs_since(prev)),
                hand,
                samples: std::mem::take(&mut self.episode),
                hold_repeats: std::mem::take(&mut self.hold_repeats),
            };
            self.last_commit = Some(at);
            self.records.push(record.clone());
            record
        });
        Ok(RecorderStep { events, record })
    }

    pub fn finish(self) -> ReplayOutput {
        ReplayOutput {
            log: SessionLog {
                header: SessionHeader {
                    config: self.engine.config().clone(),
                    created_at: None,
                },
                records: self.records,
            },
            idle: self.idle.unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayOutput {
    pub log: SessionLog,
    /// Samples outside every episode; empty unless idle samples were kept.
    pub idle: Vec<PressureSample>,
}

/// Feeds `samples` through a fresh engine and collects the session log.
pub fn replay(samples: &[PressureSample], cfg: &EngineConfig) -> Result<SessionLog, EngineError> {
    Ok(replay_full(samples, cfg, false)?.log)
}

pub fn replay_full(
    samples: &[PressureSample],
    cfg: &EngineConfig,
    keep_idle: bool,
) -> Result<ReplayOutput, EngineError> {
    let mut recorder = Recorder::new(cfg.clone())?;
    if keep_idle {
        recorder = recorder.keep_idle();
    }
    for s in samples {
        recorder.step(s)?;
    }
    Ok(recorder.finish())
}

/// Rebuilds the full sample stream from a log's episodes plus its idle
/// samples, in time order.
pub fn reassemble(log: &SessionLog, idle: &[PressureSample]) -> Vec<PressureSample> {
    let mut out: Vec<PressureSample> = log
        .records
        .iter()
        .flat_map(|r| {
            r.samples
                .iter()
                .map(move |&(t, raw)| PressureSample::new(t, raw, r.hand))
        })
        .chain(idle.iter().copied())
        .collect();
    out.sort_by_key(|s| s.t);
    out
}
