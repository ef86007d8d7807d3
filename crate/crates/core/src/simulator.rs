//! Synthetic user: generates raw pressure traces aimed at a target symbol.
//!
//! A trace rests at zero for one frame, ramps toward the target's bin center
//! plus a Gaussian overshoot, dwells there, then releases back into the dead
//! zone. Every pressed frame also carries Gaussian tremor. The trajectory is
//! built in normalized units and mapped back to raw sensor units through the
//! inverse of the remap window.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytics::box_stats;
use crate::engine::{EngineConfig, EngineError, Hand, PressureSample, RemapConfig, Timestamp};
use crate::layout::{LayoutConfig, LayoutError, Symbol};
use crate::trace_io::replay;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid motor model: {0}")]
    InvalidParams(String),
    #[error("sweep grid is empty")]
    EmptyGrid,
    #[error("trials must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MotorModelParams {
    pub target: Symbol,
    /// Normalized pressure per second while pressing.
    pub rise_rate: f64,
    pub overshoot_sd: f64,
    /// Per-sample noise, normalized units.
    pub tremor_sd: f64,
    pub dwell_s: f64,
    pub release_rate: f64,
    pub sample_rate: f64,
    pub seed: u64,
    pub hand: Hand,
}

impl Default for MotorModelParams {
    fn default() -> Self {
        Self {
            target: Symbol::Char('A'),
            rise_rate: 2.0,
            overshoot_sd: 0.02,
            tremor_sd: 0.005,
            dwell_s: 0.15,
            release_rate: 4.0,
            sample_rate: 72.0,
            seed: 0,
            hand: Hand::Right,
        }
    }
}

impl MotorModelParams {
    pub fn noise_free(target: Symbol) -> Self {
        Self {
            target,
            overshoot_sd: 0.0,
            tremor_sd: 0.0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let positive = [
            ("rise_rate", self.rise_rate),
            ("release_rate", self.release_rate),
            ("sample_rate", self.sample_rate),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SimError::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        let non_negative = [
            ("overshoot_sd", self.overshoot_sd),
            ("tremor_sd", self.tremor_sd),
            ("dwell_s", self.dwell_s),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(SimError::InvalidParams(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Seed for trial `trial` of a run seeded with `base`.
pub fn trial_seed(base: u64, trial: u64) -> u64 {
    splitmix64(base ^ splitmix64(trial.wrapping_add(0x9E37_79B9_7F4A_7C15)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn frame_time(k: usize, sample_rate: f64) -> Timestamp {
    Timestamp::from_micros((k as f64 * 1e6 / sample_rate).round() as u64)
}

/// Normalized trajectory before noise: rest, ramp, dwell, release.
/// Returns the values and whether each frame is "pressed" (receives tremor).
fn trajectory(params: &MotorModelParams, peak: f64) -> Vec<(f64, bool)> {
    let dt = 1.0 / params.sample_rate;
    let mut out = vec![(0.0, false)];
    if peak > 0.0 {
        let rise_step = params.rise_rate * dt;
        let n_rise = (peak / rise_step).ceil().max(1.0) as usize;
        out.extend((1..=n_rise).map(|k| ((k as f64 * rise_step).min(peak), true)));
        let n_dwell = (params.dwell_s * params.sample_rate).round() as usize;
        out.extend(std::iter::repeat_n((peak, true), n_dwell));
        let release_step = params.release_rate * dt;
        let n_release = (peak / release_step).ceil() as usize;
        out.extend(
            (1..n_release)
                .map(|k| peak - k as f64 * release_step)
                .filter(|&v| v > 0.0)
                .map(|v| (v, true)),
        );
    }
    out.push((0.0, false));
    out
}

/// Raw sample trace for one attempt at `params.target`, starting at t = 0.
pub fn generate_trace(
    params: &MotorModelParams,
    layout: &LayoutConfig,
    remap: &RemapConfig,
) -> Result<Vec<PressureSample>, SimError> {
    params.validate()?;
    remap.validate()?;
    let center = layout.bin_center(layout.index_of(params.target)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let overshoot = Normal::new(0.0, params.overshoot_sd)
        .map_err(|e| SimError::InvalidParams(e.to_string()))?;
    let tremor = Normal::new(0.0, params.tremor_sd)
        .map_err(|e| SimError::InvalidParams(e.to_string()))?;

    let peak = (center + overshoot.sample(&mut rng)).clamp(0.0, 1.0);
    let samples = trajectory(params, peak)
        .into_iter()
        .enumerate()
        .map(|(k, (value, pressed))| {
            let value = if pressed {
                value + tremor.sample(&mut rng)
            } else {
                value
            };
            let raw = remap.unmap(value.max(0.0));
            PressureSample::new(frame_time(k, params.sample_rate), raw, params.hand)
        })
        .collect();
    Ok(samples)
}

/// `trials` consecutive attempts as one continuous stream. Attempt `i` uses
/// seed `trial_seed(params.seed, i)` and starts one frame after the
/// previous attempt ended.
pub fn generate_session(
    params: &MotorModelParams,
    layout: &LayoutConfig,
    remap: &RemapConfig,
    trials: usize,
) -> Result<Vec<PressureSample>, SimError> {
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    let frame_us = (1e6 / params.sample_rate).round() as u64;
    let mut out: Vec<PressureSample> = Vec::new();
    for i in 0..trials {
        let p = MotorModelParams {
            seed: trial_seed(params.seed, i as u64),
            ..params.clone()
        };
        let offset = out.last().map_or(0, |s| s.t.as_micros() + frame_us);
        out.extend(generate_trace(&p, layout, remap)?.into_iter().map(|mut s| {
            s.t = s.t.saturating_add_micros(offset);
            s
        }));
    }
    Ok(out)
}

/// Outcome of one replayed attempt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    /// Exactly one symbol was entered and it was the target.
    pub correct: bool,
    /// Arm-to-confirm time of the last entry, if anything was entered.
    pub duration_s: Option<f64>,
}

pub fn run_trial(
    cfg: &EngineConfig,
    params: &MotorModelParams,
) -> Result<TrialOutcome, SimError> {
    let trace = generate_trace(params, &cfg.layout, &cfg.remap)?;
    let log = replay(&trace, cfg)?;
    Ok(TrialOutcome {
        correct: log.records.len() == 1 && log.records[0].symbol == params.target,
        duration_s: log.records.last().map(|r| r.duration_s),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub config: EngineConfig,
    pub params: MotorModelParams,
    pub trials: usize,
    pub errors: usize,
    pub error_rate: f64,
    /// Median arm-to-confirm time over attempts that entered something.
    pub median_time_s: Option<f64>,
}

/// Runs `trials` attempts per grid point. Trial seeds depend only on the
/// point's base seed and the trial index, so points sharing a base seed see
/// the same noise draws.
pub fn sweep(
    grid: &[(EngineConfig, MotorModelParams)],
    trials: usize,
) -> Result<Vec<SweepRow>, SimError> {
    if grid.is_empty() {
        return Err(SimError::EmptyGrid);
    }
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    grid.iter()
        .map(|(cfg, params)| {
            cfg.validate()?;
            let outcomes = (0..trials as u64)
                .into_par_iter()
                .map(|i| {
                    let p = MotorModelParams {
                        seed: trial_seed(params.seed, i),
                        ..params.clone()
                    };
                    run_trial(cfg, &p)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let errors = outcomes.iter().filter(|o| !o.correct).count();
            let times: Vec<f64> = outcomes.iter().filter_map(|o| o.duration_s).collect();
            Ok(SweepRow {
                config: cfg.clone(),
                params: params.clone(),
                trials,
                errors,
                error_rate: errors as f64 / trials as f64,
                median_time_s: box_stats(&times).ok().map(|b| b.median),
            })
        })
        .collect()
}
