//! Accuracy and speed metrics over session logs.
//!
//! Pressures are compared against the intended character's bin center; a
//! record is correct when its deviation stays within half a bin width.
//! Speed is characters per minute derived from the median gap between
//! consecutive confirmations.

use serde::Serialize;
use thiserror::Error;

use crate::layout::{LayoutError, Symbol};
use crate::trace_io::SessionLog;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticsError {
    #[error("no values to summarize")]
    Empty,
    #[error("session log has no records")]
    EmptyLog,
    #[error("need at least 2 records to measure gaps, got {0}")]
    TooFewRecords(usize),
    #[error("median time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("scale must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

/// Five-number summary.
///
/// Quartiles are the medians of the lower and upper halves; for odd `n` the
/// overall median belongs to neither half.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub n: usize,
}

fn median_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

pub fn box_stats(values: &[f64]) -> Result<BoxStats, AnalyticsError> {
    if values.is_empty() {
        return Err(AnalyticsError::Empty);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let median = median_sorted(&v);
    let (q1, q3) = if n == 1 {
        (median, median)
    } else {
        let half = n / 2;
        (median_sorted(&v[..half]), median_sorted(&v[n - half..]))
    };
    Ok(BoxStats {
        min: v[0],
        q1,
        median,
        q3,
        max: v[n - 1],
        n,
    })
}

pub fn chars_per_minute(median_time_s: f64) -> Result<f64, AnalyticsError> {
    if median_time_s > 0.0 && median_time_s.is_finite() {
        Ok(60.0 / median_time_s)
    } else {
        Err(AnalyticsError::NonPositiveTime(median_time_s))
    }
}

/// Selection pressure minus the target's bin center, for every record.
pub fn normalized_pressures(log: &SessionLog, target: Symbol) -> Result<Vec<f64>, AnalyticsError> {
    let layout = log.layout();
    let center = layout.bin_center(layout.index_of(target)?)?;
    Ok(log
        .records
        .iter()
        .map(|r| r.selection_pressure - center)
        .collect())
}

/// Fraction of records whose symbol is not the target.
pub fn error_rate(log: &SessionLog, target: Symbol) -> Result<f64, AnalyticsError> {
    log.layout().index_of(target)?;
    if log.records.is_empty() {
        return Err(AnalyticsError::EmptyLog);
    }
    let errors = log.records.iter().filter(|r| r.symbol != target).count();
    Ok(errors as f64 / log.records.len() as f64)
}

/// Rounding allowance, in bins, for deviations that sit on a what-if
/// threshold.
pub const BOUNDARY_SLACK: f64 = 1e-12;

/// Error rate if every bin were `scale` times as wide: a record counts as an
/// error when its deviation exceeds `scale / (2N)`. The comparison is made in
/// bin units (`|p*N - (i + 0.5)| > scale / 2`), where the clamped extremes
/// 0 and 1 sit exactly half a bin from the end centers. Deviations within
/// [`BOUNDARY_SLACK`] bins of the threshold count as inside it.
pub fn what_if_scale(log: &SessionLog, target: Symbol, scale: f64) -> Result<f64, AnalyticsError> {
    if scale.is_nan() || scale <= 0.0 {
        return Err(AnalyticsError::NonPositiveScale(scale));
    }
    let layout = log.layout();
    let center = layout.index_of(target)? as f64 + 0.5;
    if log.records.is_empty() {
        return Err(AnalyticsError::EmptyLog);
    }
    let n = layout.len() as f64;
    let errors = log
        .records
        .iter()
        .filter(|r| (r.selection_pressure * n - center).abs() > scale / 2.0 + BOUNDARY_SLACK)
        .count();
    Ok(errors as f64 / log.records.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub target: Symbol,
    pub records: usize,
    pub errors: usize,
    pub error_rate: f64,
    pub pressure_stats: BoxStats,
    /// Over confirmation-to-confirmation gaps.
    pub time_stats: BoxStats,
    /// Over arm-to-confirm durations.
    pub duration_stats: BoxStats,
    pub cpm: f64,
    pub acceptable_halfwidth: f64,
    /// Present when a what-if scale was requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scaled: Option<ScaledErrorRate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledErrorRate {
    pub scale: f64,
    pub error_rate: f64,
}

pub fn experiment_report(log: &SessionLog, target: Symbol) -> Result<ExperimentReport, AnalyticsError> {
    let n = log.records.len();
    if n < 2 {
        return Err(AnalyticsError::TooFewRecords(n));
    }
    let deviations = normalized_pressures(log, target)?;
    let gaps: Vec<f64> = log.records.iter().filter_map(|r| r.gap_s).collect();
    let durations: Vec<f64> = log.records.iter().map(|r| r.duration_s).collect();
    let time_stats = box_stats(&gaps).map_err(|_| AnalyticsError::TooFewRecords(n))?;
    let errors = log.records.iter().filter(|r| r.symbol != target).count();
    Ok(ExperimentReport {
        target,
        records: n,
        errors,
        error_rate: errors as f64 / n as f64,
        pressure_stats: box_stats(&deviations)?,
        time_stats,
        duration_stats: box_stats(&durations)?,
        cpm: chars_per_minute(time_stats.median)?,
        acceptable_halfwidth: log.layout().bin_width() / 2.0,
        scaled: None,
    })
}

impl ExperimentReport {
    pub fn with_scale(mut self, log: &SessionLog, scale: f64) -> Result<Self, AnalyticsError> {
        self.scaled = Some(ScaledErrorRate {
            scale,
            error_rate: what_if_scale(log, self.target, scale)?,
        });
        Ok(self)
    }

    /// Plain-text table for terminals.
    pub fn to_table(&self) -> String {
        let row = |name: &str, b: &BoxStats| {
            format!(
                "{name:<10} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>6}\n",
                b.min, b.q1, b.median, b.q3, b.max, b.n
            )
        };
        let mut out = format!("target       {}\n", self.target);
        out += &format!(
            "error rate   {:.4} ({} of {})\n",
            self.error_rate, self.errors, self.records
        );
        out += &format!("cpm          {:.1}\n", self.cpm);
        out += &format!("tolerance    ±{:.5}\n", self.acceptable_halfwidth);
        if let Some(s) = self.scaled {
            out += &format!("at scale {:<4} error rate {:.4}\n", s.scale, s.error_rate);
        }
        out += &format!(
            "\n{:<10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>6}\n",
            "", "min", "q1", "median", "q3", "max", "n"
        );
        out += &row("pressure", &self.pressure_stats);
        out += &row("gap_s", &self.time_stats);
        out += &row("duration", &self.duration_stats);
        out
    }
}
