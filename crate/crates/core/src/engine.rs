//! The per-frame selection state machine.
//!
//! Every sample goes through the same five steps, in order:
//!
//! 1. remap the raw reading into `[0, 1]` and push it through the FIFO
//!    smoothing window;
//! 2. if the smoothed value increased, move the highlight to its bin
//!    (arming the episode on the first such frame);
//! 3. run the hold-delete schedule while the backspace bin is held near
//!    saturation;
//! 4. if the *unsmoothed* value is zero and the episode is armed, commit
//!    the highlighted symbol;
//! 5. remember the smoothed value for the next frame's comparison.
//!
//! Time only enters through sample timestamps, so replaying a sample stream
//! always reproduces the same events.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::layout::{LayoutConfig, LayoutError, Symbol};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("raw pressure {0} outside [0, 1]")]
    RawOutOfRange(f64),
    #[error("timestamp {got} does not follow previous timestamp {last}")]
    NonMonotonicTimestamp { last: Timestamp, got: Timestamp },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

/// Monotonic sample time with microsecond resolution.
///
/// Serialized as seconds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(u64);

impl Timestamp {
    pub const ZERO: Timestamp = Timestamp(0);

    pub fn from_micros(us: u64) -> Self {
        Timestamp(us)
    }

    /// Rounds to the nearest microsecond. `None` for negative or
    /// non-finite input.
    pub fn from_secs_f64(s: f64) -> Option<Self> {
        let us = (s * 1e6).round();
        if us.is_finite() && us >= 0.0 && us < u64::MAX as f64 {
            Some(Timestamp(us as u64))
        } else {
            None
        }
    }

    pub fn as_micros(self) -> u64 {
        self.0
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / 1e6
    }

    /// Seconds elapsed since `earlier`, saturating at zero.
    pub fn secs_since(self, earlier: Timestamp) -> f64 {
        self.0.saturating_sub(earlier.0) as f64 / 1e6
    }

    pub fn saturating_add_micros(self, us: u64) -> Self {
        Timestamp(self.0.saturating_add(us))
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:06}s", self.0 / 1_000_000, self.0 % 1_000_000)
    }
}

impl Serialize for Timestamp {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.as_secs_f64())
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = f64::deserialize(deserializer)?;
        Timestamp::from_secs_f64(s)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid timestamp {s}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hand {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

/// One raw sensor reading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureSample {
    pub t: Timestamp,
    pub raw: f64,
    pub hand: Hand,
}

impl PressureSample {
    pub fn new(t: Timestamp, raw: f64, hand: Hand) -> Self {
        Self { t, raw, hand }
    }
}

/// Raw sub-interval stretched onto `[0, 1]`. Readings at or below `lo`
/// form the dead zone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemapConfig {
    pub lo: f64,
    pub hi: f64,
}

impl Default for RemapConfig {
    fn default() -> Self {
        Self { lo: 0.05, hi: 0.55 }
    }
}

impl RemapConfig {
    pub fn new(lo: f64, hi: f64) -> Result<Self, EngineError> {
        let cfg = Self { lo, hi };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if 0.0 <= self.lo && self.lo < self.hi && self.hi <= 1.0 {
            Ok(())
        } else {
            Err(EngineError::InvalidConfig(format!(
                "remap window [{}, {}] must satisfy 0 <= lo < hi <= 1",
                self.lo, self.hi
            )))
        }
    }

    pub fn remap(&self, raw: f64) -> Result<f64, EngineError> {
        if !(0.0..=1.0).contains(&raw) {
            return Err(EngineError::RawOutOfRange(raw));
        }
        Ok(if raw <= self.lo {
            0.0
        } else if raw >= self.hi {
            1.0
        } else {
            ((raw - self.lo) / (self.hi - self.lo)).clamp(0.0, 1.0)
        })
    }

    /// Raw reading that remaps to `normalized`, clamped to the sensor range.
    pub fn unmap(&self, normalized: f64) -> f64 {
        (self.lo + normalized * (self.hi - self.lo)).clamp(0.0, 1.0)
    }
}

/// Mean of the smoothing window.
pub fn buffered_value(window: &[f64]) -> f64 {
    if window.is_empty() {
        return 0.0;
    }
    window.iter().sum::<f64>() / window.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub layout: LayoutConfig,
    pub remap: RemapConfig,
    pub buffer_size: usize,
    /// Samples per second the producer is expected to deliver. Informational:
    /// the engine itself is driven purely by timestamps.
    pub nominal_rate: f64,
    pub hold_delete_delay: f64,
    pub hold_delete_rate: f64,
    pub hold_threshold: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self::for_layout(LayoutConfig::default())
    }
}

impl EngineConfig {
    /// Defaults around a given layout; the hold threshold sits at the
    /// center of the backspace bin.
    pub fn for_layout(layout: LayoutConfig) -> Self {
        let hold_threshold = Self::default_hold_threshold(&layout);
        Self {
            layout,
            remap: RemapConfig::default(),
            buffer_size: 3,
            nominal_rate: 72.0,
            hold_delete_delay: 0.5,
            hold_delete_rate: 10.0,
            hold_threshold,
        }
    }

    pub fn default_hold_threshold(layout: &LayoutConfig) -> f64 {
        1.0 - 1.0 / (2.0 * layout.len() as f64)
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        self.remap.validate()?;
        let bad = |msg: String| Err(EngineError::InvalidConfig(msg));
        if self.buffer_size == 0 {
            return bad("buffer_size must be at least 1".into());
        }
        if !(self.nominal_rate > 0.0 && self.nominal_rate.is_finite()) {
            return bad(format!("nominal_rate {} must be positive", self.nominal_rate));
        }
        if !(self.hold_delete_rate > 0.0 && self.hold_delete_rate.is_finite()) {
            return bad(format!(
                "hold_delete_rate {} must be positive",
                self.hold_delete_rate
            ));
        }
        if !(self.hold_delete_delay >= 0.0 && self.hold_delete_delay.is_finite()) {
            return bad(format!(
                "hold_delete_delay {} must be non-negative",
                self.hold_delete_delay
            ));
        }
        if !(self.hold_threshold > 0.0 && self.hold_threshold <= 1.0) {
            return bad(format!(
                "hold_threshold {} must lie in (0, 1]",
                self.hold_threshold
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeleteSource {
    /// Backspace selected and confirmed like any other symbol.
    Commit,
    /// Repeat fired while backspace was held at maximum pressure.
    HoldRepeat,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputEvent {
    HighlightChanged {
        index: usize,
        buffered_pressure: f64,
        timestamp: Timestamp,
    },
    CharacterCommitted {
        symbol: Symbol,
        selection_pressure: f64,
        duration_s: f64,
        hand: Hand,
        timestamp: Timestamp,
    },
    CharacterDeleted {
        timestamp: Timestamp,
        source: DeleteSource,
        /// Character removed from the text, `None` when it was already empty.
        removed: Option<char>,
    },
}

/// Mutable per-session state. Fresh values come from [`EngineState::reset`].
#[derive(Debug, Clone, PartialEq)]
pub struct EngineState {
    window: VecDeque<f64>,
    prev_buffered: f64,
    highlighted: Option<usize>,
    armed: bool,
    arm_time: Option<Timestamp>,
    highlight_pressure: f64,
    hold_since: Option<Timestamp>,
    hold_repeats: u64,
    last_t: Option<Timestamp>,
    text: String,
}

impl EngineState {
    pub fn reset(cfg: &EngineConfig) -> Self {
        Self {
            window: std::iter::repeat_n(0.0, cfg.buffer_size.max(1)).collect(),
            prev_buffered: 0.0,
            highlighted: None,
            armed: false,
            arm_time: None,
            highlight_pressure: 0.0,
            hold_since: None,
            hold_repeats: 0,
            last_t: None,
            text: String::new(),
        }
    }

    pub fn window(&self) -> &VecDeque<f64> {
        &self.window
    }

    pub fn prev_buffered(&self) -> f64 {
        self.prev_buffered
    }

    pub fn highlighted(&self) -> Option<usize> {
        self.highlighted
    }

    pub fn is_armed(&self) -> bool {
        self.armed
    }

    pub fn arm_time(&self) -> Option<Timestamp> {
        self.arm_time
    }

    /// Smoothed value at the last frame that moved the selection.
    pub fn highlight_pressure(&self) -> f64 {
        self.highlight_pressure
    }

    pub fn hold_since(&self) -> Option<Timestamp> {
        self.hold_since
    }

    pub fn last_timestamp(&self) -> Option<Timestamp> {
        self.last_t
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    fn clear_episode(&mut self) {
        self.armed = false;
        self.highlighted = None;
        self.arm_time = None;
        self.hold_since = None;
        self.hold_repeats = 0;
    }

    fn delete_last(&mut self, timestamp: Timestamp, source: DeleteSource) -> InputEvent {
        InputEvent::CharacterDeleted {
            timestamp,
            source,
            removed: self.text.pop(),
        }
    }

    /// Advances the state by one frame. On error the state is untouched.
    pub fn step(
        &mut self,
        cfg: &EngineConfig,
        sample: &PressureSample,
    ) -> Result<Vec<InputEvent>, EngineError> {
        if let Some(last) = self.last_t {
            if sample.t <= last {
                return Err(EngineError::NonMonotonicTimestamp {
                    last,
                    got: sample.t,
                });
            }
        }
        let normalized = cfg.remap.remap(sample.raw)?;
        let now = sample.t;
        let mut events = Vec::new();

        // 1. smoothing
        self.window.pop_front();
        self.window.push_back(normalized);
        let buffered = buffered_value(self.window.make_contiguous());

        // 2. highlight on increase
        if buffered > self.prev_buffered {
            let index = cfg.layout.bin_index(buffered.min(1.0))?;
            let changed = self.highlighted != Some(index);
            self.highlighted = Some(index);
            self.highlight_pressure = buffered;
            if changed || !self.armed {
                events.push(InputEvent::HighlightChanged {
                    index,
                    buffered_pressure: buffered,
                    timestamp: now,
                });
                if !self.armed {
                    self.armed = true;
                    self.arm_time = Some(now);
                }
            }
        }

        // 3. hold-delete
        let last = cfg.layout.last_index();
        if self.highlighted == Some(last) && buffered >= cfg.hold_threshold {
            let since = *self.hold_since.get_or_insert(now);
            let due = hold_repeats_due(cfg, now.as_micros().saturating_sub(since.as_micros()));
            while self.hold_repeats < due {
                self.hold_repeats += 1;
                events.push(self.delete_last(now, DeleteSource::HoldRepeat));
            }
        } else {
            self.hold_since = None;
            self.hold_repeats = 0;
        }

        // 4. confirm on raw release
        if normalized == 0.0 && self.armed {
            // armed implies a highlight
            let index = self.highlighted.unwrap_or(0);
            let symbol = cfg.layout.symbol(index)?;
            match symbol.as_char() {
                None => events.push(self.delete_last(now, DeleteSource::Commit)),
                Some(c) => {
                    self.text.push(c);
                    events.push(InputEvent::CharacterCommitted {
                        symbol,
                        selection_pressure: self.highlight_pressure,
                        duration_s: now.secs_since(self.arm_time.unwrap_or(now)),
                        hand: sample.hand,
                        timestamp: now,
                    });
                }
            }
            self.clear_episode();
        }

        // 5.
        self.prev_buffered = buffered;
        self.last_t = Some(now);
        Ok(events)
    }
}

/// Number of repeat deletions owed after holding for `held_us` microseconds:
/// one per full `1/rate` interval past the initial delay. Works in whole
/// microseconds so that e.g. 600 ms held with a 500 ms delay at 10 Hz is
/// exactly one repeat.
pub fn hold_repeats_due(cfg: &EngineConfig, held_us: u64) -> u64 {
    let delay_us = (cfg.hold_delete_delay * 1e6).round() as u64;
    match held_us.checked_sub(delay_us) {
        None => 0,
        Some(past_us) => (past_us as f64 * cfg.hold_delete_rate / 1e6).floor() as u64,
    }
}

/// A configured engine: the usual entry point.
#[derive(Debug, Clone)]
pub struct Engine {
    cfg: EngineConfig,
    state: EngineState,
}

impl Engine {
    pub fn new(cfg: EngineConfig) -> Result<Self, EngineError> {
        cfg.validate()?;
        let state = EngineState::reset(&cfg);
        Ok(Self { cfg, state })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn state(&self) -> &EngineState {
        &self.state
    }

    pub fn text(&self) -> &str {
        self.state.text()
    }

    pub fn reset(&mut self) {
        self.state = EngineState::reset(&self.cfg);
    }

    pub fn step(&mut self, sample: &PressureSample) -> Result<Vec<InputEvent>, EngineError> {
        self.state.step(&self.cfg, sample)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DT_US: u64 = 13_889;

    fn sample(k: u64, raw: f64) -> PressureSample {
        PressureSample::new(Timestamp::from_micros(k * DT_US), raw, Hand::Right)
    }

    fn run(engine: &mut Engine, raws: &[f64]) -> Vec<InputEvent> {
        let start = engine
            .state()
            .last_timestamp()
            .map_or(0, |t| t.as_micros() / DT_US + 1);
        raws.iter()
            .enumerate()
            .flat_map(|(k, &r)| engine.step(&sample(start + k as u64, r)).unwrap())
            .collect()
    }

    fn commits(events: &[InputEvent]) -> Vec<Symbol> {
        events
            .iter()
            .filter_map(|e| match e {
                InputEvent::CharacterCommitted { symbol, .. } => Some(*symbol),
                InputEvent::CharacterDeleted {
                    source: DeleteSource::Commit,
                    ..
                } => Some(Symbol::Backspace),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn remap_examples() {
        let r = RemapConfig::default();
        assert_eq!(r.remap(0.05).unwrap(), 0.0);
        assert_eq!(r.remap(0.0).unwrap(), 0.0);
        assert_eq!(r.remap(0.55).unwrap(), 1.0);
        assert_eq!(r.remap(1.0).unwrap(), 1.0);
        assert!((r.remap(0.30).unwrap() - 0.5).abs() < 1e-9);
        assert!(matches!(r.remap(1.5), Err(EngineError::RawOutOfRange(_))));
        assert!(r.remap(f64::NAN).is_err());
        assert!(RemapConfig::new(0.5, 0.5).is_err());
        assert!(RemapConfig::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn buffered_examples() {
        assert_eq!(buffered_value(&[0.0, 0.0, 0.0]), 0.0);
        assert!((buffered_value(&[0.3, 0.3, 0.3]) - 0.3).abs() < 1e-15);
        assert!((buffered_value(&[0.1, 0.2, 0.6]) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn zeros_emit_nothing() {
        let mut engine = Engine::new(EngineConfig::default()).unwrap();
        let events = run(&mut engine, &[0.0; 50]);
        assert!(events.is_empty());
        // dead-zone presses never arm either
        let events = run(&mut engine, &[0.03, 0.05, 0.04, 0.0, 0.05]);
        assert!(events.is_empty());
        assert_eq!(engine.text(), "");
    }

    #[test]
    fn ramp_commits_peak_bin() {
        let cfg = EngineConfig::default();
        let mut engine = Engine::new(cfg.clone()).unwrap();
        let mut raws: Vec<f64> = (1..=20).map(|k| 0.30 * k as f64 / 20.0).collect();
        raws.push(0.0);
        let events = run(&mut engine, &raws);
        // b_peak: mean of the last three ramp values, remapped
        let r = cfg.remap;
        let peak = (r.remap(raws[17]).unwrap()
            + r.remap(raws[18]).unwrap()
            + r.remap(raws[19]).unwrap())
            / 3.0;
        let expected = cfg.layout.symbol_at(peak).unwrap();
        assert_eq!(commits(&events), vec![expected]);
        assert_eq!(expected, Symbol::Char('N'));
        assert_eq!(engine.text(), "N");
    }

    #[test]
    fn arming_and_duration() {
        let mut engine = Engine::new(EngineConfig::default()).unwrap();
        let events = run(&mut engine, &[0.0, 0.2, 0.2, 0.2, 0.1, 0.0]);
        let InputEvent::HighlightChanged { timestamp, .. } = events[0] else {
            panic!("expected highlight first: {events:?}");
        };
        assert_eq!(timestamp, Timestamp::from_micros(DT_US));
        let Some(InputEvent::CharacterCommitted {
            duration_s,
            selection_pressure,
            ..
        }) = events.last()
        else {
            panic!("no commit");
        };
        assert!((duration_s - 4.0 * DT_US as f64 / 1e6).abs() < 1e-12);
        assert!((selection_pressure - 0.3).abs() < 1e-12);
        assert!(!engine.state().is_armed());
        assert_eq!(engine.state().highlighted(), None);
    }

    #[test]
    fn highlight_can_move_down_on_repress() {
        let cfg = EngineConfig::default();
        let mut engine = Engine::new(cfg.clone()).unwrap();
        let r = cfg.remap;
        // overshoot into the 'H' bin, back off to 0.1 (never zero), re-press to 'F'
        let mut norm = vec![0.09, 0.18, 0.27, 0.27, 0.27, 0.2, 0.1, 0.1, 0.1];
        norm.extend([0.14, 0.19, 0.196, 0.196, 0.196, 0.15, 0.05]);
        let mut raws: Vec<f64> = norm.iter().map(|&n| r.unmap(n)).collect();
        raws.push(0.0);
        let events = run(&mut engine, &raws);
        assert_eq!(commits(&events), vec![Symbol::Char('F')]);
        let highlighted: Vec<usize> = events
            .iter()
            .filter_map(|e| match e {
                InputEvent::HighlightChanged { index, .. } => Some(*index),
                _ => None,
            })
            .collect();
        assert!(highlighted.contains(&7), "{highlighted:?}");
        assert_eq!(engine.text(), "F");
    }

    #[test]
    fn backspace_commit_on_empty_text_still_emits() {
        let mut engine = Engine::new(EngineConfig::default()).unwrap();
        let events = run(&mut engine, &[0.9, 0.9, 0.9, 0.0]);
        assert_eq!(
            events.last(),
            Some(&InputEvent::CharacterDeleted {
                timestamp: Timestamp::from_micros(3 * DT_US),
                source: DeleteSource::Commit,
                removed: None,
            })
        );
        assert_eq!(engine.text(), "");
    }

    #[test]
    fn backspace_commit_removes_last_char() {
        let cfg = EngineConfig::default();
        let mut engine = Engine::new(cfg.clone()).unwrap();
        let a = cfg.remap.unmap(0.01);
        run(&mut engine, &[a, a, a, 0.0, a, a, a, 0.0]);
        assert_eq!(engine.text(), "AA");
        let events = run(&mut engine, &[0.9, 0.9, 0.9, 0.0]);
        assert!(matches!(
            events.last(),
            Some(InputEvent::CharacterDeleted {
                removed: Some('A'),
                ..
            })
        ));
        assert_eq!(engine.text(), "A");
    }

    #[test]
    fn rejects_non_monotonic_time_without_side_effects() {
        let mut engine = Engine::new(EngineConfig::default()).unwrap();
        engine.step(&sample(5, 0.3)).unwrap();
        let before = engine.state().clone();
        assert!(matches!(
            engine.step(&sample(5, 0.4)),
            Err(EngineError::NonMonotonicTimestamp { .. })
        ));
        assert!(engine.step(&sample(4, 0.4)).is_err());
        assert!(engine.step(&sample(6, 1.4)).is_err());
        assert_eq!(engine.state(), &before);
    }

    #[test]
    fn reset_behaviour() {
        let cfg = EngineConfig::default();
        assert_eq!(EngineState::reset(&cfg), EngineState::reset(&cfg));
        let mut engine = Engine::new(cfg).unwrap();
        assert!(engine.step(&sample(0, 0.0)).unwrap().is_empty());
        run(&mut engine, &[0.2, 0.2, 0.2, 0.0]);
        assert!(!engine.text().is_empty());
        engine.reset();
        assert_eq!(engine.text(), "");
        assert_eq!(engine.state().window().iter().sum::<f64>(), 0.0);
        assert!(!engine.state().is_armed());
    }

    #[test]
    fn hold_delete_schedule() {
        let cfg = EngineConfig::default();
        let mut engine = Engine::new(cfg.clone()).unwrap();
        let a = cfg.remap.unmap(0.01);
        let mut raws = Vec::new();
        for _ in 0..20 {
            raws.extend([a, a, a, 0.0]);
        }
        run(&mut engine, &raws);
        assert_eq!(engine.text().len(), 20);

        // 100 Hz so the schedule lands on whole frames
        let t0 = engine.state().last_timestamp().unwrap().as_micros() + 10_000;
        let mut hold_repeats = 0;
        let mut hold_start = None;
        for k in 0..=200u64 {
            let s = PressureSample::new(Timestamp::from_micros(t0 + k * 10_000), 1.0, Hand::Left);
            for e in engine.step(&s).unwrap() {
                if let InputEvent::CharacterDeleted {
                    source: DeleteSource::HoldRepeat,
                    ..
                } = e
                {
                    hold_repeats += 1;
                }
            }
            if hold_start.is_none() {
                hold_start = engine.state().hold_since();
            }
        }
        let held_us = t0 + 200 * 10_000 - hold_start.unwrap().as_micros();
        assert_eq!(hold_repeats, hold_repeats_due(&cfg, held_us));
        assert_eq!(hold_repeats, (held_us - 500_000) / 100_000);
        assert_eq!(engine.text().len(), 20 - hold_repeats as usize);
        // dropping below the threshold clears hold timing
        let s = PressureSample::new(Timestamp::from_micros(t0 + 201 * 10_000), 0.4, Hand::Left);
        engine.step(&s).unwrap();
        assert_eq!(engine.state().hold_since(), None);
    }

    #[test]
    fn config_validation() {
        let mut cfg = EngineConfig::default();
        assert!((cfg.hold_threshold - (1.0 - 1.0 / 56.0)).abs() < 1e-15);
        cfg.buffer_size = 0;
        assert!(Engine::new(cfg.clone()).is_err());
        cfg.buffer_size = 1;
        cfg.hold_delete_rate = 0.0;
        assert!(Engine::new(cfg.clone()).is_err());
        cfg.hold_delete_rate = 10.0;
        cfg.hold_threshold = 0.0;
        assert!(Engine::new(cfg).is_err());
    }

    #[test]
    fn timestamp_seconds_round_trip() {
        let t = Timestamp::from_secs_f64(1234.567891).unwrap();
        assert_eq!(t.as_micros(), 1_234_567_891);
        assert_eq!(Timestamp::from_secs_f64(t.as_secs_f64()), Some(t));
        assert_eq!(Timestamp::from_secs_f64(-1.0), None);
        assert_eq!(t.to_string(), "1234.567891s");
    }
}
