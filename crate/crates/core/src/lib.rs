//! Pressure-based linear text entry.
//!
//! A single continuous pressure value selects characters from a linear
//! alphabet: pressing harder moves the selection further along, releasing
//! into the dead zone confirms it. This crate holds the device-agnostic
//! pieces:
//!
//! - [`layout`]: the symbol list and pressure-to-bin arithmetic
//! - [`engine`]: the per-frame remap / smooth / highlight / confirm state machine
//! - [`trace_io`]: session logs, raw sample files, and deterministic replay
//! - [`analytics`]: accuracy and speed metrics over logs
//! - [`simulator`]: a synthetic motor model for noise and parameter studies
//! - [`session`]: the live client/server message protocol

pub mod analytics;
pub mod engine;
pub mod layout;
pub mod session;
pub mod simulator;
pub mod trace_io;

pub use analytics::{
    box_stats, chars_per_minute, error_rate, experiment_report, normalized_pressures,
    what_if_scale, AnalyticsError, BoxStats, ExperimentReport,
};
pub use engine::{
    buffered_value, DeleteSource, Engine, EngineConfig, EngineError, EngineState, Hand,
    InputEvent, PressureSample, RemapConfig, Timestamp,
};
pub use layout::{LayoutConfig, LayoutError, Symbol};
pub use session::{ClientMessage, Control, ServerMessage, Session, PROTOCOL_VERSION};
pub use simulator::{generate_session, generate_trace, sweep, MotorModelParams, SimError, SweepRow};
pub use trace_io::{
    read_samples, read_session, replay, replay_full, write_samples, write_session,
    CharacterRecord, ConfigOverrides, ConfigSnapshot, Recorder, SessionLog, TraceError,
};
