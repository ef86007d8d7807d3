//! Live session protocol.
//!
//! Clients send one JSON object per message and get zero or more objects
//! back. The same bodies travel over a line-delimited stream socket or as
//! WebSocket text frames; [`Session`] only deals with the bodies.
//!
//! ```text
//! -> {"type":"hello","protocol_version":1}
//! <- {"type":"welcome","protocol_version":1,"layout":["A",...],...}
//! -> {"type":"sample","t":0.013889,"raw":0.31,"hand":"R"}
//! <- {"type":"highlight","index":3,"buffered":0.12}
//! ```

use serde::{Deserialize, Serialize};

use crate::engine::{DeleteSource, EngineConfig, EngineError, Hand, InputEvent, PressureSample, Timestamp};
use crate::layout::Symbol;
use crate::trace_io::{ConfigOverrides, ConfigSnapshot, Recorder, SessionLog};

pub const PROTOCOL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClientMessage {
    Hello {
        protocol_version: u32,
        #[serde(default)]
        config: ConfigOverrides,
    },
    Sample {
        t: Timestamp,
        raw: f64,
        hand: Hand,
    },
    Reset,
    EndSession,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    Malformed,
    Version,
    Config,
    Timestamp,
    InvalidSample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    Welcome {
        protocol_version: u32,
        #[serde(flatten)]
        config: ConfigSnapshot,
    },
    Highlight {
        index: usize,
        buffered: f64,
    },
    Committed {
        symbol: Symbol,
        selection_pressure: f64,
        duration_s: f64,
    },
    Deleted {
        source: DeleteSource,
    },
    Text {
        text: String,
    },
    /// The finished episode's pressure graph, sent when it halts.
    Graph {
        samples: Vec<(Timestamp, f64)>,
    },
    Error {
        code: ErrorCode,
        detail: String,
    },
}

impl ServerMessage {
    fn error(code: ErrorCode, detail: impl ToString) -> Self {
        ServerMessage::Error {
            code,
            detail: detail.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("server messages always serialize")
    }
}

/// What the transport should do after delivering the replies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Close,
}

/// One client's engine and recorder.
#[derive(Debug)]
pub struct Session {
    base: EngineConfig,
    recorder: Recorder,
}

impl Session {
    pub fn new(base: EngineConfig) -> Result<Self, EngineError> {
        let recorder = Recorder::new(base.clone())?;
        Ok(Self { base, recorder })
    }

    pub fn config(&self) -> &EngineConfig {
        self.recorder.engine().config()
    }

    pub fn text(&self) -> &str {
        self.recorder.engine().text()
    }

    /// Everything entered so far.
    pub fn log(&self) -> SessionLog {
        self.recorder.clone().finish().log
    }

    /// Parses and handles one message body. Unparseable input ends the
    /// connection.
    pub fn handle_text(&mut self, body: &str) -> (Vec<ServerMessage>, Control) {
        match serde_json::from_str::<ClientMessage>(body) {
            Ok(msg) => self.handle(msg),
            Err(e) => (vec![ServerMessage::error(ErrorCode::Malformed, e)], Control::Close),
        }
    }

    pub fn handle(&mut self, msg: ClientMessage) -> (Vec<ServerMessage>, Control) {
        match msg {
            ClientMessage::Hello {
                protocol_version,
                config,
            } => {
                if protocol_version != PROTOCOL_VERSION {
                    let detail = format!(
                        "protocol version {protocol_version} not supported (server speaks {PROTOCOL_VERSION})"
                    );
                    return (vec![ServerMessage::error(ErrorCode::Version, detail)], Control::Close);
                }
                let recorder = config
                    .apply(&self.base)
                    .and_then(Recorder::new);
                match recorder {
                    Ok(recorder) => {
                        self.recorder = recorder;
                        let welcome = ServerMessage::Welcome {
                            protocol_version: PROTOCOL_VERSION,
                            config: ConfigSnapshot::from(self.config()),
                        };
                        (vec![welcome], Control::Continue)
                    }
                    Err(e) => (vec![ServerMessage::error(ErrorCode::Config, e)], Control::Close),
                }
            }
            ClientMessage::Sample { t, raw, hand } => {
                (self.on_sample(&PressureSample::new(t, raw, hand)), Control::Continue)
            }
            ClientMessage::Reset => {
                self.recorder.reset();
                (
                    vec![ServerMessage::Text {
                        text: String::new(),
                    }],
                    Control::Continue,
                )
            }
            ClientMessage::EndSession => (Vec::new(), Control::Close),
        }
    }

    fn on_sample(&mut self, sample: &PressureSample) -> Vec<ServerMessage> {
        let step = match self.recorder.step(sample) {
            Ok(step) => step,
            Err(e @ EngineError::NonMonotonicTimestamp { .. }) => {
                return vec![ServerMessage::error(ErrorCode::Timestamp, e)]
            }
            Err(e) => return vec![ServerMessage::error(ErrorCode::InvalidSample, e)],
        };
        let mut out = Vec::with_capacity(step.events.len() + 2);
        for event in step.events {
            match event {
                InputEvent::HighlightChanged {
                    index,
                    buffered_pressure,
                    ..
                } => out.push(ServerMessage::Highlight {
                    index,
                    buffered: buffered_pressure,
                }),
                InputEvent::CharacterCommitted {
                    symbol,
                    selection_pressure,
                    duration_s,
                    ..
                } => {
                    out.push(ServerMessage::Committed {
                        symbol,
                        selection_pressure,
                        duration_s,
                    });
                    out.push(self.text_message());
                }
                InputEvent::CharacterDeleted {
                    source, removed, ..
                } => {
                    out.push(ServerMessage::Deleted { source });
                    if removed.is_some() {
                        out.push(self.text_message());
                    }
                }
            }
        }
        if let Some(record) = step.record {
            out.push(ServerMessage::Graph {
                samples: record.samples,
            });
        }
        out
    }

    fn text_message(&self) -> ServerMessage {
        ServerMessage::Text {
            text: self.text().to_owned(),
        }
    }
}
