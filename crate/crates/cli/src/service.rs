//! Socket transport for [`Session`].
//!
//! Each accepted connection gets its own thread and its own session. A
//! connection whose first bytes are `GET ` is treated as a WebSocket
//! handshake and exchanges one message per text frame; anything else is
//! line-delimited JSON, one message per line in each direction.

use std::io::{self, BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use presstype_core::{write_session, ClientMessage, Control, EngineConfig, Session};
use tungstenite::{Message, WebSocket};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub engine: EngineConfig,
    /// Where to write each session's log on `end_session`.
    pub log_dir: Option<PathBuf>,
}

pub struct Server {
    listener: TcpListener,
    config: Arc<ServiceConfig>,
    next_id: AtomicU64,
}

impl Server {
    pub fn bind(addr: impl ToSocketAddrs, config: ServiceConfig) -> io::Result<Self> {
        Ok(Self {
            listener: TcpListener::bind(addr)?,
            config: Arc::new(config),
            next_id: AtomicU64::new(1),
        })
    }

    pub fn local_addr(&self) -> io::Result<SocketAddr> {
        self.listener.local_addr()
    }

    /// Accepts connections until the listener fails.
    pub fn run(&self) -> io::Result<()> {
        for stream in self.listener.incoming() {
            let stream = match stream {
                Ok(s) => s,
                Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
                Err(e) => return Err(e),
            };
            let config = Arc::clone(&self.config);
            let id = self.next_id.fetch_add(1, Ordering::Relaxed);
            thread::spawn(move || {
                let peer = stream.peer_addr().ok();
                if let Err(e) = handle_connection(stream, &config, id) {
                    eprintln!("connection {id} ({peer:?}): {e}");
                }
            });
        }
        Ok(())
    }

    /// Runs the accept loop on a background thread.
    pub fn spawn(self) -> thread::JoinHandle<io::Result<()>> {
        thread::spawn(move || self.run())
    }
}

/// True if the stream opens with an HTTP GET, i.e. a WebSocket upgrade.
fn is_http_get(stream: &TcpStream) -> io::Result<bool> {
    const PREFIX: &[u8] = b"GET ";
    let mut buf = [0u8; 4];
    loop {
        let n = stream.peek(&mut buf)?;
        if n == 0 || buf[..n] != PREFIX[..n] {
            return Ok(false);
        }
        if n == PREFIX.len() {
            return Ok(true);
        }
        thread::sleep(Duration::from_millis(1));
    }
}

pub fn handle_connection(stream: TcpStream, config: &ServiceConfig, id: u64) -> io::Result<()> {
    stream.set_nodelay(true)?;
    let mut session = Session::new(config.engine.clone()).map_err(io::Error::other)?;
    let ended = if is_http_get(&stream)? {
        let ws = tungstenite::accept(stream).map_err(io::Error::other)?;
        serve_websocket(ws, &mut session)?
    } else {
        serve_lines(stream, &mut session)?
    };
    if ended {
        if let Some(dir) = &config.log_dir {
            save_log(&session, dir, id)?;
        }
    }
    Ok(())
}

/// Returns whether the client ended the session explicitly.
fn serve_lines(stream: TcpStream, session: &mut Session) -> io::Result<bool> {
    let mut writer = io::BufWriter::new(stream.try_clone()?);
    let reader = BufReader::new(stream);
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (replies, control) = session.handle_text(&line);
        for reply in &replies {
            writer.write_all(reply.to_json().as_bytes())?;
            writer.write_all(b"\n")?;
        }
        writer.flush()?;
        if control == Control::Close {
            return Ok(is_end(&line));
        }
    }
    Ok(false)
}

fn serve_websocket(mut ws: WebSocket<TcpStream>, session: &mut Session) -> io::Result<bool> {
    loop {
        let body = match ws.read() {
            Ok(Message::Text(text)) => text.to_string(),
            Ok(Message::Binary(bytes)) => String::from_utf8_lossy(&bytes).into_owned(),
            Ok(Message::Close(_)) => return Ok(false),
            Ok(_) => continue,
            Err(tungstenite::Error::ConnectionClosed | tungstenite::Error::AlreadyClosed) => {
                return Ok(false)
            }
            Err(e) => return Err(io::Error::other(e)),
        };
        let (replies, control) = session.handle_text(&body);
        for reply in &replies {
            ws.write(Message::text(reply.to_json())).map_err(io::Error::other)?;
        }
        ws.flush().map_err(io::Error::other)?;
        if control == Control::Close {
            let _ = ws.close(None);
            // drain until the peer acknowledges the close
            while ws.read().is_ok() {}
            return Ok(is_end(&body));
        }
    }
}

fn is_end(body: &str) -> bool {
    serde_json::from_str::<ClientMessage>(body).is_ok_and(|m| m == ClientMessage::EndSession)
}

fn save_log(session: &Session, dir: &Path, id: u64) -> io::Result<PathBuf> {
    let now = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut log = session.log();
    log.header.created_at = Some(now);
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("session-{now}-{id}.jsonl"));
    let file = io::BufWriter::new(std::fs::File::create(&path)?);
    write_session(&log, file).map_err(io::Error::other)?;
    Ok(path)
}
