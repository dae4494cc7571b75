//! Length-prefixed TCP transport for the query protocol.
//!
//! Frames are `u32 big-endian length | u8 type | payload`, where the
//! length covers the type byte and payload. Type 0x01 carries a query
//! token, 0x81 a result, 0x82 an error (one reason byte plus a UTF-8
//! message). Frames above 16 MiB are rejected. The serving side holds
//! only the encrypted index — no keys, no amplification factor.

use std::io::{Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;

use crate::crypto::swhe::TransparentSwhe;
use crate::error::{Error, Result};
use crate::index::EncryptedIndex;
use crate::query::{server_query, QueryToken};

pub const FRAME_QUERY: u8 = 0x01;
pub const FRAME_RESULT: u8 = 0x81;
pub const FRAME_ERROR: u8 = 0x82;

pub const MAX_FRAME_BYTES: u32 = 16 * 1024 * 1024;

/// Error-frame reason codes.
pub mod reason {
    pub const MALFORMED: u8 = 1;
    pub const OVERSIZED: u8 = 2;
    pub const BAD_TOKEN: u8 = 3;
    pub const INTERNAL: u8 = 4;
}

pub fn write_frame<W: Write>(mut w: W, frame_type: u8, payload: &[u8]) -> Result<()> {
    let len = payload.len() as u64 + 1;
    if len > MAX_FRAME_BYTES as u64 {
        return Err(Error::FrameTooLarge(len));
    }
    w.write_all(&(len as u32).to_be_bytes())?;
    w.write_all(&[frame_type])?;
    w.write_all(payload)?;
    w.flush()?;
    Ok(())
}

/// Read one frame; `Ok(None)` on a clean end of stream.
pub fn read_frame<R: Read>(mut r: R) -> Result<Option<(u8, Vec<u8>)>> {
    let mut len_buf = [0u8; 4];
    let mut filled = 0;
    while filled < 4 {
        let n = r.read(&mut len_buf[filled..])?;
        if n == 0 {
            if filled == 0 {
                return Ok(None);
            }
            return Err(Error::Truncated);
        }
        filled += n;
    }
    let len = u32::from_be_bytes(len_buf);
    if len == 0 {
        return Err(Error::Truncated);
    }
    if len > MAX_FRAME_BYTES {
        return Err(Error::FrameTooLarge(len as u64));
    }
    let mut body = vec![0u8; len as usize];
    r.read_exact(&mut body).map_err(|_| Error::Truncated)?;
    let frame_type = body[0];
    body.remove(0);
    Ok(Some((frame_type, body)))
}

fn error_frame<W: Write>(w: W, code: u8, msg: &str) {
    let mut payload = vec![code];
    payload.extend_from_slice(msg.as_bytes());
    // The connection is being torn down; nothing to do about write
    // failures here.
    let _ = write_frame(w, FRAME_ERROR, &payload);
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ServeOpts {
    /// Zero out the candidate count in replies.
    pub hide_y_size: bool,
}

/// A running query server. Dropping it (or calling [`Server::shutdown`])
/// stops the accept loop.
pub struct Server {
    addr: SocketAddr,
    stop: Arc<AtomicBool>,
    handle: Option<JoinHandle<()>>,
}

impl Server {
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn shutdown(mut self) {
        self.stop_now();
    }

    fn stop_now(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // Nudge the accept loop.
        let _ = TcpStream::connect(self.addr);
        if let Some(handle) = self.handle.take() {
            let _ = handle.join();
        }
    }
}

impl Drop for Server {
    fn drop(&mut self) {
        if self.handle.is_some() {
            self.stop_now();
        }
    }
}

/// Bind and serve the encrypted index until shut down. Each connection is
/// handled on its own thread and may issue any number of queries.
pub fn serve<A: ToSocketAddrs>(
    index: Arc<EncryptedIndex>,
    bind: A,
    opts: ServeOpts,
) -> Result<Server> {
    let listener = TcpListener::bind(bind)?;
    let addr = listener.local_addr()?;
    let stop = Arc::new(AtomicBool::new(false));
    let accept_stop = stop.clone();
    let handle = std::thread::spawn(move || {
        for stream in listener.incoming() {
            if accept_stop.load(Ordering::SeqCst) {
                break;
            }
            let Ok(stream) = stream else {
                continue;
            };
            let index = index.clone();
            std::thread::spawn(move || handle_connection(stream, &index, opts));
        }
    });
    Ok(Server { addr, stop, handle: Some(handle) })
}

fn handle_connection(mut stream: TcpStream, index: &EncryptedIndex, opts: ServeOpts) {
    let backend = TransparentSwhe;
    loop {
        let frame = match read_frame(&mut stream) {
            Ok(Some(frame)) => frame,
            Ok(None) => return,
            Err(Error::FrameTooLarge(n)) => {
                error_frame(&mut stream, reason::OVERSIZED, &format!("{n} byte frame"));
                return;
            }
            Err(_) => {
                error_frame(&mut stream, reason::MALFORMED, "unreadable frame");
                return;
            }
        };
        match frame {
            (FRAME_QUERY, payload) => {
                let token = match QueryToken::from_bytes(&payload) {
                    Ok(token) => token,
                    Err(e) => {
                        error_frame(&mut stream, reason::BAD_TOKEN, &e.to_string());
                        return;
                    }
                };
                match server_query(index, &token, &backend) {
                    Ok(result) => {
                        let bytes = result.to_bytes(opts.hide_y_size);
                        if write_frame(&mut stream, FRAME_RESULT, &bytes).is_err() {
                            return;
                        }
                    }
                    Err(e) => {
                        error_frame(&mut stream, reason::INTERNAL, &e.to_string());
                        return;
                    }
                }
            }
            (other, _) => {
                error_frame(&mut stream, reason::MALFORMED, &format!("frame type {other:#04x}"));
                return;
            }
        }
    }
}

/// Send one token and return the raw result bytes.
pub fn query_remote<A: ToSocketAddrs>(addr: A, token_bytes: &[u8]) -> Result<Vec<u8>> {
    let mut stream = TcpStream::connect(addr)?;
    write_frame(&mut stream, FRAME_QUERY, token_bytes)?;
    match read_frame(&mut stream)? {
        Some((FRAME_RESULT, payload)) => Ok(payload),
        Some((FRAME_ERROR, payload)) => {
            let code = payload.first().copied().unwrap_or(0);
            let msg = String::from_utf8_lossy(payload.get(1..).unwrap_or(&[])).into_owned();
            Err(Error::Frame { code, msg })
        }
        Some((other, _)) => Err(Error::Frame {
            code: reason::MALFORMED,
            msg: format!("unexpected frame type {other:#04x}"),
        }),
        None => Err(Error::Truncated),
    }
}
