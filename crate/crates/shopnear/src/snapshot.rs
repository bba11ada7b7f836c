//! Snapshot file: one JSON document with a format tag and version ahead of
//! the state.
//!
//! ```json
//! { "format": "shopnear-snapshot", "version": 1, "state": { ... } }
//! ```
//!
//! Maps are ordered, so equal states encode to identical bytes.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::store::StoreState;

pub const FORMAT: &str = "shopnear-snapshot";
pub const VERSION: u32 = 1;

#[derive(Serialize)]
struct Envelope<'a> {
    format: &'static str,
    version: u32,
    state: &'a StoreState,
}

#[derive(Deserialize)]
struct Header {
    format: String,
    version: u32,
}

#[derive(Deserialize)]
struct Owned {
    state: StoreState,
}

pub fn encode(state: &StoreState) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(&Envelope { format: FORMAT, version: VERSION, state })
        .map_err(|e| Error::Io(e.into()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn decode(bytes: &[u8], origin: &Path) -> Result<StoreState> {
    let fail = |reason: String| Error::Load { path: origin.to_owned(), reason };
    let header: Header = serde_json::from_slice(bytes).map_err(|e| fail(format!("not a snapshot document: {e}")))?;
    if header.format != FORMAT {
        return Err(fail(format!("unexpected format tag {:?}", header.format)));
    }
    if header.version != VERSION {
        return Err(fail(format!("unsupported snapshot version {}", header.version)));
    }
    let owned: Owned = serde_json::from_slice(bytes).map_err(|e| fail(format!("corrupt state: {e}")))?;
    Ok(owned.state)
}

pub fn load(path: &Path) -> Result<StoreState> {
    let bytes = fs::read(path).map_err(|e| Error::Load { path: path.to_owned(), reason: e.to_string() })?;
    decode(&bytes, path)
}

/// Atomic replace: write a sibling temp file, then rename over `path`.
pub fn save(state: &StoreState, path: &Path) -> Result<()> {
    let bytes = encode(state)?;
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(&bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
