//! Outgoing customer messages (order confirmations with the bill, apologies
//! for declined orders).
//!
//! [`DirOutbox`] writes one pretty-printed JSON document per message to
//! `<dir>/order-<order_id>-<kind>.json`:
//!
//! ```json
//! {
//!   "recipient_contact": "asha@example.test",
//!   "recipient_user_id": 3,
//!   "kind": "confirmation",
//!   "order_id": 12,
//!   "body": "...",
//!   "bill": { "order_id": 12, "lines": [...], "total": "70.00" }
//! }
//! ```
//!
//! `bill` is present only for confirmations.

use std::fs;
use std::path::PathBuf;

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};
use shopnear_core::{Bill, OrderId, UserId};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageKind {
    Confirmation,
    Apology,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutboxMessage {
    pub recipient_contact: String,
    pub recipient_user_id: UserId,
    pub kind: MessageKind,
    pub order_id: OrderId,
    pub body: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bill: Option<Bill>,
}

pub trait OutboxSink: Send + Sync {
    fn deliver(&self, message: &OutboxMessage) -> Result<()>;
}

#[derive(Debug)]
pub struct DirOutbox {
    dir: PathBuf,
}

impl DirOutbox {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(DirOutbox { dir })
    }

    pub fn file_for(&self, order: OrderId, kind: MessageKind) -> PathBuf {
        let kind = match kind {
            MessageKind::Confirmation => "confirmation",
            MessageKind::Apology => "apology",
        };
        self.dir.join(format!("order-{order}-{kind}.json"))
    }
}

impl OutboxSink for DirOutbox {
    fn deliver(&self, message: &OutboxMessage) -> Result<()> {
        let mut doc = serde_json::to_vec_pretty(message).map_err(|e| crate::Error::Io(e.into()))?;
        doc.push(b'\n');
        fs::write(self.file_for(message.order_id, message.kind), doc)?;
        Ok(())
    }
}

/// Keeps messages in memory; used by tests and seeding.
#[derive(Debug, Default)]
pub struct MemoryOutbox {
    messages: Mutex<Vec<OutboxMessage>>,
}

impl MemoryOutbox {
    pub fn messages(&self) -> Vec<OutboxMessage> {
        self.messages.lock().clone()
    }
}

impl OutboxSink for MemoryOutbox {
    fn deliver(&self, message: &OutboxMessage) -> Result<()> {
        self.messages.lock().push(message.clone());
        Ok(())
    }
}
