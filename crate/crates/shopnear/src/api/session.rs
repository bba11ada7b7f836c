use std::collections::HashMap;

use parking_lot::RwLock;
use shopnear_core::UserId;

/// Opaque bearer tokens (128 random bits, hex) mapped to users.
#[derive(Debug, Default)]
pub struct Sessions {
    tokens: RwLock<HashMap<String, UserId>>,
}

impl Sessions {
    pub fn issue(&self, user: UserId) -> String {
        let token = hex::encode(rand::random::<[u8; 16]>());
        self.tokens.write().insert(token.clone(), user);
        token
    }

    pub fn resolve(&self, token: &str) -> Option<UserId> {
        self.tokens.read().get(token).copied()
    }
}
