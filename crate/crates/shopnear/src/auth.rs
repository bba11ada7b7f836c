//! Salted credential digests.

use sha2::{Digest, Sha256};

pub type Salt = [u8; 16];

pub fn random_salt() -> Salt {
    rand::random()
}

pub fn digest(password: &str, salt: &Salt) -> String {
    let mut hasher = Sha256::new();
    hasher.update(salt);
    hasher.update(password.as_bytes());
    format!("{}${}", hex::encode(salt), hex::encode(hasher.finalize()))
}

pub fn verify(password: &str, stored: &str) -> bool {
    let Some((salt_hex, _)) = stored.split_once('$') else {
        return false;
    };
    let Ok(raw) = hex::decode(salt_hex) else {
        return false;
    };
    let Ok(salt) = Salt::try_from(raw.as_slice()) else {
        return false;
    };
    digest(password, &salt) == stored
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_round_trip() {
        let stored = digest("s3cret", &[7; 16]);
        assert!(verify("s3cret", &stored));
        assert!(!verify("s3cre", &stored));
        assert!(!verify("s3cret", "garbage"));
        assert_ne!(digest("s3cret", &[8; 16]), stored);
    }
}
