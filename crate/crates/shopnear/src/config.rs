//! Service configuration. Sources, lowest precedence first: built-in
//! defaults, an optional TOML file, `SHOPNEAR_*` environment variables, flags.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use shopnear_core::{GeoError, MiningConfig, RankKey, DEFAULT_RADIUS_KM};

use crate::api::ApiSettings;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub listen: SocketAddr,
    /// Snapshot file; in-memory only when absent.
    pub snapshot: Option<PathBuf>,
    pub outbox_dir: PathBuf,
    pub min_support: f64,
    pub min_confidence: f64,
    pub top_k: usize,
    pub rank_by: RankKey,
    pub default_radius_km: f64,
    pub cache_ttl_secs: f64,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        let mining = MiningConfig::default();
        ServiceConfig {
            listen: SocketAddr::from(([127, 0, 0, 1], 8080)),
            snapshot: None,
            outbox_dir: PathBuf::from("outbox"),
            min_support: mining.min_support,
            min_confidence: mining.min_confidence,
            top_k: mining.top_k,
            rank_by: mining.rank_by,
            default_radius_km: DEFAULT_RADIUS_KM,
            cache_ttl_secs: 30.0,
        }
    }
}

impl ServiceConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Load { path: path.to_owned(), reason: e.to_string() })?;
        toml::from_str(&text).map_err(|e| Error::Load { path: path.to_owned(), reason: e.to_string() })
    }

    pub fn mining(&self) -> MiningConfig {
        MiningConfig {
            min_support: self.min_support,
            min_confidence: self.min_confidence,
            top_k: self.top_k,
            rank_by: self.rank_by,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.mining().validate()?;
        if !(self.default_radius_km.is_finite() && self.default_radius_km > 0.0) {
            return Err(GeoError::InvalidRadius(self.default_radius_km).into());
        }
        if !(self.cache_ttl_secs.is_finite() && self.cache_ttl_secs >= 0.0) {
            return Err(Error::Validation(format!("cache_ttl_secs must be >= 0, got {}", self.cache_ttl_secs)));
        }
        Ok(())
    }

    pub fn api_settings(&self) -> ApiSettings {
        ApiSettings {
            mining: self.mining(),
            default_radius_km: self.default_radius_km,
            cache_ttl: Duration::from_secs_f64(self.cache_ttl_secs),
        }
    }
}
