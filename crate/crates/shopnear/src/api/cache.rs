use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use parking_lot::Mutex;
use shopnear_core::ShopId;

use super::wire::RuleView;
use crate::error::Result;

type Entry = (Instant, Arc<Vec<RuleView>>);

/// Per-shop recommendation results kept for a fixed time-to-live.
#[derive(Debug)]
pub struct RecommendationCache {
    ttl: Duration,
    entries: Mutex<HashMap<ShopId, Entry>>,
}

impl RecommendationCache {
    pub fn new(ttl: Duration) -> Self {
        RecommendationCache { ttl, entries: Mutex::new(HashMap::new()) }
    }

    /// Cached rules if still fresh, otherwise `compute` (run without the
    /// cache lock held) and remember its result.
    pub fn get_or_compute(
        &self,
        shop: ShopId,
        compute: impl FnOnce() -> Result<Vec<RuleView>>,
    ) -> Result<Arc<Vec<RuleView>>> {
        if let Some((at, rules)) = self.entries.lock().get(&shop) {
            if at.elapsed() < self.ttl {
                return Ok(rules.clone());
            }
        }
        let rules = Arc::new(compute()?);
        if !self.ttl.is_zero() {
            self.entries.lock().insert(shop, (Instant::now(), rules.clone()));
        }
        Ok(rules)
    }
}
