//! Memoization of `(spec, k) → I_k^⊥` bases.
//!
//! Safe for concurrent readers; writes are serialized by the lock.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::{ikperp_closed_form, IdealComplementBasis, VarietySpec};
use crate::config::Config;
use crate::error::Result;

pub struct BasisCache {
    config: Config,
    map: RwLock<HashMap<(VarietySpec, usize), Arc<IdealComplementBasis>>>,
}

impl BasisCache {
    pub fn new(config: Config) -> Self {
        BasisCache {
            config,
            map: RwLock::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    /// The closed-form complement basis at level `k`, building and caching
    /// it on first use.
    pub fn closed_form(&self, spec: &VarietySpec, k: usize) -> Result<Arc<IdealComplementBasis>> {
        let key = (spec.clone(), k);
        if let Some(hit) = self.map.read().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let built = Arc::new(ikperp_closed_form(spec, k, &self.config)?);
        let mut guard = self.map.write().expect("cache lock");
        Ok(guard.entry(key).or_insert(built).clone())
    }
}

impl Default for BasisCache {
    fn default() -> Self {
        BasisCache::new(Config::default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_returns_shared_instance() {
        let cache = BasisCache::default();
        let spec = VarietySpec::Sep { dims: vec![2, 2] };
        let a = cache.closed_form(&spec, 2).unwrap();
        let b = cache.closed_form(&spec, 2).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.dim(), 9);
    }
}
