use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::bqa::{Module, ModuleMap};

/// A one-step approximation `module -> target` (projective cover) or
/// `target -> module` (injective envelope), with its kernel or cokernel.
#[derive(Clone, Debug)]
pub struct Step {
    pub module: Module,
    pub map: ModuleMap,
    pub remainder: Module,
    pub remainder_map: ModuleMap,
}

/// Per-algebra memo table keyed by module value. Reads are shared, inserts
/// take the write lock; a racing duplicate insert is harmless because the
/// computation is deterministic.
#[derive(Default)]
pub struct HomCache {
    covers: RwLock<HashMap<Module, Arc<Step>>>,
    envelopes: RwLock<HashMap<Module, Arc<Step>>>,
    ext1: RwLock<HashMap<(Module, Module), usize>>,
}

const MAX_ENTRIES: usize = 50_000;

fn get_or<K: std::hash::Hash + Eq + Clone, V: Clone>(
    lock: &RwLock<HashMap<K, V>>,
    key: &K,
    compute: impl FnOnce() -> V,
) -> V {
    if let Some(v) = lock.read().expect("cache lock").get(key) {
        return v.clone();
    }
    let v = compute();
    let mut w = lock.write().expect("cache lock");
    if w.len() >= MAX_ENTRIES {
        w.clear();
    }
    w.entry(key.clone()).or_insert_with(|| v.clone());
    v
}

impl HomCache {
    pub fn cover(&self, m: &Module, compute: impl FnOnce() -> Step) -> Arc<Step> {
        get_or(&self.covers, m, || Arc::new(compute()))
    }

    pub fn envelope(&self, m: &Module, compute: impl FnOnce() -> Step) -> Arc<Step> {
        get_or(&self.envelopes, m, || Arc::new(compute()))
    }

    pub fn ext1(&self, m: &Module, n: &Module, compute: impl FnOnce() -> usize) -> usize {
        get_or(&self.ext1, &(m.clone(), n.clone()), compute)
    }
}
