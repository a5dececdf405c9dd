//! Cached inner envelopes on grids.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock, RwLock};

use rayon::prelude::*;

use super::{check_grid, check_r};
use crate::domain::Grid;
use crate::error::Result;
use crate::extreal::ExtReal;
use crate::function::FunctionOracle;
use crate::linalg::dist_sq;

/// Values of `f` at every node of `grid`, in grid order.
pub fn grid_values(f: &FunctionOracle, grid: &Grid) -> Vec<ExtReal> {
    (0..grid.len())
        .into_par_iter()
        .map(|i| f.eval(&grid.node(i)))
        .collect()
}

fn fingerprint(values: &[ExtReal]) -> u64 {
    let mut h = DefaultHasher::new();
    for v in values {
        match v {
            ExtReal::Finite(x) => x.to_bits().hash(&mut h),
            ExtReal::PosInf => u64::MAX.hash(&mut h),
        }
    }
    h.finish()
}

type Key = (String, u64, String, u64);

/// Envelope tables keyed by function id, `r`, grid signature and a hash of
/// the function's grid values (so two functions sharing an id never collide).
#[derive(Debug, Default)]
pub struct EnvelopeCache {
    table: RwLock<HashMap<Key, Arc<Vec<ExtReal>>>>,
}

impl EnvelopeCache {
    pub fn global() -> &'static EnvelopeCache {
        static CACHE: OnceLock<EnvelopeCache> = OnceLock::new();
        CACHE.get_or_init(EnvelopeCache::default)
    }

    pub fn len(&self) -> usize {
        self.table.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.table.write().expect("cache lock").clear();
    }

    /// `e_r f` at every node of `grid`, minimizing over the same nodes.
    pub fn envelope_table(&self, f: &FunctionOracle, r: f64, grid: &Grid) -> Result<Arc<Vec<ExtReal>>> {
        check_r(r)?;
        check_grid(f, grid)?;
        let values = grid_values(f, grid);
        let key = (f.id().to_string(), r.to_bits(), grid.signature(), fingerprint(&values));
        if let Some(hit) = self.table.read().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        if values.iter().all(|v| !v.is_finite()) {
            return Err(crate::error::ProxError::ImproperOnGrid);
        }
        let nodes = grid.nodes();
        let finite: Vec<(usize, f64)> = values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.finite().map(|v| (i, v)))
            .collect();
        let table: Vec<ExtReal> = nodes
            .par_iter()
            .map(|y| {
                let m = finite
                    .iter()
                    .map(|&(i, v)| v + 0.5 * r * dist_sq(&nodes[i], y))
                    .fold(f64::INFINITY, f64::min);
                ExtReal::Finite(m)
            })
            .collect();
        let table = Arc::new(table);
        self.table
            .write()
            .expect("cache lock")
            .entry(key)
            .or_insert_with(|| table.clone());
        Ok(table)
    }
}

/// `e_r f` on every node of `grid`, through the global cache.
pub fn inner_envelope(f: &FunctionOracle, r: f64, grid: &Grid) -> Result<Arc<Vec<ExtReal>>> {
    EnvelopeCache::global().envelope_table(f, r, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::moreau_envelope;
    use crate::function::catalog;

    #[test]
    fn table_matches_pointwise_envelope_and_is_reused() {
        let cache = EnvelopeCache::default();
        let f = catalog::function("quad_minus_abs").unwrap();
        let g = Grid::interval(-2.0, 2.0, 81).unwrap();
        let t1 = cache.envelope_table(&f, 2.0, &g).unwrap();
        let t2 = cache.envelope_table(&f, 2.0, &g).unwrap();
        assert!(Arc::ptr_eq(&t1, &t2));
        assert_eq!(cache.len(), 1);
        for i in [0, 17, 40, 80] {
            let direct = moreau_envelope(&f, 2.0, &g.node(i), &g).unwrap();
            assert_eq!(direct.value, t1[i]);
        }
    }

    #[test]
    fn same_id_different_function_does_not_collide() {
        let cache = EnvelopeCache::default();
        let g = Grid::interval(-2.0, 2.0, 41).unwrap();
        let a = catalog::function("quad").unwrap().renamed("same");
        let b = catalog::function("abs").unwrap().renamed("same");
        let ta = cache.envelope_table(&a, 1.0, &g).unwrap();
        let tb = cache.envelope_table(&b, 1.0, &g).unwrap();
        assert_ne!(ta, tb);
        assert_eq!(cache.len(), 2);
    }

    #[test]
    fn concurrent_reads_agree() {
        let cache = EnvelopeCache::default();
        let f = catalog::function("abs").unwrap();
        let g = Grid::interval(-2.0, 2.0, 101).unwrap();
        let tables: Vec<_> = (0..8)
            .into_par_iter()
            .map(|_| cache.envelope_table(&f, 1.5, &g).unwrap())
            .collect();
        assert!(tables.windows(2).all(|w| w[0] == w[1]));
    }
}
