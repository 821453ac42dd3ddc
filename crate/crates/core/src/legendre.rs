//! Classical Legendre polynomials, their overlap antiderivatives
//! `R_ij(z) = int_{-1}^z P_i P_j` and classical norms.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;

use crate::polyring::{Poly, Rat};

/// Append-only cache of `P_i` and `R_ij`. Readers share; fills take the
/// write lock. Values never change once published, so a cache miss and a
/// fresh recomputation give the same polynomial.
#[derive(Debug, Default)]
pub struct LegendreCache {
    polys: RwLock<Vec<Arc<Poly>>>,
    overlaps: RwLock<HashMap<(usize, usize), Arc<Poly>>>,
}

impl LegendreCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `P_i` from `(k+1) P_{k+1} = (2k+1) z P_k - k P_{k-1}`.
    pub fn poly(&self, i: usize) -> Arc<Poly> {
        if let Some(p) = self.polys.read().expect("legendre cache poisoned").get(i) {
            return p.clone();
        }
        let mut polys = self.polys.write().expect("legendre cache poisoned");
        if polys.is_empty() {
            polys.push(Arc::new(Poly::one()));
        }
        if polys.len() == 1 {
            polys.push(Arc::new(Poly::z()));
        }
        while polys.len() <= i {
            let k = polys.len() - 1;
            let zk = polys[k].shift(1).scale(&Rat::from_integer(BigInt::from(2 * k + 1)));
            let prev = polys[k - 1].scale(&Rat::from_integer(BigInt::from(k)));
            let next = (&zk - &prev).scale(&Rat::new(1.into(), BigInt::from(k + 1)));
            polys.push(Arc::new(next));
        }
        polys[i].clone()
    }

    /// `R_{i1 i2}`: the antiderivative of `P_{i1} P_{i2}` vanishing at -1.
    pub fn overlap(&self, i1: usize, i2: usize) -> Arc<Poly> {
        let key = (i1.min(i2), i1.max(i2));
        if let Some(r) = self.overlaps.read().expect("legendre cache poisoned").get(&key) {
            return r.clone();
        }
        let r = Arc::new((&*self.poly(key.0) * &*self.poly(key.1)).antiderivative_from_minus1());
        self.overlaps
            .write()
            .expect("legendre cache poisoned")
            .entry(key)
            .or_insert(r)
            .clone()
    }
}

fn global() -> &'static LegendreCache {
    static CACHE: OnceLock<LegendreCache> = OnceLock::new();
    CACHE.get_or_init(LegendreCache::new)
}

/// Classical Legendre polynomial `P_i`, normalized by `P_i(1) = 1`.
pub fn legendre_poly(i: usize) -> Arc<Poly> {
    global().poly(i)
}

/// `R_{i1 i2}(z) = int_{-1}^z P_{i1}(u) P_{i2}(u) du`.
pub fn overlap_r(i1: usize, i2: usize) -> Arc<Poly> {
    global().overlap(i1, i2)
}

/// `2 / (2i + 1)`, the squared norm of `P_i` on `[-1, 1]`.
pub fn classical_norm(i: usize) -> Rat {
    Rat::new(BigInt::from(2), BigInt::from(2 * i + 1))
}
