//! Exceptional Legendre families: the determinantal construction (matrix of
//! overlaps, its determinant `tau` and adjugate) and the equivalent
//! step-by-step confluent Darboux chain.

mod json;
mod key;
mod matrix;
mod recursive;

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::{One, Zero};

pub use json::{FamilyJson, PolyEntry};
pub use key::{FamilyKey, KeyJson};
pub use matrix::PolyMatrix;
pub use recursive::{recursive_family, CdtChain, RecursiveFamily};

use crate::error::Result;
use crate::legendre::{legendre_poly, overlap_r};
use crate::polyring::{Poly, Rat};
use crate::ratfun::RatFun;

/// `[R_m]_{kl} = delta_kl + t_{m_l} R_{m_k m_l}(z)`.
///
/// Works on any key, canonical or not; the duplicate-collapse identities are
/// checked by feeding raw keys through here.
pub fn build_matrix(key: &FamilyKey) -> PolyMatrix {
    let (m, t) = (key.m(), key.t());
    PolyMatrix::from_fn(key.len(), |k, l| {
        let entry = overlap_r(m[k], m[l]).scale(&t[l]);
        if k == l {
            &entry + &Poly::one()
        } else {
            entry
        }
    })
}

/// `tau_m = det R_m`.
pub fn tau(key: &FamilyKey) -> Poly {
    build_matrix(key).det()
}

fn legendre_column(key: &FamilyKey) -> Vec<Poly> {
    key.m().iter().map(|&i| (*legendre_poly(i)).clone()).collect()
}

/// `Q_m = adj(R_m) (P_{m_1}, ..., P_{m_n})^T`, which equals
/// `tau_m R_m^{-1} (P_{m_1}, ...)^T` without leaving the polynomial ring.
pub fn q_vector(key: &FamilyKey) -> Vec<Poly> {
    build_matrix(key).adjugate().mul_vec(&legendre_column(key))
}

/// `P_{m;i}`: the last entry of `Q` on the key extended by `(i, 0)`.
///
/// `t_i` only enters the last column of the extended matrix, and the last
/// row of the adjugate is built from minors that drop that column, so
/// `t_i = 0` is as good as any other value.
pub fn exceptional_poly(key: &FamilyKey, i: usize) -> Poly {
    let ext = key.extended(i, Rat::zero());
    let row = build_matrix(&ext).adjugate_row(ext.len() - 1);
    row.iter()
        .zip(legendre_column(&ext))
        .fold(Poly::zero(), |acc, (a, p)| &acc + &(a * &p))
}

/// `tau_m R_{m;ab}` as a bordered determinant: `R_m` with the row
/// `t_l R_{a m_l}`, the column `R_{m_k b}` and the corner `R_ab`.
pub fn overlap_numerator(key: &FamilyKey, a: usize, b: usize) -> Poly {
    bordered_matrix(key, a, b).det()
}

fn bordered_matrix(key: &FamilyKey, a: usize, b: usize) -> PolyMatrix {
    let (m, t) = (key.m(), key.t());
    let n = key.len();
    let inner = build_matrix(key);
    PolyMatrix::from_fn(n + 1, |k, l| match (k < n, l < n) {
        (true, true) => inner.get(k, l).clone(),
        (true, false) => (*overlap_r(m[k], b)).clone(),
        (false, true) => overlap_r(a, m[l]).scale(&t[l]),
        (false, false) => (*overlap_r(a, b)).clone(),
    })
}

/// Determinant of a rational matrix by elimination.
fn det_rat(mut a: Vec<Vec<Rat>>) -> Rat {
    let n = a.len();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &piv;
            for k in c..n {
                let v = &f * &a[c][k];
                a[r][k] -= v;
            }
        }
    }
    det
}

/// Predicted degree of `P_{m;i}`: `2 sum(m) + n + i`, minus `2i + 1` when
/// `i` is one of the deformed indices. The key is canonicalized first, so
/// merged or cancelled duplicates are handled.
pub fn expected_degree(key: &FamilyKey, i: usize) -> usize {
    let key = key.canonicalize();
    let base = key.codimension() + i;
    if key.contains(i) {
        base - (2 * i + 1)
    } else {
        base
    }
}

/// Degrees absent from `{deg P_{m;i} : i >= 0}`, ascending.
pub fn missing_degrees(key: &FamilyKey) -> Vec<usize> {
    let key = key.canonicalize();
    let max_m = key.m().iter().copied().max().unwrap_or(0);
    // Indices past max(m) only add degrees above codim + max(m).
    let top = key.codimension() + max_m;
    let mut hit = vec![false; top + 1];
    for i in 0..=top {
        let d = expected_degree(&key, i);
        if d <= top {
            hit[d] = true;
        }
    }
    (0..=top).filter(|&d| !hit[d]).collect()
}

/// One exceptional family with its determinantal data and memoized
/// polynomials and overlaps.
///
/// Construction is single-threaded; afterwards `&XFamily` can be shared
/// and queried from several threads.
#[derive(Debug)]
pub struct XFamily {
    original: FamilyKey,
    key: FamilyKey,
    matrix: PolyMatrix,
    tau: Poly,
    adjugate: PolyMatrix,
    q: Vec<Poly>,
    xpolys: Mutex<HashMap<usize, Poly>>,
    chain: Mutex<CdtChain>,
}

impl XFamily {
    pub fn new(key: &FamilyKey) -> Self {
        let canonical = key.canonicalize();
        let matrix = build_matrix(&canonical);
        let tau = matrix.det();
        let adjugate = matrix.adjugate();
        let q = adjugate.mul_vec(&legendre_column(&canonical));
        XFamily {
            q,
            original: key.clone(),
            chain: Mutex::new(CdtChain::new(&canonical)),
            key: canonical,
            matrix,
            tau,
            adjugate,
            xpolys: Mutex::new(HashMap::new()),
        }
    }

    pub fn key(&self) -> &FamilyKey {
        &self.key
    }

    /// The key as supplied, before canonicalization.
    pub fn original_key(&self) -> &FamilyKey {
        &self.original
    }

    pub fn was_canonicalized(&self) -> bool {
        self.original != self.key
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn tau(&self) -> &Poly {
        &self.tau
    }

    pub fn adjugate(&self) -> &PolyMatrix {
        &self.adjugate
    }

    pub fn q_vector(&self) -> Vec<Poly> {
        self.q.clone()
    }

    /// The extended matrix has last column `e_n` (its `t_i` is zero), so the
    /// last adjugate row is `(-r adj R_m, tau)` with `r_l = t_l R_{i m_l}`,
    /// giving `P_{m;i} = tau P_i - sum_l t_l R_{i m_l} Q_l`.
    fn poly_from_q(&self, i: usize) -> Poly {
        let (m, t) = (self.key.m(), self.key.t());
        self.q.iter().enumerate().fold(&self.tau * &*legendre_poly(i), |acc, (l, q)| {
            &acc - &(&*overlap_r(i, m[l]) * q).scale(&t[l])
        })
    }

    /// `P_{m;i}`, memoized.
    pub fn poly(&self, i: usize) -> Poly {
        if let Some(p) = self.xpolys.lock().expect("memo poisoned").get(&i) {
            return p.clone();
        }
        // Computed outside the lock; a racing thread computes the same value.
        let p = self.poly_from_q(i);
        self.xpolys
            .lock()
            .expect("memo poisoned")
            .entry(i)
            .or_insert(p)
            .clone()
    }

    /// `R_{m;i1 i2}`, from the bordered determinant over `tau`.
    pub fn overlap(&self, i1: usize, i2: usize) -> Result<RatFun> {
        RatFun::new(overlap_numerator(&self.key, i1, i2), self.tau.clone())
    }

    /// `R_{m;i1 i2}(z)` without reducing the rational function.
    pub fn overlap_at(&self, i1: usize, i2: usize, z: &Rat) -> Result<Rat> {
        let d = self.tau.evaluate(z);
        if d.is_zero() {
            return Err(crate::error::Error::Pole(crate::format_rat(z)));
        }
        let rows = bordered_matrix(&self.key, i1, i2)
            .rows()
            .iter()
            .map(|r| r.iter().map(|p| p.evaluate(z)).collect())
            .collect();
        Ok(det_rat(rows) / d)
    }

    /// `R_{m;i1 i2}` from the confluent Darboux recursion.
    pub fn overlap_recursive(&self, i1: usize, i2: usize) -> Result<RatFun> {
        let mut chain = self.chain.lock().expect("chain poisoned");
        let level = chain.depth();
        chain.overlap(level, i1, i2)
    }

    pub fn expected_degree(&self, i: usize) -> usize {
        expected_degree(&self.key, i)
    }
}
