use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::legendre::{legendre_poly, overlap_r};
use crate::polyring::{Poly, Rat};
use crate::ratfun::RatFun;

use super::FamilyKey;

/// Lazy, memoized confluent Darboux chain over the entries of a key, in the
/// order given. Level `j` is the family on the first `j` entries; level 0 is
/// classical.
///
/// ```text
/// R_j;ab  = R_{j-1};ab - t R_{j-1};am R_{j-1};bm / (1 + t R_{j-1};mm)
/// tau_j   = (1 + t R_{j-1};mm) tau_{j-1}
/// P_j;i   = (1 + t R_{j-1};mm) P_{j-1};i - t R_{j-1};im P_{j-1};m
/// ```
/// with `(m, t)` the `j`-th entry of the key. Overlaps are stored as
/// `N_j;ab = tau_j R_j;ab`, which is a polynomial, so each step is
///
/// ```text
/// tau_j  = tau_{j-1} + t N_{j-1};mm
/// N_j;ab = (tau_j N_{j-1};ab - t N_{j-1};am N_{j-1};bm) / tau_{j-1}
/// P_j;i  = (tau_j P_{j-1};i - t N_{j-1};im P_{j-1};m) / tau_{j-1}
/// ```
/// with exact divisions.
#[derive(Debug, Clone)]
pub struct CdtChain {
    key: FamilyKey,
    numerators: HashMap<(usize, usize, usize), Poly>,
    polys: HashMap<(usize, usize), Poly>,
    taus: Vec<Poly>,
}

impl CdtChain {
    pub fn new(key: &FamilyKey) -> Self {
        CdtChain {
            key: key.clone(),
            numerators: HashMap::new(),
            polys: HashMap::new(),
            taus: vec![Poly::one()],
        }
    }

    pub fn key(&self) -> &FamilyKey {
        &self.key
    }

    /// Number of steps, i.e. the level of the full family.
    pub fn depth(&self) -> usize {
        self.key.len()
    }

    fn entry(&self, level: usize) -> (usize, Rat) {
        (self.key.m()[level - 1], self.key.t()[level - 1].clone())
    }

    /// `N_{level; a b} = tau_level R_{level; a b}`.
    pub fn overlap_numerator(&mut self, level: usize, a: usize, b: usize) -> Result<Poly> {
        let (a, b) = (a.min(b), a.max(b));
        if level == 0 {
            return Ok((*overlap_r(a, b)).clone());
        }
        if let Some(n) = self.numerators.get(&(level, a, b)) {
            return Ok(n.clone());
        }
        let (m, t) = self.entry(level);
        let tau = self.tau(level)?;
        let prev = self.taus[level - 1].clone();
        let n_ab = self.overlap_numerator(level - 1, a, b)?;
        let n_am = self.overlap_numerator(level - 1, a, m)?;
        let n_bm = self.overlap_numerator(level - 1, b, m)?;
        let n = (&(&tau * &n_ab) - &(&n_am * &n_bm).scale(&t)).div_exact(&prev)?;
        self.numerators.insert((level, a, b), n.clone());
        Ok(n)
    }

    /// `R_{m_level; a b}`, symmetric in `(a, b)`.
    pub fn overlap(&mut self, level: usize, a: usize, b: usize) -> Result<RatFun> {
        let n = self.overlap_numerator(level, a, b)?;
        RatFun::new(n, self.tau(level)?)
    }

    /// `tau~` at `level`.
    pub fn tau(&mut self, level: usize) -> Result<Poly> {
        while self.taus.len() <= level {
            let next_level = self.taus.len();
            let (m, t) = self.entry(next_level);
            let n_mm = self.overlap_numerator(next_level - 1, m, m)?;
            let next = &self.taus[next_level - 1] + &n_mm.scale(&t);
            if next.is_zero() {
                return Err(Error::DegenerateParameter { step: next_level });
            }
            self.taus.push(next);
        }
        Ok(self.taus[level].clone())
    }

    /// `P~_{m_level; i}`.
    pub fn poly(&mut self, level: usize, i: usize) -> Result<Poly> {
        if level == 0 {
            return Ok((*legendre_poly(i)).clone());
        }
        if let Some(p) = self.polys.get(&(level, i)) {
            return Ok(p.clone());
        }
        let (m, t) = self.entry(level);
        let tau = self.tau(level)?;
        let prev = self.taus[level - 1].clone();
        let p_i = self.poly(level - 1, i)?;
        let p_m = self.poly(level - 1, m)?;
        let n_im = self.overlap_numerator(level - 1, i, m)?;
        let p = (&(&tau * &p_i) - &(&n_im * &p_m).scale(&t)).div_exact(&prev)?;
        self.polys.insert((level, i), p.clone());
        Ok(p)
    }
}

/// Output of [`recursive_family`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursiveFamily {
    pub tau: Poly,
    pub xpolys: BTreeMap<usize, Poly>,
    /// `R_{m; i1 i2}` for `i1 <= i2 <= max_i`.
    pub overlaps: BTreeMap<(usize, usize), RatFun>,
}

/// Runs the full chain on `key` (in the order given) and collects
/// `tau`, `P~_{m;i}` and the overlaps for every index up to `max_i`.
pub fn recursive_family(key: &FamilyKey, max_i: usize) -> Result<RecursiveFamily> {
    let mut chain = CdtChain::new(key);
    let n = chain.depth();
    let tau = chain.tau(n)?;
    let mut xpolys = BTreeMap::new();
    let mut overlaps = BTreeMap::new();
    for i in 0..=max_i {
        xpolys.insert(i, chain.poly(n, i)?);
        for i2 in i..=max_i {
            overlaps.insert((i, i2), chain.overlap(n, i, i2)?);
        }
    }
    Ok(RecursiveFamily {
        tau,
        xpolys,
        overlaps,
    })
}
