//! Admissibility of deformation parameters and orthogonality norms.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyring::{format_rat, rat, Poly, Rat};
use crate::report::{CheckKind, CheckReport};
use crate::xfamily::{tau, FamilyKey, XFamily};

/// Sturm sequence `p, p', -rem(p, p'), ...` with every entry rescaled by a
/// positive constant to keep coefficients small.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmChain {
    chain: Vec<Poly>,
}

impl SturmChain {
    /// Panics on the zero polynomial.
    pub fn new(p: &Poly) -> Self {
        assert!(!p.is_zero(), "Sturm chain of the zero polynomial");
        let mut chain = vec![positive_primitive(p)];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(positive_primitive(&d));
        }
        while chain.len() >= 2 {
            let k = chain.len();
            let (_, r) = chain[k - 2]
                .div_rem(&chain[k - 1])
                .expect("nonzero divisor");
            if r.is_zero() {
                break;
            }
            chain.push(positive_primitive(&-r));
        }
        SturmChain { chain }
    }

    pub fn chain(&self) -> &[Poly] {
        &self.chain
    }

    /// Sign changes along the chain at `x`, zeros skipped.
    pub fn variations(&self, x: &Rat) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Distinct roots in `(lo, hi]`; exact when neither endpoint is a root.
    pub fn count_between(&self, lo: &Rat, hi: &Rat) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

/// Same polynomial up to a positive factor, with coprime integer coefficients.
fn positive_primitive(p: &Poly) -> Poly {
    let (ints, _) = p.to_scaled_ints();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    let g = g.abs();
    Poly::from_coeffs(ints.into_iter().map(|c| Rat::from_integer(c / &g)).collect())
}

/// Strips every factor `(z - x)` from `p`.
fn deflate(p: &Poly, x: &Rat) -> Poly {
    let lin = Poly::from_coeffs(vec![-x.clone(), Rat::one()]);
    let mut q = p.clone();
    while q.degree().is_some_and(|d| d > 0) && q.sign_at(x) == 0 {
        q = q.div_exact(&lin).expect("root implies linear factor");
    }
    q
}

/// Number of distinct real roots of `p` in the closed interval `[lo, hi]`.
pub fn root_count(p: &Poly, lo: &Rat, hi: &Rat) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::Precondition("root count of the zero polynomial".into()));
    }
    if lo >= hi {
        return Err(Error::Precondition(format!(
            "empty interval [{}, {}]",
            format_rat(lo),
            format_rat(hi)
        )));
    }
    let at_ends = usize::from(p.sign_at(lo) == 0) + usize::from(p.sign_at(hi) == 0);
    let q = deflate(&deflate(p, lo), hi);
    Ok(at_ends + SturmChain::new(&q).count_between(lo, hi))
}

/// `t_j > -m_j - 1/2` for every entry of the canonical key.
pub fn admissible_by_formula(key: &FamilyKey) -> bool {
    let key = key.canonicalize();
    let half = rat(1, 2);
    key.m()
        .iter()
        .zip(key.t())
        .all(|(&m, t)| t + Rat::from_integer(m.into()) + &half > Rat::zero())
}

/// `tau` has no zero on `[-1, 1]`.
pub fn admissible_by_sturm(key: &FamilyKey) -> bool {
    tau_root_free(&tau(&key.canonicalize()))
}

fn tau_root_free(tau: &Poly) -> bool {
    root_count(tau, &rat(-1, 1), &rat(1, 1)).expect("tau is nonzero") == 0
}

/// The parameter bound. This is the cheap path; see [`verify_admissibility`].
pub fn is_admissible(key: &FamilyKey) -> bool {
    admissible_by_formula(key)
}

/// The parameter bound, cross-checked against a Sturm count on `tau` and,
/// when admissible, against `tau > 0` on `[-1, 1]`.
pub fn verify_admissibility(key: &FamilyKey) -> Result<bool> {
    verify_admissibility_of(&key.canonicalize(), &tau(&key.canonicalize()))
}

fn verify_admissibility_of(key: &FamilyKey, tau: &Poly) -> Result<bool> {
    let formula = admissible_by_formula(key);
    let sturm = tau_root_free(tau);
    if formula != sturm {
        return Err(Error::InvariantViolation(format!(
            "key {key}: bound says {formula}, Sturm count says {sturm}"
        )));
    }
    if formula && tau.sign_at(&rat(-1, 1)) <= 0 {
        return Err(Error::InvariantViolation(format!("key {key}: tau(-1) is not positive")));
    }
    Ok(formula)
}

pub fn admissibility_report(key: &FamilyKey) -> CheckReport {
    let canon = key.canonicalize();
    let id = "t_j > -m_j - 1/2 iff tau has no zero on [-1, 1]";
    match verify_admissibility(&canon) {
        Ok(v) => CheckReport::new(CheckKind::Admissibility, id, &canon, None, true)
            .with_detail(if v { "admissible" } else { "inadmissible" }),
        Err(e) => CheckReport::new(CheckKind::Admissibility, id, &canon, None, false).with_detail(e.to_string()),
    }
}

/// Closed-form norm of `P_{m;i}`; the key must be admissible.
pub fn norm_of(key: &FamilyKey, i: usize) -> Result<Rat> {
    let key = key.canonicalize();
    if !is_admissible(&key) {
        return Err(Error::Inadmissible);
    }
    let mut den = Rat::from_integer((2 * i + 1).into());
    if let Some(t) = key.param_of(i) {
        den += t * Rat::from_integer(2.into());
    }
    Ok(Rat::from_integer(2.into()) / den)
}

/// Norms for a set of indices, each checked against `R_{m;ii}(1)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormTable {
    norms: BTreeMap<usize, Rat>,
}

impl NormTable {
    pub fn for_family(family: &XFamily, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let one = rat(1, 1);
        let mut norms = BTreeMap::new();
        for i in indices {
            let nu = norm_of(family.key(), i)?;
            let got = family.overlap_at(i, i, &one)?;
            if got != nu {
                return Err(Error::InvariantViolation(format!(
                    "norm of P_{i}: closed form {}, overlap at 1 gives {}",
                    format_rat(&nu),
                    format_rat(&got)
                )));
            }
            norms.insert(i, nu);
        }
        Ok(NormTable { norms })
    }

    pub fn get(&self, i: usize) -> Option<&Rat> {
        self.norms.get(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.norms.iter().map(|(&i, v)| (i, v))
    }

    pub fn values(&self) -> Vec<Rat> {
        self.norms.values().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn all_positive(&self) -> bool {
        self.norms.values().all(Signed::is_positive)
    }
}

/// `R_{m;i1 i2}(1) = 0` for `i1 < i2 <= max_i` and `R_{m;ii}(1) = nu_i`.
pub fn orthogonality_check(key: &FamilyKey, max_i: usize) -> Result<Vec<CheckReport>> {
    let family = XFamily::new(key);
    orthogonality_reports(&family, max_i)
}

pub fn orthogonality_reports(family: &XFamily, max_i: usize) -> Result<Vec<CheckReport>> {
    let key = family.key();
    if !verify_admissibility_of(key, family.tau())? {
        return Err(Error::Inadmissible);
    }
    let one = rat(1, 1);
    let mut out = Vec::new();
    for i1 in 0..=max_i {
        for i2 in i1..=max_i {
            let value = family.overlap_at(i1, i2, &one);
            let (identity, expected) = if i1 == i2 {
                (format!("R_{{m;{i1}{i1}}}(1) = nu_{i1}"), norm_of(key, i1)?)
            } else {
                (format!("R_{{m;{i1}{i2}}}(1) = 0"), Rat::zero())
            };
            let report = match value {
                Ok(v) => {
                    let pass = v == expected;
                    let r = CheckReport::new(CheckKind::Orthogonality, identity, key, Some(i1), pass);
                    if pass {
                        r
                    } else {
                        r.with_detail(format!("got {}, expected {}", format_rat(&v), format_rat(&expected)))
                    }
                }
                Err(e) => CheckReport::new(CheckKind::Orthogonality, identity, key, Some(i1), false)
                    .with_detail(e.to_string()),
            };
            out.push(report);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legendre::{classical_norm, legendre_poly};
    use crate::report::all_pass;
    use proptest::prelude::*;

    fn key(m: &str, t: &str) -> FamilyKey {
        FamilyKey::parse(m, t).unwrap()
    }

    /// Counts roots on a grid by sign changes and exact zeros; a lower bound
    /// for distinct roots that is exact when the grid separates them.
    fn grid_roots(p: &Poly, steps: i64) -> usize {
        let mut count = 0;
        let mut prev = 0i8;
        for k in 0..=steps {
            let s = p.sign_at(&(rat(2 * k, steps) - rat(1, 1)));
            if s == 0 {
                count += 1;
            } else if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
        count
    }

    #[test]
    fn root_count_examples() {
        let (lo, hi) = (rat(-1, 1), rat(1, 1));
        assert_eq!(root_count(&Poly::from_i64(&[-1, 0, 1]), &lo, &hi).unwrap(), 2);
        // 1 - (z + 1)/2
        let p = Poly::from_i64_over(&[1, -1], 2);
        assert_eq!(root_count(&p, &lo, &hi).unwrap(), 1);
        let tau4 = tau(&key("4", "26/5"));
        assert_eq!(root_count(&tau4, &lo, &hi).unwrap(), 0);
        assert_eq!(grid_roots(&tau4, 2000), 0);
    }

    #[test]
    fn root_count_rejects_bad_input() {
        assert!(root_count(&Poly::zero(), &rat(-1, 1), &rat(1, 1)).is_err());
        assert!(root_count(&Poly::z(), &rat(1, 1), &rat(1, 1)).is_err());
    }

    #[test]
    fn root_count_repeated_and_interior() {
        let (lo, hi) = (rat(-1, 1), rat(1, 1));
        // (z - 1/2)^3 (z + 1)^2 (z - 3)
        let p = Poly::from_i64_over(&[-1, 2], 2).pow(3) * Poly::from_i64(&[1, 1]).pow(2) * Poly::from_i64(&[-3, 1]);
        assert_eq!(root_count(&p, &lo, &hi).unwrap(), 2);
        assert_eq!(root_count(&legendre_poly(9), &lo, &hi).unwrap(), 9);
        assert_eq!(root_count(&Poly::from_i64(&[1, 0, 1]), &lo, &hi).unwrap(), 0);
        assert_eq!(root_count(&Poly::from_i64(&[5]), &lo, &hi).unwrap(), 0);
    }

    #[test]
    fn chain_ends_in_gcd() {
        let p = Poly::from_i64(&[-1, 0, 1]).pow(2);
        let chain = SturmChain::new(&p);
        let last = chain.chain().last().unwrap();
        assert_eq!(last.monic(), p.gcd(&p.derivative()));
    }

    #[test]
    fn admissibility_examples() {
        assert!(verify_admissibility(&key("4", "26/5")).unwrap());
        assert!(verify_admissibility(&key("1,2", "2,-8/5")).unwrap());
        assert!(!verify_admissibility(&key("0", "-1/2")).unwrap());
        assert!(verify_admissibility(&FamilyKey::classical()).unwrap());
        // merges to t = -3 > -7/2
        assert!(verify_admissibility(&key("3,3", "-3/2,-3/2")).unwrap());
        assert!(!verify_admissibility(&key("3,3", "-2,-2")).unwrap());
    }

    #[test]
    fn admissibility_report_shape() {
        let r = admissibility_report(&key("0", "-1/2"));
        assert!(r.pass);
        assert_eq!(r.detail.as_deref(), Some("inadmissible"));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["kind"], "admissibility");
    }

    #[test]
    fn norm_examples() {
        let k = key("4", "26/5");
        assert_eq!(norm_of(&k, 4).unwrap(), rat(10, 97));
        assert_eq!(norm_of(&k, 7).unwrap(), rat(2, 15));
        assert_eq!(norm_of(&FamilyKey::classical(), 3).unwrap(), rat(2, 7));
        let k = key("1,2", "2,-8/5");
        assert_eq!(norm_of(&k, 1).unwrap(), rat(2, 7));
        assert_eq!(norm_of(&k, 2).unwrap(), rat(10, 9));
        assert_eq!(norm_of(&key("0", "-1/2"), 0), Err(Error::Inadmissible));
    }

    #[test]
    fn norm_table_cross_checks() {
        let fam = XFamily::new(&key("1,2", "2,-8/5"));
        let table = NormTable::for_family(&fam, 0..=5).unwrap();
        assert_eq!(table.len(), 6);
        assert!(table.all_positive());
        assert_eq!(table.get(2), Some(&rat(10, 9)));
    }

    #[test]
    fn orthogonality_examples() {
        assert!(all_pass(&orthogonality_check(&key("4", "26/5"), 8).unwrap()));
        let classical = orthogonality_check(&FamilyKey::classical(), 6).unwrap();
        assert_eq!(classical.len(), 28);
        assert!(all_pass(&classical));
        assert!(all_pass(&orthogonality_check(&key("1,2", "2,-8/5"), 6).unwrap()));
        assert_eq!(orthogonality_check(&key("0", "-1/2"), 3), Err(Error::Inadmissible));
        let v = serde_json::to_value(&classical[0]).unwrap();
        assert_eq!(v["kind"], "orthogonality");
    }

    #[test]
    fn untouched_levels_keep_classical_norms() {
        let k = key("2,5", "7/2,-1/4");
        for i in (0..10).filter(|i| !k.contains(*i)) {
            assert_eq!(norm_of(&k, i).unwrap(), classical_norm(i));
        }
    }

    #[test]
    fn positive_t_gives_monotone_tau() {
        for m in 0..5usize {
            let k = FamilyKey::new(vec![m], vec![rat(3, 2)]).unwrap();
            let tau = tau(&k);
            let p = legendre_poly(m);
            assert_eq!(tau.derivative(), (&*p * &*p).scale(&rat(3, 2)));
            // nondecreasing: tau' has no sign change on the grid
            let d = tau.derivative();
            assert!((0..=200).all(|j| d.sign_at(&(rat(j, 100) - rat(1, 1))) >= 0));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn formula_agrees_with_sturm(m in 0usize..5, num in -80i64..80) {
            let k = FamilyKey::new(vec![m], vec![rat(num, 10)]).unwrap();
            prop_assert!(verify_admissibility(&k).is_ok());
        }

        #[test]
        fn admissible_norms_positive(m1 in 0usize..4, m2 in 0usize..4, a in -30i64..60, b in -30i64..60) {
            prop_assume!(m1 != m2);
            let k = FamilyKey::new(vec![m1, m2], vec![rat(a, 10), rat(b, 10)]).unwrap();
            prop_assume!(is_admissible(&k));
            for i in 0..8 {
                prop_assert!(norm_of(&k, i).unwrap().is_positive());
            }
        }

        #[test]
        fn root_count_matches_product_of_linear_factors(roots in proptest::collection::vec(-6i64..6, 1..5)) {
            let p = roots.iter().fold(Poly::one(), |acc, &r| acc * Poly::from_i64_over(&[-r, 4], 4));
            let mut inside: Vec<i64> = roots.iter().copied().filter(|r| r.abs() <= 4).collect();
            inside.sort();
            inside.dedup();
            prop_assert_eq!(root_count(&p, &rat(-1, 1), &rat(1, 1)).unwrap(), inside.len());
        }
    }
}
