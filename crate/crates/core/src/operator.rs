//! The exceptional Legendre operator
//!
//! ```text
//! T(tau) = (1 - z^2) (D^2 - 2 (tau'/tau) D + tau''/tau) - 2 z D
//! ```
//!
//! the first-order factors `A(tau, phi) = tau^-1 (phi D - phi')` and
//! `B(phi, tau) = A(phi, tau) o (1 - z^2)`, and exact checks of the
//! eigenvalue, factorization and intertwining identities along a confluent
//! Darboux chain.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::polyring::{Poly, Rat};
use crate::ratfun::RatFun;
use crate::report::{CheckKind, CheckReport};
use crate::xfamily::{CdtChain, FamilyKey, XFamily};

/// `lambda_i = -i (i + 1)`.
pub fn lambda(i: usize) -> Rat {
    -Rat::from_integer(BigInt::from(i) * BigInt::from(i + 1))
}

fn one_minus_z2() -> Poly {
    Poly::from_i64(&[1, 0, -1])
}

fn two_z() -> Poly {
    Poly::from_i64(&[0, 2])
}

/// Unreduced quotient used inside the checks; equality cross-multiplies,
/// so no gcd is ever taken.
#[derive(Clone, Debug)]
struct Frac {
    num: Poly,
    den: Poly,
}

impl Frac {
    fn poly(p: Poly) -> Self {
        Frac { num: p, den: Poly::one() }
    }

    fn from_ratfun(f: &RatFun) -> Self {
        Frac { num: f.num().clone(), den: f.den().clone() }
    }

    fn derivative(&self) -> Frac {
        if self.den.is_constant() {
            return Frac { num: self.num.derivative(), den: self.den.clone() };
        }
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Frac { num, den: &self.den * &self.den }
    }

    fn times(&self, p: &Poly) -> Frac {
        Frac { num: &self.num * p, den: self.den.clone() }
    }

    fn over(&self, p: &Poly) -> Frac {
        Frac { num: self.num.clone(), den: &self.den * p }
    }

    fn scale(&self, c: &Rat) -> Frac {
        Frac { num: self.num.scale(c), den: self.den.clone() }
    }

    fn sub(&self, rhs: &Frac) -> Frac {
        if self.den == rhs.den {
            return Frac { num: &self.num - &rhs.num, den: self.den.clone() };
        }
        Frac {
            num: &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
    }

    fn add(&self, rhs: &Frac) -> Frac {
        self.sub(&rhs.scale(&-Rat::from_integer(1.into())))
    }

    fn same(&self, rhs: &Frac) -> bool {
        &self.num * &rhs.den == &rhs.num * &self.den
    }

    fn reduced(self) -> RatFun {
        RatFun::new(self.num, self.den).expect("operator polynomials are nonzero")
    }
}

/// `T(tau)` for a nonzero `tau`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSpec {
    tau: Poly,
}

impl OperatorSpec {
    pub fn new(tau: Poly) -> Result<Self> {
        if tau.is_zero() {
            return Err(Error::DivisionByZero("tau"));
        }
        Ok(OperatorSpec { tau })
    }

    /// The classical operator `(1 - z^2) D^2 - 2 z D`.
    pub fn classical() -> Self {
        OperatorSpec { tau: Poly::one() }
    }

    pub fn tau(&self) -> &Poly {
        &self.tau
    }

    /// `tau * T(tau) p`, which is always a polynomial.
    pub fn apply_cleared(&self, p: &Poly) -> Poly {
        let tau = &self.tau;
        let (dp, ddp) = (p.derivative(), p.derivative().derivative());
        let (dt, ddt) = (tau.derivative(), tau.derivative().derivative());
        let inner = &(&(tau * &ddp) - &(&dt * &dp).scale(&Rat::from_integer(2.into()))) + &(&ddt * p);
        &(&one_minus_z2() * &inner) - &(&two_z() * &(tau * &dp))
    }

    /// `T(tau) p` as a reduced rational function.
    pub fn apply(&self, p: &Poly) -> RatFun {
        RatFun::new(self.apply_cleared(p), self.tau.clone()).expect("tau is nonzero")
    }
}

/// `apply_T_hat`: `T(tau) p`.
pub fn apply_t_hat(spec: &OperatorSpec, p: &Poly) -> RatFun {
    spec.apply(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FirstOrderKind {
    /// `A(tau, phi) f = tau^-1 (phi f' - phi' f) = tau^-1 Wr(phi, f)`.
    A,
    /// `B(phi, tau) f = phi^-1 ((1 - z^2)(tau f' - tau' f) - 2 z tau f)`.
    B,
}

/// A first-order factor. For `A` the pair is `(tau, phi)`, for `B` it is
/// `(phi, tau)`, matching the usual argument order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstOrderOp {
    kind: FirstOrderKind,
    first: Poly,
    second: Poly,
}

impl FirstOrderOp {
    pub fn a(tau: &Poly, phi: &Poly) -> Result<Self> {
        Self::new(FirstOrderKind::A, tau.clone(), phi.clone())
    }

    pub fn b(phi: &Poly, tau: &Poly) -> Result<Self> {
        Self::new(FirstOrderKind::B, phi.clone(), tau.clone())
    }

    pub fn new(kind: FirstOrderKind, first: Poly, second: Poly) -> Result<Self> {
        if first.is_zero() || second.is_zero() {
            return Err(Error::Precondition(
                "first-order operator built from a zero polynomial".into(),
            ));
        }
        Ok(FirstOrderOp { kind, first, second })
    }

    pub fn apply(&self, f: &RatFun) -> RatFun {
        self.apply_frac(&Frac::from_ratfun(f)).reduced()
    }

    fn apply_frac(&self, f: &Frac) -> Frac {
        let df = f.derivative();
        match self.kind {
            FirstOrderKind::A => {
                let (tau, phi) = (&self.first, &self.second);
                df.times(phi).sub(&f.times(&phi.derivative())).over(tau)
            }
            FirstOrderKind::B => {
                let (phi, tau) = (&self.first, &self.second);
                let inner = df.times(tau).sub(&f.times(&tau.derivative()));
                inner.times(&one_minus_z2()).sub(&f.times(&(&two_z() * tau))).over(phi)
            }
        }
    }
}

/// `apply_first_order`.
pub fn apply_first_order(op: &FirstOrderOp, f: &RatFun) -> RatFun {
    op.apply(f)
}

/// `T(tau_m) P_{m;i} = -i(i+1) P_{m;i}`, checked exactly in the cleared
/// form `tau T(tau) P = lambda tau P` (tau is never the zero polynomial).
pub fn verify_eigen_in(family: &XFamily, i: usize) -> bool {
    let spec = OperatorSpec { tau: family.tau().clone() };
    let p = family.poly(i);
    spec.apply_cleared(&p) == (family.tau() * &p).scale(&lambda(i))
}

pub fn verify_eigen(key: &FamilyKey, i: usize) -> bool {
    verify_eigen_in(&XFamily::new(key), i)
}

/// One confluent Darboux step inside a key: the family on `key` minus the
/// `m_step` entry (`tau`, `pi_i`) and the family on the whole key
/// (`tau_m`, `pi_{m;i}`).
#[derive(Debug)]
pub struct CdtStep {
    pub base: XFamily,
    pub target: XFamily,
    pub m: usize,
    pub t: Rat,
    /// `pi_m = P_{base; m}`.
    pub seed: Poly,
}

impl CdtStep {
    pub fn new(key: &FamilyKey, m_step: usize) -> Result<Self> {
        let key = key.canonicalize();
        let pos = key.m().iter().position(|&x| x == m_step).ok_or_else(|| {
            Error::Precondition(format!("index {m_step} is not a deformed level of {key}"))
        })?;
        let t = key.t()[pos].clone();
        let base = XFamily::new(&key.without(pos));
        let seed = base.poly(m_step);
        Ok(CdtStep {
            target: XFamily::new(&key),
            base,
            m: m_step,
            t,
            seed,
        })
    }

    /// Probes `1, z, ..., z^D` with `D = 2 * (largest coefficient degree) + 2`.
    pub fn default_probe_degree(&self) -> usize {
        let deg = |p: &Poly| p.degree().unwrap_or(0);
        let top = deg(self.base.tau()).max(deg(self.target.tau())).max(deg(&self.seed)) + 2;
        2 * top + 2
    }
}

fn probes(max_degree: usize) -> impl Iterator<Item = Poly> {
    (0..=max_degree).map(|k| Poly::z().pow(k as u32))
}

/// Checks, on monomial probes up to `probe_degree`,
///
/// ```text
/// T(tau)        = B(pi_m, tau)   A(tau, pi_m)   + lambda_m
/// T(tau_m)      = B(pi_m, tau_m) A(tau_m, pi_m) + lambda_m
/// A(tau, pi_m) B(pi_m, tau) = A(tau_m, pi_m) B(pi_m, tau_m)
/// ```
///
/// where the step is the deformation at `m_step` inside `key`.
pub fn verify_factorization(
    key: &FamilyKey,
    m_step: usize,
    probe_degree: Option<usize>,
) -> Result<Vec<CheckReport>> {
    let step = CdtStep::new(key, m_step)?;
    let d = probe_degree.unwrap_or_else(|| step.default_probe_degree());
    Ok(factorization_reports(&step, d))
}

pub fn factorization_reports(step: &CdtStep, probe_degree: usize) -> Vec<CheckReport> {
    let (tau, tau_m, pi) = (step.base.tau(), step.target.tau(), &step.seed);
    let lam = lambda(step.m);
    let a_base = FirstOrderOp::a(tau, pi).expect("nonzero");
    let b_base = FirstOrderOp::b(pi, tau).expect("nonzero");
    let a_target = FirstOrderOp::a(tau_m, pi).expect("nonzero");
    let b_target = FirstOrderOp::b(pi, tau_m).expect("nonzero");
    let t_base = OperatorSpec { tau: tau.clone() };
    let t_target = OperatorSpec { tau: tau_m.clone() };

    let first_failure = |check: &dyn Fn(&Poly) -> bool| probes(probe_degree).find(|p| !check(p));

    let factor = |spec: &OperatorSpec, a: &FirstOrderOp, b: &FirstOrderOp, p: &Poly| {
        let f = Frac::poly(p.clone());
        let lhs = Frac { num: spec.apply_cleared(p), den: spec.tau.clone() };
        lhs.same(&b.apply_frac(&a.apply_frac(&f)).add(&f.scale(&lam)))
    };
    let base_fail = first_failure(&|p: &Poly| factor(&t_base, &a_base, &b_base, p));
    let target_fail = first_failure(&|p: &Poly| factor(&t_target, &a_target, &b_target, p));
    let swap_fail = first_failure(&|p: &Poly| {
        let f = Frac::poly(p.clone());
        a_base.apply_frac(&b_base.apply_frac(&f)).same(&a_target.apply_frac(&b_target.apply_frac(&f)))
    });

    let key = step.target.key();
    let detail = format!("step m={} t={}, probes z^0..z^{probe_degree}", step.m, step.t);
    [
        ("T(tau) = B(pi_m,tau) A(tau,pi_m) + lambda_m", base_fail),
        ("T(tau_m) = B(pi_m,tau_m) A(tau_m,pi_m) + lambda_m", target_fail),
        ("A(tau,pi_m) B(pi_m,tau) = A(tau_m,pi_m) B(pi_m,tau_m)", swap_fail),
    ]
    .into_iter()
    .map(|(name, fail)| {
        CheckReport::new(CheckKind::Factorization, name, key, None, fail.is_none())
            .with_probe(fail)
            .with_detail(detail.clone())
    })
    .collect()
}

/// `(lambda_i - lambda_m) pi_{m;i} = B(pi_m, tau_m) A(tau, pi_m) pi_i`.
///
/// The eigenvalue difference is `lambda_i - lambda_m`: already for
/// `tau = 1, m = 0, i = 1` the right side is `-z^2 - 4z - 1 = -2 pi_{0;1}`
/// (with `t = 1`), and `lambda_1 - lambda_0 = -2`.
pub fn verify_intertwining(key: &FamilyKey, m_step: usize, i: usize) -> Result<bool> {
    let step = CdtStep::new(key, m_step)?;
    intertwining_holds(&step, i)
}

pub fn intertwining_holds(step: &CdtStep, i: usize) -> Result<bool> {
    if i == step.m {
        return Err(Error::Precondition(format!(
            "intertwining needs i != m (both are {i})"
        )));
    }
    let a = FirstOrderOp::a(step.base.tau(), &step.seed)?;
    let b = FirstOrderOp::b(&step.seed, step.target.tau())?;
    let lhs = step.target.poly(i).scale(&(lambda(i) - lambda(step.m)));
    let rhs = b.apply_frac(&a.apply_frac(&Frac::poly(step.base.poly(i))));
    Ok(Frac::poly(lhs).same(&rhs))
}

/// `(lambda_i - lambda_m) rho_im = (1 - z^2) tau^-1 A(tau, pi_m) pi_i`, with
/// `rho_im` taken from the recursion on the base family. Differentiating
/// `(1 - z^2) Wr(pi_m, pi_i) / tau^2` gives `(lambda_i - lambda_m) pi_i pi_m / tau^2`,
/// and both sides vanish at -1.
pub fn verify_overlap_wronskian(key: &FamilyKey, m_step: usize, i: usize) -> Result<bool> {
    let step = CdtStep::new(key, m_step)?;
    overlap_wronskian_holds(&step, i)
}

pub fn overlap_wronskian_holds(step: &CdtStep, i: usize) -> Result<bool> {
    let mut chain = CdtChain::new(step.base.key());
    let level = chain.depth();
    let rho = Frac { num: chain.overlap_numerator(level, i, step.m)?, den: chain.tau(level)? };
    let a = FirstOrderOp::a(step.base.tau(), &step.seed)?;
    let applied = a.apply_frac(&Frac::poly(step.base.poly(i)));
    let rhs = applied.times(&one_minus_z2()).over(step.base.tau());
    Ok(rho.scale(&(lambda(i) - lambda(step.m))).same(&rhs))
}

/// `(1 - z^2) Wr(pi_i, pi_m) / tau^2` at `z = -1`; zero for every
/// eigenpair of a family whose overlaps vanish at -1.
pub fn boundary_wronskian(family: &XFamily, i: usize, m: usize) -> Result<Rat> {
    let (pi, pm) = (family.poly(i), family.poly(m));
    let wr = &(&pi * &pm.derivative()) - &(&pi.derivative() * &pm);
    let tau = family.tau();
    let f = RatFun::new(&one_minus_z2() * &wr, tau * tau)?;
    f.evaluate(&Rat::from_integer((-1).into()))
}

/// Classical operator written directly as `(1 - z^2) p'' - 2 z p'`.
pub fn classical_operator(p: &Poly) -> Poly {
    &(&one_minus_z2() * &p.derivative().derivative()) - &(&two_z() * &p.derivative())
}
