//! Acceptance criteria. Runs sequentially with a wall-clock budget per
//! criterion and prints one PASS/FAIL line each.

use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};

use xlegendre::admissibility::{admissible_by_formula, admissible_by_sturm, is_admissible, norm_of, root_count};
use xlegendre::cli::{self, strict_local_extrema, strictly_decreasing, weight_samples};
use xlegendre::legendre::legendre_poly;
use xlegendre::operator::{factorization_reports, intertwining_holds, overlap_wronskian_holds, verify_eigen_in, CdtStep};
use xlegendre::polyring::rat;
use xlegendre::xfamily::{exceptional_poly, tau, CdtChain, FamilyJson};
use xlegendre::{format_rat, FamilyKey, Poly, Rat, XFamily};

type Outcome = Result<String, String>;

/// Criterion 3 lattice: distinct levels `m_1 < ... < m_n <= 5`, `n <= 3`,
/// every `t_j` from {1, -1/4, 7/2}.
fn lattice() -> Vec<FamilyKey> {
    let ts = [rat(1, 1), rat(-1, 4), rat(7, 2)];
    let mut sets: Vec<Vec<usize>> = vec![vec![]];
    for a in 0..=5 {
        sets.push(vec![a]);
        for b in a + 1..=5 {
            sets.push(vec![a, b]);
            for c in b + 1..=5 {
                sets.push(vec![a, b, c]);
            }
        }
    }
    let mut keys = Vec::new();
    for m in sets {
        let mut params: Vec<Vec<Rat>> = vec![vec![]];
        for _ in &m {
            params = params
                .into_iter()
                .flat_map(|p| {
                    ts.iter().map(move |t| {
                        let mut q = p.clone();
                        q.push(t.clone());
                        q
                    })
                })
                .collect();
        }
        for t in params {
            keys.push(FamilyKey::new(m.clone(), t).unwrap());
        }
    }
    keys
}

const MAX_I: usize = 12;

fn p(coeffs: &[i64], den: i64) -> Poly {
    Poly::from_i64_over(coeffs, den)
}

/// Sparse `(power, coefficient)` list over a common denominator.
fn sparse(terms: &[(usize, i64)], den: i64) -> Poly {
    let top = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let mut c = vec![0i64; top + 1];
    for &(k, v) in terms {
        c[k] = v;
    }
    p(&c, den)
}

fn classical(i: usize) -> Poly {
    match i {
        1 => p(&[0, 1], 1),
        2 => p(&[-1, 0, 3], 2),
        3 => p(&[0, -3, 0, 5], 2),
        4 => p(&[3, 0, -30, 0, 35], 8),
        5 => p(&[0, 15, 0, -70, 0, 63], 8),
        _ => unreachable!(),
    }
}

/// Antiderivative vanishing at -1, computed term by term.
fn integral_from_minus1(f: &Poly) -> Poly {
    let mut c = vec![Rat::zero()];
    for (k, a) in f.coeffs().iter().enumerate() {
        c.push(a / Rat::from_integer((k as i64 + 1).into()));
    }
    let g = Poly::from_coeffs(c);
    let at = g.evaluate(&rat(-1, 1));
    &g - &Poly::constant(at)
}

fn gen_json(m: &str, t: &str, range: &str) -> Result<FamilyJson, String> {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(["xlegendre", "gen", "--m", m, "--t", t, "--i", range], &mut out, &mut err);
    if code != 0 {
        return Err(format!("gen exited {code}: {}", String::from_utf8_lossy(&err)));
    }
    serde_json::from_slice(&out).map_err(|e| e.to_string())
}

fn golden_one_parameter() -> Outcome {
    let tau_t = sparse(&[(0, 64), (1, 81), (3, -540), (5, 1998), (7, -2700), (9, 1225)], 576);
    // P_{4;i} = base_i + t * shape_i
    let shapes: Vec<(Poly, Poly)> = vec![
        (Poly::one(), sparse(&[(0, 16), (3, 135), (5, -459), (7, 585), (9, -245)], 144)),
        (
            classical(1),
            sparse(&[(0, -9), (1, 128), (2, 171), (4, 30), (6, -1314), (8, 2475), (10, -1225)], 1152),
        ),
        (
            classical(2),
            -sparse(&[(0, 32), (2, -96), (3, 189), (5, -756), (7, 1278), (9, -1300), (11, 525)], 576),
        ),
        // the reference listing has the opposite sign on the t-part; the defining
        // formula (checked below for every i) gives this one
        (
            classical(3),
            sparse(
                &[
                    (0, 243),
                    (1, -1536),
                    (2, -3402),
                    (3, 2560),
                    (4, 3645),
                    (6, 7668),
                    (8, -17955),
                    (10, 16950),
                    (12, -6125),
                ],
                9216,
            ),
        ),
        (classical(4), Poly::zero()),
        (
            classical(5),
            sparse(
                &[
                    (0, 243),
                    (1, 1920),
                    (2, -1215),
                    (3, -8960),
                    (4, -3645),
                    (5, 8064),
                    (6, 17145),
                    (8, -42255),
                    (10, 66171),
                    (12, -50855),
                    (14, 15435),
                ],
                9216,
            ),
        ),
    ];
    let r44 = integral_from_minus1(&(&classical(4) * &classical(4)));
    if r44 != tau_t {
        return Err(format!("tau_4 shape disagrees with the integral of P_4^2: {r44}"));
    }
    for (i, (base, shape)) in shapes.iter().enumerate() {
        // P_{4;i} - P_i = t (P_i R_44 - P_4 R_4i)
        let r4i = integral_from_minus1(&(&classical(4) * base));
        let oracle = &(base * &r44) - &(&classical(4) * &r4i);
        if &oracle != shape {
            return Err(format!("reference P_{{4;{i}}} disagrees with the defining formula: {oracle}"));
        }
    }
    let ts = ["26/5", "1", "-3", "7/2", "0"];
    let mut compared = 0;
    for t in ts {
        let tv = xlegendre::parse_rat(t).map_err(|e| e.to_string())?;
        let doc = gen_json("4", t, "0..5")?;
        let want_tau = &Poly::one() + &tau_t.scale(&tv);
        if doc.tau != want_tau {
            return Err(format!("tau_4 at t={t}: got {}, want {want_tau}", doc.tau));
        }
        for (entry, (base, shape)) in doc.polys.iter().zip(&shapes) {
            let want = base + &shape.scale(&tv);
            if entry.coeffs != want {
                return Err(format!("P_{{4;{}}} at t={t}: got {}, want {want}", entry.i, entry.coeffs));
            }
            compared += 1;
        }
        if doc.polys.len() != 6 {
            return Err(format!("expected 6 polynomials, got {}", doc.polys.len()));
        }
    }
    let top = gen_json("4", "26/5", "5")?.polys[0].coeffs.coeff(14);
    if top != rat(15435, 9216) * rat(26, 5) {
        return Err(format!("z^14 coefficient of P_{{4;5}} is {}", format_rat(&top)));
    }
    Ok(format!("tau_4 and {compared} polynomials at {} values of t", ts.len()))
}

fn golden_two_parameters() -> Outcome {
    let quartic = &p(&[1, 1], 1).pow(4) * &p(&[49, -116, 110, -36, 9], 1);
    let r11 = p(&[1, 0, 0, 1], 3);
    let r22 = p(&[4, 5, 0, -10, 0, 9], 20);
    let pairs = [("2", "-8/5"), ("1", "1"), ("-1/3", "5/7"), ("7/2", "-1/4"), ("0", "3")];
    for (a, b) in pairs {
        let (t1, t2) = (xlegendre::parse_rat(a).unwrap(), xlegendre::parse_rat(b).unwrap());
        let want = &(&(&Poly::one() + &r11.scale(&t1)) + &r22.scale(&t2)) + &quartic.scale(&(&t1 * &t2 / rat(960, 1)));
        let doc = gen_json("1,2", &format!("{a},{b}"), "0")?;
        if doc.tau != want {
            return Err(format!("tau_(1,2) at ({a},{b}): got {}, want {want}", doc.tau));
        }
    }
    Ok(format!("{} parameter pairs", pairs.len()))
}

fn eigen_sweep(keys: &[FamilyKey]) -> Outcome {
    let mut n = 0;
    for key in keys {
        let fam = XFamily::new(key);
        for i in 0..=MAX_I {
            if !verify_eigen_in(&fam, i) {
                return Err(format!("eigenvalue relation fails for {key}, i={i}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} identities over {} keys", keys.len()))
}

fn determinant_vs_recursion(keys: &[FamilyKey]) -> Outcome {
    let mut n = 0;
    for key in keys {
        let mut chain = CdtChain::new(key);
        let depth = chain.depth();
        let rt = chain.tau(depth).map_err(|e| format!("{key}: {e}"))?;
        if rt != tau(key) {
            return Err(format!("tau differs for {key}"));
        }
        for i in 0..=MAX_I {
            let rp = chain.poly(depth, i).map_err(|e| format!("{key}: {e}"))?;
            if rp != exceptional_poly(key, i) {
                return Err(format!("P_{{m;{i}}} differs for {key}"));
            }
            n += 1;
        }
    }
    Ok(format!("{} tau and {n} polynomials", keys.len()))
}

fn admissibility_iff() -> Outcome {
    let eps = [rat(1, 10), rat(-1, 10), rat(1, 1000), rat(-1, 1000)];
    let near = |m: usize, e: &Rat| -Rat::from_integer(m.into()) - rat(1, 2) + e;
    let mut keys = Vec::new();
    for m1 in 0..=4usize {
        for e in &eps {
            keys.push(FamilyKey::new(vec![m1], vec![near(m1, e)]).unwrap());
        }
        for m2 in m1..=4usize {
            for e1 in &eps {
                for e2 in &eps {
                    keys.push(FamilyKey::new(vec![m1, m2], vec![near(m1, e1), near(m2, e2)]).unwrap());
                }
            }
        }
    }
    let (mut yes, mut no) = (0, 0);
    for key in &keys {
        let (f, s) = (admissible_by_formula(key), admissible_by_sturm(key));
        if f != s {
            return Err(format!("{key}: bound says {f}, Sturm says {s}"));
        }
        if f {
            yes += 1;
        } else {
            no += 1;
        }
    }
    Ok(format!("{} keys agree ({yes} admissible, {no} not)", keys.len()))
}

fn norms(keys: &[FamilyKey]) -> Outcome {
    let one = rat(1, 1);
    let (mut diag, mut off, mut skipped) = (0, 0, 0);
    for key in keys {
        if !is_admissible(key) {
            skipped += 1;
            continue;
        }
        let fam = XFamily::new(key);
        for i1 in 0..=MAX_I {
            for i2 in i1..=MAX_I {
                let v = fam.overlap_at(i1, i2, &one).map_err(|e| format!("{key}: {e}"))?;
                if i1 == i2 && key.contains(i1) {
                    // the deformed norms once more through the reduced function
                    let full = fam.overlap(i1, i1).and_then(|r| r.evaluate(&one));
                    if full.as_ref().ok() != Some(&v) {
                        return Err(format!("{key}: reduced R_{{m;{i1}{i1}}}(1) = {full:?}"));
                    }
                }
                if i1 == i2 {
                    let mut den = Rat::from_integer((2 * i1 + 1).into());
                    if let Some(t) = key.param_of(i1) {
                        den += t * rat(2, 1);
                    }
                    let want = rat(2, 1) / den;
                    if v != want || norm_of(key, i1).ok() != Some(want.clone()) || !v.is_positive() {
                        return Err(format!("{key}: R_{{m;{i1}{i1}}}(1) = {}", format_rat(&v)));
                    }
                    diag += 1;
                } else {
                    if !v.is_zero() {
                        return Err(format!("{key}: R_{{m;{i1}{i2}}}(1) = {}", format_rat(&v)));
                    }
                    off += 1;
                }
            }
        }
    }
    Ok(format!("{diag} norms, {off} vanishing overlaps, {skipped} inadmissible keys skipped"))
}

fn degrees(keys: &[FamilyKey]) -> Outcome {
    let mut n = 0;
    for key in keys {
        let fam = XFamily::new(key);
        let table = cli::degree_table(&fam, MAX_I);
        if !table.all_match() {
            return Err(format!("{key}: {table:?}"));
        }
        // the law itself, written out
        let codim: usize = 2 * key.m().iter().sum::<usize>() + key.len();
        if table.tau_degree != codim {
            return Err(format!("{key}: deg tau {} != {codim}", table.tau_degree));
        }
        for r in &table.rows {
            let want = if key.contains(r.i) { codim + r.i - (2 * r.i + 1) } else { codim + r.i };
            if r.actual != Some(want) {
                return Err(format!("{key}: deg P_{{m;{}}} = {:?}, want {want}", r.i, r.actual));
            }
            n += 1;
        }
    }
    Ok(format!("{n} degrees and {} codimension counts", keys.len()))
}

fn duplicate_collapse() -> Outcome {
    let bases: [&[usize]; 4] = [&[], &[1], &[0, 3], &[2, 4]];
    let pairs = [(rat(1, 2), rat(1, 2)), (rat(2, 1), rat(-3, 7)), (rat(1, 3), rat(-1, 3)), (rat(-1, 5), rat(5, 2))];
    let mut n = 0;
    for j in 0..=4usize {
        for base in bases {
            let base_t: Vec<Rat> = base.iter().map(|&b| rat(b as i64 + 1, 2)).collect();
            for (t, t2) in &pairs {
                let mut m = base.to_vec();
                m.extend([j, j]);
                let mut tt = base_t.clone();
                tt.extend([t.clone(), t2.clone()]);
                let raw = FamilyKey::new(m, tt).unwrap();
                let mut m = base.to_vec();
                m.push(j);
                let mut tt = base_t.clone();
                tt.push(t + t2);
                let merged = FamilyKey::new(m, tt).unwrap();
                if tau(&raw) != tau(&merged) {
                    return Err(format!("tau: {raw} vs {merged}"));
                }
                let mut chain = CdtChain::new(&raw);
                let depth = chain.depth();
                if chain.tau(depth).map_err(|e| e.to_string())? != tau(&merged) {
                    return Err(format!("recursive tau: {raw} vs {merged}"));
                }
                for i in 0..=8 {
                    let want = exceptional_poly(&merged, i);
                    if exceptional_poly(&raw, i) != want || chain.poly(depth, i).map_err(|e| e.to_string())? != want {
                        return Err(format!("P_{{m;{i}}}: {raw} vs {merged}"));
                    }
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} duplicated keys"))
}

fn factorization() -> Outcome {
    let ts = [rat(1, 1), rat(-1, 4), rat(7, 2)];
    let mut keys = Vec::new();
    for m in 0..=5usize {
        for t in &ts {
            keys.push((FamilyKey::new(vec![m], vec![t.clone()]).unwrap(), m));
        }
    }
    for m1 in 0..=5usize {
        for m2 in (0..=5usize).filter(|&x| x != m1) {
            keys.push((FamilyKey::new(vec![m1, m2], vec![rat(3, 2), rat(-1, 4)]).unwrap(), m2));
        }
    }
    let (mut fact, mut inter) = (0, 0);
    for (key, m) in &keys {
        let step = CdtStep::new(key, *m).map_err(|e| e.to_string())?;
        for r in factorization_reports(&step, step.default_probe_degree()) {
            if !r.pass {
                return Err(format!("{key}: {} fails on {:?}", r.identity, r.counterexample_probe));
            }
            fact += 1;
        }
        for i in (0..=8).filter(|i| i != m) {
            let ok = intertwining_holds(&step, i).map_err(|e| e.to_string())?
                && overlap_wronskian_holds(&step, i).map_err(|e| e.to_string())?;
            if !ok {
                return Err(format!("{key}: intertwining fails at i={i}"));
            }
            inter += 2;
        }
    }
    Ok(format!("{} steps, {fact} factorizations, {inter} intertwinings", keys.len()))
}

fn figures() -> Outcome {
    let k1 = FamilyKey::parse("4", "26/5").unwrap();
    let w1: Vec<Rat> = weight_samples(&k1, 1001).map_err(|e| e.to_string())?.into_iter().map(|s| s.1).collect();
    if !strictly_decreasing(&w1) {
        return Err("m=(4) weight is not strictly decreasing".into());
    }
    let t1 = tau(&k1);
    let p4 = legendre_poly(4);
    let d = t1.derivative();
    if d != (&*p4 * &*p4).scale(&rat(26, 5)) {
        return Err("tau_4' != t P_4^2".into());
    }
    let saddles = root_count(&d, &rat(-1, 1), &rat(1, 1)).map_err(|e| e.to_string())?;
    if saddles != 4 || d.gcd(&p4) != p4.monic() {
        return Err(format!("{saddles} zeros of tau_4' in [-1, 1]"));
    }
    let k2 = FamilyKey::parse("1,2", "2,-8/5").unwrap();
    let w2: Vec<Rat> = weight_samples(&k2, 1001).map_err(|e| e.to_string())?.into_iter().map(|s| s.1).collect();
    let ext = strict_local_extrema(&w2);
    if ext.len() < 2 {
        return Err(format!("m=(1,2) weight has only {} strict extrema", ext.len()));
    }
    Ok(format!("m=(4): decreasing, 4 saddle points; m=(1,2): strict extrema at samples {ext:?}"))
}

fn main() {
    let keys = lattice();
    let criteria: Vec<(&str, Duration, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("golden coefficients, one parameter", Duration::from_secs(1), Box::new(golden_one_parameter)),
        ("golden tau, two parameters", Duration::from_secs(1), Box::new(golden_two_parameters)),
        ("eigenvalue sweep", Duration::from_secs(60), Box::new(|| eigen_sweep(&keys))),
        ("determinant equals recursion", Duration::from_secs(60), Box::new(|| determinant_vs_recursion(&keys))),
        ("admissibility iff", Duration::from_secs(30), Box::new(admissibility_iff)),
        ("norms and orthogonality", Duration::from_secs(60), Box::new(|| norms(&keys))),
        ("degree law and codimension", Duration::from_secs(10), Box::new(|| degrees(&keys))),
        ("duplicate collapse", Duration::from_secs(10), Box::new(duplicate_collapse)),
        ("factorization and intertwining", Duration::from_secs(30), Box::new(factorization)),
        ("figure shapes", Duration::from_secs(5), Box::new(figures)),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let verdict = match outcome {
            Ok(detail) if took <= *limit => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("too slow: {detail}")),
            Err(e) => ("FAIL", e),
        };
        if verdict.0 == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<32} {} ({:.2}s / {}s) {}",
            k + 1,
            name,
            verdict.0,
            took.as_secs_f64(),
            limit.as_secs(),
            verdict.1
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
