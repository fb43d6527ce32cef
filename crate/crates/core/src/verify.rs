//! Executable invariant checks, grouped into suites per module.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::annulus::{
    compare_with_chebyshev, essential_dot_vanishing, trace_euler, AnnularCobordism, AnnularComponent, AnnularSkeinElement,
};
use crate::arc::{arc_algebra, quantum_coinvariants_rank, quantum_hochschild_bar, Twist};
use crate::chebyshev::{
    build_theta, class_chebyshev, class_trace, euler_characteristic, jw_maps, jw_system, kh_cone_decomposition,
    khovanov_complex, khovanov_system, triangle_check,
};
use crate::cob::{closed_value, deloop, hom_basis, saddle, Cob, Comp};
use crate::coeff::{genericity_check, qint, quantum_integer, FieldElem};
use crate::complex::{ranks, simplify, Bn, GradedComplex};
use crate::error::{Error, Result};
use crate::projector::{build_qn, kills_turnbacks, p2_complex, projector};
use crate::tangle::FlatTangle;
use crate::tl::{
    admissible_count, admissible_sequences, annular_skein_closure, catalan_formula, central_idempotent, chebyshev_coefficients,
    jones_wenzl, markov_trace, primitive_idempotent, TLElement,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Coeff,
    Tl,
    Cob,
    Chebyshev,
    Projector,
    Annulus,
    Arc,
    All,
}

impl Suite {
    pub const MODULES: [Suite; 7] =
        [Suite::Coeff, Suite::Tl, Suite::Cob, Suite::Chebyshev, Suite::Projector, Suite::Annulus, Suite::Arc];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Coeff => "coeff",
            Suite::Tl => "tl",
            Suite::Cob => "cob",
            Suite::Chebyshev => "chebyshev",
            Suite::Projector => "projector",
            Suite::Annulus => "annulus",
            Suite::Arc => "arc",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::MODULES
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub n_max: usize,
    pub depth: usize,
    pub parallelism: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { n_max: 6, depth: 12, parallelism: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub witness: String,
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Drop wall times so that reports of repeated runs compare equal.
    pub fn without_timing(mut self) -> Self {
        for c in &mut self.checks {
            c.wall_ms = None;
        }
        self
    }
}

pub type CheckFn = fn(&SuiteConfig) -> Result<String>;

#[derive(Clone, Copy)]
pub struct Check {
    pub name: &'static str,
    pub run: CheckFn,
}

/// A failed check: `Err(Error::HypothesisFailed)` with the witness.
fn fail(msg: impl Into<String>) -> Error {
    Error::HypothesisFailed(msg.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(fail(msg()))
    }
}

pub fn run_check(c: &Check, cfg: &SuiteConfig) -> CheckRecord {
    let t = Instant::now();
    let r = (c.run)(cfg);
    let wall_ms = Some(t.elapsed().as_millis() as u64);
    match r {
        Ok(witness) => CheckRecord { name: c.name.into(), passed: true, witness, wall_ms },
        Err(e) => CheckRecord { name: c.name.into(), passed: false, witness: e.to_string(), wall_ms },
    }
}

/// Run checks on up to `parallelism` threads; records keep the order of `checks`.
pub fn run_checks(checks: &[Check], cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let workers = cfg.parallelism.clamp(1, checks.len().max(1));
    if workers == 1 {
        return checks.iter().map(|c| run_check(c, cfg)).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<CheckRecord>>> = Mutex::new(vec![None; checks.len()]);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(c) = checks.get(i) else { break };
                let r = run_check(c, cfg);
                slots.lock().expect("poisoned")[i] = Some(r);
            });
        }
    });
    slots.into_inner().expect("poisoned").into_iter().map(|r| r.expect("every check ran")).collect()
}

pub fn checks(suite: Suite) -> Vec<Check> {
    macro_rules! list {
        ($($f:ident),* $(,)?) => { vec![$(Check { name: stringify!($f), run: $f }),*] };
    }
    match suite {
        Suite::Coeff => list![genericity, quantum_integers, field_json],
        Suite::Tl => list![jw_projectors, central_idempotents, primitive_idempotents, catalan_counts],
        Suite::Cob => list![closed_surfaces, delooping, tqft_composites],
        Suite::Chebyshev => list![
            khovanov_model,
            khovanov_cone,
            jw_homotopy_identities,
            jw_triangles,
            khovanov_triangles,
            theta_equivalences
        ],
        Suite::Projector => list![p2_truncation, q3_homotopies, p3_splice, projector_traces],
        Suite::Annulus => list![identity_closure, trace_simplify, closure_of_models, vanishing],
        Suite::Arc => list![arc_structure, arc_coinvariants, arc_hochschild],
        Suite::All => Suite::MODULES.into_iter().flat_map(checks).collect(),
    }
}

pub fn verify_suite(suite: Suite, cfg: &SuiteConfig) -> SuiteReport {
    let report = |s: Suite| SuiteReport { suite: s.name().into(), checks: run_checks(&checks(s), cfg) };
    if suite != Suite::All {
        return report(suite);
    }
    let mut all = SuiteReport { suite: "all".into(), checks: Vec::new() };
    for s in Suite::MODULES {
        for mut c in report(s).checks {
            c.name = format!("{}/{}", s.name(), c.name);
            all.checks.push(c);
        }
    }
    all
}

// coeff

fn genericity(_: &SuiteConfig) -> Result<String> {
    let r = genericity_check(64);
    ensure(r.all_invertible, || "some 1 − q^d is not invertible".into())?;
    Ok(format!("1 − q^d invertible for d ≤ {}", r.d_max))
}

fn quantum_integers(_: &SuiteConfig) -> Result<String> {
    let two = qint(2);
    for k in 1..=24u32 {
        let lhs = &two * &qint(k);
        let rhs = &qint(k + 1) + &qint(k - 1);
        ensure(lhs == rhs, || format!("[2][{k}] ≠ [{}] + [{}]", k + 1, k - 1))?;
        ensure(quantum_integer(k).bar() == quantum_integer(k), || format!("[{k}] not bar-invariant"))?;
    }
    Ok("[2][k] = [k+1] + [k−1], k ≤ 24".into())
}

fn field_json(_: &SuiteConfig) -> Result<String> {
    let samples = [
        FieldElem::zero(),
        FieldElem::one(),
        -crate::coeff::qint_ratio(2, 3),
        FieldElem::from_int(i128::MAX - 12345),
        qint(7).inv()?.mul_q_pow(-5),
    ];
    for x in &samples {
        let s = serde_json::to_string(x).map_err(|e| Error::Json(e.to_string()))?;
        let y: FieldElem = serde_json::from_str(&s).map_err(|e| Error::Json(e.to_string()))?;
        ensure(&y == x, || format!("{s} does not round-trip"))?;
    }
    Ok(format!("{} samples round-trip", samples.len()))
}

// tl

fn jw_projectors(cfg: &SuiteConfig) -> Result<String> {
    for n in 1..=cfg.n_max {
        let p = jones_wenzl(n);
        ensure(p.compose(&p)? == p, || format!("p_{n}² ≠ p_{n}"))?;
        for i in 1..n {
            let e = TLElement::e(n, i)?;
            ensure(e.compose(&p)?.is_zero() && p.compose(&e)?.is_zero(), || format!("e_{i} p_{n} ≠ 0"))?;
        }
        ensure(markov_trace(&p)? == qint(n as u32 + 1), || format!("tr(p_{n}) ≠ [{}]", n + 1))?;
    }
    Ok(format!("n ≤ {}", cfg.n_max))
}

fn central_or_zero(n: usize, k: usize) -> Result<TLElement> {
    if k > n {
        Ok(TLElement::zero(n, n))
    } else {
        central_idempotent(n, k)
    }
}

fn central_idempotents(cfg: &SuiteConfig) -> Result<String> {
    for n in 1..=cfg.n_max {
        let ks: Vec<usize> = (n % 2..=n).step_by(2).collect();
        let ps: Vec<TLElement> = ks.iter().map(|&k| central_idempotent(n, k)).try_collect()?;
        let sum = ps.iter().try_fold(TLElement::zero(n, n), |acc, p| acc.add(p))?;
        ensure(sum == TLElement::identity(n), || format!("Σ_k p_{{{n},k}} ≠ id"))?;
        for ((i, a), (j, b)) in ps.iter().enumerate().cartesian_product(ps.iter().enumerate()) {
            let want = if i == j { a.clone() } else { TLElement::zero(n, n) };
            ensure(a.compose(b)? == want, || format!("p_{{{n},{}}} p_{{{n},{}}} wrong", ks[i], ks[j]))?;
        }
        ensure(ps.last() == Some(&jones_wenzl(n)), || format!("p_{{{n},{n}}} ≠ p_{n}"))?;
        for (&k, p) in ks.iter().zip(&ps) {
            for i in 1..n {
                let e = TLElement::e(n, i)?;
                ensure(p.compose(&e)? == e.compose(p)?, || format!("p_{{{n},{k}}} does not commute with e_{i}"))?;
                let cap = TLElement::cap(n, i)?;
                let below = central_or_zero(n - 2, k)?;
                ensure(cap.compose(p)? == below.compose(&cap)?, || format!("cap_{i} p_{{{n},{k}}} ≠ p_{{{},{k}}} cap_{i}", n - 2))?;
                let cup = TLElement::cup(n, i)?;
                ensure(p.compose(&cup)? == cup.compose(&below)?, || format!("p_{{{n},{k}}} cup_{i} ≠ cup_{i} p_{{{},{k}}}", n - 2))?;
            }
            // branching: (p_{n−1,l} ⊔ 1) p_{n,k} = 0 unless l = k ± 1
            if n >= 2 {
                for l in ((n - 1) % 2..=n - 1).step_by(2) {
                    let left = central_idempotent(n - 1, l)?.juxtapose(&TLElement::identity(1));
                    let prod = left.compose(p)?;
                    let allowed = l + 1 == k || k + 1 == l;
                    ensure(allowed || prod.is_zero(), || format!("(p_{{{},{l}}} ⊔ 1) p_{{{n},{k}}} ≠ 0", n - 1))?;
                }
            }
        }
    }
    Ok(format!("n ≤ {}", cfg.n_max))
}

fn primitive_idempotents(cfg: &SuiteConfig) -> Result<String> {
    let top = cfg.n_max.min(6);
    let mut count = 0;
    for n in 1..=top {
        let seqs = admissible_sequences(n);
        let ps: Vec<TLElement> = seqs.iter().map(primitive_idempotent).try_collect()?;
        let sum = ps.iter().try_fold(TLElement::zero(n, n), |acc, p| acc.add(p))?;
        ensure(sum == TLElement::identity(n), || format!("Σ_ε p_ε ≠ id_{n}"))?;
        for ((i, a), (j, b)) in ps.iter().enumerate().cartesian_product(ps.iter().enumerate()) {
            let want = if i == j { a.clone() } else { TLElement::zero(n, n) };
            ensure(a.compose(b)? == want, || format!("p_ε p_ν wrong for {:?}, {:?}", seqs[i], seqs[j]))?;
        }
        for (e, p) in seqs.iter().zip(&ps) {
            let c = chebyshev_coefficients(&annular_skein_closure(p)?);
            let w = e.weight();
            let ok = c.iter().enumerate().all(|(k, x)| if k == w { x.is_one() } else { x.is_zero() }) && c.len() > w;
            ensure(ok, || format!("closure of p_{:?} is not S_{w}", e.entries()))?;
            count += 1;
        }
    }
    Ok(format!("{count} idempotents, n ≤ {top}"))
}

fn catalan_counts(cfg: &SuiteConfig) -> Result<String> {
    for (n, k, want) in [(4, 0, 2), (4, 2, 3), (4, 4, 1)] {
        ensure(admissible_count(n, k)? == want, || format!("C_{{{n},{k}}} ≠ {want}"))?;
    }
    for n in 0..=cfg.n_max.min(6) {
        for k in (n % 2..=n).step_by(2) {
            let c = admissible_count(n, k)?;
            ensure(catalan_formula(n, k)? == c.into(), || format!("C_{{{n},{k}}} formula"))?;
        }
    }
    Ok("C_{n,k} = (k+1)/(m+1)·binom(n,m)".into())
}

// cob

fn closed_surfaces(_: &SuiteConfig) -> Result<String> {
    let e = FlatTangle::empty();
    let o = e.with_circles(1);
    let cup = Cob::config(&e, &o, 0, FieldElem::one())?;
    let cap = |dots| Cob::config(&o, &e, dots, FieldElem::one());
    let value = |c: &Cob| closed_value(c).ok_or_else(|| fail("not closed"));
    ensure(value(&cap(0)?.compose(&cup)?)?.is_zero(), || "sphere ≠ 0".into())?;
    ensure(value(&cap(1)?.compose(&cup)?)?.is_one(), || "dotted sphere ≠ 1".into())?;
    let split = saddle(&o, Comp::SrcCircle(0), Comp::SrcCircle(0))?;
    let merge = saddle(split.tgt(), Comp::SrcCircle(0), Comp::SrcCircle(1))?;
    let torus = cap(0)?.compose(&merge)?.compose(&split)?.compose(&cup)?;
    ensure(value(&torus)? == FieldElem::from_int(2), || "torus ≠ 2".into())?;
    let x = Cob::dot(&o, Comp::SrcCircle(0))?;
    ensure(x.compose(&x)?.is_zero(), || "dot² ≠ 0".into())?;
    Ok("sphere 0, dotted sphere 1, torus 2, dot² 0".into())
}

fn delooping(_: &SuiteConfig) -> Result<String> {
    let mut n = 0;
    for t in [
        FlatTangle::empty().with_circles(2),
        FlatTangle::identity(2).with_circles(1),
        FlatTangle::turnback(3, 1)?.with_circles(2),
    ] {
        for i in 0..t.circles() as usize {
            let d = deloop(&t, i)?;
            let mut sum = Cob::zero(&t, &t)?;
            for (_, fwd, back) in &d.parts {
                sum = sum.add(&back.compose(fwd)?)?;
            }
            ensure(sum == Cob::identity(&t), || format!("Σ back∘fwd ≠ id on {t:?}"))?;
            for (a, (_, fa, _)) in d.parts.iter().enumerate() {
                for (b, (_, _, bb)) in d.parts.iter().enumerate() {
                    let c = fa.compose(bb)?;
                    let ok = if a == b { c == Cob::identity(&d.object) } else { c.is_zero() };
                    ensure(ok, || format!("fwd_{a} ∘ back_{b} wrong on {t:?}"))?;
                }
            }
            n += 1;
        }
    }
    Ok(format!("{n} delooping isomorphisms"))
}

type Matrix = BTreeMap<(u64, u64), FieldElem>;

/// Linear map A^{⊗c1} → A^{⊗c2} of a cobordism between collections of circles.
fn closed_tqft(c: &Cob) -> Matrix {
    let c1 = c.src().circles() as usize;
    let mut out = Matrix::new();
    for (mask, coeff) in c.terms() {
        let src_dots = mask & ((1 << c1) - 1);
        let tgt = mask >> c1;
        for input in 0u64..(1 << c1) {
            if (0..c1).all(|i| ((src_dots >> i) & 1) + ((input >> i) & 1) == 1) {
                *out.entry((tgt, input)).or_default() += coeff;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::new();
    for ((i, k), x) in a {
        for ((k2, j), y) in b {
            if k == k2 {
                *out.entry((*i, *j)).or_default() += &(x * y);
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn cap_off(k: usize) -> Result<FlatTangle> {
    let pairs: Vec<(usize, usize)> = (0..k / 2).map(|i| (2 * i, 2 * i + 1)).collect();
    FlatTangle::from_pairs(k, 0, &pairs, 0)
}

fn close(c: &Cob) -> Result<Cob> {
    let (n, m) = (c.src().n(), c.src().m());
    let c = if n % 2 == 1 { c.juxtapose(&Cob::identity(&FlatTangle::identity(1))) } else { c.clone() };
    let (n, m) = (n + n % 2, m + m % 2);
    let top = Cob::identity(&cap_off(m)?);
    let bottom = Cob::identity(&cap_off(n)?.reflect());
    top.star(&c)?.star(&bottom)
}

/// Canonical forms of composites against the Frobenius algebra, all hom bases with n + m ≤ 4.
fn tqft_composites(_: &SuiteConfig) -> Result<String> {
    let mut ts = Vec::new();
    for n in 0..=4 {
        for m in (0..=4 - n).filter(|m| (n + m) % 2 == 0) {
            ts.extend(FlatTangle::all(n, m));
        }
    }
    let basis = |s: &FlatTangle, t: &FlatTangle| -> Result<Vec<Cob>> {
        Ok((-6..=6).map(|d| hom_basis(s, t, d)).collect::<Result<Vec<_>>>()?.concat())
    };
    let mut checked = 0;
    for s in &ts {
        let same: Vec<&FlatTangle> = ts.iter().filter(|t| t.n() == s.n() && t.m() == s.m()).collect();
        for (t, u) in same.iter().cartesian_product(same.iter()) {
            for a in basis(s, t)? {
                for b in basis(t, u)? {
                    let ba = b.compose(&a)?;
                    let lhs = closed_tqft(&close(&ba)?);
                    let rhs = matmul(&closed_tqft(&close(&b)?), &closed_tqft(&close(&a)?));
                    ensure(lhs == rhs, || format!("{a:?} then {b:?}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} composites"))
}

// chebyshev

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn is_indicator(c: &[FieldElem], n: usize) -> bool {
    c.len() > n && c.iter().enumerate().all(|(k, x)| if k == n { x.is_one() } else { x.is_zero() })
}

fn khovanov_model(cfg: &SuiteConfig) -> Result<String> {
    for n in 0..=cfg.n_max {
        let v = khovanov_complex(n);
        ensure(v.is_complex(), || format!("d² ≠ 0 on V_{n}"))?;
        let r = ranks(&v);
        for k in 0..=n / 2 {
            ensure(r.get(&-(k as i64)) == Some(&binom(n - k, k)), || format!("rank of V_{n} in degree −{k}"))?;
        }
        let class = euler_characteristic(&v)?;
        let mut want: BTreeMap<usize, TLElement> = BTreeMap::new();
        for k in 0..=n / 2 {
            let c = binom(n - k, k) as i64 * if k % 2 == 0 { 1 } else { -1 };
            want.insert(n - 2 * k, TLElement::identity(n - 2 * k).scale(&FieldElem::from_int(c)));
        }
        ensure(class == want, || format!("[V_{n}] ≠ Σ (−1)^k binom(n−k,k) [V_1^(n−2k)]"))?;
        ensure(is_indicator(&class_chebyshev(&class)?, n), || format!("closure of [V_{n}] ≠ S_{n}"))?;
        ensure(class_trace(&class)? == qint(n as u32 + 1), || format!("trace of [V_{n}]"))?;
    }
    Ok(format!("n ≤ {}", cfg.n_max))
}

fn khovanov_cone(cfg: &SuiteConfig) -> Result<String> {
    let top = cfg.n_max.min(6);
    for n in 2..=top {
        let d = kh_cone_decomposition(n)?;
        ensure(d.matches && d.map_is_iota, || format!("V_{n} is not Cone(ι)"))?;
    }
    Ok(format!("2 ≤ n ≤ {top}"))
}

fn jw_homotopy_identities(cfg: &SuiteConfig) -> Result<String> {
    let top = cfg.n_max.min(6);
    for n in 2..=top {
        let m = jw_maps(n)?;
        let id_line = jones_wenzl(n - 1).juxtapose(&TLElement::identity(1));
        let dh = m.iota.compose(&m.kappa)?;
        ensure(dh == id_line.sub(&m.rho.compose(&m.pi)?)?, || format!("dh ≠ id − ρπ at n = {n}"))?;
        let hd = m.kappa.compose(&m.iota)?;
        ensure(hd == jones_wenzl(n - 2), || format!("hd ≠ id at n = {n}"))?;
    }
    Ok(format!("2 ≤ n ≤ {top}"))
}

fn triangles(sys: &crate::chebyshev::ChebyshevSystem, top: usize) -> Result<String> {
    for n in 2..=top {
        let w = triangle_check(sys, n)?;
        ensure(w.phi.is_closed(&sys.v[n], &w.cone)?, || format!("φ not closed at n = {n}"))?;
    }
    Ok(format!("{}: 2 ≤ n ≤ {top}", sys.name))
}

fn jw_triangles(cfg: &SuiteConfig) -> Result<String> {
    let top = cfg.n_max.min(6);
    triangles(&jw_system(top)?, top)
}

fn khovanov_triangles(cfg: &SuiteConfig) -> Result<String> {
    let top = cfg.n_max.min(6);
    triangles(&khovanov_system(top)?, top)
}

fn theta_equivalences(cfg: &SuiteConfig) -> Result<String> {
    let top = cfg.n_max.min(4);
    let kh = khovanov_system(top)?;
    let jw = jw_system(top)?;
    let theta = build_theta(&kh, &jw, top)?;
    for (n, t) in theta.iter().enumerate() {
        ensure(t.is_closed(&kh.v[n], &jw.v[n])?, || format!("θ_{n} not closed"))?;
    }
    Ok(format!("θ_n: V_n ≃ im p_n, n ≤ {top}"))
}

// projector

fn p2_truncation(cfg: &SuiteConfig) -> Result<String> {
    let depth = cfg.depth.max(4);
    let p = p2_complex(depth)?;
    ensure(p.complex.is_complex(), || "d² ≠ 0 on P₂".into())?;
    let window = (2 - depth as i64, 0);
    for r in kills_turnbacks(&p, window)? {
        ensure(r.killed(), || format!("B_{}⋆P₂ survives on {window:?}", r.i))?;
    }
    Ok(format!("depth {depth}, window {window:?}"))
}

fn q3_homotopies(_: &SuiteConfig) -> Result<String> {
    let q3 = build_qn(3, &p2_complex(12)?, 8)?;
    let s = q3.summary();
    ensure(s.d_squared_zero, || "d² ≠ 0 on Q₃".into())?;
    Ok(format!("blocks {:?}, |k| = {}, |h| = {}, |γ| = {}", s.block_sizes, s.k_entries, s.h_entries, s.gamma_entries))
}

fn p3_splice(_: &SuiteConfig) -> Result<String> {
    let p = projector(3, 20)?;
    ensure(p.complex.is_complex(), || "d² ≠ 0 on P₃".into())?;
    ensure(p.wide_generators().is_empty(), || "P₃ has a wide generator below the top".into())?;
    for r in kills_turnbacks(&p, p.safe_window)? {
        ensure(r.killed(), || format!("B_{}⋆P₃ survives", r.i))?;
    }
    Ok(format!("{} generators, safe window {:?}", p.complex.len(), p.safe_window))
}

fn projector_traces(cfg: &SuiteConfig) -> Result<String> {
    let mut out = Vec::new();
    for (n, p, period) in [(2, p2_complex(cfg.depth.max(4))?, 2), (3, projector(3, 20)?, 4)] {
        let t = trace_euler(&p.complex, period)?;
        let m = compare_with_chebyshev(&t, n);
        ensure(m.matches(), || format!("P_{n} closure differs from S_{n} at {:?}", m.mismatches))?;
        out.push(format!("P_{n} ≡ S_{n} below q^{}", t.valid_below.unwrap_or(i64::MAX)));
    }
    Ok(out.join(", "))
}

// annulus

fn identity_closure(_: &SuiteConfig) -> Result<String> {
    for n in 0..5 {
        let t = trace_euler(&GradedComplex::<Bn>::one_term(FlatTangle::identity(n), 0, 0), 0)?;
        ensure(t.value == AnnularSkeinElement::z_pow(n), || format!("closure of 1_{n} ≠ z^{n}"))?;
    }
    Ok("closure(1_n) = z^n".into())
}

fn trace_simplify(cfg: &SuiteConfig) -> Result<String> {
    let p = p2_complex(cfg.depth.clamp(4, 8))?;
    let mut a = p.complex.star(&p.complex)?;
    a.floor = None;
    let b = simplify(&a)?;
    ensure(trace_euler(&a, 0)?.value == trace_euler(&b, 0)?.value, || "simplify changed the trace".into())?;
    Ok(format!("{} → {} generators", a.len(), b.len()))
}

fn closure_of_models(cfg: &SuiteConfig) -> Result<String> {
    for n in 1..=cfg.n_max.min(6) {
        let class = euler_characteristic(&khovanov_complex(n))?;
        let z = AnnularSkeinElement::from_zpoly(&crate::chebyshev::class_closure(&class)?);
        ensure(z.chebyshev() == BTreeMap::from([(n, FieldElem::one())]), || format!("closure of V_{n}"))?;
    }
    Ok("closure(V_n) = S_n".into())
}

fn vanishing(_: &SuiteConfig) -> Result<String> {
    let one = |c| AnnularCobordism { components: vec![c], degree: 0 };
    let v = |s: &AnnularCobordism| essential_dot_vanishing(s);
    ensure(v(&one(AnnularComponent::Essential { dots: 1 }))?.vanishes, || "dotted essential annulus survives".into())?;
    ensure(!v(&one(AnnularComponent::Essential { dots: 0 }))?.vanishes, || "plain essential annulus vanishes".into())?;
    let shifted = AnnularCobordism { components: vec![AnnularComponent::Essential { dots: 0 }], degree: 2 };
    ensure(v(&shifted)?.vanishes, || "degree 2 endomorphism survives".into())?;
    ensure(v(&one(AnnularComponent::Closed { genus: 1, dots: 0 }))?.scalar == Some(FieldElem::from_int(2)), || "torus".into())?;
    Ok("essential dots and nonzero degrees vanish".into())
}

// arc

fn arc_structure(cfg: &SuiteConfig) -> Result<String> {
    let top = cfg.n_max.min(3);
    for n in 1..=top {
        let alg = arc_algebra(n)?;
        ensure(alg.regular.graded_dimension() == alg.predicted_graded_dimension(), || format!("dim_q H^{n}"))?;
        let d = alg.dim();
        let single = |i: usize| BTreeMap::from([(i, 1i64)]);
        for ((i, j), k) in (0..d).cartesian_product(0..d).cartesian_product(0..d) {
            let l = alg.mul_vec(&alg.mul_vec(&single(i), &single(j)), &single(k));
            let r = alg.mul_vec(&single(i), &alg.mul_vec(&single(j), &single(k)));
            ensure(l == r, || format!("H^{n} not associative at ({i}, {j}, {k})"))?;
        }
        let unit: BTreeMap<usize, i64> = alg.idempotents().into_iter().map(|e| (e, 1)).collect();
        for i in 0..d {
            ensure(alg.mul_vec(&unit, &single(i)) == single(i), || format!("unit fails on {i}"))?;
        }
    }
    Ok(format!("associative and unital, n ≤ {top}"))
}

fn arc_coinvariants(cfg: &SuiteConfig) -> Result<String> {
    let top = cfg.n_max.min(3);
    let mut ranks = Vec::new();
    for n in 1..=top {
        let r = quantum_coinvariants_rank(n)?;
        ensure(r.rank == r.admissible, || format!("coInv_q(H^{n}) has rank {} ≠ {}", r.rank, r.admissible))?;
        ensure(r.spanned_by_idempotents && r.idempotents_independent, || format!("idempotents do not form a basis, n = {n}"))?;
        ranks.push(r.rank);
    }
    Ok(format!("ranks {ranks:?}"))
}

fn arc_hochschild(_: &SuiteConfig) -> Result<String> {
    let q = quantum_hochschild_bar(1, 2, Twist::Quantum)?;
    let ranks: Vec<usize> = q.iter().map(|g| g.rank).collect();
    ensure(ranks == [1, 0, 0], || format!("HH^q(H^1) ranks {ranks:?}"))?;
    let c = quantum_hochschild_bar(1, 1, Twist::Classical)?;
    ensure(c[1].rank > 0, || "classical HH_1 vanishes".into())?;
    Ok(format!("HH^q ranks {ranks:?}, classical HH_1 rank {}", c[1].rank))
}
