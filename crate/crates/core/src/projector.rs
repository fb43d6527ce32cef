//! Truncated categorified projectors over BN(n, n): the explicit P₂, the four-term Q_n
//! built by solving for homotopies, periodic splicing, and turnback checks.

use serde::Serialize;

use crate::cob::{saddle, Cob, Comp};
use crate::coeff::FieldElem;
use crate::complex::{
    contractible_on_window, null_homotopy_solve, simplify_tracked, splice, Bn, ChainMap, ContractibilityVerdict,
    GradedComplex, SplicePart,
};
use crate::error::{Error, Result};
use crate::tangle::FlatTangle;

/// A projector complex kept down to homological degree −depth.
#[derive(Clone, Debug)]
pub struct TruncatedProjector {
    pub n: usize,
    /// `None` for a complex that is not truncated.
    pub depth: Option<usize>,
    pub complex: GradedComplex<Bn>,
    /// 1_n → P, the inclusion of the top term.
    pub eta: ChainMap<Bn>,
    pub safe_window: (i64, i64),
    /// The periodicity endomorphism of degree 𝕥^{2−2n}𝕢^{2n}, when known.
    pub periodic: Option<ChainMap<Bn>>,
}

impl TruncatedProjector {
    /// Index of the top generator 1_n.
    pub fn top(&self) -> usize {
        self.eta.entries.keys().next().map(|&(_, j)| j).expect("eta has one entry")
    }

    /// Generators other than the top whose object has through-degree n.
    pub fn wide_generators(&self) -> Vec<usize> {
        let top = self.top();
        (0..self.complex.len())
            .filter(|&i| i != top && self.complex.gens[i].object.through_degree() >= self.n)
            .collect()
    }
}

fn sign(k: i64) -> FieldElem {
    if k.rem_euclid(2) == 0 {
        FieldElem::one()
    } else {
        FieldElem::from_int(-1)
    }
}

fn eta_for(c: &GradedComplex<Bn>, n: usize) -> Result<ChainMap<Bn>> {
    let id = FlatTangle::identity(n);
    let tops: Vec<usize> = (0..c.len()).filter(|&i| c.gens[i].tdeg == 0).collect();
    match tops.as_slice() {
        [t] if c.gens[*t].object == id && c.gens[*t].qshift == 0 => {
            let mut eta = ChainMap::zero(0, 0);
            eta.add_entry(0, *t, Cob::identity(&id))?;
            Ok(eta)
        }
        _ => Err(Error::InterfaceMismatch(format!("top of the projector is not 1_{n}"))),
    }
}

/// The chain map 1_n → P including the top term.
pub fn eta_map(p: &TruncatedProjector) -> ChainMap<Bn> {
    p.eta.clone()
}

/// P₁ = 1₁ with the dot as its periodic endomorphism.
pub fn p1_complex() -> TruncatedProjector {
    let id = FlatTangle::identity(1);
    let complex = GradedComplex::one_term(id.clone(), 0, 0);
    let mut dot = ChainMap::zero(0, 2);
    dot.add_entry(0, 0, Cob::dot(&id, Comp::SrcArc(0)).expect("strand")).expect("entry");
    let eta = eta_for(&complex, 1).expect("one term");
    TruncatedProjector { n: 1, depth: None, complex, eta, safe_window: (i64::MIN, 0), periodic: Some(dot) }
}

/// ⋯ → q⁵B → q³B → qB → 1₂, kept down to degree −depth.
pub fn p2_complex(depth: usize) -> Result<TruncatedProjector> {
    if depth < 2 {
        return Err(Error::WindowTooSmall(format!("depth {depth} < 2")));
    }
    let id = FlatTangle::identity(2);
    let b = FlatTangle::turnback(2, 1)?;
    let mut c = GradedComplex::<Bn>::new((2, 2));
    c.push("P2.0", 0, 0, id.clone());
    for k in 1..=depth as i64 {
        c.push(format!("P2.{k}"), -k, 2 * k - 1, b.clone());
    }
    let merge = saddle(&b, Comp::SrcArc(0), Comp::SrcArc(2))?;
    let (xt, xb) = (Cob::dot(&b, Comp::SrcArc(2))?, Cob::dot(&b, Comp::SrcArc(0))?);
    let diff = xt.sub(&xb)?;
    let sum = xt.add(&xb)?;
    c.add_d(1, 0, merge)?;
    for k in 2..=depth {
        c.add_d(k, k - 1, if k % 2 == 0 { diff.clone() } else { sum.clone() })?;
    }
    c.floor = Some(-(depth as i64));
    let mut u = ChainMap::zero(-2, 4);
    u.add_entry(0, 2, saddle(&id, Comp::SrcArc(0), Comp::SrcArc(1))?)?;
    for k in 1..=depth.saturating_sub(2) {
        u.add_entry(k, k + 2, Cob::identity(&b))?;
    }
    let eta = eta_for(&c, 2)?;
    Ok(TruncatedProjector {
        n: 2,
        depth: Some(depth),
        complex: c,
        eta,
        safe_window: (-(depth as i64) + 2, 0),
        periodic: Some(u),
    })
}

/// The four-term complex Q_n with blocks 𝕒₃W → 𝕒₂X → 𝕒₁X → W.
#[derive(Clone, Debug)]
pub struct QnComplex {
    pub n: usize,
    /// Correct in homological degrees ≥ −depth.
    pub depth: usize,
    /// All blocks, untruncated; `floor` marks the valid range.
    pub full: GradedComplex<Bn>,
    /// Generator indices of the blocks, from the 𝕒₃ term down to the 0 term.
    pub blocks: [Vec<usize>; 4],
    /// Solved corrections in block-local indices.
    pub h: ChainMap<Bn>,
    pub k: ChainMap<Bn>,
    pub gamma: ChainMap<Bn>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QnSummary {
    pub n: usize,
    pub depth: usize,
    pub block_sizes: [usize; 4],
    pub h_entries: usize,
    pub k_entries: usize,
    pub gamma_entries: usize,
    pub d_squared_zero: bool,
}

impl QnComplex {
    /// Q_n kept down to degree −depth.
    pub fn complex(&self) -> GradedComplex<Bn> {
        self.full.truncate(-(self.depth as i64))
    }

    pub fn summary(&self) -> QnSummary {
        QnSummary {
            n: self.n,
            depth: self.depth,
            block_sizes: [0, 1, 2, 3].map(|i| self.blocks[i].len()),
            h_entries: self.h.entries.len(),
            k_entries: self.k.entries.len(),
            gamma_entries: self.gamma.entries.len(),
            d_squared_zero: self.complex().is_complex(),
        }
    }
}

/// (t, q) shifts of the four blocks, 𝕒₃ first.
pub fn qn_shifts(n: usize) -> [(i64, i64); 4] {
    let n = n as i64;
    [(1 - 2 * n, 2 * n), (2 - 2 * n, 2 * n - 1), (-1, 1), (0, 0)]
}

/// f ⋆ id_b for every generator of the bottom factor; index (i, j) ↦ i·|B| + j.
fn left_factor(f: &ChainMap<Bn>, bottom: &GradedComplex<Bn>) -> Result<ChainMap<Bn>> {
    let nb = bottom.len();
    let mut out = ChainMap::zero(f.tdeg, f.qdeg);
    for (&(a, a2), m) in &f.entries {
        for (j, g) in bottom.gens.iter().enumerate() {
            out.add_entry(a * nb + j, a2 * nb + j, m.star(&Cob::identity(&g.object))?)?;
        }
    }
    Ok(out)
}

/// id_a ⋆ g with the Koszul sign (−1)^{|g|·tdeg(a)}.
fn right_factor(top: &GradedComplex<Bn>, g: &ChainMap<Bn>, nb: usize) -> Result<ChainMap<Bn>> {
    let mut out = ChainMap::zero(g.tdeg, g.qdeg);
    for (i, a) in top.gens.iter().enumerate() {
        let s = sign(g.tdeg * a.tdeg);
        for (&(b, b2), m) in &g.entries {
            out.add_entry(i * nb + b, i * nb + b2, Cob::identity(&a.object).star(m)?.scale(&s))?;
        }
    }
    Ok(out)
}

fn one_term_map(src: &GradedComplex<Bn>, tgt: &GradedComplex<Bn>, f: Cob, qdeg: i64) -> Result<ChainMap<Bn>> {
    let mut m = ChainMap::zero(0, qdeg);
    if src.gens[0].object != *f.src() || tgt.gens[0].object != *f.tgt() {
        return Err(Error::BoundaryMismatch("saddle between the wrong objects".into()));
    }
    m.add_entry(0, 0, f)?;
    Ok(m)
}

fn block_map(m: &ChainMap<Bn>, from: &[usize], to: &[usize]) -> ChainMap<Bn> {
    let mut src = vec![usize::MAX; from.iter().max().map_or(0, |x| x + 1)];
    for (l, &g) in from.iter().enumerate() {
        src[g] = l;
    }
    let mut tgt = vec![usize::MAX; to.iter().max().map_or(0, |x| x + 1)];
    for (l, &g) in to.iter().enumerate() {
        tgt[g] = l;
    }
    let mut out = ChainMap::zero(m.tdeg, m.qdeg);
    for (&(a, b), f) in &m.entries {
        if src.get(a).is_some_and(|&x| x != usize::MAX) && tgt.get(b).is_some_and(|&y| y != usize::MAX) {
            out.entries.insert((src[a], tgt[b]), f.clone());
        }
    }
    out
}

/// Build Q_n from P_{n−1}, solving for h, k and γ on homological degrees [−depth, 0].
///
/// The blocks are simplified before the solve; the backbone maps are transported along the
/// simplifying equivalences.
pub fn build_qn(n: usize, prev: &TruncatedProjector, depth: usize) -> Result<QnComplex> {
    if n < 2 || prev.n + 1 != n {
        return Err(Error::BoundaryMismatch(format!("Q_{n} needs P_{}, got P_{}", n - 1, prev.n)));
    }
    if let Some(d) = prev.depth {
        if d < depth + 4 {
            return Err(Error::HomotopyNotFound(format!("P_{} of depth {d} is too shallow for depth {depth}", prev.n)));
        }
    }
    let u_prev = prev
        .periodic
        .as_ref()
        .ok_or_else(|| Error::HomotopyNotFound(format!("P_{} has no periodic map", prev.n)))?;
    let strand = GradedComplex::<Bn>::one_term(FlatTangle::identity(1), 0, 0);
    let y = prev.complex.tensor(&strand)?;
    let mut u_y = ChainMap::zero(u_prev.tdeg, u_prev.qdeg);
    for (&(a, b), m) in &u_prev.entries {
        u_y.add_entry(a, b, m.juxtapose(&Cob::identity(&FlatTangle::identity(1))))?;
    }
    let id_n = FlatTangle::identity(n);
    let bt = FlatTangle::turnback(n, n - 1)?;
    let one = GradedComplex::<Bn>::one_term(id_n.clone(), 0, 0);
    let bc = GradedComplex::<Bn>::one_term(bt.clone(), 0, 0);
    let w = y.star(&one)?.star(&y)?;
    let x = y.star(&bc)?.star(&y)?;
    let split = saddle(&id_n, Comp::SrcArc(n - 2), Comp::SrcArc(n - 1))?;
    let merge = saddle(&bt, Comp::SrcArc(n - 2), Comp::SrcArc(2 * n - 2))?;
    let sd = split.degree().unwrap_or(1);
    let md = merge.degree().unwrap_or(1);
    let ny = y.len();
    // id_Y ⋆ σ ⋆ id_Y, built as (id ⋆ σ) ⋆ id
    let s_star = left_factor(&right_factor(&y, &one_term_map(&one, &bc, split, sd)?, 1)?, &y)?;
    let s = left_factor(&right_factor(&y, &one_term_map(&bc, &one, merge, md)?, 1)?, &y)?;
    let u_top = left_factor(&left_factor(&u_y, &bc)?, &y)?;
    let yb = y.star(&bc)?;
    let u_bot = right_factor(&yb, &u_y, ny)?;
    let u = u_top.sub(&u_bot)?;

    let tw = simplify_tracked(&w)?;
    let tx = simplify_tracked(&x)?;
    let s_star = tx.to.compose(&s_star)?.compose(&tw.from)?;
    let u = tx.to.compose(&u)?.compose(&tx.from)?;
    let s = tw.to.compose(&s)?.compose(&tx.from)?;

    let shifts = qn_shifts(n);
    let pieces = [&tw.complex, &tx.complex, &tx.complex, &tw.complex];
    let mut total = GradedComplex::<Bn>::new((n, n));
    let mut blocks: [Vec<usize>; 4] = Default::default();
    for (b, (piece, (t, q))) in pieces.iter().zip(shifts).enumerate() {
        let mut p = piece.shift(t, q);
        p.floor = None;
        p.relabel(&format!("Q{n}.{b}."));
        let off = total.len();
        blocks[b] = (off..off + p.len()).collect();
        total = total.direct_sum(&p)?;
    }
    let mut backbone = ChainMap::<Bn>::zero(1, 0);
    for (bi, m) in [(0, &s_star), (1, &u), (2, &s)] {
        for (&(a, c), f) in &m.entries {
            backbone.add_entry(blocks[bi][a], blocks[bi + 1][c], f.clone())?;
        }
    }
    for (&(a, c), f) in &backbone.entries {
        total.add_d(a, c, f.clone())?;
    }
    let window = (-(depth as i64), 0);
    let minus = FieldElem::from_int(-1);
    let solve = |from: usize, to: usize, rhs: &ChainMap<Bn>, total: &GradedComplex<Bn>| -> Result<ChainMap<Bn>> {
        let f = block_map(rhs, &blocks[from], &blocks[to]).scale(&minus);
        let xs = total.restrict(&blocks[from]);
        let ys = total.restrict(&blocks[to]);
        null_homotopy_solve(&f, &xs, &ys, window)
    };
    let sq = ChainMap::differential(&total).compose(&ChainMap::differential(&total))?;
    let k = solve(0, 2, &sq, &total)
        .map_err(|e| Error::HomotopyNotFound(format!("k on Q_{n} at depth {depth}: {e}")))?;
    let h = solve(1, 3, &sq, &total)
        .map_err(|e| Error::HomotopyNotFound(format!("h on Q_{n} at depth {depth}: {e}")))?;
    for (bi, bj, m) in [(0, 2, &k), (1, 3, &h)] {
        for (&(a, c), f) in &m.entries {
            total.add_d(blocks[bi][a], blocks[bj][c], f.clone())?;
        }
    }
    let sq = ChainMap::differential(&total).compose(&ChainMap::differential(&total))?;
    let gamma = solve(0, 3, &sq, &total)
        .map_err(|e| Error::ObstructionNonzero(format!("γ on Q_{n} at depth {depth}: {e}")))?;
    for (&(a, c), f) in &gamma.entries {
        total.add_d(blocks[0][a], blocks[3][c], f.clone())?;
    }
    total.floor = Some(-(depth as i64));
    let q = QnComplex { n, depth, full: total, blocks, h, k, gamma };
    if let Err(wit) = q.complex().d_squared_check()? {
        return Err(Error::ObstructionNonzero(format!(
            "d² ≠ 0 on Q_{n} from {} to {}",
            q.full.gens[wit.from].id, q.full.gens[wit.to].id
        )));
    }
    Ok(q)
}

/// Splice copies of Q_n shifted by 𝕥^{2−2n}𝕢^{2n}; the 0 term of each copy is identified with
/// the 𝕒₃ term of the copy above it.
pub fn splice_pn(n: usize, qn: &QnComplex, copies: usize, depth: usize) -> Result<TruncatedProjector> {
    if copies * (2 * n - 2) < depth {
        return Err(Error::WindowTooSmall(format!("{copies} copies do not reach depth {depth}")));
    }
    if qn.depth < depth {
        return Err(Error::WindowTooSmall(format!("Q_{n} is valid to depth {}, asked for {depth}", qn.depth)));
    }
    let (ct, cq) = (2 - 2 * n as i64, 2 * n as i64);
    let top = qn.full.restrict(&qn.blocks[0]);
    let bottom = qn.full.restrict(&qn.blocks[3]);
    let negated: std::collections::BTreeMap<_, _> = bottom.d.iter().map(|(k, f)| (*k, f.neg())).collect();
    if top.d != negated {
        return Err(Error::InterfaceMismatch("interface blocks have different differentials".into()));
    }
    let mut full = qn.full.clone();
    full.floor = None;
    let parts: Vec<SplicePart<Bn>> = (0..copies)
        .rev()
        .map(|j| {
            let mut c = full.shift(ct * j as i64, cq * j as i64);
            c.relabel(&format!("c{j}."));
            SplicePart { complex: c, input: qn.blocks[0].clone(), output: qn.blocks[3].clone() }
        })
        .collect();
    let spliced = splice(&parts)?;
    let complex = spliced.truncate(-(depth as i64));
    let eta = eta_for(&complex, n)?;
    let d = depth as i64;
    Ok(TruncatedProjector {
        n,
        depth: Some(depth),
        complex,
        eta,
        safe_window: (-d + 2 * (2 * n as i64 - 2) * 2, 0),
        periodic: None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TurnbackReport {
    pub i: usize,
    /// B_i ⋆ P
    pub turnback: ContractibilityVerdict,
    /// P ⋆ ∪_i
    pub cup: ContractibilityVerdict,
}

impl TurnbackReport {
    pub fn killed(&self) -> bool {
        self.turnback.contractible && self.cup.contractible
    }
}

/// For 1 ≤ i < n, decide contractibility of B_i ⋆ P and P ⋆ ∪_i on `window`.
pub fn kills_turnbacks(p: &TruncatedProjector, window: (i64, i64)) -> Result<Vec<TurnbackReport>> {
    let n = p.n;
    (1..n)
        .map(|i| {
            let b = GradedComplex::<Bn>::one_term(FlatTangle::turnback(n, i)?, 0, 0);
            let cup = GradedComplex::<Bn>::one_term(FlatTangle::cup(n, i)?, 0, 0);
            let tb = contractible_on_window(&b.star(&p.complex)?, window)?;
            let cu = contractible_on_window(&p.complex.star(&cup)?, window)?;
            Ok(TurnbackReport { i, turnback: tb, cup: cu })
        })
        .collect()
}

/// P_n for n ≤ 3 at the given depth: P₂ explicitly, P₃ by splicing Q₃.
pub fn projector(n: usize, depth: usize) -> Result<TruncatedProjector> {
    match n {
        1 => Ok(p1_complex()),
        2 => p2_complex(depth),
        3 => {
            let p2 = p2_complex(depth + 4)?;
            let q3 = build_qn(3, &p2, depth)?;
            splice_pn(3, &q3, depth.div_ceil(4), depth)
        }
        _ => Err(Error::NoSuchBlock(format!("projector for n = {n}"))),
    }
}
