use std::collections::BTreeMap;

use super::{null_homotopy_solve, Base, ChainMap, GradedComplex};
use crate::coeff::FieldElem;
use crate::error::{Error, Result};

/// A one-sided twisted complex ⊕ X_i with equivalences X_i ≃ Y_i.
///
/// `blocks[i]` lists the generators of `x` forming X_i. Components of the differential
/// between different blocks must go from a lower block index to a higher one.
/// The maps `f`, `g`, `h` are written in block-local indices, with [δ, h_i] = id − g_i f_i.
#[derive(Clone, Debug)]
pub struct TransferData<B: Base> {
    pub x: GradedComplex<B>,
    pub blocks: Vec<Vec<usize>>,
    pub y: Vec<GradedComplex<B>>,
    pub f: Vec<ChainMap<B>>,
    pub g: Vec<ChainMap<B>>,
    pub h: Vec<ChainMap<B>>,
}

/// Transfer the twist of X along the blockwise equivalences.
///
/// Returns tw_β(⊕ Y_i), with generators of Y_i appended block by block, and the equivalence F
/// from X to it. Ascending chains are finite here, so the series stop after one pass per block.
pub fn perturb_transfer<B: Base>(data: &TransferData<B>) -> Result<(GradedComplex<B>, ChainMap<B>)> {
    let x = &data.x;
    let nb = data.blocks.len();
    if data.y.len() != nb || data.f.len() != nb || data.g.len() != nb || data.h.len() != nb {
        return Err(Error::BaseMismatch("block data of unequal lengths".into()));
    }
    let mut block_of = vec![usize::MAX; x.len()];
    for (b, gens) in data.blocks.iter().enumerate() {
        for &i in gens {
            block_of[i] = b;

        }
    }
    if block_of.contains(&usize::MAX) {
        return Err(Error::BaseMismatch("every generator must lie in a block".into()));
    }
    let mut alpha: ChainMap<B> = ChainMap::zero(1, 0);
    for (&(a, b), m) in &x.d {
        match block_of[a].cmp(&block_of[b]) {
            std::cmp::Ordering::Less => {
                alpha.entries.insert((a, b), m.clone());
            }
            std::cmp::Ordering::Greater => return Err(Error::ChainConditionViolated),
            std::cmp::Ordering::Equal => {}
        }
    }

    let mut y = GradedComplex::new(x.boundary);
    let mut y_off = Vec::with_capacity(nb);
    for yb in &data.y {
        let off = y.len();
        y_off.push(off);
        y.gens.extend(yb.gens.iter().cloned());
        for (&(a, b), m) in &yb.d {
            y.d.insert((a + off, b + off), m.clone());
        }
    }
    let globalize = |maps: &[ChainMap<B>], src_global: &dyn Fn(usize, usize) -> usize, tgt_global: &dyn Fn(usize, usize) -> usize| {
        let mut out = ChainMap::zero(maps[0].tdeg, maps[0].qdeg);
        for (b, m) in maps.iter().enumerate() {
            for (&(s, t), e) in &m.entries {
                out.entries.insert((src_global(b, s), tgt_global(b, t)), e.clone());
            }
        }
        out
    };
    let xg = |b: usize, k: usize| data.blocks[b][k];
    let yg = |b: usize, k: usize| y_off[b] + k;
    let f = globalize(&data.f, &xg, &yg);
    let g = globalize(&data.g, &yg, &xg);
    let h = globalize(&data.h, &xg, &xg);

    let minus = FieldElem::from_int(-1);
    // β = Σ f α (−h α)^m g and F = Σ f (−α h)^m
    let neg_ha = h.compose(&alpha)?.scale(&minus);
    let neg_ah = alpha.compose(&h)?.scale(&minus);
    let mut beta = ChainMap::zero(1, 0);
    let mut term = f.compose(&alpha)?;
    let mut big_f = f.clone();
    let mut fterm = f.compose(&neg_ah)?;
    for _ in 0..=nb {
        if term.is_zero() && fterm.is_zero() {
            break;
        }
        beta = beta.add(&term.compose(&g)?)?;
        term = term.compose(&neg_ha)?;
        big_f = big_f.add(&fterm)?;
        fterm = fterm.compose(&neg_ah)?;
    }
    if !term.is_zero() || !fterm.is_zero() {
        return Err(Error::ChainConditionViolated);
    }
    for ((a, b), m) in beta.entries {
        let key = (a, b);
        match y.d.remove(&key) {
            Some(old) => {
                let s = B::add(&old, &m)?;
                if !B::is_zero(&s) {
                    y.d.insert(key, s);
                }
            }
            None => {
                if !B::is_zero(&m) {
                    y.d.insert(key, m);
                }
            }
        }
    }
    Ok((y, big_f))
}

/// One piece of a splice: a complex with an incoming interface (identified with the previous
/// part's outgoing interface, one homological degree lower) and an outgoing interface.
#[derive(Clone, Debug)]
pub struct SplicePart<B: Base> {
    pub complex: GradedComplex<B>,
    pub input: Vec<usize>,
    pub output: Vec<usize>,
}

/// Splice parts in order: each interface E (outgoing in one part, incoming as 𝕥^{-1}E in the
/// next) is removed, and d(x → y) = Σ_e d(e′ → y) ∘ d(x → e) is added.
pub fn splice<B: Base>(parts: &[SplicePart<B>]) -> Result<GradedComplex<B>> {
    let first = parts.first().ok_or_else(|| Error::InterfaceMismatch("no parts".into()))?;
    let mut acc = first.complex.clone();
    let mut acc_out: Vec<usize> = first.output.clone();
    for (pi, p) in parts.iter().enumerate().skip(1) {
        if p.input.len() != acc_out.len() {
            return Err(Error::InterfaceMismatch(format!(
                "part {pi}: interface of size {} against {}",
                p.input.len(),
                acc_out.len()
            )));
        }
        for (&e, &e2) in acc_out.iter().zip(&p.input) {
            let (a, b) = (&acc.gens[e], &p.complex.gens[e2]);
            if a.object != b.object || a.qshift != b.qshift || b.tdeg != a.tdeg - 1 {
                return Err(Error::InterfaceMismatch(format!(
                    "part {pi}: {} (t{} q{}) against {} (t{} q{})",
                    a.id, a.tdeg, a.qshift, b.id, b.tdeg, b.qshift
                )));
            }
        }
        let drop_a: std::collections::BTreeSet<usize> = acc_out.iter().copied().collect();
        let drop_b: std::collections::BTreeSet<usize> = p.input.iter().copied().collect();
        let keep_a: Vec<usize> = (0..acc.len()).filter(|i| !drop_a.contains(i)).collect();
        let keep_b: Vec<usize> = (0..p.complex.len()).filter(|i| !drop_b.contains(i)).collect();
        let mut pos_a = vec![usize::MAX; acc.len()];
        let mut pos_b = vec![usize::MAX; p.complex.len()];
        let mut z = GradedComplex::new(acc.boundary);
        z.floor = acc.floor;
        for &i in &keep_a {
            pos_a[i] = z.gens.len();
            z.gens.push(acc.gens[i].clone());
        }
        for &i in &keep_b {
            pos_b[i] = z.gens.len();
            z.gens.push(p.complex.gens[i].clone());
        }
        for (&(a, b), m) in &acc.d {
            if pos_a[a] != usize::MAX && pos_a[b] != usize::MAX {
                z.d.insert((pos_a[a], pos_a[b]), m.clone());
            }
        }
        for (&(a, b), m) in &p.complex.d {
            if pos_b[a] != usize::MAX && pos_b[b] != usize::MAX {
                z.d.insert((pos_b[a], pos_b[b]), m.clone());
            }
        }
        let mut partner = BTreeMap::new();
        for (&e, &e2) in acc_out.iter().zip(&p.input) {
            partner.insert(e, e2);
        }
        for (&(xg, e), d1) in &acc.d {
            let Some(&e2) = partner.get(&e) else { continue };
            if pos_a[xg] == usize::MAX {
                continue;
            }
            for (yg, d2) in p.complex.outgoing(e2) {
                if pos_b[yg] == usize::MAX {
                    continue;
                }
                z.add_d(pos_a[xg], pos_b[yg], B::compose(d2, d1)?)?;
            }
        }
        acc_out = p.output.iter().map(|&i| pos_b[i]).collect();
        if acc_out.contains(&usize::MAX) {
            return Err(Error::InterfaceMismatch(format!("part {pi}: output overlaps input")));
        }
        acc = z;
    }
    Ok(acc)
}

/// Comb a labeled complex so that differential components between blocks only increase
/// the label (ω, a) lexicographically.
///
/// `blocks[i]` lists generators of block i and `labels[i] = (ω, a)`. Backward components are
/// removed by conjugating with id + h where [δ, h] cancels them; if no such h exists the
/// Hom-vanishing hypothesis fails.
pub fn comb<B: Base>(c: &GradedComplex<B>, blocks: &[Vec<usize>], labels: &[(i64, i64)]) -> Result<GradedComplex<B>> {
    if blocks.len() != labels.len() {
        return Err(Error::BaseMismatch("one label per block".into()));
    }
    let mut block_of = vec![usize::MAX; c.len()];
    for (b, gens) in blocks.iter().enumerate() {
        for &i in gens {
            block_of[i] = b;
        }
    }
    let mut cur = c.clone();
    let limit = blocks.len() * blocks.len() + 1;
    for _ in 0..limit {
        // backward component with the highest source label first
        let bad = cur
            .d
            .keys()
            .filter(|(a, b)| {
                let (ba, bb) = (block_of[*a], block_of[*b]);
                ba != bb && labels[bb] < labels[ba]
            })
            .map(|&(a, b)| (block_of[a], block_of[b]))
            .max_by_key(|&(ba, bb)| (labels[ba], std::cmp::Reverse(labels[bb])));
        let Some((bi, bj)) = bad else { return Ok(cur) };
        let xi = cur.restrict(&blocks[bi]);
        let xj = cur.restrict(&blocks[bj]);
        let mut phi = ChainMap::zero(1, 0);
        for (li, &i) in blocks[bi].iter().enumerate() {
            for (lj, &j) in blocks[bj].iter().enumerate() {
                if let Some(m) = cur.d.get(&(i, j)) {
                    phi.entries.insert((li, lj), m.clone());
                }
            }
        }
        let (lo, hi) = xi.tdeg_range().unwrap_or((0, 0));
        let h = match null_homotopy_solve(&phi, &xi, &xj, (lo, hi)) {
            Ok(h) => h,
            Err(Error::NotNullHomotopic(w)) => {
                return Err(Error::HypothesisFailed(format!("backward component between blocks {bi} and {bj}: {w}")))
            }
            Err(e) => return Err(e),
        };
        // Φ = id + h, Φ^{-1} = id − h, d′ = Φ d Φ^{-1}
        let mut hg = ChainMap::zero(0, 0);
        for (&(li, lj), m) in &h.entries {
            hg.entries.insert((blocks[bi][li], blocks[bj][lj]), m.clone());
        }
        let id = cur.identity_map();
        let minus = FieldElem::from_int(-1);
        let phi_map = id.add(&hg)?;
        let phi_inv = id.add(&hg.scale(&minus))?;
        let d = ChainMap::differential(&cur);
        let nd = phi_map.compose(&d)?.compose(&phi_inv)?;
        cur.d = nd.entries;
    }
    Err(Error::HypothesisFailed("combing did not terminate".into()))
}
