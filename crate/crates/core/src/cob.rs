//! Bar-Natan dotted cobordisms modulo sphere, neck-cutting and two-dot relations.
//!
//! Every morphism T → T' is stored fully neck-cut: a linear combination of
//! configurations with one disk per boundary curve of the closed diagram
//! reflect(T')∘T, each disk carrying at most one dot. A configuration is a
//! bitmask of dotted curves. Curves are ordered: arc curves by smallest
//! boundary label, then circles of the source, then circles of the target.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coeff::FieldElem;
use crate::error::{Error, Result};
use crate::tangle::FlatTangle;

/// A component of source ⊔ target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Comp {
    /// Source arc, named by its smaller endpoint label.
    SrcArc(usize),
    TgtArc(usize),
    SrcCircle(usize),
    TgtCircle(usize),
}

impl fmt::Display for Comp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Comp::SrcArc(l) => write!(f, "sA{l}"),
            Comp::TgtArc(l) => write!(f, "tA{l}"),
            Comp::SrcCircle(i) => write!(f, "sC{i}"),
            Comp::TgtCircle(i) => write!(f, "tC{i}"),
        }
    }
}

/// Boundary curves of reflect(tgt)∘src.
#[derive(Clone, Debug)]
pub struct CurveInfo {
    pub ncurves: usize,
    pub label_curve: Vec<usize>,
    pub src_circle: Vec<usize>,
    pub tgt_circle: Vec<usize>,
    pub arc_curves: usize,
}

impl CurveInfo {
    pub fn new(src: &FlatTangle, tgt: &FlatTangle) -> CurveInfo {
        let total = src.points();
        let mut label_curve = vec![usize::MAX; total];
        let mut c = 0;
        for s in 0..total {
            if label_curve[s] != usize::MAX {
                continue;
            }
            let mut cur = s;
            loop {
                label_curve[cur] = c;
                let a = src.partner(cur);
                label_curve[a] = c;
                let b = tgt.partner(a);
                if b == s {
                    break;
                }
                cur = b;
            }
            c += 1;
        }
        let arc_curves = c;
        let src_circle: Vec<usize> = (0..src.circles() as usize).map(|i| arc_curves + i).collect();
        let base = arc_curves + src_circle.len();
        let tgt_circle: Vec<usize> = (0..tgt.circles() as usize).map(|i| base + i).collect();
        CurveInfo { ncurves: base + tgt_circle.len(), label_curve, src_circle, tgt_circle, arc_curves }
    }

    pub fn curve_of(&self, c: Comp) -> Option<usize> {
        match c {
            Comp::SrcArc(l) | Comp::TgtArc(l) => self.label_curve.get(l).copied(),
            Comp::SrcCircle(i) => self.src_circle.get(i).copied(),
            Comp::TgtCircle(i) => self.tgt_circle.get(i).copied(),
        }
    }

    /// Components on each curve.
    pub fn components(&self, src: &FlatTangle, tgt: &FlatTangle) -> Vec<Vec<Comp>> {
        let mut out = vec![Vec::new(); self.ncurves];
        for (a, _) in src.pairs() {
            out[self.label_curve[a]].push(Comp::SrcArc(a));
        }
        for (a, _) in tgt.pairs() {
            out[self.label_curve[a]].push(Comp::TgtArc(a));
        }
        for (i, &c) in self.src_circle.iter().enumerate() {
            out[c].push(Comp::SrcCircle(i));
        }
        for (i, &c) in self.tgt_circle.iter().enumerate() {
            out[c].push(Comp::TgtCircle(i));
        }
        out
    }
}

/// Linear combination of dotted disk configurations between two flat tangles.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cob {
    src: FlatTangle,
    tgt: FlatTangle,
    terms: BTreeMap<u64, FieldElem>,
}

fn same_boundary(a: &FlatTangle, b: &FlatTangle) -> Result<()> {
    if a.n() != b.n() || a.m() != b.m() {
        return Err(Error::BoundaryMismatch(format!("{a} vs {b}")));
    }
    Ok(())
}

/// Degree of a configuration with `curves` disks and `dots` dots on an (n, m) boundary.
pub fn config_degree(curves: usize, dots: u32, n: usize, m: usize) -> i64 {
    -(curves as i64) + ((n + m) / 2) as i64 + 2 * dots as i64
}

/// Disk expansion of a connected surface with genus g, d dots and boundary curves `curves`.
/// Returns (mask of dotted curves, integer multiplier) pairs.
pub fn normalize_component(g: i64, d: u32, curves: &[usize]) -> Vec<(u64, i64)> {
    if g < 0 {
        panic!("negative genus");
    }
    let eff = d as i64 + g;
    if eff >= 2 {
        return Vec::new();
    }
    let mult = 1i64 << g;
    let all: u64 = curves.iter().fold(0, |acc, &c| acc | (1u64 << c));
    if curves.is_empty() {
        return if eff == 1 { vec![(0, mult)] } else { Vec::new() };
    }
    if eff == 1 {
        return vec![(all, mult)];
    }
    curves.iter().map(|&c| (all & !(1u64 << c), mult)).collect()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Glue two disk-normal cobordisms. Curves of `a` are global ids 0..na, of `b` na..na+nb.
/// `seams` are pairs of glued curves with the Euler characteristic of the glued piece.
/// `result_rep[r]` is a global curve containing a piece of result curve r.
fn glue(
    a: &Cob,
    na: usize,
    b: &Cob,
    nb: usize,
    seams: &[(usize, usize, i64)],
    src: FlatTangle,
    tgt: FlatTangle,
    result_rep: &[usize],
) -> Cob {
    let total = na + nb;
    let mut uf = UnionFind::new(total);
    for &(x, y, _) in seams {
        uf.union(x, y);
    }
    let mut roots: Vec<usize> = (0..total).map(|x| uf.find(x)).collect();
    roots.dedup();
    let mut comp_index = vec![usize::MAX; total];
    let mut comps: Vec<usize> = Vec::new();
    for x in 0..total {
        let r = uf.find(x);
        if comp_index[r] == usize::MAX {
            comp_index[r] = comps.len();
            comps.push(r);
        }
        comp_index[x] = comp_index[r];
    }
    let k = comps.len();
    let mut chi = vec![0i64; k];
    let mut mask_a = vec![0u64; k];
    let mut mask_b = vec![0u64; k];
    for x in 0..na {
        chi[comp_index[x]] += 1;
        mask_a[comp_index[x]] |= 1u64 << x;
    }
    for y in 0..nb {
        chi[comp_index[na + y]] += 1;
        mask_b[comp_index[na + y]] |= 1u64 << y;
    }
    for &(x, _, cost) in seams {
        chi[comp_index[x]] -= cost;
    }
    let mut res_curves: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (r, &g) in result_rep.iter().enumerate() {
        res_curves[comp_index[g]].push(r);
    }
    let genus: Vec<i64> = (0..k)
        .map(|c| {
            let b = res_curves[c].len() as i64;
            let twice = 2 - b - chi[c];
            debug_assert!(twice >= 0 && twice % 2 == 0, "bad surface: chi {} b {}", chi[c], b);
            twice / 2
        })
        .collect();
    let mut out: BTreeMap<u64, FieldElem> = BTreeMap::new();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            let mut partial: Vec<(u64, i64)> = vec![(0, 1)];
            for c in 0..k {
                let d = (ma & mask_a[c]).count_ones() + (mb & mask_b[c]).count_ones();
                let opts = normalize_component(genus[c], d, &res_curves[c]);
                if opts.is_empty() {
                    partial.clear();
                    break;
                }
                if opts.len() == 1 {
                    for p in partial.iter_mut() {
                        p.0 |= opts[0].0;
                        p.1 *= opts[0].1;
                    }
                } else {
                    let mut next = Vec::with_capacity(partial.len() * opts.len());
                    for p in &partial {
                        for o in &opts {
                            next.push((p.0 | o.0, p.1 * o.1));
                        }
                    }
                    partial = next;
                }
            }
            if partial.is_empty() {
                continue;
            }
            let c = ca * cb;
            for (mask, mult) in partial {
                let add = if mult == 1 { c.clone() } else { c.scale_int(&mult.into()) };
                let e = out.entry(mask).or_insert_with(FieldElem::zero);
                *e += &add;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Cob { src, tgt, terms: out }
}

/// For `top ∘ bottom`, the smallest middle point of each newly closed loop, in circle order.
fn new_loop_reps(top: &FlatTangle, bottom: &FlatTangle) -> Vec<usize> {
    let n = bottom.n();
    let k = bottom.m();
    let mut seen = vec![false; k];
    for b in 0..n {
        mark_path(top, bottom, true, b, &mut seen);
    }
    for t in 0..top.m() {
        mark_path(top, bottom, false, k + t, &mut seen);
    }
    let mut reps = Vec::new();
    for j in 0..k {
        if seen[j] {
            continue;
        }
        reps.push(j);
        let mut cur = j;
        loop {
            seen[cur] = true;
            let up = top.partner(cur);
            seen[up] = true;
            let down = bottom.partner(n + up) - n;
            if down == j {
                break;
            }
            cur = down;
        }
    }
    reps
}

fn mark_path(top: &FlatTangle, bottom: &FlatTangle, in_bottom: bool, start: usize, seen: &mut [bool]) {
    let n = bottom.n();
    let k = bottom.m();
    let mut in_bottom = in_bottom;
    let mut label = start;
    loop {
        if in_bottom {
            let p = bottom.partner(label);
            if p < n {
                return;
            }
            seen[p - n] = true;
            in_bottom = false;
            label = p - n;
        } else {
            let p = top.partner(label);
            if p >= k {
                return;
            }
            seen[p] = true;
            in_bottom = true;
            label = n + p;
        }
    }
}

impl Cob {
    pub fn zero(src: &FlatTangle, tgt: &FlatTangle) -> Result<Cob> {
        same_boundary(src, tgt)?;
        Ok(Cob { src: src.clone(), tgt: tgt.clone(), terms: BTreeMap::new() })
    }

    /// A single configuration.
    pub fn config(src: &FlatTangle, tgt: &FlatTangle, mask: u64, c: FieldElem) -> Result<Cob> {
        let mut x = Cob::zero(src, tgt)?;
        let info = x.info();
        if info.ncurves < 64 && mask >> info.ncurves != 0 {
            return Err(Error::NoSuchBlock(format!("mask {mask:b} exceeds {} curves", info.ncurves)));
        }
        if !c.is_zero() {
            x.terms.insert(mask, c);
        }
        Ok(x)
    }

    pub fn from_terms(src: &FlatTangle, tgt: &FlatTangle, terms: BTreeMap<u64, FieldElem>) -> Result<Cob> {
        let mut x = Cob::zero(src, tgt)?;
        x.terms = terms.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(x)
    }

    /// Build from a partition of components into connected genus-0 blocks with dot counts.
    pub fn from_genus0_blocks(src: &FlatTangle, tgt: &FlatTangle, blocks: &[(Vec<Comp>, u32)]) -> Result<Cob> {
        same_boundary(src, tgt)?;
        let info = CurveInfo::new(src, tgt);
        let mut owner = vec![usize::MAX; info.ncurves];
        let mut block_curves: Vec<Vec<usize>> = vec![Vec::new(); blocks.len()];
        for (bi, (comps, _)) in blocks.iter().enumerate() {
            for &c in comps {
                let cv = info.curve_of(c).ok_or_else(|| Error::NoSuchBlock(format!("{c}")))?;
                if owner[cv] == usize::MAX {
                    owner[cv] = bi;
                    block_curves[bi].push(cv);
                } else if owner[cv] != bi {
                    return Err(Error::GluingMismatch(format!("curve {cv} lies in two blocks")));
                }
            }
        }
        if owner.contains(&usize::MAX) {
            return Err(Error::GluingMismatch("blocks do not cover every boundary curve".into()));
        }
        let mut partial: Vec<(u64, i64)> = vec![(0, 1)];
        for (bi, (_, dots)) in blocks.iter().enumerate() {
            let opts = normalize_component(0, *dots, &block_curves[bi]);
            let mut next = Vec::new();
            for p in &partial {
                for o in &opts {
                    next.push((p.0 | o.0, p.1 * o.1));
                }
            }
            partial = next;
        }
        let mut terms: BTreeMap<u64, FieldElem> = BTreeMap::new();
        for (mask, mult) in partial {
            *terms.entry(mask).or_insert_with(FieldElem::zero) += &FieldElem::from_int(mult);
        }
        Cob::from_terms(src, tgt, terms)
    }

    /// Blocks pairing each component of T with its copy.
    fn identity_blocks(t: &FlatTangle) -> Vec<(Vec<Comp>, u32)> {
        let mut blocks: Vec<(Vec<Comp>, u32)> =
            t.pairs().into_iter().map(|(a, _)| (vec![Comp::SrcArc(a), Comp::TgtArc(a)], 0)).collect();
        for i in 0..t.circles() as usize {
            blocks.push((vec![Comp::SrcCircle(i), Comp::TgtCircle(i)], 0));
        }
        blocks
    }

    pub fn identity(t: &FlatTangle) -> Cob {
        Cob::from_genus0_blocks(t, t, &Self::identity_blocks(t)).expect("identity blocks cover")
    }

    pub fn src(&self) -> &FlatTangle {
        &self.src
    }

    pub fn tgt(&self) -> &FlatTangle {
        &self.tgt
    }

    pub fn terms(&self) -> &BTreeMap<u64, FieldElem> {
        &self.terms
    }

    pub fn info(&self) -> CurveInfo {
        CurveInfo::new(&self.src, &self.tgt)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degrees(&self) -> Vec<i64> {
        let info = self.info();
        let mut d: Vec<i64> = self
            .terms
            .keys()
            .map(|m| config_degree(info.ncurves, m.count_ones(), self.src.n(), self.src.m()))
            .collect();
        d.sort();
        d.dedup();
        d
    }

    /// The degree if homogeneous (None for zero or mixed).
    pub fn degree(&self) -> Option<i64> {
        let d = self.degrees();
        (d.len() == 1).then(|| d[0])
    }

    fn check_parallel(&self, other: &Cob) -> Result<()> {
        if self.src != other.src || self.tgt != other.tgt {
            return Err(Error::GluingMismatch(format!(
                "{} -> {} vs {} -> {}",
                self.src, self.tgt, other.src, other.tgt
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cob) -> Result<Cob> {
        self.check_parallel(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let e = out.terms.entry(*m).or_insert_with(FieldElem::zero);
            *e += c;
            if e.is_zero() {
                out.terms.remove(m);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Cob) -> Result<Cob> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cob {
        self.scale(&FieldElem::from_int(-1))
    }

    pub fn scale(&self, c: &FieldElem) -> Cob {
        if c.is_zero() {
            return Cob { src: self.src.clone(), tgt: self.tgt.clone(), terms: BTreeMap::new() };
        }
        Cob {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    /// Vertical composition: `self` after `bottom` (bottom: S → T, self: T → U).
    pub fn compose(&self, bottom: &Cob) -> Result<Cob> {
        if bottom.tgt != self.src {
            return Err(Error::GluingMismatch(format!("{} is not {}", bottom.tgt, self.src)));
        }
        if self.is_zero() || bottom.is_zero() {
            return Cob::zero(&bottom.src, &self.tgt);
        }
        let ia = bottom.info();
        let ib = self.info();
        let na = ia.ncurves;
        let t = &self.src;
        let mut seams = Vec::new();
        for (l, _) in t.pairs() {
            seams.push((ia.label_curve[l], na + ib.label_curve[l], 1));
        }
        for i in 0..t.circles() as usize {
            seams.push((ia.tgt_circle[i], na + ib.src_circle[i], 0));
        }
        let ir = CurveInfo::new(&bottom.src, &self.tgt);
        let mut rep = vec![usize::MAX; ir.ncurves];
        for l in 0..bottom.src.points() {
            rep[ir.label_curve[l]] = ia.label_curve[l];
        }
        for (i, &c) in ir.src_circle.iter().enumerate() {
            rep[c] = ia.src_circle[i];
        }
        for (i, &c) in ir.tgt_circle.iter().enumerate() {
            rep[c] = na + ib.tgt_circle[i];
        }
        Ok(glue(bottom, na, self, ib.ncurves, &seams, bottom.src.clone(), self.tgt.clone(), &rep))
    }

    /// Horizontal composition: `self` (over (k, m)) placed on top of `bottom` (over (n, k)).
    pub fn star(&self, bottom: &Cob) -> Result<Cob> {
        let k = self.src.n();
        if bottom.src.m() != k {
            return Err(Error::BoundaryMismatch(format!("{} on top of {}", self.src, bottom.src)));
        }
        let rs = self.src.compose(&bottom.src)?;
        let rt = self.tgt.compose(&bottom.tgt)?;
        if self.is_zero() || bottom.is_zero() {
            return Cob::zero(&rs, &rt);
        }
        let ia = self.info();
        let ib = bottom.info();
        let na = ia.ncurves;
        let n = bottom.src.n();
        let seams: Vec<(usize, usize, i64)> =
            (0..k).map(|j| (ia.label_curve[j], na + ib.label_curve[n + j], 1)).collect();
        let ir = CurveInfo::new(&rs, &rt);
        let mut rep = vec![usize::MAX; ir.ncurves];
        for l in 0..rs.points() {
            rep[ir.label_curve[l]] = if l < n { na + ib.label_curve[l] } else { ia.label_curve[k + (l - n)] };
        }
        let circle_reps = |top_src: bool| -> Vec<usize> {
            let (ta, tb, ca, cb) = if top_src {
                (&self.src, &bottom.src, &ia.src_circle, &ib.src_circle)
            } else {
                (&self.tgt, &bottom.tgt, &ia.tgt_circle, &ib.tgt_circle)
            };
            let mut v: Vec<usize> = ca.clone();
            v.extend(cb.iter().map(|c| na + c));
            v.extend(new_loop_reps(ta, tb).into_iter().map(|j| ia.label_curve[j]));
            v
        };
        for (i, g) in circle_reps(true).into_iter().enumerate() {
            rep[ir.src_circle[i]] = g;
        }
        for (i, g) in circle_reps(false).into_iter().enumerate() {
            rep[ir.tgt_circle[i]] = g;
        }
        Ok(glue(self, na, bottom, ib.ncurves, &seams, rs, rt, &rep))
    }

    /// id_X ⋆ self
    pub fn whisker_top(&self, x: &FlatTangle) -> Result<Cob> {
        Cob::identity(x).star(self)
    }

    /// self ⋆ id_X
    pub fn whisker_bottom(&self, x: &FlatTangle) -> Result<Cob> {
        self.star(&Cob::identity(x))
    }

    /// Side-by-side placement, `other` to the right.
    pub fn juxtapose(&self, other: &Cob) -> Cob {
        let src = self.src.juxtapose(&other.src);
        let tgt = self.tgt.juxtapose(&other.tgt);
        let ia = self.info();
        let ib = other.info();
        let ir = CurveInfo::new(&src, &tgt);
        let (an, am, bn) = (self.src.n(), self.src.m(), other.src.n());
        let nn = an + bn;
        // map each result curve to the curve of a or b it came from
        let mut from = vec![(false, 0usize); ir.ncurves];
        for l in 0..src.points() {
            let (is_b, lab) = if l < an {
                (false, l)
            } else if l < nn {
                (true, l - an)
            } else if l < nn + am {
                (false, an + (l - nn))
            } else {
                (true, bn + (l - nn - am))
            };
            let c = if is_b { ib.label_curve[lab] } else { ia.label_curve[lab] };
            from[ir.label_curve[l]] = (is_b, c);
        }
        let (sa, sb) = (self.src.circles() as usize, other.src.circles() as usize);
        for i in 0..sa {
            from[ir.src_circle[i]] = (false, ia.src_circle[i]);
        }
        for i in 0..sb {
            from[ir.src_circle[sa + i]] = (true, ib.src_circle[i]);
        }
        let ta = self.tgt.circles() as usize;
        for i in 0..ta {
            from[ir.tgt_circle[i]] = (false, ia.tgt_circle[i]);
        }
        for i in 0..other.tgt.circles() as usize {
            from[ir.tgt_circle[ta + i]] = (true, ib.tgt_circle[i]);
        }
        let remap = |mask: u64, is_b: bool| -> u64 {
            let mut out = 0u64;
            for (r, &(b, c)) in from.iter().enumerate() {
                if b == is_b && mask >> c & 1 == 1 {
                    out |= 1 << r;
                }
            }
            out
        };
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.insert(remap(*ma, false) | remap(*mb, true), ca * cb);
            }
        }
        Cob { src, tgt, terms }
    }

    /// Put a dot on the block containing component `c` in every term.
    pub fn add_dot(&self, c: Comp) -> Result<Cob> {
        let info = self.info();
        let cv = info.curve_of(c).ok_or_else(|| Error::NoSuchBlock(format!("{c}")))?;
        let bit = 1u64 << cv;
        let terms = self.terms.iter().filter(|(m, _)| *m & bit == 0).map(|(m, v)| (m | bit, v.clone())).collect();
        Ok(Cob { src: self.src.clone(), tgt: self.tgt.clone(), terms })
    }

    /// Identity with a dot on the component `c` of the source.
    pub fn dot(t: &FlatTangle, c: Comp) -> Result<Cob> {
        Cob::identity(t).add_dot(c)
    }

    /// c·id on a circle-free source equal to target; returns c.
    pub fn as_identity_multiple(&self) -> Option<FieldElem> {
        if self.src != self.tgt {
            return None;
        }
        if self.src.circles() == 0 {
            if self.terms.len() == 1 {
                if let Some(c) = self.terms.get(&0) {
                    return Some(c.clone());
                }
            }
            return None;
        }
        let id = Cob::identity(&self.src);
        let (m0, c0) = id.terms.iter().next()?;
        let c = self.terms.get(m0)?.checked_div(c0).ok()?;
        (id.scale(&c) == *self).then_some(c)
    }

    /// Reflect top-to-bottom: a cobordism T → T' becomes reflect(T) → reflect(T').
    pub fn reflect_tangles(&self) -> Cob {
        let src = self.src.reflect();
        let tgt = self.tgt.reflect();
        let ia = self.info();
        let ir = CurveInfo::new(&src, &tgt);
        let (n, m) = (self.src.n(), self.src.m());
        let map_label = |l: usize| if l < n { m + l } else { l - n };
        let mut perm = vec![0usize; ia.ncurves];
        for l in 0..self.src.points() {
            perm[ia.label_curve[l]] = ir.label_curve[map_label(l)];
        }
        for (i, &c) in ia.src_circle.iter().enumerate() {
            perm[c] = ir.src_circle[i];
        }
        for (i, &c) in ia.tgt_circle.iter().enumerate() {
            perm[c] = ir.tgt_circle[i];
        }
        let terms = self
            .terms
            .iter()
            .map(|(mask, v)| {
                let mut out = 0u64;
                for (c, &p) in perm.iter().enumerate() {
                    if mask >> c & 1 == 1 {
                        out |= 1 << p;
                    }
                }
                (out, v.clone())
            })
            .collect();
        Cob { src, tgt, terms }
    }

    /// Serializable block form.
    pub fn to_json(&self) -> CobJson {
        let info = self.info();
        let comps = info.components(&self.src, &self.tgt);
        let blocks: Vec<Vec<String>> = comps.iter().map(|v| v.iter().map(|c| c.to_string()).collect()).collect();
        CobJson {
            source: self.src.clone(),
            target: self.tgt.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| CobTermJson {
                    blocks: blocks.clone(),
                    dots: (0..info.ncurves).map(|i| (m >> i & 1) as u8).collect(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: CobJson) -> Result<Cob> {
        let mut terms = BTreeMap::new();
        let info = CurveInfo::new(&j.source, &j.target);
        for t in j.terms {
            if t.dots.len() != info.ncurves {
                return Err(Error::Json("dot vector length".into()));
            }
            let mut mask = 0u64;
            for (i, &d) in t.dots.iter().enumerate() {
                if d > 1 {
                    return Err(Error::Json("dot flag above 1".into()));
                }
                mask |= (d as u64) << i;
            }
            *terms.entry(mask).or_insert_with(FieldElem::zero) += &t.coeff;
        }
        Cob::from_terms(&j.source, &j.target, terms)
    }
}

#[derive(Serialize, Deserialize, Clone)]
pub struct CobTermJson {
    pub blocks: Vec<Vec<String>>,
    pub dots: Vec<u8>,
    pub coeff: FieldElem,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct CobJson {
    pub source: FlatTangle,
    pub target: FlatTangle,
    pub terms: Vec<CobTermJson>,
}

impl Serialize for Cob {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cob {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Cob::from_json(CobJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Cob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: ", self.src, self.tgt)?;
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})<{m:b}>")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Components of a tangle, as source components.
pub fn components(t: &FlatTangle) -> Vec<Comp> {
    let mut v: Vec<Comp> = t.pairs().into_iter().map(|(a, _)| Comp::SrcArc(a)).collect();
    v.extend((0..t.circles() as usize).map(Comp::SrcCircle));
    v
}

fn as_target(c: Comp) -> Comp {
    match c {
        Comp::SrcArc(l) => Comp::TgtArc(l),
        Comp::SrcCircle(i) => Comp::TgtCircle(i),
        other => other,
    }
}

/// The elementary saddle on T joining components a1 and a2 (merge), or splitting a1 when a1 = a2.
pub fn saddle(t: &FlatTangle, a1: Comp, a2: Comp) -> Result<Cob> {
    let pairs = t.pairs();
    let arc_of = |c: Comp| -> Result<(usize, usize)> {
        match c {
            Comp::SrcArc(l) => pairs
                .iter()
                .copied()
                .find(|p| p.0 == l)
                .ok_or_else(|| Error::NoSuchBlock(format!("{c}"))),
            _ => Err(Error::NoSuchBlock(format!("{c}"))),
        }
    };
    let circles = t.circles() as usize;
    let check_circle = |i: usize| -> Result<()> {
        if i < circles {
            Ok(())
        } else {
            Err(Error::NoSuchBlock(format!("circle {i}")))
        }
    };
    let mut new_pairs: Vec<(usize, usize)> = pairs.clone();
    let kept_circles: Vec<usize>;
    let tgt_circle_count: usize;
    // target components that belong to the saddle block
    let mut saddle_tgt: Vec<Comp> = Vec::new();
    let saddle_src: Vec<Comp> = if a1 == a2 { vec![a1] } else { vec![a1, a2] };
    match (a1, a2) {
        (Comp::SrcArc(_), Comp::SrcArc(_)) if a1 != a2 => {
            let (p, q) = arc_of(a1)?;
            let (r, s) = arc_of(a2)?;
            new_pairs.retain(|x| *x != (p, q) && *x != (r, s));
            let mut found = None;
            for cand in [[(p, r), (q, s)], [(p, s), (q, r)]] {
                let mut trial = new_pairs.clone();
                trial.extend(cand.iter().map(|&(x, y)| (x.min(y), x.max(y))));
                if let Ok(u) = FlatTangle::from_pairs(t.n(), t.m(), &trial, 0) {
                    found = Some((trial, u, cand));
                    break;
                }
            }
            let (trial, _, cand) = found.ok_or_else(|| Error::NotPlanar("no planar rematching".into()))?;
            new_pairs = trial;
            saddle_tgt.extend(cand.iter().map(|&(x, y)| Comp::TgtArc(x.min(y))));
            kept_circles = (0..circles).collect();
            tgt_circle_count = circles;
        }
        (Comp::SrcArc(_), Comp::SrcCircle(i)) | (Comp::SrcCircle(i), Comp::SrcArc(_)) => {
            check_circle(i)?;
            let arc = if let Comp::SrcArc(_) = a1 { a1 } else { a2 };
            arc_of(arc)?;
            saddle_tgt.push(as_target(arc));
            kept_circles = (0..circles).filter(|&j| j != i).collect();
            tgt_circle_count = circles - 1;
        }
        (Comp::SrcCircle(i), Comp::SrcCircle(j)) if i != j => {
            check_circle(i)?;
            check_circle(j)?;
            kept_circles = (0..circles).filter(|&x| x != i && x != j).collect();
            tgt_circle_count = circles - 1;
            saddle_tgt.push(Comp::TgtCircle(tgt_circle_count - 1));
        }
        (Comp::SrcArc(_), Comp::SrcArc(_)) => {
            arc_of(a1)?;
            saddle_tgt.push(as_target(a1));
            kept_circles = (0..circles).collect();
            tgt_circle_count = circles + 1;
            saddle_tgt.push(Comp::TgtCircle(circles));
        }
        (Comp::SrcCircle(i), Comp::SrcCircle(_)) => {
            check_circle(i)?;
            kept_circles = (0..circles).filter(|&x| x != i).collect();
            tgt_circle_count = circles + 1;
            saddle_tgt.push(Comp::TgtCircle(circles - 1));
            saddle_tgt.push(Comp::TgtCircle(circles));
        }
        _ => return Err(Error::NoSuchBlock("saddles act on source components".into())),
    }
    let target = FlatTangle::from_pairs(t.n(), t.m(), &new_pairs, tgt_circle_count as u32)
        .map_err(|e| Error::NotPlanar(e.to_string()))?;
    let mut blocks: Vec<(Vec<Comp>, u32)> = Vec::new();
    let mut sblock: Vec<Comp> = saddle_src.clone();
    sblock.extend(saddle_tgt.iter().copied());
    blocks.push((sblock, 0));
    let touched: Vec<(usize, usize)> = saddle_src
        .iter()
        .filter_map(|c| if let Comp::SrcArc(l) = c { Some(*l) } else { None })
        .map(|l| pairs.iter().copied().find(|p| p.0 == l).unwrap())
        .collect();
    for &(a, b) in &pairs {
        if touched.contains(&(a, b)) {
            continue;
        }
        blocks.push((vec![Comp::SrcArc(a), Comp::TgtArc(a.min(b))], 0));
    }
    for (new_i, &old_i) in kept_circles.iter().enumerate() {
        blocks.push((vec![Comp::SrcCircle(old_i), Comp::TgtCircle(new_i)], 0));
    }
    Cob::from_genus0_blocks(t, &target, &blocks)
}

/// The result of delooping one circle.
#[derive(Clone, Debug)]
pub struct Deloop {
    /// Tangle with the circle removed.
    pub object: FlatTangle,
    /// (q-shift, forward T → object, backward object → T) for the two copies.
    pub parts: [(i64, Cob, Cob); 2],
}

/// Remove circle `i` of T: T ≅ q·T' ⊕ q^{-1}·T'.
pub fn deloop(t: &FlatTangle, i: usize) -> Result<Deloop> {
    if t.circles() == 0 {
        return Err(Error::NoCircle);
    }
    if i >= t.circles() as usize {
        return Err(Error::NoSuchBlock(format!("circle {i}")));
    }
    let c = t.circles() as usize;
    let object = t.with_circles(c as u32 - 1);
    let mut rest: Vec<(Vec<Comp>, u32)> =
        t.pairs().into_iter().map(|(a, _)| (vec![Comp::SrcArc(a), Comp::TgtArc(a)], 0)).collect();
    let kept: Vec<usize> = (0..c).filter(|&j| j != i).collect();
    for (new_j, &old_j) in kept.iter().enumerate() {
        rest.push((vec![Comp::SrcCircle(old_j), Comp::TgtCircle(new_j)], 0));
    }
    let cap = |dots: u32| -> Result<Cob> {
        let mut b = rest.clone();
        b.push((vec![Comp::SrcCircle(i)], dots));
        Cob::from_genus0_blocks(t, &object, &b)
    };
    let cup = |dots: u32| -> Result<Cob> {
        let mut b: Vec<(Vec<Comp>, u32)> =
            object.pairs().into_iter().map(|(a, _)| (vec![Comp::SrcArc(a), Comp::TgtArc(a)], 0)).collect();
        for (new_j, &old_j) in kept.iter().enumerate() {
            b.push((vec![Comp::SrcCircle(new_j), Comp::TgtCircle(old_j)], 0));
        }
        b.push((vec![Comp::TgtCircle(i)], dots));
        Cob::from_genus0_blocks(&object, t, &b)
    };
    Ok(Deloop { object: object.clone(), parts: [(1, cap(0)?, cup(1)?), (-1, cap(1)?, cup(0)?)] })
}

/// All configurations of the given degree in Hom(T, T').
pub fn hom_basis(t: &FlatTangle, t2: &FlatTangle, degree: i64) -> Result<Vec<Cob>> {
    same_boundary(t, t2)?;
    let info = CurveInfo::new(t, t2);
    let base = config_degree(info.ncurves, 0, t.n(), t.m());
    let diff = degree - base;
    if diff < 0 || diff % 2 != 0 {
        return Ok(Vec::new());
    }
    let dots = (diff / 2) as u32;
    if dots as usize > info.ncurves {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << info.ncurves) {
        if mask.count_ones() == dots {
            out.push(Cob::config(t, t2, mask, FieldElem::one())?);
        }
    }
    Ok(out)
}

/// The neck-cutting expansion of a tube: identity on a single circle.
pub fn neck_cut_expand(t: &FlatTangle, circle: usize) -> Result<Cob> {
    if circle >= t.circles() as usize {
        return Err(Error::NoCircle);
    }
    Cob::from_genus0_blocks(t, t, &Cob::identity_blocks(t))
}

/// Value of a closed cobordism (∅ → ∅).
pub fn closed_value(c: &Cob) -> Option<FieldElem> {
    if c.src.points() != 0 || c.src.circles() != 0 || c.tgt.circles() != 0 {
        return None;
    }
    Some(c.terms.get(&0).cloned().unwrap_or_default())
}

/// Frobenius algebra Q[x]/x² with Δ(1) = 1⊗x + x⊗1, Δ(x) = x⊗x, ε(x) = 1, ε(1) = 0.
/// Elements of A^{⊗b} are maps from dot masks to integer coefficients.
pub mod tqft {
    use std::collections::BTreeMap;

    pub type Tensor = BTreeMap<u64, i64>;

    fn add(t: &mut Tensor, k: u64, v: i64) {
        let e = t.entry(k).or_insert(0);
        *e += v;
        if *e == 0 {
            t.remove(&k);
        }
    }

    /// Value in A^{⊗b} of a connected surface with genus g, d dots and b boundary circles.
    pub fn connected_surface(g: u32, d: u32, b: usize) -> Tensor {
        // start with x^d in A
        let mut elem: [i64; 2] = match d {
            0 => [1, 0],
            1 => [0, 1],
            _ => [0, 0],
        };
        for _ in 0..g {
            // m∘Δ: 1 ↦ 2x, x ↦ 0
            elem = [0, 2 * elem[0]];
        }
        let mut t = Tensor::new();
        if b == 0 {
            // counit
            if elem[1] != 0 {
                t.insert(0, elem[1]);
            }
            return t;
        }
        if elem[0] != 0 {
            t.insert(0, elem[0]);
        }
        if elem[1] != 0 {
            t.insert(1, elem[1]);
        }
        for k in 1..b {
            // comultiply the last factor k-1 into factors k-1, k
            let mut next = Tensor::new();
            for (&mask, &v) in &t {
                let last = mask >> (k - 1) & 1;
                let rest = mask & !(1 << (k - 1));
                if last == 1 {
                    add(&mut next, rest | 1 << (k - 1) | 1 << k, v);
                } else {
                    add(&mut next, rest | 1 << k, v);
                    add(&mut next, rest | 1 << (k - 1), v);
                }
            }
            t = next;
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tb(n: usize, i: usize) -> FlatTangle {
        FlatTangle::turnback(n, i).unwrap()
    }

    fn circle() -> FlatTangle {
        FlatTangle::empty().with_circles(1)
    }

    #[test]
    fn identity_degree_zero() {
        let id2 = FlatTangle::identity(2);
        let c = Cob::identity(&id2);
        assert_eq!(c.degree(), Some(0));
        assert_eq!(c.terms().len(), 1);
        assert_eq!(c.compose(&c).unwrap(), c);
        assert_eq!(Cob::identity(&tb(2, 1)).degree(), Some(0));
    }

    #[test]
    fn saddles_have_degree_one() {
        let id2 = FlatTangle::identity(2);
        let s = saddle(&id2, Comp::SrcArc(0), Comp::SrcArc(1)).unwrap();
        assert_eq!(s.tgt(), &tb(2, 1));
        assert_eq!(s.degree(), Some(1));
        let b = tb(2, 1);
        let s2 = saddle(&b, Comp::SrcArc(0), Comp::SrcArc(2)).unwrap();
        assert_eq!(s2.tgt(), &id2);
        assert_eq!(s2.degree(), Some(1));
        let t = FlatTangle::identity(1).with_circles(1);
        let s3 = saddle(&t, Comp::SrcArc(0), Comp::SrcCircle(0)).unwrap();
        assert_eq!(s3.degree(), Some(1));
        assert_eq!(s3.tgt(), &FlatTangle::identity(1));
    }

    #[test]
    fn dots() {
        let id1 = FlatTangle::identity(1);
        let d = Cob::dot(&id1, Comp::SrcArc(0)).unwrap();
        assert_eq!(d.degree(), Some(2));
        assert!(d.add_dot(Comp::SrcArc(0)).unwrap().is_zero());
        assert!(d.compose(&d).unwrap().is_zero());
        let c = crate::coeff::qint(3);
        assert_eq!(d.scale(&c).add_dot(Comp::TgtArc(0)).unwrap(), d.add_dot(Comp::TgtArc(0)).unwrap().scale(&c));
    }

    #[test]
    fn sphere_relations() {
        let e = FlatTangle::empty();
        let o = circle();
        let cup = Cob::config(&e, &o, 0, FieldElem::one()).unwrap();
        let cap = Cob::config(&o, &e, 0, FieldElem::one()).unwrap();
        let dcap = Cob::config(&o, &e, 1, FieldElem::one()).unwrap();
        assert_eq!(closed_value(&cap.compose(&cup).unwrap()), Some(FieldElem::zero()));
        assert_eq!(closed_value(&dcap.compose(&cup).unwrap()), Some(FieldElem::one()));
        // torus: cup then saddle split then saddle merge then cap
        let two = FlatTangle::empty().with_circles(2);
        let split = saddle(&o, Comp::SrcCircle(0), Comp::SrcCircle(0)).unwrap();
        assert_eq!(split.tgt(), &two);
        let merge = saddle(&two, Comp::SrcCircle(0), Comp::SrcCircle(1)).unwrap();
        let torus = cap.compose(&merge).unwrap().compose(&split).unwrap().compose(&cup).unwrap();
        assert_eq!(closed_value(&torus), Some(FieldElem::from_int(2)));
    }

    #[test]
    fn delooping_round_trips() {
        let t = FlatTangle::identity(1).with_circles(1);
        let d = deloop(&t, 0).unwrap();
        let mut sum = Cob::zero(&t, &t).unwrap();
        for (_, f, g) in &d.parts {
            sum = sum.add(&g.compose(f).unwrap()).unwrap();
        }
        assert_eq!(sum, Cob::identity(&t));
        for (a, (_, fa, _)) in d.parts.iter().enumerate() {
            for (b, (_, _, gb)) in d.parts.iter().enumerate() {
                let x = fa.compose(gb).unwrap();
                if a == b {
                    assert_eq!(x, Cob::identity(&d.object));
                } else {
                    assert!(x.is_zero());
                }
            }
        }
        assert_eq!(deloop(&FlatTangle::identity(2), 0).unwrap_err(), Error::NoCircle);
    }

    #[test]
    fn hom_basis_examples() {
        let id1 = FlatTangle::identity(1);
        let b0 = hom_basis(&id1, &id1, 0).unwrap();
        assert_eq!(b0, vec![Cob::identity(&id1)]);
        let b2 = hom_basis(&id1, &id1, 2).unwrap();
        assert_eq!(b2, vec![Cob::dot(&id1, Comp::SrcArc(0)).unwrap()]);
        let id2 = FlatTangle::identity(2);
        let b1 = hom_basis(&id2, &tb(2, 1), 1).unwrap();
        assert_eq!(b1, vec![saddle(&id2, Comp::SrcArc(0), Comp::SrcArc(1)).unwrap()]);
    }

    #[test]
    fn neck_cut_tube() {
        let o = circle();
        let tube = neck_cut_expand(&o, 0).unwrap();
        assert_eq!(tube.terms().len(), 2);
        assert_eq!(tube.compose(&tube).unwrap(), tube);
        assert_eq!(tube, Cob::identity(&o));
    }

    #[test]
    fn tqft_surfaces() {
        assert_eq!(tqft::connected_surface(0, 1, 0), [(0u64, 1i64)].into_iter().collect());
        assert_eq!(tqft::connected_surface(1, 0, 0), [(0u64, 2i64)].into_iter().collect());
        assert!(tqft::connected_surface(2, 0, 0).is_empty());
        assert!(tqft::connected_surface(0, 0, 0).is_empty());
        let pants = tqft::connected_surface(0, 0, 3);
        assert_eq!(pants.len(), 3);
    }

    #[test]
    fn star_of_identities() {
        let a = Cob::identity(&FlatTangle::identity(2));
        let b = Cob::identity(&tb(2, 1));
        assert_eq!(a.star(&b).unwrap(), b);
        let c = Cob::identity(&FlatTangle::cap(2, 1).unwrap());
        let d = Cob::identity(&FlatTangle::cup(2, 1).unwrap());
        // cap ⋆ cup is a closed circle; identity on it has two terms
        let x = c.star(&d).unwrap();
        assert_eq!(x, Cob::identity(&circle()));
    }

    #[test]
    fn json_roundtrip() {
        let s = saddle(&FlatTangle::identity(2), Comp::SrcArc(0), Comp::SrcArc(1)).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        let back: Cob = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
