//! Bounded-above chain complexes over an additive base category.
//!
//! Differentials raise the homological degree `tdeg` by one. A component from a
//! generator with q-shift a to one with q-shift b, belonging to a map of q-degree r,
//! has intrinsic degree a − b + r. Shifting by 𝕥^k multiplies the differential by (−1)^k.

mod base;
mod homotopy;
mod simplify;
mod twist;

use std::collections::{BTreeMap, BTreeSet};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub use base::{sub, Base, Bn, Tl};
pub use homotopy::{contractible_on_window, contraction, is_homotopy_equivalence, null_homotopy_solve, ContractibilityVerdict};
pub use simplify::{deloop_pass, gaussian_eliminate, simplify, simplify_tracked, Tracked};
pub use twist::{comb, perturb_transfer, splice, SplicePart, TransferData};

use crate::coeff::FieldElem;
use crate::error::{Error, Result};
use crate::tangle::FlatTangle;
use crate::tl::{KaroubiObject, TLElement};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator<O> {
    pub id: String,
    pub tdeg: i64,
    pub qshift: i64,
    pub object: O,
}

/// Generators plus a sparse differential keyed by (source, target).
#[derive(Clone, Debug)]
pub struct GradedComplex<B: Base> {
    pub boundary: (usize, usize),
    pub gens: Vec<Generator<B::Obj>>,
    pub d: BTreeMap<(usize, usize), B::Mor>,
    /// Generators below this degree were discarded by truncation.
    pub floor: Option<i64>,
}

/// A map between two complexes, of bidegree (tdeg, qdeg); entries keyed by (source gen, target gen).
#[derive(Clone, Debug)]
pub struct ChainMap<B: Base> {
    pub tdeg: i64,
    pub qdeg: i64,
    pub entries: BTreeMap<(usize, usize), B::Mor>,
}

/// The first nonzero entry of δ∘δ.
#[derive(Clone, Debug)]
pub struct DSquaredWitness<M> {
    pub from: usize,
    pub to: usize,
    pub composite: M,
}

fn sign(k: i64) -> FieldElem {
    FieldElem::from_int(if k.rem_euclid(2) == 0 { 1 } else { -1 })
}

fn add_entry<B: Base>(map: &mut BTreeMap<(usize, usize), B::Mor>, key: (usize, usize), f: B::Mor) -> Result<()> {
    if B::is_zero(&f) {
        return Ok(());
    }
    match map.remove(&key) {
        Some(old) => {
            let s = B::add(&old, &f)?;
            if !B::is_zero(&s) {
                map.insert(key, s);
            }
        }
        None => {
            map.insert(key, f);
        }
    }
    Ok(())
}

impl<B: Base> GradedComplex<B> {
    pub fn new(boundary: (usize, usize)) -> Self {
        GradedComplex { boundary, gens: Vec::new(), d: BTreeMap::new(), floor: None }
    }

    /// A single generator in degree (tdeg, qshift).
    pub fn one_term(object: B::Obj, tdeg: i64, qshift: i64) -> Self {
        let mut c = Self::new(B::boundary(&object));
        c.push("g0", tdeg, qshift, object);
        c
    }

    pub fn push(&mut self, id: impl Into<String>, tdeg: i64, qshift: i64, object: B::Obj) -> usize {
        self.gens.push(Generator { id: id.into(), tdeg, qshift, object });
        self.gens.len() - 1
    }

    /// Add f to the differential component from → to.
    pub fn add_d(&mut self, from: usize, to: usize, f: B::Mor) -> Result<()> {
        if self.gens[to].tdeg != self.gens[from].tdeg + 1 {
            return Err(Error::BoundaryMismatch(format!(
                "differential from tdeg {} to tdeg {}",
                self.gens[from].tdeg, self.gens[to].tdeg
            )));
        }
        add_entry::<B>(&mut self.d, (from, to), f)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn outgoing(&self, i: usize) -> impl Iterator<Item = (usize, &B::Mor)> {
        self.d.range((i, 0)..(i + 1, 0)).map(|(&(_, t), f)| (t, f))
    }

    pub fn incoming(&self) -> Vec<Vec<usize>> {
        let mut inn = vec![Vec::new(); self.gens.len()];
        for &(a, b) in self.d.keys() {
            inn[b].push(a);
        }
        inn
    }

    pub fn tdeg_range(&self) -> Option<(i64, i64)> {
        let lo = self.gens.iter().map(|g| g.tdeg).min()?;
        let hi = self.gens.iter().map(|g| g.tdeg).max()?;
        Some((lo, hi))
    }

    pub fn gens_in_degree(&self, t: i64) -> Vec<usize> {
        (0..self.gens.len()).filter(|&i| self.gens[i].tdeg == t).collect()
    }

    /// 𝕥^t 𝕢^q X
    pub fn shift(&self, t: i64, q: i64) -> Self {
        let s = sign(t);
        GradedComplex {
            boundary: self.boundary,
            gens: self
                .gens
                .iter()
                .map(|g| Generator { id: g.id.clone(), tdeg: g.tdeg + t, qshift: g.qshift + q, object: g.object.clone() })
                .collect(),
            d: self.d.iter().map(|(k, f)| (*k, B::scale(f, &s))).collect(),
            floor: self.floor.map(|f| f + t),
        }
    }

    /// Drop generators below `floor`.
    pub fn truncate(&self, floor: i64) -> Self {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.gens[i].tdeg >= floor).collect();
        let mut out = self.restrict(&keep);
        out.floor = Some(self.floor.map_or(floor, |f| f.max(floor)));
        out
    }

    /// The sub-quotient on the listed generators (in that order).
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.len()];
        for (new, &old) in keep.iter().enumerate() {
            pos[old] = new;
        }
        let gens = keep.iter().map(|&i| self.gens[i].clone()).collect();
        let d = self
            .d
            .iter()
            .filter(|((a, b), _)| pos[*a] != usize::MAX && pos[*b] != usize::MAX)
            .map(|((a, b), f)| ((pos[*a], pos[*b]), f.clone()))
            .collect();
        GradedComplex { boundary: self.boundary, gens, d, floor: self.floor }
    }

    /// Direct sum; generators of `other` are appended.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if B::FIXED_BOUNDARY && self.boundary != other.boundary {
            return Err(Error::BaseMismatch(format!("{:?} vs {:?}", self.boundary, other.boundary)));
        }
        let off = self.len();
        let mut out = self.clone();
        let mut seen: std::collections::HashSet<String> = self.gens.iter().map(|g| g.id.clone()).collect();
        for g in &other.gens {
            let mut g = g.clone();
            while seen.contains(&g.id) {
                g.id.push('\'');
            }
            seen.insert(g.id.clone());
            out.gens.push(g);
        }
        for ((a, b), f) in &other.d {
            out.d.insert((a + off, b + off), f.clone());
        }
        out.floor = match (self.floor, other.floor) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        Ok(out)
    }

    /// Verify δ∘δ = 0, returning the first nonzero composite.
    pub fn d_squared_check(&self) -> Result<std::result::Result<(), DSquaredWitness<B::Mor>>> {
        let mut acc: BTreeMap<(usize, usize), B::Mor> = BTreeMap::new();
        for (&(a, b), f) in &self.d {
            for (c, g) in self.outgoing(b) {
                add_entry::<B>(&mut acc, (a, c), B::compose(g, f)?)?;
            }
        }
        Ok(match acc.into_iter().next() {
            None => Ok(()),
            Some(((from, to), composite)) => Err(DSquaredWitness { from, to, composite }),
        })
    }

    pub fn is_complex(&self) -> bool {
        matches!(self.d_squared_check(), Ok(Ok(())))
    }

    /// Entries whose intrinsic degree disagrees with the q-shifts.
    pub fn degree_violations(&self) -> Vec<(usize, usize)> {
        if !B::GRADED {
            return Vec::new();
        }
        self.d
            .iter()
            .filter(|((a, b), f)| {
                let want = self.gens[*a].qshift - self.gens[*b].qshift;
                B::degrees(f).iter().any(|&x| x != want)
            })
            .map(|(k, _)| *k)
            .collect()
    }

    /// Cone(f) = 𝕥^{-1}𝕢^{r}X ⊕ Y with differential [[−δ_X, 0], [f, δ_Y]], r the q-degree of f.
    pub fn cone(x: &Self, y: &Self, f: &ChainMap<B>) -> Result<Self> {
        if f.tdeg != 0 {
            return Err(Error::NotClosed(format!("cone of a map of tdeg {}", f.tdeg)));
        }
        if !f.is_closed(x, y)? {
            return Err(Error::NotClosed("cone of a map that does not commute with δ".into()));
        }
        let mut out = x.shift(-1, f.qdeg).direct_sum(y)?;
        let off = x.len();
        for (&(a, b), m) in &f.entries {
            add_entry::<B>(&mut out.d, (a, b + off), m.clone())?;
        }
        Ok(out)
    }

    /// A ⊗ B with δ_A ⊗ id + (−1)^{tdeg_A} id ⊗ δ_B; generator (i, j) has index i·|B| + j.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let bd = (self.boundary.0 + other.boundary.0, self.boundary.1 + other.boundary.1);
        self.product(other, bd, |a, b| Ok(B::tensor_obj(a, b)), |f, g| B::tensor(f, g))
    }

    fn product(
        &self,
        other: &Self,
        boundary: (usize, usize),
        obj: impl Fn(&B::Obj, &B::Obj) -> Result<B::Obj>,
        mor: impl Fn(&B::Mor, &B::Mor) -> Result<B::Mor>,
    ) -> Result<Self> {
        let nb = other.len();
        let mut out = Self::new(boundary);
        for a in &self.gens {
            for b in &other.gens {
                out.push(format!("{}|{}", a.id, b.id), a.tdeg + b.tdeg, a.qshift + b.qshift, obj(&a.object, &b.object)?);
            }
        }
        let ids_b: Vec<B::Mor> = other.gens.iter().map(|g| B::identity(&g.object)).collect();
        let ids_a: Vec<B::Mor> = self.gens.iter().map(|g| B::identity(&g.object)).collect();
        for (&(a, a2), f) in &self.d {
            for j in 0..nb {
                add_entry::<B>(&mut out.d, (a * nb + j, a2 * nb + j), mor(f, &ids_b[j])?)?;
            }
        }
        for (&(b, b2), g) in &other.d {
            for i in 0..self.len() {
                let s = sign(self.gens[i].tdeg);
                add_entry::<B>(&mut out.d, (i * nb + b, i * nb + b2), B::scale(&mor(&ids_a[i], g)?, &s))?;
            }
        }
        out.floor = match (self.floor, other.floor) {
            (Some(a), Some(b)) => {
                let (_, ha) = self.tdeg_range().unwrap_or((0, 0));
                let (_, hb) = other.tdeg_range().unwrap_or((0, 0));
                Some((a + hb).max(b + ha))
            }
            (Some(a), None) => Some(a + other.tdeg_range().map_or(0, |r| r.0)),
            (None, Some(b)) => Some(b + self.tdeg_range().map_or(0, |r| r.0)),
            (None, None) => None,
        };
        Ok(out)
    }

    pub fn identity_map(&self) -> ChainMap<B> {
        ChainMap {
            tdeg: 0,
            qdeg: 0,
            entries: (0..self.len()).map(|i| ((i, i), B::identity(&self.gens[i].object))).collect(),
        }
    }

    pub fn to_json(&self) -> ComplexJson<B::Obj, B::Mor> {
        ComplexJson {
            base: B::NAME.to_string(),
            n: self.boundary.0,
            m: self.boundary.1,
            floor: self.floor,
            generators: self.gens.clone(),
            differential: self
                .d
                .iter()
                .map(|((a, b), f)| EntryJson { from: self.gens[*a].id.clone(), to: self.gens[*b].id.clone(), morphism: f.clone() })
                .collect(),
        }
    }

    pub fn from_json(j: ComplexJson<B::Obj, B::Mor>) -> Result<Self> {
        if j.base != B::NAME {
            return Err(Error::BaseMismatch(format!("expected {}, found {}", B::NAME, j.base)));
        }
        let mut c = Self::new((j.n, j.m));
        let mut index = std::collections::HashMap::new();
        for g in j.generators {
            if B::FIXED_BOUNDARY && B::boundary(&g.object) != (j.n, j.m) {
                return Err(Error::Json(format!("generator {} has the wrong boundary", g.id)));
            }
            if index.insert(g.id.clone(), c.gens.len()).is_some() {
                return Err(Error::Json(format!("duplicate generator id {}", g.id)));
            }
            c.gens.push(g);
        }
        for e in j.differential {
            let a = *index.get(&e.from).ok_or_else(|| Error::Json(format!("unknown generator {}", e.from)))?;
            let b = *index.get(&e.to).ok_or_else(|| Error::Json(format!("unknown generator {}", e.to)))?;
            c.add_d(a, b, e.morphism)?;
        }
        c.floor = j.floor;
        Ok(c)
    }

    /// Reindex generators so that ids are unique and stable ("g0", "g1", ...).
    pub fn relabel(&mut self, prefix: &str) {
        for (i, g) in self.gens.iter_mut().enumerate() {
            g.id = format!("{prefix}{i}");
        }
    }

    pub fn total_qshift_range(&self) -> Option<(i64, i64)> {
        let lo = self.gens.iter().map(|g| g.qshift).min()?;
        let hi = self.gens.iter().map(|g| g.qshift).max()?;
        Some((lo, hi))
    }
}

impl GradedComplex<Bn> {
    /// Horizontal composition A ⋆ B, A over (k, m) on top of B over (n, k).
    pub fn star(&self, bottom: &Self) -> Result<Self> {
        if self.boundary.0 != bottom.boundary.1 {
            return Err(Error::BaseMismatch(format!("{:?} on top of {:?}", self.boundary, bottom.boundary)));
        }
        self.product(bottom, (bottom.boundary.0, self.boundary.1), |a, b| a.compose(b), |f, g| f.star(g))
    }

    /// Class in the split Grothendieck group: circle-free tangles with coefficients, each circle
    /// counted as q + q^{-1}.
    pub fn euler_class(&self) -> BTreeMap<FlatTangle, FieldElem> {
        let circle = FieldElem::q_pow(1) + FieldElem::q_pow(-1);
        let mut out: BTreeMap<FlatTangle, FieldElem> = BTreeMap::new();
        for g in &self.gens {
            let mut c = sign(g.tdeg).mul_q_pow(g.qshift);
            for _ in 0..g.object.circles() {
                c = &c * &circle;
            }
            *out.entry(g.object.without_circles()).or_default() += &c;
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Count of generators whose object contains circles.
    pub fn circle_count(&self) -> usize {
        self.gens.iter().filter(|g| g.object.circles() > 0).count()
    }
}

impl GradedComplex<Tl> {
    /// Plain TL object n as a one-term complex.
    pub fn plain(n: usize) -> Self {
        Self::one_term(KaroubiObject::plain(n), 0, 0)
    }

    /// Alternating q-weighted sum of the chain objects, one TL element per strand count.
    pub fn euler_class(&self) -> Result<BTreeMap<usize, TLElement>> {
        if self.floor.is_some() {
            return Err(Error::Unbounded);
        }
        let mut out: BTreeMap<usize, TLElement> = BTreeMap::new();
        for g in &self.gens {
            let c = sign(g.tdeg).mul_q_pow(g.qshift);
            let term = g.object.idempotent.scale(&c);
            let e = out.entry(g.object.n).or_insert_with(|| TLElement::zero(g.object.n, g.object.n));
            *e = e.add(&term)?;
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct EntryJson<M> {
    pub from: String,
    pub to: String,
    pub morphism: M,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(bound(serialize = "O: Serialize, M: Serialize", deserialize = "O: DeserializeOwned, M: DeserializeOwned"))]
pub struct ComplexJson<O, M> {
    pub base: String,
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floor: Option<i64>,
    pub generators: Vec<Generator<O>>,
    pub differential: Vec<EntryJson<M>>,
}

impl<B: Base> ChainMap<B> {
    pub fn zero(tdeg: i64, qdeg: i64) -> Self {
        ChainMap { tdeg, qdeg, entries: BTreeMap::new() }
    }

    pub fn add_entry(&mut self, from: usize, to: usize, f: B::Mor) -> Result<()> {
        add_entry::<B>(&mut self.entries, (from, to), f)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        let mut out = Self::zero(self.tdeg, self.qdeg);
        if !c.is_zero() {
            out.entries = self.entries.iter().map(|(k, f)| (*k, B::scale(f, c))).collect();
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.tdeg != other.tdeg || self.qdeg != other.qdeg {
            return Err(Error::BaseMismatch(format!(
                "adding maps of degree ({}, {}) and ({}, {})",
                self.tdeg, self.qdeg, other.tdeg, other.qdeg
            )));
        }
        let mut out = self.clone();
        for (k, f) in &other.entries {
            add_entry::<B>(&mut out.entries, *k, f.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&FieldElem::from_int(-1)))
    }

    /// self ∘ first
    pub fn compose(&self, first: &Self) -> Result<Self> {
        let mut out = Self::zero(self.tdeg + first.tdeg, self.qdeg + first.qdeg);
        let mut by_src: BTreeMap<usize, Vec<(usize, &B::Mor)>> = BTreeMap::new();
        for (&(a, b), f) in &self.entries {
            by_src.entry(a).or_default().push((b, f));
        }
        for (&(x, y), f) in &first.entries {
            if let Some(v) = by_src.get(&y) {
                for (z, g) in v {
                    add_entry::<B>(&mut out.entries, (x, *z), B::compose(g, f)?)?;
                }
            }
        }
        Ok(out)
    }

    /// The differential of `c` as a map of degree (1, 0).
    pub fn differential(c: &GradedComplex<B>) -> Self {
        ChainMap { tdeg: 1, qdeg: 0, entries: c.d.clone() }
    }

    /// [δ, f] = δ_Y ∘ f − (−1)^{|f|} f ∘ δ_X
    pub fn commutator(&self, x: &GradedComplex<B>, y: &GradedComplex<B>) -> Result<Self> {
        let dy = Self::differential(y);
        let dx = Self::differential(x);
        let a = dy.compose(self)?;
        let b = self.compose(&dx)?.scale(&sign(self.tdeg));
        let mut out = a.sub(&b)?;
        out.qdeg = self.qdeg;
        Ok(out)
    }

    pub fn is_closed(&self, x: &GradedComplex<B>, y: &GradedComplex<B>) -> Result<bool> {
        Ok(self.commutator(x, y)?.is_zero())
    }

    /// Entries touching generators in tdeg window [lo, hi] of the source.
    pub fn restricted_to_source_window(&self, x: &GradedComplex<B>, lo: i64, hi: i64) -> Self {
        let mut out = Self::zero(self.tdeg, self.qdeg);
        out.entries = self
            .entries
            .iter()
            .filter(|((a, _), _)| (lo..=hi).contains(&x.gens[*a].tdeg))
            .map(|(k, f)| (*k, f.clone()))
            .collect();
        out
    }

    /// Transport entries along generator index maps.
    pub fn reindex(&self, src: &[usize], tgt: &[usize]) -> Self {
        let mut out = Self::zero(self.tdeg, self.qdeg);
        out.entries = self.entries.iter().map(|((a, b), f)| ((src[*a], tgt[*b]), f.clone())).collect();
        out
    }

    pub fn to_json(&self, x: &GradedComplex<B>, y: &GradedComplex<B>) -> ChainMapJson<B::Mor> {
        ChainMapJson {
            tdeg: self.tdeg,
            qdeg: self.qdeg,
            entries: self
                .entries
                .iter()
                .map(|((a, b), f)| EntryJson { from: x.gens[*a].id.clone(), to: y.gens[*b].id.clone(), morphism: f.clone() })
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ChainMapJson<M> {
    pub tdeg: i64,
    pub qdeg: i64,
    pub entries: Vec<EntryJson<M>>,
}

/// Generators with their tdeg and qshift, for comparing complexes up to isomorphism.
pub fn generator_multiset<B: Base>(c: &GradedComplex<B>) -> Vec<(i64, i64, String)>
where
    B::Obj: std::fmt::Debug,
{
    let mut v: Vec<(i64, i64, String)> = c.gens.iter().map(|g| (g.tdeg, g.qshift, format!("{:?}", g.object))).collect();
    v.sort();
    v
}

/// Chain groups per degree: tdeg → number of generators.
pub fn ranks<B: Base>(c: &GradedComplex<B>) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for g in &c.gens {
        *out.entry(g.tdeg).or_insert(0) += 1;
    }
    out
}

/// Generators that carry nonzero differential in or out.
pub fn isolated<B: Base>(c: &GradedComplex<B>) -> BTreeSet<usize> {
    let mut touched = BTreeSet::new();
    for &(a, b) in c.d.keys() {
        touched.insert(a);
        touched.insert(b);
    }
    (0..c.len()).filter(|i| !touched.contains(i)).collect()
}
