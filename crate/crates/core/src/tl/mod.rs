//! The linearized Temperley–Lieb category over Q(q).

mod idempotents;
mod jw;
mod trace;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::coeff::{delta, lcm, FieldElem, LaurentPoly};
use crate::error::{Error, Result};
use crate::tangle::FlatTangle;

pub use idempotents::{
    admissible_count, admissible_sequences, catalan_formula, central_idempotent, primitive_idempotent,
    primitive_idempotent_by_paths, AdmissibleSequence,
};
pub use jw::{jones_wenzl, set_jw_cache_dir};
pub use trace::{annular_skein_closure, chebyshev_coefficients, markov_trace, ZPoly};

/// Finite linear combination of circle-free (n, m) tangles.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TLElement {
    n: usize,
    m: usize,
    terms: BTreeMap<FlatTangle, FieldElem>,
}

impl TLElement {
    pub fn zero(n: usize, m: usize) -> Self {
        TLElement { n, m, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_tangle(&FlatTangle::identity(n))
    }

    /// A tangle with its circles converted to powers of q + q^{-1}.
    pub fn from_tangle(t: &FlatTangle) -> Self {
        let c = delta_pow(t.circles());
        let mut x = Self::zero(t.n(), t.m());
        x.terms.insert(t.without_circles(), c);
        x
    }

    pub fn from_terms<I: IntoIterator<Item = (FlatTangle, FieldElem)>>(n: usize, m: usize, terms: I) -> Result<Self> {
        let mut x = Self::zero(n, m);
        for (t, c) in terms {
            if t.n() != n || t.m() != m {
                return Err(Error::BoundaryMismatch(format!("term {t} in ({n},{m}) element")));
            }
            x.add_term(&t, &c);
        }
        Ok(x)
    }

    /// e_i = turnback_i on n strands.
    pub fn e(n: usize, i: usize) -> Result<Self> {
        Ok(Self::from_tangle(&FlatTangle::turnback(n, i)?))
    }

    pub fn cap(n: usize, i: usize) -> Result<Self> {
        Ok(Self::from_tangle(&FlatTangle::cap(n, i)?))
    }

    pub fn cup(n: usize, i: usize) -> Result<Self> {
        Ok(Self::from_tangle(&FlatTangle::cup(n, i)?))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FlatTangle, &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &FlatTangle) -> FieldElem {
        let c = delta_pow(t.circles());
        match self.terms.get(&t.without_circles()) {
            Some(x) if t.circles() == 0 => x.clone(),
            Some(x) => x.checked_div(&c).expect("delta is a unit"),
            None => FieldElem::zero(),
        }
    }

    /// Add c·t, absorbing the circles of t.
    pub fn add_term(&mut self, t: &FlatTangle, c: &FieldElem) {
        if c.is_zero() {
            return;
        }
        let (key, c) = if t.circles() == 0 {
            (t.clone(), c.clone())
        } else {
            (t.without_circles(), c * &delta_pow(t.circles()))
        };
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.m != other.m {
            return Err(Error::BoundaryMismatch(format!(
                "({},{}) vs ({},{})",
                self.n, self.m, other.n, other.m
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TLElement { n: self.n, m: self.m, terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        if c.is_zero() {
            return Self::zero(self.n, self.m);
        }
        TLElement { n: self.n, m: self.m, terms: self.terms.iter().map(|(t, x)| (t.clone(), x * c)).collect() }
    }

    /// Vertical composition: `self` stacked on top of `bottom`.
    pub fn compose(&self, bottom: &TLElement) -> Result<TLElement> {
        if self.n != bottom.m {
            return Err(Error::BoundaryMismatch(format!(
                "top expects {} points, bottom provides {}",
                self.n, bottom.m
            )));
        }
        let mut out = TLElement::zero(bottom.n, self.m);
        if self.is_zero() || bottom.is_zero() {
            return Ok(out);
        }
        let (dx, nx) = common_denominator(self);
        let (dy, ny) = common_denominator(bottom);
        let mut acc: HashMap<FlatTangle, Vec<Accumulator>> = HashMap::new();
        let fast = nx.iter().chain(ny.iter()).all(|(_, p)| SmallPoly::from_poly(p).is_some());
        if fast {
            let sx: Vec<(&FlatTangle, SmallPoly)> =
                nx.iter().map(|(t, p)| (*t, SmallPoly::from_poly(p).unwrap())).collect();
            let sy: Vec<(&FlatTangle, SmallPoly)> =
                ny.iter().map(|(t, p)| (*t, SmallPoly::from_poly(p).unwrap())).collect();
            let mut ok = true;
            'outer: for (tb, pb) in &sy {
                for (ta, pa) in &sx {
                    let r = ta.compose(tb)?;
                    let c = r.circles() as usize;
                    let slots = acc.entry(r.without_circles()).or_default();
                    while slots.len() <= c {
                        slots.push(Accumulator::Small(SmallAcc::default()));
                    }
                    if let Accumulator::Small(s) = &mut slots[c] {
                        if !s.add_product(pa, pb) {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            if !ok {
                acc.clear();
                slow_products(&nx, &ny, &mut acc)?;
            }
        } else {
            slow_products(&nx, &ny, &mut acc)?;
        }
        let den = &dx * &dy;
        let d = delta().num().clone();
        for (t, slots) in acc {
            let mut total = LaurentPoly::zero();
            for slot in slots.into_iter().rev() {
                total = &(&total * &d) + &slot.into_poly();
            }
            if !total.is_zero() {
                out.terms.insert(t, FieldElem::new(total, den.clone())?);
            }
        }
        Ok(out)
    }

    /// Side-by-side placement with `other` on the right.
    pub fn juxtapose(&self, other: &Self) -> Self {
        let mut out = TLElement::zero(self.n + other.n, self.m + other.m);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(&a.juxtapose(b), &(x * y));
            }
        }
        out
    }

    /// x ⊔ id_k
    pub fn pad_right(&self, k: usize) -> Self {
        self.juxtapose(&TLElement::identity(k))
    }

    pub fn reflect(&self) -> Self {
        TLElement { n: self.m, m: self.n, terms: self.terms.iter().map(|(t, c)| (t.reflect(), c.clone())).collect() }
    }

    /// Largest through-degree among the terms.
    pub fn max_through_degree(&self) -> Option<usize> {
        self.terms.keys().map(|t| t.through_degree()).max()
    }

    /// Terms keyed for serialization in a deterministic order.
    pub fn to_json(&self) -> TLElementJson {
        TLElementJson {
            n: self.n,
            m: self.m,
            terms: self.terms.iter().map(|(t, c)| TermJson { tangle: t.clone(), coeff: c.clone() }).collect(),
        }
    }

    pub fn from_json(j: TLElementJson) -> Result<Self> {
        Self::from_terms(j.n, j.m, j.terms.into_iter().map(|t| (t.tangle, t.coeff)))
    }
}

#[derive(Serialize, Deserialize)]
pub struct TermJson {
    pub tangle: FlatTangle,
    pub coeff: FieldElem,
}

#[derive(Serialize, Deserialize)]
pub struct TLElementJson {
    pub n: usize,
    pub m: usize,
    pub terms: Vec<TermJson>,
}

impl Serialize for TLElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TLElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = TLElementJson::deserialize(d)?;
        TLElement::from_json(j).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for TLElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{c}]{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TLElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// (q + q^{-1})^c
pub fn delta_pow(c: u32) -> FieldElem {
    let mut r = FieldElem::one();
    let d = delta();
    for _ in 0..c {
        r = &r * &d;
    }
    r
}

/// Least common denominator D and numerators N_t with coeff_t = N_t / D.
pub fn common_denominator(x: &TLElement) -> (LaurentPoly, Vec<(&FlatTangle, LaurentPoly)>) {
    let mut dens: Vec<&LaurentPoly> = Vec::new();
    let mut seen = HashSet::new();
    for c in x.terms.values() {
        if seen.insert(c.den()) {
            dens.push(c.den());
        }
    }
    let mut d = LaurentPoly::one();
    for den in dens {
        if d.div_exact(den).is_none() {
            d = lcm(&d, den);
        }
    }
    let d = crate::coeff::normalize_unit(&d);
    let mut cache: HashMap<&LaurentPoly, LaurentPoly> = HashMap::new();
    let nums = x
        .terms
        .iter()
        .map(|(t, c)| {
            let f = cache.entry(c.den()).or_insert_with(|| d.div_exact(c.den()).expect("lcm is a multiple"));
            (t, c.num() * &*f)
        })
        .collect();
    (d, nums)
}

struct SmallPoly {
    low: i64,
    c: Vec<i64>,
}

impl SmallPoly {
    fn from_poly(p: &LaurentPoly) -> Option<Self> {
        let c: Option<Vec<i64>> = p.dense().iter().map(|x| x.to_i64()).collect();
        Some(SmallPoly { low: p.low_exp(), c: c? })
    }
}

#[derive(Default)]
struct SmallAcc {
    low: i64,
    c: Vec<i128>,
}

impl SmallAcc {
    /// Adds a·b; false on overflow.
    fn add_product(&mut self, a: &SmallPoly, b: &SmallPoly) -> bool {
        let lo = a.low + b.low;
        let len = a.c.len() + b.c.len() - 1;
        if self.c.is_empty() {
            self.low = lo;
        }
        if lo < self.low {
            let pad = (self.low - lo) as usize;
            let mut v = vec![0i128; pad];
            v.extend_from_slice(&self.c);
            self.c = v;
            self.low = lo;
        }
        let off = (lo - self.low) as usize;
        if self.c.len() < off + len {
            self.c.resize(off + len, 0);
        }
        for (i, &x) in a.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as i128;
            let row = &mut self.c[off + i..off + i + b.c.len()];
            for (slot, &y) in row.iter_mut().zip(b.c.iter()) {
                match slot.checked_add(x * y as i128) {
                    Some(v) => *slot = v,
                    None => return false,
                }
            }
        }
        true
    }
}

enum Accumulator {
    Small(SmallAcc),
    Big(LaurentPoly),
}

impl Accumulator {
    fn into_poly(self) -> LaurentPoly {
        match self {
            Accumulator::Small(s) => {
                LaurentPoly::from_dense(s.low, s.c.into_iter().map(BigInt::from).collect())
            }
            Accumulator::Big(p) => p,
        }
    }
}

fn slow_products(
    nx: &[(&FlatTangle, LaurentPoly)],
    ny: &[(&FlatTangle, LaurentPoly)],
    acc: &mut HashMap<FlatTangle, Vec<Accumulator>>,
) -> Result<()> {
    for (tb, pb) in ny {
        for (ta, pa) in nx {
            let r = ta.compose(tb)?;
            let c = r.circles() as usize;
            let slots = acc.entry(r.without_circles()).or_default();
            while slots.len() <= c {
                slots.push(Accumulator::Big(LaurentPoly::zero()));
            }
            if let Accumulator::Big(p) = &mut slots[c] {
                let prod = pa * pb;
                *p = &*p + &prod;
            }
        }
    }
    Ok(())
}

/// Objects of the Karoubi envelope: im e for an idempotent e on n strands.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct KaroubiObject {
    pub n: usize,
    pub idempotent: TLElement,
}

impl KaroubiObject {
    pub fn new(idempotent: TLElement) -> Result<Self> {
        if idempotent.n != idempotent.m {
            return Err(Error::NotSquare { n: idempotent.n, m: idempotent.m });
        }
        let sq = idempotent.compose(&idempotent)?;
        if sq != idempotent {
            return Err(Error::InvalidTangle("element is not idempotent".into()));
        }
        Ok(KaroubiObject { n: idempotent.n, idempotent })
    }

    /// The object n with idempotent id_n.
    pub fn plain(n: usize) -> Self {
        KaroubiObject { n, idempotent: TLElement::identity(n) }
    }

    pub fn unchecked(idempotent: TLElement) -> Self {
        KaroubiObject { n: idempotent.n, idempotent }
    }

    pub fn is_plain(&self) -> bool {
        self.idempotent == TLElement::identity(self.n)
    }

    pub fn juxtapose(&self, other: &Self) -> Self {
        KaroubiObject { n: self.n + other.n, idempotent: self.idempotent.juxtapose(&other.idempotent) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::qint;

    #[test]
    fn circle_relation() {
        let e1 = TLElement::e(2, 1).unwrap();
        assert_eq!(e1.compose(&e1).unwrap(), e1.scale(&qint(2)));
    }

    #[test]
    fn identity_is_unit() {
        let x = TLElement::e(3, 1).unwrap().add(&TLElement::e(3, 2).unwrap().scale(&qint(3))).unwrap();
        assert_eq!(TLElement::identity(3).compose(&x).unwrap(), x);
        assert_eq!(x.compose(&TLElement::identity(3)).unwrap(), x);
    }

    #[test]
    fn braid_like_relation() {
        let e1 = TLElement::e(3, 1).unwrap();
        let e2 = TLElement::e(3, 2).unwrap();
        assert_eq!(e1.compose(&e2).unwrap().compose(&e1).unwrap(), e1);
    }

    #[test]
    fn fraction_coefficients_compose() {
        let e1 = TLElement::e(2, 1).unwrap();
        let x = e1.scale(&qint(2).inv().unwrap());
        assert_eq!(x.compose(&x).unwrap(), x);
    }

    #[test]
    fn json_roundtrip() {
        let x = TLElement::e(3, 1).unwrap().scale(&crate::coeff::qint_ratio(2, 3));
        let s = serde_json::to_string(&x).unwrap();
        let y: TLElement = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }
}
