use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::sync::{OnceLock, RwLock};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::cob::{deloop, hom_basis, Cob};
use crate::coeff::FieldElem;
use crate::error::Result;
use crate::tangle::FlatTangle;
use crate::tl::{KaroubiObject, TLElement};

/// An additive Q(q)-linear category in which complexes live.
pub trait Base: Clone + Debug + Send + Sync + 'static {
    type Obj: Clone + PartialEq + Eq + std::hash::Hash + Debug + Serialize + DeserializeOwned + Send + Sync;
    type Mor: Clone + PartialEq + Debug + Serialize + DeserializeOwned + Send + Sync;
    type Key: Ord + Clone + Debug;

    const NAME: &'static str;
    /// Whether hom spaces carry an intrinsic q-degree.
    const GRADED: bool;
    /// Whether all objects of a complex share one boundary.
    const FIXED_BOUNDARY: bool;

    fn boundary(a: &Self::Obj) -> (usize, usize);
    fn zero(a: &Self::Obj, b: &Self::Obj) -> Self::Mor;
    fn identity(a: &Self::Obj) -> Self::Mor;
    fn is_zero(f: &Self::Mor) -> bool;
    fn add(f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
    fn scale(f: &Self::Mor, c: &FieldElem) -> Self::Mor;
    /// g ∘ f
    fn compose(g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;
    /// Some(c) when f = c·id_a.
    fn identity_multiple(f: &Self::Mor, a: &Self::Obj) -> Option<FieldElem>;
    /// Intrinsic degrees present in f.
    fn degrees(f: &Self::Mor) -> Vec<i64>;
    /// A spanning set of Hom(a, b) in the given degree.
    fn hom_spanning(a: &Self::Obj, b: &Self::Obj, degree: i64) -> Result<Vec<Self::Mor>>;
    fn coords(f: &Self::Mor) -> BTreeMap<Self::Key, FieldElem>;
    /// Side-by-side placement.
    fn tensor_obj(a: &Self::Obj, b: &Self::Obj) -> Self::Obj;
    fn tensor(f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
    /// An isomorphism a ≅ ⊕ q^{s_i} b_i as (s_i, b_i, a → b_i, b_i → a), if a splits further.
    fn split(_a: &Self::Obj) -> Result<Option<Vec<(i64, Self::Obj, Self::Mor, Self::Mor)>>> {
        Ok(None)
    }
}

pub fn sub<B: Base>(f: &B::Mor, g: &B::Mor) -> Result<B::Mor> {
    B::add(f, &B::scale(g, &FieldElem::from_int(-1)))
}

/// Temperley-Lieb category, idempotent completed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tl;

/// Bar-Natan category of dotted cobordisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bn;

fn tl_span_cache() -> &'static RwLock<HashMap<(KaroubiObject, KaroubiObject), Vec<TLElement>>> {
    static C: OnceLock<RwLock<HashMap<(KaroubiObject, KaroubiObject), Vec<TLElement>>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

impl Base for Tl {
    type Obj = KaroubiObject;
    type Mor = TLElement;
    type Key = FlatTangle;
    const NAME: &'static str = "TL";
    const GRADED: bool = false;
    const FIXED_BOUNDARY: bool = false;

    fn boundary(a: &KaroubiObject) -> (usize, usize) {
        (a.n, a.n)
    }

    fn zero(a: &KaroubiObject, b: &KaroubiObject) -> TLElement {
        TLElement::zero(a.n, b.n)
    }

    fn identity(a: &KaroubiObject) -> TLElement {
        a.idempotent.clone()
    }

    fn is_zero(f: &TLElement) -> bool {
        f.is_zero()
    }

    fn add(f: &TLElement, g: &TLElement) -> Result<TLElement> {
        f.add(g)
    }

    fn scale(f: &TLElement, c: &FieldElem) -> TLElement {
        f.scale(c)
    }

    fn compose(g: &TLElement, f: &TLElement) -> Result<TLElement> {
        g.compose(f)
    }

    fn identity_multiple(f: &TLElement, a: &KaroubiObject) -> Option<FieldElem> {
        if f.n() != a.n || f.m() != a.n {
            return None;
        }
        let (t, c0) = a.idempotent.terms().next()?;
        let c = f.coeff(t).checked_div(c0).ok()?;
        if c.is_zero() {
            return None;
        }
        (a.idempotent.scale(&c) == *f).then_some(c)
    }

    fn degrees(f: &TLElement) -> Vec<i64> {
        if f.is_zero() {
            Vec::new()
        } else {
            vec![0]
        }
    }

    fn hom_spanning(a: &KaroubiObject, b: &KaroubiObject, _degree: i64) -> Result<Vec<TLElement>> {
        let key = (a.clone(), b.clone());
        if let Some(v) = tl_span_cache().read().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let mut out: Vec<TLElement> = Vec::new();
        for t in FlatTangle::all(a.n, b.n) {
            let mut x = TLElement::from_tangle(&t);
            if !b.is_plain() {
                x = b.idempotent.compose(&x)?;
            }
            if !a.is_plain() {
                x = x.compose(&a.idempotent)?;
            }
            if !x.is_zero() && !out.contains(&x) {
                out.push(x);
            }
        }
        tl_span_cache().write().unwrap().insert(key, out.clone());
        Ok(out)
    }

    fn coords(f: &TLElement) -> BTreeMap<FlatTangle, FieldElem> {
        f.terms().map(|(t, c)| (t.clone(), c.clone())).collect()
    }

    fn tensor_obj(a: &KaroubiObject, b: &KaroubiObject) -> KaroubiObject {
        a.juxtapose(b)
    }

    fn tensor(f: &TLElement, g: &TLElement) -> Result<TLElement> {
        Ok(f.juxtapose(g))
    }
}

impl Base for Bn {
    type Obj = FlatTangle;
    type Mor = Cob;
    type Key = u64;
    const NAME: &'static str = "BN";
    const GRADED: bool = true;
    const FIXED_BOUNDARY: bool = true;

    fn boundary(a: &FlatTangle) -> (usize, usize) {
        (a.n(), a.m())
    }

    fn zero(a: &FlatTangle, b: &FlatTangle) -> Cob {
        Cob::zero(a, b).expect("zero between objects of one hom category")
    }

    fn identity(a: &FlatTangle) -> Cob {
        Cob::identity(a)
    }

    fn is_zero(f: &Cob) -> bool {
        f.is_zero()
    }

    fn add(f: &Cob, g: &Cob) -> Result<Cob> {
        f.add(g)
    }

    fn scale(f: &Cob, c: &FieldElem) -> Cob {
        f.scale(c)
    }

    fn compose(g: &Cob, f: &Cob) -> Result<Cob> {
        g.compose(f)
    }

    fn identity_multiple(f: &Cob, a: &FlatTangle) -> Option<FieldElem> {
        if f.src() != a {
            return None;
        }
        f.as_identity_multiple()
    }

    fn degrees(f: &Cob) -> Vec<i64> {
        f.degrees()
    }

    fn hom_spanning(a: &FlatTangle, b: &FlatTangle, degree: i64) -> Result<Vec<Cob>> {
        hom_basis(a, b, degree)
    }

    fn coords(f: &Cob) -> BTreeMap<u64, FieldElem> {
        f.terms().clone()
    }

    fn tensor_obj(a: &FlatTangle, b: &FlatTangle) -> FlatTangle {
        a.juxtapose(b)
    }

    fn tensor(f: &Cob, g: &Cob) -> Result<Cob> {
        Ok(f.juxtapose(g))
    }

    fn split(a: &FlatTangle) -> Result<Option<Vec<(i64, FlatTangle, Cob, Cob)>>> {
        if a.circles() == 0 {
            return Ok(None);
        }
        let dl = deloop(a, a.circles() as usize - 1)?;
        Ok(Some(dl.parts.into_iter().map(|(s, fwd, bwd)| (s, dl.object.clone(), fwd, bwd)).collect()))
    }
}
