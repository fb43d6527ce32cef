//! Decategorified annular closure of BN complexes: skein values, truncated Euler
//! characteristics, and the vanishing rules of the q-twisted trace.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cob::tqft;
use crate::coeff::{delta, FieldElem};
use crate::complex::{Bn, GradedComplex};
use crate::error::{Error, Result};
use crate::tl::{chebyshev_coefficients, TLElement, ZPoly};

/// Σ c_k z^k, z^k being k parallel essential circles.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnularSkeinElement {
    pub coefficients: BTreeMap<usize, FieldElem>,
}

impl AnnularSkeinElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn z_pow(k: usize) -> Self {
        let mut s = Self::zero();
        s.add_term(k, &FieldElem::one());
        s
    }

    pub fn add_term(&mut self, k: usize, c: &FieldElem) {
        let e = self.coefficients.entry(k).or_default();
        *e += c;
        if e.is_zero() {
            self.coefficients.remove(&k);
        }
    }

    pub fn to_zpoly(&self) -> ZPoly {
        let top = self.coefficients.keys().next_back().map_or(0, |k| k + 1);
        ZPoly::from_coeffs((0..top).map(|k| self.coefficients.get(&k).cloned().unwrap_or_default()).collect())
    }

    pub fn from_zpoly(p: &ZPoly) -> Self {
        let mut s = Self::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            s.add_term(k, c);
        }
        s
    }

    /// Coefficients in the basis S_k.
    pub fn chebyshev(&self) -> BTreeMap<usize, FieldElem> {
        chebyshev_coefficients(&self.to_zpoly())
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }
}

/// q-adic valuation: lowest power of q in the expansion around q = 0.
pub fn q_valuation(c: &FieldElem) -> Option<i64> {
    (!c.is_zero()).then(|| c.num().low_exp() - c.den().low_exp())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureRecord {
    pub tdeg: i64,
    pub qshift: i64,
    pub essential: u32,
    pub trivial: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureProfile {
    pub records: Vec<ClosureRecord>,
}

/// Annular closure of every generator of a complex over BN(n, n).
pub fn close_objects(c: &GradedComplex<Bn>) -> Result<ClosureProfile> {
    if c.boundary.0 != c.boundary.1 {
        return Err(Error::BaseMismatch(format!("annular closure of BN{:?}", c.boundary)));
    }
    let records = c
        .gens
        .iter()
        .map(|g| {
            let (essential, trivial) = g.object.annular_closure()?;
            Ok(ClosureRecord { tdeg: g.tdeg, qshift: g.qshift, essential, trivial })
        })
        .collect::<Result<_>>()?;
    Ok(ClosureProfile { records })
}

/// Closure value of a profile restricted to tdeg ≥ lo.
fn profile_value(p: &ClosureProfile, lo: i64) -> AnnularSkeinElement {
    let mut out = AnnularSkeinElement::zero();
    let circle = delta();
    for r in p.records.iter().filter(|r| r.tdeg >= lo) {
        let mut c = if r.tdeg % 2 == 0 { FieldElem::one() } else { FieldElem::from_int(-1) }.mul_q_pow(r.qshift);
        for _ in 0..r.trivial {
            c = &c * &circle;
        }
        out.add_term(r.essential as usize, &c);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceEuler {
    pub value: AnnularSkeinElement,
    /// Homological degrees summed over.
    pub window: Option<(i64, i64)>,
    /// The value is exact in q-degrees below this bound; `None` when exact.
    pub valid_below: Option<i64>,
}

/// Σ (−1)^tdeg q^qshift (q + q^{-1})^trivial z^essential over all generators.
///
/// For a truncated complex (floor set) only the top `period`-periodic part is summed: degrees
/// ≥ floor + period. The bound is the lowest q-degree carried by the generators left out,
/// deeper generators being shifted further up in q.
pub fn trace_euler(c: &GradedComplex<Bn>, period: usize) -> Result<TraceEuler> {
    let p = close_objects(c)?;
    let Some(floor) = c.floor else {
        return Ok(TraceEuler { value: profile_value(&p, i64::MIN), window: None, valid_below: None });
    };
    let lo = floor + period as i64;
    let valid_below = p.records.iter().filter(|r| r.tdeg < lo).map(|r| r.qshift - r.trivial as i64).min();
    let hi = p.records.iter().map(|r| r.tdeg).max().unwrap_or(0);
    Ok(TraceEuler { value: profile_value(&p, lo), window: Some((lo, hi)), valid_below })
}

/// Chebyshev coefficients compared with the indicator of S_n below the bound.
#[derive(Clone, Debug, Serialize)]
pub struct ChebyshevMatch {
    pub n: usize,
    pub valid_below: Option<i64>,
    /// Indices k whose coefficient differs from δ_{kn} in a q-degree below the bound.
    pub mismatches: Vec<usize>,
}

impl ChebyshevMatch {
    pub fn matches(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn compare_with_chebyshev(t: &TraceEuler, n: usize) -> ChebyshevMatch {
    let coeffs = t.value.chebyshev();
    let top = coeffs.keys().next_back().copied().unwrap_or(0).max(n);
    let mismatches = (0..=top)
        .filter(|&k| {
            let mut c = coeffs.get(&k).cloned().unwrap_or_default();
            if k == n {
                c -= &FieldElem::one();
            }
            match (q_valuation(&c), t.valid_below) {
                (None, _) => false,
                (Some(_), None) => true,
                (Some(v), Some(b)) => v < b,
            }
        })
        .collect();
    ChebyshevMatch { n, valid_below: t.valid_below, mismatches }
}

/// A connected component of a cobordism in the annulus times an interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnnularComponent {
    /// An annulus wrapping the core, carrying dots.
    Essential { dots: u32 },
    /// A closed surface away from the core.
    Closed { genus: u32, dots: u32 },
    /// A sheet with trivial boundary (disc, tube) whose value is left symbolic.
    Trivial { dots: u32 },
}

/// An endomorphism of a closure object given by elementary pieces, with its q-degree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnnularCobordism {
    pub components: Vec<AnnularComponent>,
    pub degree: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingVerdict {
    pub vanishes: bool,
    /// Scalar from evaluating closed components, when it survives.
    pub scalar: Option<FieldElem>,
    pub reason: String,
}

/// Apply the vanishing rules of the q-twisted trace.
///
/// A dot on an essential annulus, or a nonzero q-degree, makes the class vanish since it equals
/// q^d times itself and 1 − q^d is a unit. Closed components evaluate by the neck-cutting rules.
pub fn essential_dot_vanishing(s: &AnnularCobordism) -> Result<VanishingVerdict> {
    if let Some(d) = s.components.iter().find_map(|c| match c {
        AnnularComponent::Essential { dots } if *dots > 0 => Some(*dots),
        _ => None,
    }) {
        return Ok(VanishingVerdict {
            vanishes: true,
            scalar: None,
            reason: format!("{d} dot(s) on an essential annulus: x = q²x, and 1 − q² is a unit"),
        });
    }
    if s.degree != 0 {
        return Ok(VanishingVerdict {
            vanishes: true,
            scalar: None,
            reason: format!("degree {} endomorphism: 1 − q^{} is a unit", s.degree, s.degree),
        });
    }
    let mut scalar = FieldElem::one();
    for c in &s.components {
        match c {
            AnnularComponent::Closed { genus, dots } => {
                let v = closed_surface_value(*genus, *dots)?;
                scalar = &scalar * &v;
            }
            AnnularComponent::Trivial { dots } if *dots > 1 => scalar = FieldElem::zero(),
            _ => {}
        }
    }
    let vanishes = scalar.is_zero();
    Ok(VanishingVerdict {
        vanishes,
        scalar: Some(scalar),
        reason: if vanishes { "closed components evaluate to zero".into() } else { "survives".into() },
    })
}

fn closed_surface_value(genus: u32, dots: u32) -> Result<FieldElem> {
    let t = tqft::connected_surface(genus, dots, 0);
    Ok(FieldElem::from_int(t.get(&0).copied().unwrap_or(0)))
}

/// Rotate a factorization x = g ∘ f of a composition word at `cut`.
///
/// `word` lists factors bottom first; f is the first `cut` of them. Returns f ∘ g together with
/// the exponent e such that [g ∘ f] = q^e [f ∘ g] when g has q-degree `g_degree`.
pub fn cyclicity_rotate(word: &[TLElement], cut: usize, g_degree: i64) -> Result<(TLElement, i64)> {
    if word.is_empty() || cut > word.len() {
        return Err(Error::BadFactorization(format!("cut {cut} in a word of length {}", word.len())));
    }
    let compose_all = |xs: &[TLElement], n: usize| -> Result<TLElement> {
        xs.iter().try_fold(TLElement::identity(n), |acc, x| x.compose(&acc))
    };
    let f = compose_all(&word[..cut], word[0].n())?;
    let mid = f.m();
    let g = compose_all(&word[cut..], mid).map_err(|e| Error::BadFactorization(e.to_string()))?;
    if g.m() != word[0].n() {
        return Err(Error::BadFactorization(format!("the word maps {} to {} points", word[0].n(), g.m())));
    }
    let rotated = f.compose(&g).map_err(|e| Error::BadFactorization(e.to_string()))?;
    Ok((rotated, g_degree))
}
