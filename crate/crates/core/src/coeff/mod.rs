//! Exact arithmetic in Q(q).

mod field;
mod laurent;

use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use field::{lcm, sum, FieldElem};
pub use laurent::{gcd, normalize_unit, LaurentPoly};

use crate::error::Result;

/// [n] = q^{n-1} + q^{n-3} + ... + q^{1-n}
pub fn quantum_integer(n: u32) -> LaurentPoly {
    let n = n as i64;
    LaurentPoly::from_terms((0..n).map(|i| (n - 1 - 2 * i, 1)))
}

/// [n] as a field element.
pub fn qint(n: u32) -> FieldElem {
    FieldElem::from_poly(quantum_integer(n))
}

/// [a]/[b]
pub fn qint_ratio(a: u32, b: u32) -> FieldElem {
    FieldElem::new(quantum_integer(a), quantum_integer(b)).expect("[b] is nonzero for b > 0")
}

/// q + q^{-1}
pub fn delta() -> FieldElem {
    qint(2)
}

pub fn specialize(a: &FieldElem, q0: &BigRational) -> Result<BigRational> {
    a.specialize(q0)
}

static GENERICITY_BOUND: AtomicUsize = AtomicUsize::new(0);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenericityReport {
    pub d_max: usize,
    pub all_invertible: bool,
    pub recorded_bound: usize,
}

/// Confirms 1 - q^d is a unit of Q(q) for 1 <= d <= d_max and records the bound.
pub fn genericity_check(d_max: usize) -> GenericityReport {
    let all_invertible = (1..=d_max as i64).all(|d| {
        let x = LaurentPoly::from_terms([(0, 1), (d, -1)]);
        FieldElem::from_poly(x).inv().is_ok()
    });
    GENERICITY_BOUND.fetch_max(d_max, Ordering::SeqCst);
    GenericityReport { d_max, all_invertible, recorded_bound: d_max }
}

/// Largest d_max recorded by `genericity_check` in this process.
pub fn genericity_bound() -> usize {
    GENERICITY_BOUND.load(Ordering::SeqCst)
}

#[derive(Serialize, Deserialize)]
struct Term(Num, String);

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    fn value(&self) -> std::result::Result<i64, String> {
        match self {
            Num::Int(i) => Ok(*i),
            Num::Str(s) => s.parse().map_err(|_| format!("bad exponent {s}")),
        }
    }
}

fn poly_to_terms(p: &LaurentPoly) -> Vec<Term> {
    p.terms().map(|(e, c)| Term(Num::Int(e), c.to_string())).collect()
}

fn terms_to_poly(t: Vec<Term>) -> std::result::Result<LaurentPoly, String> {
    let mut out = Vec::with_capacity(t.len());
    let mut last = None;
    for Term(e, c) in t {
        let e = e.value()?;
        if last.is_some_and(|l| e <= l) {
            return Err("exponents must be strictly increasing".into());
        }
        last = Some(e);
        let c: BigInt = c.parse().map_err(|_| format!("bad coefficient {c}"))?;
        if c == BigInt::from(0) {
            return Err("zero coefficient stored".into());
        }
        out.push((e, c));
    }
    Ok(LaurentPoly::from_terms(out))
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        poly_to_terms(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let t = Vec::<Term>::deserialize(d)?;
        terms_to_poly(t).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldJson { num: self.num().clone(), den: self.den().clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FieldJson::deserialize(d)?;
        FieldElem::new(j.num, j.den).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn quantum_integer_examples() {
        assert!(quantum_integer(1).is_one());
        assert!(quantum_integer(0).is_zero());
        assert_eq!(quantum_integer(2), LaurentPoly::from_terms([(1, 1), (-1, 1)]));
        assert_eq!(
            quantum_integer(4),
            LaurentPoly::from_terms([(3, 1), (1, 1), (-1, 1), (-3, 1)])
        );
    }

    #[test]
    fn quantum_recursion() {
        for n in 1..=32 {
            let lhs = quantum_integer(n + 1);
            let rhs = &(&quantum_integer(2) * &quantum_integer(n)) - &quantum_integer(n - 1);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn specialization_examples() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(specialize(&qint(3), &r(1, 1)).unwrap(), r(3, 1));
        assert_eq!(specialize(&qint(2), &r(2, 1)).unwrap(), r(5, 2));
        let x = FieldElem::new(LaurentPoly::one(), LaurentPoly::from_terms([(0, 1), (2, -1)])).unwrap();
        assert!(matches!(specialize(&x, &r(1, 1)), Err(crate::Error::PoleAtPoint(_))));
    }

    #[test]
    fn genericity() {
        assert!(genericity_check(4).all_invertible);
        assert!(genericity_check(0).all_invertible);
        let rep = genericity_check(6);
        assert_eq!(rep.recorded_bound, 6);
        assert!(genericity_bound() >= 6);
    }

    #[test]
    fn json_roundtrip() {
        let x = qint_ratio(2, 3).mul_q_pow(-2);
        let s = serde_json::to_string(&x).unwrap();
        let y: FieldElem = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert_eq!(BigInt::one().to_string(), "1");
        let z: FieldElem = serde_json::from_str(r#"{"num":[["1","2"]],"den":[[0,"4"]]}"#).unwrap();
        assert_eq!(z, FieldElem::from_rational(&BigRational::new(1.into(), 2.into())).mul_q_pow(1));
    }
}
