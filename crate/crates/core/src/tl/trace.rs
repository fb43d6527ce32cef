use std::fmt;

use serde::{Deserialize, Serialize};

use super::{delta_pow, TLElement};
use crate::coeff::FieldElem;
use crate::error::{Error, Result};

/// Polynomial in z over Q(q); index = power of z.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ZPoly {
    coeffs: Vec<FieldElem>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn monomial(c: FieldElem, k: usize) -> Self {
        let mut v = vec![FieldElem::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn z_pow(k: usize) -> Self {
        Self::monomial(FieldElem::one(), k)
    }

    /// Chebyshev polynomial S_k: S_0 = 1, S_1 = z, S_{k+1} = z S_k − S_{k−1}.
    pub fn chebyshev(k: usize) -> Self {
        let (mut a, mut b) = (ZPoly::z_pow(0), ZPoly::z_pow(1));
        if k == 0 {
            return a;
        }
        for _ in 1..k {
            let c = b.shift_z().sub(&a);
            a = b;
            b = c;
        }
        b
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> FieldElem {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    fn shift_z(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![FieldElem::zero()];
        v.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(v)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..len).map(|k| &self.coeff(k) + &other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&FieldElem::from_int(-1)))
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![FieldElem::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += &(a * b);
            }
        }
        Self::from_coeffs(v)
    }

    pub fn add_term(&mut self, k: usize, c: &FieldElem) {
        if self.coeffs.len() <= k {
            self.coeffs.resize(k + 1, FieldElem::zero());
        }
        self.coeffs[k] += c;
        let t = std::mem::take(&mut self.coeffs);
        *self = Self::from_coeffs(t);
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})z^{k}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Σ_T coeff(T)·(q+q^{-1})^{loops of the planar closure of T}
pub fn markov_trace(x: &TLElement) -> Result<FieldElem> {
    if x.n() != x.m() {
        return Err(Error::NotSquare { n: x.n(), m: x.m() });
    }
    let parts: Vec<FieldElem> = x
        .terms()
        .map(|(t, c)| Ok(c * &delta_pow(t.planar_closure()?)))
        .collect::<Result<_>>()?;
    Ok(crate::coeff::sum(parts.iter()))
}

/// Σ_T coeff(T)·(q+q^{-1})^{trivial(T)}·z^{essential(T)}
pub fn annular_skein_closure(x: &TLElement) -> Result<ZPoly> {
    if x.n() != x.m() {
        return Err(Error::NotSquare { n: x.n(), m: x.m() });
    }
    let mut buckets: Vec<Vec<FieldElem>> = vec![Vec::new(); x.n() + 1];
    for (t, c) in x.terms() {
        let (ess, triv) = t.annular_closure()?;
        buckets[ess as usize].push(c * &delta_pow(triv));
    }
    Ok(ZPoly::from_coeffs(buckets.iter().map(|b| crate::coeff::sum(b.iter())).collect()))
}

/// Coefficients c_k with f = Σ c_k S_k(z).
pub fn chebyshev_coefficients(f: &ZPoly) -> Vec<FieldElem> {
    let mut rest = f.clone();
    let mut out = vec![FieldElem::zero(); f.coeffs.len()];
    while let Some(d) = rest.degree() {
        let c = rest.coeff(d);
        rest = rest.sub(&ZPoly::chebyshev(d).scale(&c));
        out[d] = c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{qint, FieldElem};
    use crate::tl::jones_wenzl;

    #[test]
    fn traces() {
        let d = qint(2);
        assert_eq!(markov_trace(&TLElement::identity(2)).unwrap(), &d * &d);
        assert_eq!(markov_trace(&jones_wenzl(2)).unwrap(), qint(3));
        for n in 0..=5 {
            assert_eq!(markov_trace(&jones_wenzl(n)).unwrap(), qint(n as u32 + 1));
        }
    }

    #[test]
    fn closures() {
        assert_eq!(annular_skein_closure(&TLElement::identity(3)).unwrap(), ZPoly::z_pow(3));
        let e = TLElement::e(2, 1).unwrap();
        assert_eq!(annular_skein_closure(&e).unwrap(), ZPoly::monomial(qint(2), 0));
        let want = ZPoly::z_pow(2).sub(&ZPoly::z_pow(0));
        assert_eq!(annular_skein_closure(&jones_wenzl(2)).unwrap(), want);
    }

    #[test]
    fn chebyshev_basis() {
        let c = chebyshev_coefficients(&ZPoly::z_pow(2));
        assert_eq!(c, vec![FieldElem::one(), FieldElem::zero(), FieldElem::one()]);
        let c = chebyshev_coefficients(&ZPoly::z_pow(2).sub(&ZPoly::z_pow(0)));
        assert_eq!(c, vec![FieldElem::zero(), FieldElem::zero(), FieldElem::one()]);
        assert_eq!(chebyshev_coefficients(&ZPoly::z_pow(1)), vec![FieldElem::zero(), FieldElem::one()]);
    }
}
