use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::modp;

/// Integer Laurent polynomial in q, stored densely from the lowest exponent.
///
/// The first and last stored coefficients are nonzero; the zero polynomial
/// stores nothing.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: e, coeffs: vec![c] }
    }

    /// q^e
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(1, e)
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let terms: Vec<(i64, BigInt)> = terms.into_iter().map(|(e, c)| (e, c.into())).collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::from_dense(lo, coeffs)
    }

    /// Build from a dense vector starting at exponent `low`; trims zeros.
    pub fn from_dense(low: i64, mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return Self::zero();
        }
        if lead > 0 {
            coeffs.drain(..lead);
        }
        LaurentPoly { low: low + lead as i64, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// A single nonzero constant term.
    pub fn as_constant(&self) -> Option<&BigInt> {
        if self.low == 0 && self.coeffs.len() == 1 {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn low_exp(&self) -> i64 {
        self.low
    }

    pub fn high_exp(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    /// Number of stored slots (span of exponents).
    pub fn span(&self) -> usize {
        self.coeffs.len()
    }

    pub fn dense(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        if self.is_zero() || e < self.low || e > self.high_exp() {
            BigInt::zero()
        } else {
            self.coeffs[(e - self.low) as usize].clone()
        }
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("zero polynomial has no leading coefficient")
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn shift(&self, e: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: self.low + e, coeffs: self.coeffs.clone() }
    }

    pub fn shifted(mut self, e: i64) -> Self {
        if !self.is_zero() {
            self.low += e;
        }
        self
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Exact division of every coefficient by an integer.
    pub fn div_int(&self, c: &BigInt) -> Self {
        LaurentPoly {
            low: self.low,
            coeffs: self
                .coeffs
                .iter()
                .map(|x| {
                    debug_assert!((x % c).is_zero());
                    x / c
                })
                .collect(),
        }
    }

    /// Positive gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// q -> q^{-1}
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.coeffs.clone();
        c.reverse();
        LaurentPoly { low: -self.high_exp(), coeffs: c }
    }

    /// Sum of absolute values of coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    pub fn eval_rational(&self, q: &BigRational) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if q.is_zero() && self.low < 0 {
            return None;
        }
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + BigRational::from_integer(c.clone());
        }
        Some(acc * pow_rational(q, self.low))
    }

    /// Value at q mod p; q must be nonzero mod p.
    pub fn eval_mod(&self, q: u64, p: u64) -> u64 {
        if self.is_zero() {
            return 0;
        }
        let mut acc = 0u64;
        for c in self.coeffs.iter().rev() {
            acc = modp::add(modp::mul(acc, q, p), modp::reduce(c, p), p);
        }
        modp::mul(acc, modp::pow_signed(q, self.low, p), p)
    }

    /// Coefficients mod p, low degree first.
    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        self.coeffs.iter().map(|c| modp::reduce(c, p)).collect()
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other.clone() } else { other.clone() };
        }
        let lo = self.low.min(other.low);
        let hi = self.high_exp().max(other.high_exp());
        let mut out = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(self.low - lo) as usize + i] = c.clone();
        }
        let off = (other.low - lo) as usize;
        for (i, c) in other.coeffs.iter().enumerate() {
            if negate {
                out[off + i] -= c;
            } else {
                out[off + i] += c;
            }
        }
        Self::from_dense(lo, out)
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(c);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::from_dense(self.low + other.low, out)
    }

    /// Exact quotient self / d, or None when d does not divide self in Z[q, q^-1].
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero());
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.coeffs.len() == 1 {
            let c = &d.coeffs[0];
            if self.coeffs.iter().any(|x| !(x % c).is_zero()) {
                return None;
            }
            return Some(LaurentPoly {
                low: self.low - d.low,
                coeffs: self.coeffs.iter().map(|x| x / c).collect(),
            });
        }
        let (q, r) = poly_divrem(&self.coeffs, &d.coeffs)?;
        if !r.iter().all(|c| c.is_zero()) {
            return None;
        }
        Some(Self::from_dense(self.low - d.low, q))
    }
}

fn pow_rational(q: &BigRational, e: i64) -> BigRational {
    let mut r = BigRational::one();
    let base = if e < 0 { q.recip() } else { q.clone() };
    for _ in 0..e.unsigned_abs() {
        r *= &base;
    }
    r
}

/// Division over Z of dense polynomials; None when a quotient coefficient is not integral.
fn poly_divrem(a: &[BigInt], b: &[BigInt]) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    if a.len() < b.len() {
        return Some((Vec::new(), a.to_vec()));
    }
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let top = &r[k + db];
        if top.is_zero() {
            continue;
        }
        let (c, rem) = top.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &c * bi;
        }
        q[k] = c;
    }
    r.truncate(db);
    Some((q, r))
}

/// Pseudo-remainder of a by b (dense, nonempty, b nonzero leading).
fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    while r.len() > db && !r.is_empty() {
        let top = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &top * bi;
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for c in &v {
        g = g.gcd(c);
        if g.is_one() {
            return v;
        }
    }
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|c| c / &g).collect()
}

/// Gcd in Z[q, q^-1], normalized to lowest exponent 0 and positive leading coefficient.
pub fn gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return normalize_unit(b);
    }
    if b.is_zero() {
        return normalize_unit(a);
    }
    let c = a.content().gcd(&b.content());
    if a.span() == 1 || b.span() == 1 {
        return LaurentPoly::constant(c);
    }
    // A prime not dividing either leading coefficient gives an upper bound on the degree.
    for &p in &modp::PRIMES[..2] {
        if modp::reduce(a.leading(), p) == 0 || modp::reduce(b.leading(), p) == 0 {
            continue;
        }
        if modp::gcd_degree(&a.reduce_mod(p), &b.reduce_mod(p), p) == 0 {
            return LaurentPoly::constant(c);
        }
        break;
    }
    let (mut f, mut g) = (primitive(a.coeffs.clone()), primitive(b.coeffs.clone()));
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    if let Some((_, r)) = poly_divrem(&f, &g) {
        if r.iter().all(|x| x.is_zero()) {
            return normalize_unit(&LaurentPoly::from_dense(0, g)).scale(&c);
        }
    }
    while !g.is_empty() {
        let r = primitive(prem(&f, &g));
        f = g;
        g = r;
        if g.len() == 1 {
            return LaurentPoly::constant(c);
        }
    }
    normalize_unit(&LaurentPoly::from_dense(0, f)).scale(&c)
}

/// Strip powers of q and make the leading coefficient positive.
pub fn normalize_unit(a: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return LaurentPoly::zero();
    }
    let mut coeffs = a.coeffs.clone();
    if a.leading().is_negative() {
        for c in coeffs.iter_mut() {
            *c = -&*c;
        }
    }
    LaurentPoly { low: 0, coeffs }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: LaurentPoly) -> LaurentPoly {
        self.add_impl(&o, false)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        self.add_impl(o, false)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: LaurentPoly) -> LaurentPoly {
        self.add_impl(&o, true)
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self.add_impl(o, true)
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: LaurentPoly) -> LaurentPoly {
        self.mul_ref(&o)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        self.mul_ref(o)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.coeffs.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.low, &self.coeffs).cmp(&(other.low, &other.coeffs))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = a.is_one();
            match e {
                0 => write!(f, "{a}")?,
                _ => {
                    if !unit {
                        write!(f, "{a}*")?;
                    }
                    if e == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(t: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(t.iter().copied())
    }

    #[test]
    fn dense_trims() {
        let p = lp(&[(-2, 0), (0, 3), (5, 0)]);
        assert_eq!(p.low_exp(), 0);
        assert_eq!(p.high_exp(), 0);
        assert!(lp(&[(1, 1), (1, -1)]).is_zero());
    }

    #[test]
    fn gcd_cyclotomic() {
        // (q^2 - 1) and (q^4 - 1) share q^2 - 1
        let a = lp(&[(2, 1), (0, -1)]);
        let b = lp(&[(4, 1), (0, -1)]);
        assert_eq!(gcd(&a, &b), a);
        let c = lp(&[(1, 1), (0, 1)]);
        let d = lp(&[(1, 1), (0, 2)]);
        assert!(gcd(&c, &d).is_one());
    }

    #[test]
    fn gcd_content() {
        let a = lp(&[(1, 4), (0, 2)]);
        let b = lp(&[(0, 6)]);
        assert_eq!(gcd(&a, &b), LaurentPoly::constant(2));
    }

    #[test]
    fn exact_division() {
        let a = lp(&[(2, 1), (0, -1)]);
        let b = lp(&[(1, 1), (0, 1)]);
        assert_eq!(a.div_exact(&b), Some(lp(&[(1, 1), (0, -1)])));
        assert_eq!(b.div_exact(&lp(&[(1, 2)])), None);
    }

    #[test]
    fn display_form() {
        assert_eq!(lp(&[(1, 1), (-1, 1)]).to_string(), "q + q^-1");
        assert_eq!(lp(&[(0, -2), (3, 1)]).to_string(), "q^3 - 2");
    }
}
