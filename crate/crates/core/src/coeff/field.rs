use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::laurent::{gcd, LaurentPoly};
use crate::error::{Error, Result};
use crate::modp;

/// Element of Q(q) as a reduced fraction of Laurent polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Default for FieldElem {
    fn default() -> Self {
        Self::zero()
    }
}

impl FieldElem {
    pub fn zero() -> Self {
        FieldElem { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        FieldElem { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        FieldElem { num: LaurentPoly::constant(c), den: LaurentPoly::one() }
    }

    pub fn q_pow(e: i64) -> Self {
        FieldElem { num: LaurentPoly::q_pow(e), den: LaurentPoly::one() }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        FieldElem { num: p, den: LaurentPoly::one() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::new(LaurentPoly::constant(r.numer().clone()), LaurentPoly::constant(r.denom().clone()))
            .expect("rational denominators are nonzero")
    }

    /// num / den reduced to canonical form.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Ok(Self::finish(num, den))
    }

    /// Normalize a coprime pair: den gets lowest exponent 0 and positive leading coefficient.
    fn finish(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let shift = -den.low_exp();
        let (mut num, mut den) = (num.shifted(shift), den.shifted(shift));
        if den.leading().is_negative() {
            num = -num;
            den = -den;
        }
        FieldElem { num, den }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// Rational constant value, if the element does not depend on q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(BigRational::new(n.clone(), d.clone()))
    }

    /// c * q^e with c a nonzero rational; such elements are units that cancel cheaply.
    pub fn as_monomial(&self) -> Option<(BigRational, i64)> {
        if self.num.is_monomial() && self.den.as_constant().is_some() {
            let (e, c) = self.num.terms().next().unwrap();
            Some((BigRational::new(c.clone(), self.den.as_constant().unwrap().clone()), e))
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::finish(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// q -> q^{-1}
    pub fn bar(&self) -> Self {
        Self::new(self.num.bar(), self.den.bar()).unwrap()
    }

    pub fn mul_q_pow(&self, e: i64) -> Self {
        FieldElem { num: self.num.shift(e), den: self.den.clone() }
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        if self.den.span() == 1 {
            return Self::new(self.num.scale(c), self.den.clone()).unwrap();
        }
        let g = num_integer::Integer::gcd(c, &self.den.content());
        if g.is_one() {
            FieldElem { num: self.num.scale(c), den: self.den.clone() }
        } else {
            FieldElem { num: self.num.scale(&(c / &g)), den: self.den.div_int(&g) }
        }
    }

    pub fn specialize(&self, q0: &BigRational) -> Result<BigRational> {
        let d = self.den.eval_rational(q0).ok_or_else(|| Error::PoleAtPoint(q0.to_string()))?;
        if d.is_zero() {
            return Err(Error::PoleAtPoint(q0.to_string()));
        }
        let n = self.num.eval_rational(q0).ok_or_else(|| Error::PoleAtPoint(q0.to_string()))?;
        Ok(n / d)
    }

    /// Value mod p, or None if the denominator vanishes there.
    pub fn eval_mod(&self, q: u64, p: u64) -> Option<u64> {
        let d = self.den.eval_mod(q, p);
        if d == 0 {
            return None;
        }
        Some(modp::mul(self.num.eval_mod(q, p), modp::inv(d, p), p))
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other.clone() } else { other.clone() };
        }
        let b = if negate { -other.num.clone() } else { other.num.clone() };
        if self.den == other.den {
            let n = &self.num + &b;
            if self.den.is_one() {
                return FieldElem { num: n, den: LaurentPoly::one() };
            }
            return Self::new(n, self.den.clone()).unwrap();
        }
        if self.den.is_one() {
            return Self::finish(&(&self.num * &other.den) + &b, other.den.clone());
        }
        if other.den.is_one() {
            return Self::finish(&self.num + &(&b * &self.den), self.den.clone());
        }
        let g = gcd(&self.den, &other.den);
        if g.is_one() {
            let n = &(&self.num * &other.den) + &(&b * &self.den);
            return Self::finish(n, &self.den * &other.den);
        }
        let d1 = self.den.div_exact(&g).unwrap();
        let d2 = other.den.div_exact(&g).unwrap();
        let n = &(&self.num * &d2) + &(&b * &d1);
        if n.is_zero() {
            return Self::zero();
        }
        let h = gcd(&n, &g);
        if h.is_one() {
            Self::finish(n, &(&d1 * &d2) * &g)
        } else {
            let g2 = g.div_exact(&h).unwrap();
            Self::finish(n.div_exact(&h).unwrap(), &(&d1 * &d2) * &g2)
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return FieldElem { num: &self.num * &other.num, den: LaurentPoly::one() };
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let (a, d) = if g1.is_one() {
            (self.num.clone(), other.den.clone())
        } else {
            (self.num.div_exact(&g1).unwrap(), other.den.div_exact(&g1).unwrap())
        };
        let (c, b) = if g2.is_one() {
            (other.num.clone(), self.den.clone())
        } else {
            (other.num.div_exact(&g2).unwrap(), self.den.div_exact(&g2).unwrap())
        };
        Self::finish(&a * &c, &b * &d)
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        self.add_impl(o, false)
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, o: FieldElem) -> FieldElem {
        self.add_impl(&o, false)
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        self.add_impl(o, true)
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, o: FieldElem) -> FieldElem {
        self.add_impl(&o, true)
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        self.mul_impl(o)
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, o: FieldElem) -> FieldElem {
        self.mul_impl(&o)
    }
}

impl AddAssign<&FieldElem> for FieldElem {
    fn add_assign(&mut self, o: &FieldElem) {
        *self = self.add_impl(o, false);
    }
}

impl SubAssign<&FieldElem> for FieldElem {
    fn sub_assign(&mut self, o: &FieldElem) {
        *self = self.add_impl(o, true);
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { num: -self.num, den: self.den }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -self.clone()
    }
}

impl From<i64> for FieldElem {
    fn from(c: i64) -> Self {
        FieldElem::from_int(c)
    }
}

impl From<LaurentPoly> for FieldElem {
    fn from(p: LaurentPoly) -> Self {
        FieldElem::from_poly(p)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Sum of many fractions over their least common denominator with one final reduction.
pub fn sum<'a, I: IntoIterator<Item = &'a FieldElem>>(items: I) -> FieldElem {
    let items: Vec<&FieldElem> = items.into_iter().filter(|x| !x.is_zero()).collect();
    if items.len() <= 2 {
        let mut acc = FieldElem::zero();
        for x in items {
            acc += x;
        }
        return acc;
    }
    let mut den = LaurentPoly::one();
    let mut seen: Vec<&LaurentPoly> = Vec::new();
    for x in &items {
        if !seen.contains(&x.den()) {
            seen.push(x.den());
            if den.div_exact(x.den()).is_none() {
                den = lcm(&den, x.den());
            }
        }
    }
    let factors: Vec<LaurentPoly> = seen.iter().map(|d| den.div_exact(d).expect("multiple")).collect();
    let mut num = LaurentPoly::zero();
    for x in &items {
        let i = seen.iter().position(|d| *d == x.den()).unwrap();
        num = &num + &(x.num() * &factors[i]);
    }
    FieldElem::new(num, den).expect("nonzero denominator")
}

/// Least common multiple in Z[q, q^-1], normalized like a denominator.
pub fn lcm(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let g = gcd(a, b);
    super::laurent::normalize_unit(&(a * &b.div_exact(&g).expect("gcd divides")))
}
