//! Word-sized prime field arithmetic used by gcd shortcuts and identity certificates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

/// Primes just below 2^61.
pub const PRIMES: [u64; 8] = [
    2305843009213693951,
    2305843009213693921,
    2305843009213693907,
    2305843009213693723,
    2305843009213693693,
    2305843009213693669,
    2305843009213693613,
    2305843009213693561,
];

#[inline]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow(a, p - 2, p)
}

pub fn reduce(c: &BigInt, p: u64) -> u64 {
    if let Some(v) = c.to_i64() {
        let r = v.rem_euclid(p as i64);
        return r as u64;
    }
    let m = c.mod_floor(&BigInt::from(p));
    m.to_u64().unwrap()
}

/// q^e mod p for a possibly negative exponent.
pub fn pow_signed(q: u64, e: i64, p: u64) -> u64 {
    if e >= 0 {
        pow(q, e as u64, p)
    } else {
        inv(pow(q, (-e) as u64, p), p)
    }
}

/// Degree of gcd of two dense polynomials over F_p (low degree first).
pub fn gcd_degree(a: &[u64], b: &[u64], p: u64) -> usize {
    let mut f = trim(a.to_vec());
    let mut g = trim(b.to_vec());
    if f.is_empty() {
        return g.len().saturating_sub(1);
    }
    while !g.is_empty() {
        let r = rem(&f, &g, p);
        f = g;
        g = r;
    }
    f.len() - 1
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    let li = inv(*g.last().unwrap(), p);
    while r.len() > dg {
        let c = mul(*r.last().unwrap(), li, p);
        let shift = r.len() - 1 - dg;
        if c != 0 {
            for (i, gi) in g.iter().enumerate() {
                r[shift + i] = sub(r[shift + i], mul(c, *gi, p), p);
            }
        }
        r.pop();
        r = trim(r);
    }
    r
}

/// Absolute value bound check helper.
pub fn bits(c: &BigInt) -> u64 {
    c.abs().bits()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let p = PRIMES[0];
        for a in [2u64, 3, 12345, p - 1] {
            assert_eq!(mul(a, inv(a, p), p), 1);
        }
    }

    #[test]
    fn gcd_of_shared_factor() {
        let p = PRIMES[1];
        // (x+1)(x+2) and (x+1)(x+3)
        let a = [2, 3, 1];
        let b = [3, 4, 1];
        assert_eq!(gcd_degree(&a, &b, p), 1);
        assert_eq!(gcd_degree(&[1, 1], &[2, 1], p), 0);
    }

    #[test]
    fn reduce_negative() {
        let p = PRIMES[2];
        assert_eq!(reduce(&BigInt::from(-1), p), p - 1);
    }
}
