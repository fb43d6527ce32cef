use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::binomial;
use serde::{Deserialize, Serialize};

use super::{jones_wenzl, TLElement};
use crate::coeff::{qint_ratio, FieldElem};
use crate::error::{Error, Result};
use crate::tangle::FlatTangle;

/// A ±1 sequence with nonnegative partial sums.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AdmissibleSequence {
    entries: Vec<i8>,
}

impl AdmissibleSequence {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        let mut s = 0i64;
        for &e in &entries {
            if e != 1 && e != -1 {
                return Err(Error::NotAdmissible);
            }
            s += e as i64;
            if s < 0 {
                return Err(Error::NotAdmissible);
            }
        }
        Ok(AdmissibleSequence { entries })
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// |ε|, the total sum.
    pub fn weight(&self) -> usize {
        self.entries.iter().map(|&e| e as i64).sum::<i64>() as usize
    }

    pub fn partial_sums(&self) -> Vec<usize> {
        let mut s = 0i64;
        self.entries
            .iter()
            .map(|&e| {
                s += e as i64;
                s as usize
            })
            .collect()
    }
}

/// All admissible sequences of length n in lexicographic order (+1 before -1).
pub fn admissible_sequences(n: usize) -> Vec<AdmissibleSequence> {
    fn rec(prefix: &mut Vec<i8>, sum: i64, n: usize, out: &mut Vec<AdmissibleSequence>) {
        if prefix.len() == n {
            out.push(AdmissibleSequence { entries: prefix.clone() });
            return;
        }
        prefix.push(1);
        rec(prefix, sum + 1, n, out);
        prefix.pop();
        if sum > 0 {
            prefix.push(-1);
            rec(prefix, sum - 1, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), 0, n, &mut out);
    out
}

/// (k+1)/(m+1)·binom(n, m) with m = (n+k)/2.
pub fn catalan_formula(n: usize, k: usize) -> Result<BigInt> {
    if k > n || !(n + k).is_multiple_of(2) {
        return Err(Error::ParityMismatch { n, k });
    }
    let m = (n + k) / 2;
    let b: BigInt = binomial(BigInt::from(n), BigInt::from(m));
    Ok(b * (k + 1) / (m + 1))
}

/// Number of admissible sequences of length n and weight k; cross-checked against the closed formula.
pub fn admissible_count(n: usize, k: usize) -> Result<usize> {
    let formula = catalan_formula(n, k)?;
    let counted = admissible_sequences(n).iter().filter(|e| e.weight() == k).count();
    assert_eq!(BigInt::from(counted), formula, "enumeration disagrees with the closed formula");
    Ok(counted)
}

fn central_cache() -> &'static RwLock<HashMap<usize, Vec<TLElement>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Vec<TLElement>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// c_a ∘ x ∘ c_b, with top: (k, n) and bottom: (n, k) single tangles.
fn sandwich(top: &FlatTangle, x: &TLElement, bottom: &FlatTangle, scale: &FieldElem) -> Result<Vec<(FlatTangle, FieldElem)>> {
    let mut out = Vec::with_capacity(x.len());
    for (s, c) in x.terms() {
        let t = top.compose(&s.compose(bottom)?)?;
        out.push((t, c * scale));
    }
    Ok(out)
}

/// Solve for all p_{n,k} at once.
///
/// Writing p_{n,k} = Σ x_T C_a p_k C_b^∨ over tangles T = C_a C_b^∨ of through-degree k,
/// the system is triangular in through-degree: the through-degree-k part of
/// id − Σ_{l>k} p_{n,l} determines the x_T directly.
fn solve_central(n: usize) -> Result<Vec<TLElement>> {
    let mut out = vec![TLElement::zero(n, n); n + 1];
    let mut residual = TLElement::identity(n);
    let mut k = n as i64;
    while k >= 0 {
        let ku = k as usize;
        let pk = jones_wenzl(ku);
        let mut pieces: HashMap<FlatTangle, Vec<FieldElem>> = HashMap::new();
        for (t, r) in residual.terms() {
            if t.through_degree() != ku {
                continue;
            }
            let (top, bottom) = t.factor_through();
            for (s, c) in sandwich(&top, &pk, &bottom, r)? {
                let c = &c * &super::delta_pow(s.circles());
                pieces.entry(s.without_circles()).or_default().push(c);
            }
        }
        let mut p = TLElement::zero(n, n);
        for (t, cs) in pieces {
            let c = crate::coeff::sum(cs.iter());
            p.add_term(&t, &c);
        }
        residual = residual.sub(&p)?;
        if residual.max_through_degree().is_some_and(|d| d >= ku) {
            return Err(Error::NoSolution(format!("residual keeps through-degree {ku} terms at n = {n}")));
        }
        out[ku] = p;
        k -= 2;
    }
    if !residual.is_zero() {
        return Err(Error::NoSolution(format!("nonzero residual at n = {n}")));
    }
    Ok(out)
}

/// The central idempotent p_{n,k}.
pub fn central_idempotent(n: usize, k: usize) -> Result<TLElement> {
    if k > n || !(n + k).is_multiple_of(2) {
        return Err(Error::ParityMismatch { n, k });
    }
    if let Some(v) = central_cache().read().unwrap().get(&n) {
        return Ok(v[k].clone());
    }
    let v = solve_central(n)?;
    let x = v[k].clone();
    central_cache().write().unwrap().insert(n, v);
    Ok(x)
}

/// p_ε = ∏_i (p_{i, ε_1+…+ε_i} ⊔ id_{n-i}); the product is formed in both orders and compared.
pub fn primitive_idempotent(eps: &AdmissibleSequence) -> Result<TLElement> {
    let n = eps.len();
    let sums = eps.partial_sums();
    let factors: Vec<TLElement> = (1..=n)
        .map(|i| Ok(central_idempotent(i, sums[i - 1])?.pad_right(n - i)))
        .collect::<Result<_>>()?;
    let mut fwd = TLElement::identity(n);
    for f in &factors {
        fwd = fwd.compose(f)?;
    }
    let mut bwd = TLElement::identity(n);
    for f in factors.iter().rev() {
        bwd = bwd.compose(f)?;
    }
    if fwd != bwd {
        return Err(Error::NoSolution("factors of p_ε do not commute".into()));
    }
    Ok(fwd)
}

/// p_ε = y_ε ∘ x_ε built along the path of ε, with x_ε y_ε = p_{|ε|}.
pub fn primitive_idempotent_by_paths(eps: &AdmissibleSequence) -> Result<TLElement> {
    let (x, y) = path_maps(eps)?;
    y.compose(&x)
}

/// x_ε: n → |ε| and y_ε: |ε| → n.
pub fn path_maps(eps: &AdmissibleSequence) -> Result<(TLElement, TLElement)> {
    let mut x = TLElement::identity(0);
    let mut y = TLElement::identity(0);
    let mut j = 0usize;
    for &e in eps.entries() {
        let xi = x.pad_right(1);
        let yi = y.pad_right(1);
        if e > 0 {
            let p = jones_wenzl(j + 1);
            x = p.compose(&xi)?;
            y = yi.compose(&p)?;
            j += 1;
        } else {
            let pj = jones_wenzl(j).pad_right(1);
            let cap = TLElement::cap(j + 1, j)?;
            let cup = TLElement::cup(j + 1, j)?;
            x = cap.compose(&pj)?.compose(&xi)?;
            y = yi.compose(&pj)?.compose(&cup)?.scale(&qint_ratio(j as u32, j as u32 + 1));
            j -= 1;
        }
    }
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::qint;

    fn seq(v: &[i8]) -> AdmissibleSequence {
        AdmissibleSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn two_strand_central() {
        assert_eq!(central_idempotent(2, 2).unwrap(), jones_wenzl(2));
        let e1 = TLElement::e(2, 1).unwrap().scale(&qint(2).inv().unwrap());
        assert_eq!(central_idempotent(2, 0).unwrap(), e1);
    }

    #[test]
    fn central_sum_is_identity() {
        let mut s = TLElement::zero(4, 4);
        for k in [0, 2, 4] {
            s = s.add(&central_idempotent(4, k).unwrap()).unwrap();
        }
        assert_eq!(s, TLElement::identity(4));
        assert!(matches!(central_idempotent(4, 1), Err(Error::ParityMismatch { .. })));
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive_idempotent(&seq(&[1])).unwrap(), TLElement::identity(1));
        assert_eq!(primitive_idempotent(&seq(&[1, 1, 1])).unwrap(), jones_wenzl(3));
        assert_eq!(primitive_idempotent(&seq(&[1, -1])).unwrap(), central_idempotent(2, 0).unwrap());
        assert_eq!(AdmissibleSequence::new(vec![-1, 1]), Err(Error::NotAdmissible));
    }

    #[test]
    fn paths_agree_with_products() {
        for n in 1..=5 {
            for e in admissible_sequences(n) {
                assert_eq!(primitive_idempotent_by_paths(&e).unwrap(), primitive_idempotent(&e).unwrap(), "{e:?}");
            }
        }
    }

    #[test]
    fn catalan_counts() {
        assert_eq!(admissible_count(4, 0).unwrap(), 2);
        assert_eq!(admissible_count(4, 2).unwrap(), 3);
        assert_eq!(admissible_count(4, 4).unwrap(), 1);
        assert!(admissible_count(4, 3).is_err());
    }
}
