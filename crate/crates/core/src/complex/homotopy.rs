use std::collections::BTreeMap;

use serde::Serialize;

use super::{simplify, simplify_tracked, Base, ChainMap, GradedComplex};
use crate::coeff::FieldElem;
use crate::error::{Error, Result};
use crate::linalg::{Echelon, Insert, SparseRow};

/// Solve [δ, h] = f for h on sources with tdeg in `window`.
///
/// Only the equations whose source generator lies in the window are imposed.
pub fn null_homotopy_solve<B: Base>(
    f: &ChainMap<B>,
    x: &GradedComplex<B>,
    y: &GradedComplex<B>,
    window: (i64, i64),
) -> Result<ChainMap<B>> {
    let (lo, hi) = window;
    let t = f.tdeg;
    if let Some(fx) = x.floor {
        if lo < fx {
            return Err(Error::WindowTooSmall(format!("window starts at {lo}, source truncated at {fx}")));
        }
    }
    if let Some(fy) = y.floor {
        if lo + t - 1 < fy {
            return Err(Error::WindowTooSmall(format!("window starts at {lo}, target truncated at {fy}")));
        }
    }
    let sign = if (t - 1).rem_euclid(2) == 0 { FieldElem::one() } else { FieldElem::from_int(-1) };
    let in_window = |i: usize| (lo..=hi).contains(&x.gens[i].tdeg);

    let mut y_by_deg: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (j, g) in y.gens.iter().enumerate() {
        y_by_deg.entry(g.tdeg).or_default().push(j);
    }
    let x_out: Vec<Vec<(usize, &B::Mor)>> = (0..x.len()).map(|i| x.outgoing(i).collect()).collect();
    let mut x_in: Vec<Vec<(usize, &B::Mor)>> = vec![Vec::new(); x.len()];
    for (i, outs) in x_out.iter().enumerate() {
        for (l, d) in outs {
            x_in[*l].push((i, *d));
        }
    }

    // unknowns: (source, target, basis morphism)
    let mut unknowns: Vec<(usize, usize, B::Mor)> = Vec::new();
    for (i, gi) in x.gens.iter().enumerate() {
        let relevant = in_window(i) || x_in[i].iter().any(|(p, _)| in_window(*p));
        if !relevant {
            continue;
        }
        for &j in y_by_deg.get(&(gi.tdeg + t - 1)).map(Vec::as_slice).unwrap_or(&[]) {
            let gj = &y.gens[j];
            let deg = if B::GRADED { gi.qshift - gj.qshift + f.qdeg } else { 0 };
            for phi in B::hom_spanning(&gi.object, &gj.object, deg)? {
                unknowns.push((i, j, phi));
            }
        }
    }

    let mut rows: BTreeMap<(usize, usize, B::Key), SparseRow> = BTreeMap::new();
    let mut put = |i: usize, k: usize, col: usize, m: &B::Mor| {
        for (key, c) in B::coords(m) {
            let row = rows.entry((i, k, key)).or_default();
            let e = row.entry(col).or_insert_with(FieldElem::zero);
            *e += &c;
            if e.is_zero() {
                row.remove(&col);
            }
        }
    };
    for (col, (i, j, phi)) in unknowns.iter().enumerate() {
        if in_window(*i) {
            for (k, d) in y.outgoing(*j) {
                put(*i, k, col, &B::compose(d, phi)?);
            }
        }
        for (p, d) in &x_in[*i] {
            if in_window(*p) {
                put(*p, *j, col, &B::scale(&B::compose(phi, d)?, &-sign.clone()));
            }
        }
    }
    let mut rhs: BTreeMap<(usize, usize, B::Key), FieldElem> = BTreeMap::new();
    for (&(i, k), m) in &f.entries {
        if in_window(i) {
            for (key, c) in B::coords(m) {
                rows.entry((i, k, key.clone())).or_default();
                rhs.insert((i, k, key), c);
            }
        }
    }

    let mut ech = Echelon::new();
    for (key, row) in rows {
        let b = rhs.remove(&key).unwrap_or_default();
        if let Insert::Inconsistent = ech.insert(row, b) {
            let (i, k, _) = key;
            return Err(Error::NotNullHomotopic(format!(
                "component {} -> {} (tdeg {})",
                x.gens[i].id, y.gens[k].id, x.gens[i].tdeg
            )));
        }
    }
    let sol = ech.back_substitute();
    let mut h = ChainMap::zero(t - 1, f.qdeg);
    for (col, c) in sol {
        let (i, j, phi) = &unknowns[col];
        h.add_entry(*i, *j, B::scale(phi, &c))?;
    }
    Ok(h)
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractibilityVerdict {
    pub contractible: bool,
    pub window: (i64, i64),
    /// Generators of the simplified complex inside the window, as (tdeg, qshift).
    pub survivors: Vec<(i64, i64)>,
    pub simplified_size: usize,
    pub method: String,
}

/// Decide whether C is contractible in homological degrees `window`.
pub fn contractible_on_window<B: Base>(c: &GradedComplex<B>, window: (i64, i64)) -> Result<ContractibilityVerdict> {
    let s = simplify(c)?;
    let survivors: Vec<(i64, i64)> = s
        .gens
        .iter()
        .filter(|g| (window.0..=window.1).contains(&g.tdeg))
        .map(|g| (g.tdeg, g.qshift))
        .collect();
    let mut v = ContractibilityVerdict {
        contractible: survivors.is_empty(),
        window,
        survivors,
        simplified_size: s.len(),
        method: "simplify".into(),
    };
    if v.contractible {
        return Ok(v);
    }
    let id = s.identity_map();
    match null_homotopy_solve(&id, &s, &s, window) {
        Ok(_) => {
            v.contractible = true;
            v.method = "homotopy".into();
        }
        Err(Error::NotNullHomotopic(w)) => v.method = format!("obstruction at {w}"),
        Err(e) => return Err(e),
    }
    Ok(v)
}

/// Whether f: X → Y is a homotopy equivalence, judged by contractibility of its cone on `window`.
pub fn is_homotopy_equivalence<B: Base>(
    x: &GradedComplex<B>,
    y: &GradedComplex<B>,
    f: &ChainMap<B>,
    window: (i64, i64),
) -> Result<bool> {
    let cone = GradedComplex::cone(x, y, f)?;
    Ok(contractible_on_window(&cone, window)?.contractible)
}

/// An explicit H with [δ, H] = id on a bounded complex, or NotNullHomotopic.
pub fn contraction<B: Base>(c: &GradedComplex<B>) -> Result<ChainMap<B>> {
    let t = simplify_tracked(c)?;
    if t.complex.is_empty() {
        return Ok(t.homotopy);
    }
    let (lo, hi) = t.complex.tdeg_range().expect("nonempty");
    let s = &t.complex;
    let hs = null_homotopy_solve(&s.identity_map(), s, s, (lo, hi))?;
    t.homotopy.add(&t.from.compose(&hs)?.compose(&t.to)?)
}
