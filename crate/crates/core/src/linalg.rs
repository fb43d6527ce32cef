//! Sparse exact Gaussian elimination over Q(q).

use std::collections::BTreeMap;

use crate::coeff::FieldElem;

pub type SparseRow = BTreeMap<usize, FieldElem>;

/// Rough cost of a coefficient, used to pick cheap pivots.
fn weight(c: &FieldElem) -> usize {
    c.num().span() + c.den().span()
}

pub fn axpy(row: &mut SparseRow, a: &FieldElem, other: &SparseRow) {
    for (k, v) in other {
        let add = a * v;
        match row.get_mut(k) {
            Some(x) => {
                *x += &add;
                if x.is_zero() {
                    row.remove(k);
                }
            }
            None => {
                if !add.is_zero() {
                    row.insert(*k, add);
                }
            }
        }
    }
}

/// Rows kept in semi-echelon form: pivot row i has no entries in the pivot columns of rows j < i.
#[derive(Default, Clone)]
pub struct Echelon {
    rows: Vec<(usize, SparseRow, FieldElem)>,
    pivot_of: BTreeMap<usize, usize>,
}

pub enum Insert {
    Pivot(usize),
    Dependent,
    Inconsistent,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.0)
    }

    /// Reduce (row, rhs) against the stored rows.
    pub fn reduce(&self, mut row: SparseRow, mut rhs: FieldElem) -> (SparseRow, FieldElem) {
        for (col, prow, prhs) in &self.rows {
            if let Some(c) = row.get(col).cloned() {
                let neg = -c;
                axpy(&mut row, &neg, prow);
                rhs += &(&neg * prhs);
                debug_assert!(!row.contains_key(col));
            }
        }
        (row, rhs)
    }

    pub fn insert(&mut self, row: SparseRow, rhs: FieldElem) -> Insert {
        let (row, rhs) = self.reduce(row, rhs);
        if row.is_empty() {
            return if rhs.is_zero() { Insert::Dependent } else { Insert::Inconsistent };
        }
        let (&col, _) = row.iter().min_by_key(|(k, v)| (weight(v), **k)).unwrap();
        let inv = row[&col].inv().expect("nonzero pivot");
        let row: SparseRow = row.into_iter().map(|(k, v)| (k, &v * &inv)).collect();
        let rhs = &rhs * &inv;
        self.pivot_of.insert(col, self.rows.len());
        self.rows.push((col, row, rhs));
        Insert::Pivot(col)
    }

    /// A particular solution with all free variables set to zero.
    pub fn back_substitute(&self) -> BTreeMap<usize, FieldElem> {
        let mut x: BTreeMap<usize, FieldElem> = BTreeMap::new();
        for (col, row, rhs) in self.rows.iter().rev() {
            let mut v = rhs.clone();
            for (k, a) in row {
                if k == col {
                    continue;
                }
                if let Some(xk) = x.get(k) {
                    v -= &(a * xk);
                }
            }
            if !v.is_zero() {
                x.insert(*col, v);
            }
        }
        x
    }

    pub fn contains_in_span(&self, row: &SparseRow) -> bool {
        self.reduce(row.clone(), FieldElem::zero()).0.is_empty()
    }
}

/// Rank of a set of sparse vectors.
pub fn rank(rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r, FieldElem::zero());
    }
    e.rank()
}

/// Solve A x = b with A given by rows; None if inconsistent.
pub fn solve(rows: Vec<(SparseRow, FieldElem)>) -> Option<BTreeMap<usize, FieldElem>> {
    let mut e = Echelon::new();
    for (r, b) in rows {
        if let Insert::Inconsistent = e.insert(r, b) {
            return None;
        }
    }
    Some(e.back_substitute())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::qint;

    fn row(v: &[(usize, FieldElem)]) -> SparseRow {
        v.iter().cloned().collect()
    }

    #[test]
    fn solves_small_system() {
        let one = FieldElem::one();
        // x0 + [2] x1 = 1 ; x1 = [3]
        let sys = vec![
            (row(&[(0, one.clone()), (1, qint(2))]), one.clone()),
            (row(&[(1, one.clone())]), qint(3)),
        ];
        let x = solve(sys).unwrap();
        assert_eq!(x[&1], qint(3));
        assert_eq!(x[&0], &one - &(&qint(2) * &qint(3)));
    }

    #[test]
    fn detects_inconsistency() {
        let one = FieldElem::one();
        let sys = vec![(row(&[(0, one.clone())]), one.clone()), (row(&[(0, qint(2))]), one.clone())];
        assert!(solve(sys).is_none());
    }

    #[test]
    fn rank_with_dependency() {
        let r1 = row(&[(0, qint(2)), (1, FieldElem::one())]);
        let r2 = row(&[(0, &qint(2) * &qint(3)), (1, qint(3))]);
        let r3 = row(&[(2, FieldElem::one())]);
        assert_eq!(rank(vec![r1, r2, r3]), 2);
    }
}
