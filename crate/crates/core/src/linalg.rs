//! Exact sparse Gaussian elimination.
//!
//! Pivoting is deterministic: the pivot of a row is its leftmost nonzero
//! column, and free variables are set to zero when solving. Callers that
//! want particular unknowns to be determined (rather than free) order them
//! first.

use std::collections::BTreeMap;

use crate::scalar::{Field, Scalar};

pub type SparseRow = BTreeMap<usize, Scalar>;

/// Row-echelon form built incrementally, one equation at a time.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    /// pivot column -> (row normalised to 1 at the pivot, right-hand side)
    pivots: BTreeMap<usize, (SparseRow, Scalar)>,
    inconsistent: bool,
}

fn axpy(row: &mut SparseRow, factor: &Scalar, other: &SparseRow) {
    for (c, v) in other {
        let delta = factor * v;
        match row.get_mut(c) {
            Some(x) => {
                *x -= &delta;
                if x.is_zero() {
                    row.remove(c);
                }
            }
            None => {
                if !delta.is_zero() {
                    row.insert(*c, -delta);
                }
            }
        }
    }
}

impl Echelon {
    pub fn new(field: Field) -> Self {
        Echelon {
            field,
            pivots: BTreeMap::new(),
            inconsistent: false,
        }
    }

    /// Adds the equation `row · x = rhs`. Returns `false` if it reduced to
    /// `0 = c` with `c ≠ 0`.
    pub fn insert(&mut self, mut row: SparseRow, mut rhs: Scalar) -> bool {
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&lead, lead_val)) = row.first_key_value() else {
                if rhs.is_zero() {
                    return true;
                }
                self.inconsistent = true;
                return false;
            };
            match self.pivots.get(&lead) {
                Some((prow, prhs)) => {
                    let factor = lead_val.clone();
                    axpy(&mut row, &factor, prow);
                    rhs -= &(&factor * prhs);
                }
                None => {
                    let inv = lead_val.inv().expect("leading entry is nonzero");
                    for v in row.values_mut() {
                        *v = &*v * &inv;
                    }
                    rhs = &rhs * &inv;
                    self.pivots.insert(lead, (row, rhs));
                    return true;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// A solution with every free variable set to zero, or `None` if some
    /// inserted equation was inconsistent.
    pub fn solve(&self, ncols: usize) -> Option<Vec<Scalar>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![self.field.zero(); ncols];
        for (&col, (row, rhs)) in self.pivots.iter().rev() {
            let mut value = rhs.clone();
            for (&c, v) in row.range(col + 1..) {
                if !x[c].is_zero() {
                    value -= &(v * &x[c]);
                }
            }
            x[col] = value;
        }
        Some(x)
    }
}

/// Rank of a matrix given by sparse rows.
pub fn rank(field: Field, rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut ech = Echelon::new(field);
    for row in rows {
        ech.insert(row, field.zero());
    }
    ech.rank()
}

/// Solves `A x = b` for `x ∈ field^ncols`; free variables are zero.
pub fn solve(
    field: Field,
    ncols: usize,
    equations: impl IntoIterator<Item = (SparseRow, Scalar)>,
) -> Option<Vec<Scalar>> {
    let mut ech = Echelon::new(field);
    for (row, rhs) in equations {
        if !ech.insert(row, rhs) {
            return None;
        }
    }
    ech.solve(ncols)
}
