//! Smith and Hermite normal forms over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// `u · a · v = d` with `u`, `v` unimodular and `d` diagonal,
/// `d_1 | d_2 | …`, all diagonal entries non-negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Pivot rule: the entry of smallest nonzero absolute value in the trailing
/// submatrix, first in row-major order. Already-reduced pivots are left in
/// place, so the identity decomposes with `u = v = 1`.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_entry(&d, t) else {
                return SmithDecomposition { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = -(&d[(i, t)] / &d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = -(&d[(t, j)] / &d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let offending = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match offending {
                Some(i) => {
                    let one = BigInt::from(1);
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, d, v }
}

fn smallest_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Row-style Hermite normal form: pivots positive, entries above a pivot
/// reduced into `[0, pivot)`, zero rows last. Unique for the row lattice.
pub fn hermite_normal_form(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let (rows, cols) = (h.rows(), h.cols());
    let mut pivot_row = 0;
    for j in 0..cols {
        if pivot_row == rows {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (pivot_row..rows).filter(|&i| !h[(i, j)].is_zero()).collect();
            let Some(&smallest) = nonzero.iter().min_by_key(|&&i| h[(i, j)].abs()) else {
                break;
            };
            h.swap_rows(pivot_row, smallest);
            if nonzero.len() == 1 {
                break;
            }
            for i in pivot_row + 1..rows {
                let q = -(&h[(i, j)] / &h[(pivot_row, j)]);
                h.add_row_multiple(i, pivot_row, &q);
            }
        }
        if h[(pivot_row, j)].is_zero() {
            continue;
        }
        if h[(pivot_row, j)].is_negative() {
            h.negate_row(pivot_row);
        }
        for i in 0..pivot_row {
            let q = -h[(i, j)].div_floor(&h[(pivot_row, j)]);
            h.add_row_multiple(i, pivot_row, &q);
        }
        pivot_row += 1;
    }
    h
}
