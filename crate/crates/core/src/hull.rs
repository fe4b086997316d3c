//! Exact feasibility for `{x ≥ 0 : A x = b}` by the two-phase simplex method
//! over rationals with Bland's rule, and the convex-hull questions built on
//! it.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Returns some `x ≥ 0` with `a x = b`, or `None` when there is none.
pub fn feasible_point(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> Option<Vec<Rational>> {
    let rows = a.len();
    if rows == 0 {
        return Some(vec![Rational::zero(); cols]);
    }
    // tableau columns: x (cols), artificials (rows), rhs
    let width = cols + rows + 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(rows + 1);
    for i in 0..rows {
        let flip = b[i].is_negative();
        let mut row = vec![Rational::zero(); width];
        for j in 0..cols {
            row[j] = if flip {
                -a[i][j].clone()
            } else {
                a[i][j].clone()
            };
        }
        row[cols + i] = Rational::one();
        row[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    // objective row: minimize Σ artificials, stored as reduced costs
    let mut obj = vec![Rational::zero(); width];
    for row in &t {
        for j in 0..cols {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    while let Some(enter) = (0..cols + rows).find(|&j| t[rows][j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..rows {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((p, _)) = leave else { break };
        pivot(&mut t, p, enter);
        basis[p] = enter;
    }
    if !t[rows][width - 1].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < cols {
            x[bv] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Rational>], p: usize, c: usize) {
    let inv = t[p][c].recip();
    for x in t[p].iter_mut() {
        *x = &*x * &inv;
    }
    let prow = t[p].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != p && !row[c].is_zero() {
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
    }
}

/// Columns of `m` (`rows × cols`) as points; returns `x > 0` with `m x = 0`
/// if one exists. Equivalently the origin lies in the relative interior of
/// the convex hull of the columns. `None` for `cols = 0`.
pub fn strictly_positive_kernel(m: &[Vec<Rational>], cols: usize) -> Option<Vec<Rational>> {
    if cols == 0 {
        return None;
    }
    // x = 1 + s with s ≥ 0: m s = -m 1
    let b: Vec<Rational> = m
        .iter()
        .map(|row| -row.iter().fold(Rational::zero(), |acc, x| acc + x))
        .collect();
    let s = feasible_point(m, &b, cols)?;
    Some(s.into_iter().map(|x| x + Rational::one()).collect())
}

/// Returns `x ≥ 0`, `Σ x = 1`, `m x = 0` if one exists: the origin lies in
/// the convex hull of the columns.
pub fn convex_kernel(m: &[Vec<Rational>], cols: usize) -> Option<Vec<Rational>> {
    if cols == 0 {
        return None;
    }
    let mut a = m.to_vec();
    a.push(vec![Rational::one(); cols]);
    let mut b = vec![Rational::zero(); m.len()];
    b.push(Rational::one());
    feasible_point(&a, &b, cols)
}

/// Whether the columns span the whole row space dimension `rows`.
pub fn spans(m: &[Vec<Rational>], rows: usize) -> bool {
    crate::exact::rank(m) == rows
}
