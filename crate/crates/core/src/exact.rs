//! Exact integer and rational linear algebra.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Rational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn q_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut work = m.to_vec();
    rref(&mut work).len()
}

pub fn rank_int(m: &[Vec<i64>]) -> usize {
    rank(&to_rational(m))
}

pub fn to_rational(m: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    m.iter()
        .map(|row| row.iter().map(|&x| q(x)).collect())
        .collect()
}

/// Basis of the rational null space `{x : m x = 0}`.
pub fn kernel(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut work = m.to_vec();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); cols];
            x[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -work[r][f].clone();
            }
            x
        })
        .collect()
}

/// Solves `m x = b` when the system is consistent (any solution).
pub fn solve_any(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][cols].clone();
    }
    Some(x)
}

/// Determinant of a square rational matrix.
pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c].clone();
        let inv = a[c][c].recip();
        for i in (c + 1)..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let delta = &f * &a[c][j];
                a[i][j] -= delta;
            }
        }
    }
    d
}

/// Scales a rational vector to the primitive integer vector on its ray.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let l = lcm_denominators(v);
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Z-basis of the integer kernel lattice `{x ∈ Z^cols : m x = 0}`.
///
/// Column operations by unimodular transforms reduce `m` to column echelon
/// form; the transform columns matching the zero columns span the kernel
/// lattice, which is therefore saturated.
pub fn integer_kernel(m: &[Vec<i128>], cols: usize) -> Vec<Vec<i128>> {
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut u: Vec<Vec<i128>> = (0..cols)
        .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
        .collect();
    // u is stored by columns: u[c] is column c of the transform.
    let col_op =
        |a: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, dst: usize, src: usize, f: i128| {
            for row in a.iter_mut() {
                row[dst] -= f * row[src];
            }
            for k in 0..cols {
                let s = u[src][k];
                u[dst][k] -= f * s;
            }
        };
    let swap_cols = |a: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        u.swap(i, j);
    };
    let mut p = 0;
    for r in 0..a.len() {
        if p == cols {
            break;
        }
        // smallest nonzero |entry| among columns p.. in row r
        while let Some(best) = (p..cols)
            .filter(|&c| a[r][c] != 0)
            .min_by_key(|&c| a[r][c].abs())
        {
            swap_cols(&mut a, &mut u, p, best);
            let mut done = true;
            for c in (p + 1)..cols {
                if a[r][c] != 0 {
                    let f = a[r][c].div_euclid(a[r][p]);
                    col_op(&mut a, &mut u, c, p, f);
                    if a[r][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[r][p] != 0 {
            p += 1;
        }
    }
    (p..cols).map(|c| u[c].clone()).collect()
}

/// Canonical row Hermite normal form of the lattice spanned by `rows`
/// (zero rows dropped). Equal lattices give equal outputs.
pub fn hermite_rows(rows: &[Vec<i128>], cols: usize) -> Vec<Vec<i128>> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .cloned()
        .collect();
    let mut out_rows = 0;
    for c in 0..cols {
        if out_rows == a.len() {
            break;
        }
        while let Some(best) = (out_rows..a.len())
            .filter(|&i| a[i][c] != 0)
            .min_by_key(|&i| a[i][c].abs())
        {
            a.swap(out_rows, best);
            let mut done = true;
            for i in (out_rows + 1)..a.len() {
                if a[i][c] != 0 {
                    let f = a[i][c].div_euclid(a[out_rows][c]);
                    for k in 0..cols {
                        let s = a[out_rows][k];
                        a[i][k] -= f * s;
                    }
                    if a[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if out_rows < a.len() && a[out_rows][c] != 0 {
            if a[out_rows][c] < 0 {
                for x in a[out_rows].iter_mut() {
                    *x = -*x;
                }
            }
            let piv = a[out_rows][c];
            for i in 0..out_rows {
                let f = a[i][c].div_euclid(piv);
                if f != 0 {
                    for k in 0..cols {
                        let s = a[out_rows][k];
                        a[i][k] -= f * s;
                    }
                }
            }
            out_rows += 1;
        }
    }
    a.truncate(out_rows);
    a
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

pub fn abs_q(x: &Rational) -> Rational {
    x.abs()
}
