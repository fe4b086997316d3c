//! Fiber polytopes of torus weight maps and their lattice-normalized volume.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{det, integer_kernel, lcm_denominators, q, rank, solve_any};
use crate::rep::{Mode, RepSpec};
use crate::{Error, Rational, Result};

/// Largest polytope dimension [`polytope_volume`] triangulates.
pub const VOLUME_DIMENSION_CAP: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeConstraint {
    /// `Σ x_j = k` (projective).
    Equal,
    /// `Σ x_j ≤ k` (affine).
    AtMost,
}

/// `{x ∈ R^n : x ≥ 0, W x = target, Σ x (= or ≤) k}` with `target = -k λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberPolytope {
    pub weights: Vec<Vec<i64>>,
    pub target: Vec<Rational>,
    pub degree: u64,
    pub constraint: DegreeConstraint,
}

impl FiberPolytope {
    pub fn n(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    /// Number of standard-form variables: `n`, plus a slack for `≤`.
    fn width(&self) -> usize {
        self.n() + usize::from(self.constraint == DegreeConstraint::AtMost)
    }

    /// Integer equality rows `[W 0; 1 1]` (slack column last when present).
    fn integer_rows(&self) -> Vec<Vec<i128>> {
        let w = self.width();
        let mut rows: Vec<Vec<i128>> = self
            .weights
            .iter()
            .map(|row| {
                let mut r: Vec<i128> = row.iter().map(|&x| i128::from(x)).collect();
                r.resize(w, 0);
                r
            })
            .collect();
        rows.push(vec![1; w]);
        rows
    }

    fn standard_form(&self) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let a = self
            .integer_rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| Rational::from_integer(BigInt::from(x)))
                    .collect()
            })
            .collect();
        let mut b = self.target.clone();
        b.push(q(self.degree as i64));
        (a, b)
    }

    /// Vertices in standard-form coordinates (slack included), sorted.
    pub fn vertices(&self) -> Vec<Vec<Rational>> {
        let (a, b) = self.standard_form();
        let w = self.width();
        let r = rank(&a);
        let mut out: Vec<Vec<Rational>> = Vec::new();
        let mut cols = Vec::with_capacity(r);
        choose(w, r, 0, &mut cols, &mut |basis: &[usize]| {
            let sub: Vec<Vec<Rational>> = a
                .iter()
                .map(|row| basis.iter().map(|&j| row[j].clone()).collect())
                .collect();
            if rank(&sub) != r {
                return;
            }
            let Some(xb) = solve_any(&sub, &b) else {
                return;
            };
            if xb.iter().any(Signed::is_negative) {
                return;
            }
            let mut x = vec![Rational::zero(); w];
            for (&j, v) in basis.iter().zip(xb) {
                x[j] = v;
            }
            if !out.contains(&x) {
                out.push(x);
            }
        });
        out.sort();
        out
    }

    pub fn is_empty(&self) -> bool {
        crate::hull::feasible_point(
            &self.standard_form().0,
            &self.standard_form().1,
            self.width(),
        )
        .is_none()
    }

    /// Dimension of the affine span (`None` when empty).
    pub fn dimension(&self) -> Option<usize> {
        let v = self.vertices();
        let first = v.first()?;
        Some(affine_rank(&v.iter().collect::<Vec<_>>(), first))
    }

    /// Exact number of integer points.
    pub fn lattice_count(&self) -> Result<u128> {
        let mut cols: Vec<Vec<i128>> = (0..self.n())
            .map(|j| self.weights.iter().map(|row| i128::from(row[j])).collect())
            .collect();
        if self.constraint == DegreeConstraint::AtMost {
            cols.push(vec![0; self.weights.len()]);
        }
        let mut target = Vec::with_capacity(self.target.len());
        for t in &self.target {
            if !t.is_integer() {
                return Ok(0);
            }
            target.push(t.to_integer().to_i128().ok_or(Error::CountOverflow)?);
        }
        count_compositions(&cols, &target, self.degree)
    }
}

fn choose(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for j in start..n {
        if n - j < k - cur.len() {
            break;
        }
        cur.push(j);
        choose(n, k, j + 1, cur, f);
        cur.pop();
    }
}

fn affine_rank(points: &[&Vec<Rational>], base: &[Rational]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let w = base.len();
    // columns = difference vectors
    let m: Vec<Vec<Rational>> = (0..w)
        .map(|i| points.iter().map(|p| &p[i] - &base[i]).collect())
        .collect();
    rank(&m)
}

/// Number of `a ∈ N^m` with `|a| = k` and `Σ a_j c_j = target`, where
/// `c_j` are the columns. Dynamic programming over coordinates with
/// reachability pruning; all arithmetic checked.
pub fn count_compositions(cols: &[Vec<i128>], target: &[i128], k: u64) -> Result<u128> {
    let m = cols.len();
    let d = target.len();
    if m == 0 {
        return Ok(u128::from(k == 0 && target.iter().all(|&t| t == 0)));
    }
    let mut suf_min = vec![vec![i128::MAX; m + 1]; d];
    let mut suf_max = vec![vec![i128::MIN; m + 1]; d];
    for r in 0..d {
        for j in (0..m).rev() {
            suf_min[r][j] = suf_min[r][j + 1].min(cols[j][r]);
            suf_max[r][j] = suf_max[r][j + 1].max(cols[j][r]);
        }
    }
    let kk = i128::from(u32::try_from(k).map_err(|_| Error::CountOverflow)?);
    let reachable = |j: usize, partial: &[i128], used: i128| -> bool {
        let rem = kk - used;
        if j == m {
            return rem == 0 && partial.iter().zip(target).all(|(p, t)| p == t);
        }
        (0..d).all(|r| {
            let lo = partial[r] + rem * suf_min[r][j];
            let hi = partial[r] + rem * suf_max[r][j];
            lo <= target[r] && target[r] <= hi
        })
    };
    let mut states: BTreeMap<(Vec<i128>, i128), u128> = BTreeMap::new();
    if reachable(0, &vec![0; d], 0) {
        states.insert((vec![0; d], 0), 1);
    }
    for j in 0..m {
        let mut next: BTreeMap<(Vec<i128>, i128), u128> = BTreeMap::new();
        let last = j + 1 == m;
        for ((partial, used), ways) in states {
            let lo = if last { kk - used } else { 0 };
            for x in lo..=(kk - used) {
                let p: Vec<i128> = partial
                    .iter()
                    .zip(&cols[j])
                    .map(|(a, c)| a + x * c)
                    .collect();
                if !reachable(j + 1, &p, used + x) {
                    continue;
                }
                let slot = next.entry((p, used + x)).or_insert(0);
                *slot = slot.checked_add(ways).ok_or(Error::CountOverflow)?;
            }
        }
        states = next;
    }
    states.values().try_fold(0u128, |acc, &w| {
        acc.checked_add(w).ok_or(Error::CountOverflow)
    })
}

/// Fiber of the weight map at `-k λ` inside the degree-`k` simplex
/// (projective) or the degree-`≤ k` corner simplex (affine).
pub fn fiber_polytope(rep: &RepSpec, lambda: &[Rational], k: u64) -> Result<FiberPolytope> {
    let weights = rep.torus_weights("a torus representation")?;
    if lambda.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: weights.len(),
            got: lambda.len(),
        });
    }
    let kq = Rational::from_integer(BigInt::from(k));
    Ok(FiberPolytope {
        weights: weights.to_vec(),
        target: lambda.iter().map(|l| -(l * &kq)).collect(),
        degree: k,
        constraint: match rep.mode() {
            Mode::Projective => DegreeConstraint::Equal,
            Mode::Affine => DegreeConstraint::AtMost,
        },
    })
}

/// Lattice-normalized volume of `P` in its affine span: `D!` times the
/// Euclidean volume measured in a basis of the direction lattice
/// `Z^n ∩ span(P - P)`, so a unimodular simplex has volume 1 and a point
/// has volume 1.
///
/// The polytope is triangulated by pulling its first vertex recursively
/// through facets, which are read off from the coordinate hyperplanes
/// `x_j = 0`.
pub fn polytope_volume(p: &FiberPolytope) -> Result<Rational> {
    let verts = p.vertices();
    if verts.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let w = verts[0].len();
    let dim = affine_rank(&verts.iter().collect::<Vec<_>>(), &verts[0]);
    if dim > VOLUME_DIMENSION_CAP {
        return Err(Error::DimensionTooLarge {
            dim,
            cap: VOLUME_DIMENSION_CAP,
        });
    }
    if dim == 0 {
        return Ok(Rational::one());
    }
    let forced: Vec<usize> = (0..w)
        .filter(|&j| verts.iter().all(|v| v[j].is_zero()))
        .collect();
    let mut rows = p.integer_rows();
    for &j in &forced {
        let mut e = vec![0i128; w];
        e[j] = 1;
        rows.push(e);
    }
    let basis = integer_kernel(&rows, w);
    debug_assert_eq!(basis.len(), dim);
    let bm: Vec<Vec<Rational>> = (0..w)
        .map(|i| {
            basis
                .iter()
                .map(|b| Rational::from_integer(BigInt::from(b[i])))
                .collect()
        })
        .collect();
    let coords: Vec<Vec<Rational>> = verts
        .iter()
        .map(|v| {
            let diff: Vec<Rational> = v.iter().zip(&verts[0]).map(|(a, b)| a - b).collect();
            solve_any(&bm, &diff).expect("vertex differences lie in the direction lattice span")
        })
        .collect();
    let all: Vec<usize> = (0..verts.len()).collect();
    let mut simplices = Vec::new();
    pull(&verts, &all, dim, &mut simplices);
    let mut total = Rational::zero();
    for s in simplices {
        let m: Vec<Vec<Rational>> = (0..dim)
            .map(|r| {
                s[1..]
                    .iter()
                    .map(|&i| &coords[i][r] - &coords[s[0]][r])
                    .collect()
            })
            .collect();
        total += det(&m).abs();
    }
    Ok(total)
}

/// Pulling triangulation of the face spanned by `face` (vertex indices) of
/// dimension `dim`.
fn pull(verts: &[Vec<Rational>], face: &[usize], dim: usize, out: &mut Vec<Vec<usize>>) {
    if dim == 0 {
        out.push(vec![face[0]]);
        return;
    }
    let apex = face[0];
    let w = verts[0].len();
    let mut seen: Vec<Vec<usize>> = Vec::new();
    for j in 0..w {
        if verts[apex][j].is_zero() {
            continue;
        }
        let facet: Vec<usize> = face
            .iter()
            .copied()
            .filter(|&i| verts[i][j].is_zero())
            .collect();
        if facet.is_empty() || seen.contains(&facet) {
            continue;
        }
        let pts: Vec<&Vec<Rational>> = facet.iter().map(|&i| &verts[i]).collect();
        if affine_rank(&pts, &verts[facet[0]]) != dim - 1 {
            continue;
        }
        seen.push(facet.clone());
        let mut sub = Vec::new();
        pull(verts, &facet, dim - 1, &mut sub);
        for mut s in sub {
            s.insert(0, apex);
            out.push(s);
        }
    }
}

/// Smallest positive integer `q` with `q P` a lattice polytope.
pub fn vertex_period(p: &FiberPolytope) -> BigInt {
    let verts = p.vertices();
    lcm_denominators(verts.iter().flatten())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{build_rep, KindConfig, RepConfig};

    fn torus(weights: &[&[i64]], mode: Mode) -> RepSpec {
        build_rep(&RepConfig {
            kind: KindConfig::Torus {
                weights: weights
                    .iter()
                    .map(|r| r.iter().map(|&x| q(x)).collect())
                    .collect(),
            },
            mode,
            level: vec![],
        })
        .unwrap()
    }

    #[test]
    fn fiber_examples() {
        let p = fiber_polytope(&torus(&[&[1, -1]], Mode::Projective), &[q(0)], 2).unwrap();
        assert_eq!(p.vertices(), vec![vec![q(1), q(1)]]);
        assert_eq!(polytope_volume(&p).unwrap(), q(1));
        let p = fiber_polytope(&torus(&[&[1, 0, -1]], Mode::Projective), &[q(0)], 1).unwrap();
        assert_eq!(
            p.vertices(),
            vec![
                vec![q(0), q(1), q(0)],
                vec![
                    Rational::new(1.into(), 2.into()),
                    q(0),
                    Rational::new(1.into(), 2.into())
                ]
            ]
        );
        let p = fiber_polytope(&torus(&[&[1, 0, -1]], Mode::Projective), &[q(2)], 3).unwrap();
        assert!(p.is_empty());
        assert_eq!(polytope_volume(&p), Err(Error::EmptyPolytope));
        assert_eq!(p.lattice_count().unwrap(), 0);
    }

    #[test]
    fn affine_resonance_segment() {
        // {a1 = a2, a1 + a2 ≤ k}: segment from 0 to (k/2, k/2), lattice length k/2
        let rep = torus(&[&[1, -1]], Mode::Affine);
        for k in 1..7u64 {
            let p = fiber_polytope(&rep, &[q(0)], k).unwrap();
            assert_eq!(
                polytope_volume(&p).unwrap(),
                Rational::new(BigInt::from(k), BigInt::from(2))
            );
            assert_eq!(p.lattice_count().unwrap(), u128::from(k / 2 + 1));
        }
    }

    #[test]
    fn unit_segment_and_simplex() {
        // Σx = 1 in R^2 is a unimodular segment; Σx ≤ 1 in R^3 a unimodular simplex
        let seg = FiberPolytope {
            weights: vec![vec![0, 0]],
            target: vec![q(0)],
            degree: 1,
            constraint: DegreeConstraint::Equal,
        };
        assert_eq!(polytope_volume(&seg).unwrap(), q(1));
        let simplex = FiberPolytope {
            weights: vec![vec![0, 0, 0]],
            target: vec![q(0)],
            degree: 1,
            constraint: DegreeConstraint::AtMost,
        };
        assert_eq!(polytope_volume(&simplex).unwrap(), q(1));
        // 2 × standard square pyramid-free case: Σx ≤ 2 in R^2 has normalized area 4
        let tri = FiberPolytope {
            weights: vec![vec![0, 0]],
            target: vec![q(0)],
            degree: 2,
            constraint: DegreeConstraint::AtMost,
        };
        assert_eq!(polytope_volume(&tri).unwrap(), q(4));
        assert_eq!(tri.lattice_count().unwrap(), 6);
    }

    #[test]
    fn square_needs_two_simplices() {
        // x1 - x2 + x3 - x4 = 0, Σx = 2: a square with vertices e_i + e_j
        // (i odd, j even); normalized area 2
        let sq = FiberPolytope {
            weights: vec![vec![1, -1, 1, -1]],
            target: vec![q(0)],
            degree: 2,
            constraint: DegreeConstraint::Equal,
        };
        assert_eq!(sq.vertices().len(), 4);
        assert_eq!(polytope_volume(&sq).unwrap(), q(2));
        assert_eq!(sq.lattice_count().unwrap(), 4);
    }

    #[test]
    fn counting_matches_brute_force() {
        let cols = vec![vec![1, 0], vec![0, 1], vec![-1, -1], vec![2, -1]];
        for k in 0..7u64 {
            let mut brute = 0u128;
            for a in 0..=k as i128 {
                for b in 0..=k as i128 - a {
                    for c in 0..=k as i128 - a - b {
                        let d = k as i128 - a - b - c;
                        if a - c + 2 * d == 1 && b - c - d == 0 {
                            brute += 1;
                        }
                    }
                }
            }
            assert_eq!(count_compositions(&cols, &[1, 0], k).unwrap(), brute);
        }
    }
}
