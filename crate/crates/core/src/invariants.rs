//! Torus invariant rings, the Hilbert map, and orbit-type strata of the zero
//! level.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::exact::{
    hermite_rows, integer_kernel, kernel, lcm_denominators, primitive_integer, q, rank,
};
use crate::flow::{minimize_kempf_ness, FlowOptions, KempfNessStatus};
use crate::hull::strictly_positive_kernel;
use crate::rep::{Mode, RepSpec, StateVector};
use crate::{Complex, Error, Rational, Result};

/// Default node budget for the degree-by-degree enumeration.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 50_000_000;
/// Largest `n` for which all support patterns are enumerated.
type Lattice = Vec<Vec<i128>>;

pub const MAX_STRATA_COORDINATES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialExponent {
    pub exps: Vec<u32>,
    /// `W · exps` with the unshifted weights.
    pub weight: Vec<i64>,
    pub degree: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completeness {
    /// Every minimal generator has degree at most the cap.
    Certified,
    /// Generators of degree up to `needed_degree` may be missing.
    Truncated { needed_degree: u32 },
}

/// Minimal generators of the monoid `{a ∈ N^n : Σ a_j (w_j + λ) = 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertBasis {
    pub generators: Vec<MonomialExponent>,
    pub degree_cap: u32,
    pub completeness: Completeness,
    /// Primitive generators of the extreme rays of `{a ≥ 0 : Σ a_j (w_j + λ) = 0}`.
    pub extreme_rays: Vec<Vec<u32>>,
}

impl HilbertBasis {
    pub fn is_certified(&self) -> bool {
        self.completeness == Completeness::Certified
    }
}

/// Integer matrix `L (w_j + λ)` (rows = Lie algebra coordinates) where `L`
/// clears the denominators of `λ`.
pub(crate) fn shifted_integer_matrix(rep: &RepSpec) -> Result<Vec<Vec<i128>>> {
    let weights = rep.torus_weights("a torus representation")?;
    let l = lcm_denominators(rep.level());
    let lq = Rational::from_integer(l);
    let mut out = Vec::with_capacity(weights.len());
    for (row, lam) in weights.iter().zip(rep.level()) {
        let shift = (lam * &lq).to_integer();
        let mut r = Vec::with_capacity(row.len());
        for &w in row {
            let x = BigInt::from(w) * lq.to_integer() + &shift;
            r.push(x.to_i128().ok_or(Error::CountOverflow)?);
        }
        out.push(r);
    }
    Ok(out)
}

/// All `a ∈ N^n` with `|a| = k` and `M a = 0`, in lexicographic order.
pub(crate) fn zero_weight_exponents(
    m: &[Vec<i128>],
    n: usize,
    k: u32,
    budget: &mut u128,
) -> Result<Vec<Vec<u32>>> {
    let d = m.len();
    // suffix minima and maxima per row for pruning
    let mut suf_min = vec![vec![0i128; n + 1]; d];
    let mut suf_max = vec![vec![0i128; n + 1]; d];
    for r in 0..d {
        suf_min[r][n] = i128::MAX;
        suf_max[r][n] = i128::MIN;
        for j in (0..n).rev() {
            suf_min[r][j] = suf_min[r][j + 1].min(m[r][j]);
            suf_max[r][j] = suf_max[r][j + 1].max(m[r][j]);
        }
    }
    let mut out = Vec::new();
    let mut a = vec![0u32; n];
    let mut partial = vec![0i128; d];
    let budget_start = *budget;
    #[allow(clippy::too_many_arguments)]
    fn go(
        j: usize,
        rem: u32,
        n: usize,
        m: &[Vec<i128>],
        suf_min: &[Vec<i128>],
        suf_max: &[Vec<i128>],
        a: &mut Vec<u32>,
        partial: &mut Vec<i128>,
        out: &mut Vec<Vec<u32>>,
        budget: &mut u128,
        start: u128,
    ) -> Result<()> {
        if *budget == 0 {
            return Err(Error::CombinatorialBudgetExceeded {
                needed: start + 1,
                budget: start,
            });
        }
        *budget -= 1;
        let d = m.len();
        if n == 0 {
            if rem == 0 && partial.iter().all(|&x| x == 0) {
                out.push(a.clone());
            }
            return Ok(());
        }
        let r = i128::from(rem);
        for row in 0..d {
            let lo = partial[row] + r * suf_min[row][j];
            let hi = partial[row] + r * suf_max[row][j];
            if rem > 0 && (lo > 0 || hi < 0) {
                return Ok(());
            }
            if rem == 0 && partial[row] != 0 {
                return Ok(());
            }
        }
        if j == n - 1 {
            a[j] = rem;
            for row in 0..d {
                partial[row] += r * m[row][j];
            }
            if partial.iter().all(|&x| x == 0) {
                out.push(a.clone());
            }
            for row in 0..d {
                partial[row] -= r * m[row][j];
            }
            a[j] = 0;
            return Ok(());
        }
        for x in 0..=rem {
            a[j] = x;
            let xi = i128::from(x);
            for row in 0..d {
                partial[row] += xi * m[row][j];
            }
            let res = go(
                j + 1,
                rem - x,
                n,
                m,
                suf_min,
                suf_max,
                a,
                partial,
                out,
                budget,
                start,
            );
            for row in 0..d {
                partial[row] -= xi * m[row][j];
            }
            res?;
        }
        a[j] = 0;
        Ok(())
    }
    go(
        0,
        k,
        n,
        m,
        &suf_min,
        &suf_max,
        &mut a,
        &mut partial,
        &mut out,
        budget,
        budget_start,
    )?;
    Ok(out)
}

/// Extreme rays of `{a ≥ 0 : M a = 0}`: minimal supports `S` with
/// `rank M_S = |S| - 1` whose kernel vector has constant sign.
pub(crate) fn extreme_rays(m: &[Vec<i128>], n: usize) -> Result<Vec<Vec<u32>>> {
    if n > MAX_STRATA_COORDINATES {
        return Err(Error::CombinatorialBudgetExceeded {
            needed: 1u128 << n,
            budget: 1u128 << MAX_STRATA_COORDINATES,
        });
    }
    let r_full = rank(&to_q(m));
    let mut rays = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let cols: Vec<usize> = (0..n).filter(|&j| mask >> j & 1 == 1).collect();
        if cols.len() > r_full + 1 {
            continue;
        }
        let sub: Vec<Vec<Rational>> = m
            .iter()
            .map(|row| {
                cols.iter()
                    .map(|&j| Rational::from_integer(BigInt::from(row[j])))
                    .collect()
            })
            .collect();
        let ker = kernel(&sub, cols.len());
        if ker.len() != 1 {
            continue;
        }
        let k = &ker[0];
        let all_pos = k.iter().all(|x| x.is_positive());
        let all_neg = k.iter().all(|x| x.is_negative());
        if !(all_pos || all_neg) {
            continue;
        }
        let prim = primitive_integer(k);
        let mut ray = vec![0u32; n];
        for (&j, x) in cols.iter().zip(&prim) {
            ray[j] = x.abs().to_u32().ok_or(Error::CountOverflow)?;
        }
        rays.push(ray);
    }
    Ok(rays)
}

fn to_q(m: &[Vec<i128>]) -> Vec<Vec<Rational>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|&x| Rational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect()
}

/// Minimal zero-weight exponent vectors of degree at most `degree_cap`,
/// level-shifted (`Σ a_j (w_j + λ) = 0`).
///
/// Degrees are scanned upward; an exponent vector is kept when it does not
/// dominate a generator found earlier, which is equivalent to not being a
/// sum of two nonzero solutions. Completeness is certified when the cap
/// reaches `max(max ray degree, Σ of the r largest ray degrees - 1)`, `r`
/// the dimension of the solution cone: every minimal generator lies in a
/// simplicial cone on at most `r` extreme rays with coefficients below one.
pub fn hilbert_basis(rep: &RepSpec, degree_cap: u32) -> Result<HilbertBasis> {
    hilbert_basis_with_budget(rep, degree_cap, DEFAULT_ENUMERATION_BUDGET)
}

pub fn hilbert_basis_with_budget(
    rep: &RepSpec,
    degree_cap: u32,
    budget: u128,
) -> Result<HilbertBasis> {
    if degree_cap == 0 {
        return Err(Error::InvalidOptions("degree_cap must be at least 1"));
    }
    let m = shifted_integer_matrix(rep)?;
    let n = rep.n();
    let weights = rep.weights().expect("torus");
    let mut remaining = budget;
    let mut gens: Vec<Vec<u32>> = Vec::new();
    for k in 1..=degree_cap {
        let found = zero_weight_exponents(&m, n, k, &mut remaining)?;
        for a in found {
            let dominated = gens.iter().any(|g| g.iter().zip(&a).all(|(x, y)| x <= y));
            if !dominated {
                gens.push(a);
            }
        }
    }
    let rays = extreme_rays(&m, n)?;
    let ray_degrees: Vec<u32> = rays.iter().map(|r| r.iter().sum()).collect();
    let cone_dim = if rays.is_empty() {
        0
    } else {
        let rm: Vec<Vec<Rational>> = rays
            .iter()
            .map(|r| r.iter().map(|&x| q(i64::from(x))).collect())
            .collect();
        rank(&rm)
    };
    let mut sorted = ray_degrees.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let max_deg = sorted.first().copied().unwrap_or(0);
    let top_sum: u32 = sorted.iter().take(cone_dim).sum();
    let needed = max_deg.max(top_sum.saturating_sub(1));
    let completeness = if needed <= degree_cap {
        Completeness::Certified
    } else {
        Completeness::Truncated {
            needed_degree: needed,
        }
    };
    let generators = gens
        .into_iter()
        .map(|exps| {
            let weight = weights
                .iter()
                .map(|row| row.iter().zip(&exps).map(|(&w, &e)| w * i64::from(e)).sum())
                .collect();
            let degree = exps.iter().sum();
            MonomialExponent {
                exps,
                weight,
                degree,
            }
        })
        .collect();
    Ok(HilbertBasis {
        generators,
        degree_cap,
        completeness,
        extreme_rays: rays,
    })
}

/// `σ_i(v) = Π_j v_j^{a_ij}`.
pub fn hilbert_map(basis: &HilbertBasis, v: &StateVector) -> Result<Vec<Complex>> {
    let mut out = Vec::with_capacity(basis.generators.len());
    for g in &basis.generators {
        if g.exps.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: g.exps.len(),
                got: v.len(),
            });
        }
        let mut p = Complex::new(1.0, 0.0);
        for (z, &e) in v.0.iter().zip(&g.exps) {
            for _ in 0..e {
                p *= z;
            }
        }
        out.push(p);
    }
    Ok(out)
}

/// Whether the Hilbert map tells the closed orbits through `v` and `w`
/// apart: `‖σ(v) - σ(w)‖ > tol · max(‖σ(v)‖, ‖σ(w)‖)`.
///
/// Level-zero generators are invariant under the whole complexified torus,
/// phases included, so no alignment is needed. Both points must have closed
/// orbits (checked by Kempf–Ness minimization), otherwise
/// [`Error::NotClosedOrbit`].
pub fn separates_closed_orbits(
    rep: &RepSpec,
    basis: &HilbertBasis,
    v: &StateVector,
    w: &StateVector,
    tol: f64,
) -> Result<bool> {
    rep.torus_weights("a torus representation")?;
    if !rep.level_is_zero() {
        return Err(Error::Unsupported("level zero"));
    }
    let opts = FlowOptions::default();
    for x in [v, w] {
        match minimize_kempf_ness(rep, x, &opts)?.status {
            KempfNessStatus::Minimum(_) => {}
            KempfNessStatus::Divergent(_) => return Err(Error::NotClosedOrbit),
        }
    }
    let a = hilbert_map(basis, v)?;
    let b = hilbert_map(basis, w)?;
    let diff = crate::linalg::norm(&crate::linalg::sub(&a, &b));
    let scale = crate::linalg::norm(&a).max(crate::linalg::norm(&b));
    Ok(diff > tol * scale)
}

/// One orbit-type stratum of the reduced space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumDescriptor {
    /// Canonical Hermite basis of the character lattice of the stabilizer
    /// quotient: `Z-span{w_j : j ∈ S}` (affine) or `Z-span{w_j - w_k}`
    /// (projective). Equal lattices mean equal stabilizer subgroups.
    pub character_lattice: Vec<Vec<i128>>,
    /// Integer basis of `{ξ : ⟨ℓ, ξ⟩ = 0 for ℓ in the lattice}`.
    pub stabilizer_kernel: Vec<Vec<i128>>,
    /// Support patterns (0-based) with nonempty zero-level piece.
    pub support_patterns: Vec<Vec<usize>>,
    /// Real dimension of the stratum.
    pub dimension: usize,
}

/// Enumerates support patterns `S` whose zero-level piece is nonempty and
/// groups them by stabilizer subgroup.
///
/// Affine: `S` is feasible when `Σ_{j∈S} x_j w_j = -2λ` has a solution with
/// every `x_j > 0`; the piece has dimension `2(|S| - rank W_S)`. Projective:
/// `S` nonempty and `Σ p_j (w_j + λ) = 0` with `p > 0`; dimension
/// `2(|S| - 1 - rank{w_j - w_k})`. A stratum's dimension is the largest
/// over its patterns. Strata are sorted by dimension, then lattice.
pub fn enumerate_strata(rep: &RepSpec) -> Result<Vec<StratumDescriptor>> {
    let weights = rep.torus_weights("a torus representation")?;
    let n = rep.n();
    let d = rep.lie_dim();
    if n > MAX_STRATA_COORDINATES {
        return Err(Error::CombinatorialBudgetExceeded {
            needed: 1u128 << n,
            budget: 1u128 << MAX_STRATA_COORDINATES,
        });
    }
    let shifted = rep.shifted_weights_exact().expect("torus");
    let two = q(2);
    // lattice -> (support patterns, largest dimension)
    let mut groups: BTreeMap<Lattice, (Vec<Vec<usize>>, usize)> = BTreeMap::new();
    for mask in 0u32..(1u32 << n) {
        let s: Vec<usize> = (0..n).filter(|&j| mask >> j & 1 == 1).collect();
        let (feasible, lattice_rows, dim) = match rep.mode() {
            Mode::Affine => {
                let mut m: Vec<Vec<Rational>> = (0..d)
                    .map(|a| s.iter().map(|&j| q(weights[a][j])).collect())
                    .collect();
                for (a, row) in m.iter_mut().enumerate() {
                    row.push(&two * &rep.level()[a]);
                }
                let feasible = strictly_positive_kernel(&m, s.len() + 1).is_some();
                let rows: Vec<Vec<i128>> = s
                    .iter()
                    .map(|&j| (0..d).map(|a| i128::from(weights[a][j])).collect())
                    .collect();
                let r = rank(
                    &(0..d)
                        .map(|a| s.iter().map(|&j| q(weights[a][j])).collect())
                        .collect::<Vec<_>>(),
                );
                (feasible, rows, 2 * (s.len() - r))
            }
            Mode::Projective => {
                if s.is_empty() {
                    continue;
                }
                let m: Vec<Vec<Rational>> = (0..d)
                    .map(|a| s.iter().map(|&j| shifted[j][a].clone()).collect())
                    .collect();
                let feasible = strictly_positive_kernel(&m, s.len()).is_some();
                let rows: Vec<Vec<i128>> = s[1..]
                    .iter()
                    .map(|&j| {
                        (0..d)
                            .map(|a| i128::from(weights[a][j] - weights[a][s[0]]))
                            .collect()
                    })
                    .collect();
                let diffs: Vec<Vec<Rational>> = (0..d)
                    .map(|a| {
                        s[1..]
                            .iter()
                            .map(|&j| q(weights[a][j] - weights[a][s[0]]))
                            .collect()
                    })
                    .collect();
                let r = if s.len() > 1 { rank(&diffs) } else { 0 };
                (feasible, rows, 2 * (s.len() - 1 - r))
            }
        };
        if !feasible {
            continue;
        }
        let lattice = hermite_rows(&lattice_rows, d);
        let entry = groups.entry(lattice).or_insert_with(|| (Vec::new(), 0));
        entry.0.push(s);
        entry.1 = entry.1.max(dim);
    }
    let mut out: Vec<StratumDescriptor> = groups
        .into_iter()
        .map(|(lattice, (patterns, dimension))| StratumDescriptor {
            stabilizer_kernel: integer_kernel(&lattice, d),
            character_lattice: lattice,
            support_patterns: patterns,
            dimension,
        })
        .collect();
    out.sort_by(|a, b| {
        a.dimension
            .cmp(&b.dimension)
            .then_with(|| a.character_lattice.cmp(&b.character_lattice))
    });
    Ok(out)
}
