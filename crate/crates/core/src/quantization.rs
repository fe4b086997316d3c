//! Lattice-point multiplicities of torus and SU(2) quantizations.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::exact::{binomial, lcm_denominators, solve_any};
use crate::polytope::{count_compositions, fiber_polytope, polytope_volume, vertex_period};
use crate::rep::{RepKind, RepSpec};
use crate::{Error, Rational, Result};

/// Default number of monomials [`invariant_dimension`] may visit.
pub const DEFAULT_MONOMIAL_BUDGET: u128 = 10_000_000;

fn integral_target(lambda: &[Rational], k: u64) -> Option<Vec<i128>> {
    let kq = Rational::from_integer(BigInt::from(k));
    lambda
        .iter()
        .map(|l| {
            let t = -(l * &kq);
            if t.is_integer() {
                t.to_integer().to_i128()
            } else {
                None
            }
        })
        .collect()
}

fn weight_columns(weights: &[Vec<i64>]) -> Vec<Vec<i128>> {
    let n = weights.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| weights.iter().map(|row| i128::from(row[j])).collect())
        .collect()
}

/// Number of exponents `a ∈ N^n` with `|a| = k` and `W a = -k λ`, counted
/// by dynamic programming over the coordinates.
pub fn weight_multiplicity(rep: &RepSpec, lambda: &[Rational], k: u64) -> Result<u128> {
    let weights = rep.torus_weights("a torus representation")?;
    if lambda.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: weights.len(),
            got: lambda.len(),
        });
    }
    let Some(target) = integral_target(lambda, k) else {
        return Ok(0);
    };
    count_compositions(&weight_columns(weights), &target, k)
}

/// Dimension of the degree-`k` invariants at the representation's level.
/// For a torus every degree-`k` monomial is visited, within `budget`; for
/// SU(2) this is the spin-zero multiplicity.
pub fn invariant_dimension_with_budget(rep: &RepSpec, k: u64, budget: u128) -> Result<u128> {
    let weights = match rep.kind() {
        RepKind::Su2 { .. } => return su2_multiplicity(rep, 0, k),
        RepKind::Torus { weights } => weights,
    };
    let n = rep.n();
    let needed = binomial(k + n as u64 - 1, n as u64 - 1);
    if needed > budget {
        return Err(Error::CombinatorialBudgetExceeded { needed, budget });
    }
    // clear denominators: Σ a_j L w_j + k L λ = 0
    let den = lcm_denominators(rep.level());
    let lam: Vec<i128> = rep
        .level()
        .iter()
        .map(|l| {
            (l * Rational::from_integer(den.clone()))
                .to_integer()
                .to_i128()
                .ok_or(Error::CountOverflow)
        })
        .collect::<Result<_>>()?;
    let den = den.to_i128().ok_or(Error::CountOverflow)?;
    let kk = i128::from(k);
    let cols: Vec<Vec<i128>> = weight_columns(weights)
        .into_iter()
        .map(|c| c.into_iter().map(|x| x * den).collect())
        .collect();
    let start: Vec<i128> = lam.iter().map(|l| kk * l).collect();
    let mut count = 0u128;
    visit(&cols, 0, k, &mut start.clone(), &mut count);
    Ok(count)
}

fn visit(cols: &[Vec<i128>], j: usize, left: u64, acc: &mut Vec<i128>, count: &mut u128) {
    if j + 1 == cols.len() {
        let x = i128::from(left);
        if acc.iter().zip(&cols[j]).all(|(a, c)| a + x * c == 0) {
            *count += 1;
        }
        return;
    }
    for x in 0..=left {
        visit(cols, j + 1, left - x, acc, count);
        for (a, c) in acc.iter_mut().zip(&cols[j]) {
            *a += c;
        }
    }
    let total = i128::from(left) + 1;
    for (a, c) in acc.iter_mut().zip(&cols[j]) {
        *a -= total * c;
    }
}

pub fn invariant_dimension(rep: &RepSpec, k: u64) -> Result<u128> {
    invariant_dimension_with_budget(rep, k, DEFAULT_MONOMIAL_BUDGET)
}

/// Multiplicity of the irreducible `Sym^m(C²)` in the degree-`k` part of
/// the symmetric algebra: `N(m) - N(m + 2)` where `N(x)` counts degree-`k`
/// monomials of weight `x`.
pub fn su2_multiplicity(rep: &RepSpec, m: u32, k: u64) -> Result<u128> {
    let RepKind::Su2 { spins } = rep.kind() else {
        return Err(Error::Unsupported(
            "SU(2) multiplicities of a torus representation",
        ));
    };
    let cols: Vec<Vec<i128>> = spins
        .iter()
        .flat_map(|&s| (0..=s).map(move |j| vec![i128::from(s) - 2 * i128::from(j)]))
        .collect();
    let at = count_compositions(&cols, &[i128::from(m)], k)?;
    let above = count_compositions(&cols, &[i128::from(m) + 2], k)?;
    Ok(at - above)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QrCheck {
    pub degree: u64,
    /// Representation-side dimension ([`verify_qr`]: level-`λ` invariant
    /// monomials by enumeration).
    pub upstairs: u128,
    /// Combinatorial count ([`verify_qr`]: lattice points of the weight
    /// fiber by dynamic programming).
    pub downstairs: u128,
    pub equal: bool,
}

/// Compares the dimension of level-`λ` invariants in degree `k` against the
/// weight multiplicity of `-k λ`.
pub fn verify_qr(rep: &RepSpec, lambda: &[Rational], k: u64) -> Result<QrCheck> {
    let shifted = rep.with_level(lambda)?;
    let upstairs = invariant_dimension(&shifted, k)?;
    let downstairs = weight_multiplicity(rep, lambda, k)?;
    Ok(QrCheck {
        degree: k,
        upstairs,
        downstairs,
        equal: upstairs == downstairs,
    })
}

/// SU(2) bookkeeping in degree `k`: `Σ_m (m + 1) · mult(m, k)` against
/// `dim Sym^k(V) = C(k + n - 1, n - 1)`.
pub fn verify_su2_dimension(rep: &RepSpec, k: u64) -> Result<QrCheck> {
    let RepKind::Su2 { spins } = rep.kind() else {
        return Err(Error::Unsupported(
            "SU(2) bookkeeping of a torus representation",
        ));
    };
    let n = rep.n() as u64;
    let upstairs = binomial(k + n - 1, n - 1);
    let top = u64::from(spins.iter().copied().max().unwrap_or(0)) * k;
    let mut downstairs = 0u128;
    for m in 0..=top {
        let mult = su2_multiplicity(rep, m as u32, k)?;
        downstairs = mult
            .checked_mul(u128::from(m + 1))
            .and_then(|x| x.checked_add(downstairs))
            .ok_or(Error::CountOverflow)?;
    }
    Ok(QrCheck {
        degree: k,
        upstairs,
        downstairs,
        equal: upstairs == downstairs,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EhrhartFit {
    pub k0: u64,
    /// Smallest `q` with `q P(k0)` a lattice polytope.
    pub period: u64,
    pub dimension: usize,
    /// `(r, #(r q P(k0) ∩ Z^n))` for `r = 1..=r_max`.
    pub samples: Vec<(u64, u128)>,
    /// Polynomial coefficients in `r`, constant term first.
    pub coefficients: Vec<Rational>,
    /// Lattice-normalized volume of `q P(k0)`.
    pub normalized_volume: Rational,
    /// `coefficients[dimension] == normalized_volume / dimension!`.
    pub leading_matches_volume: bool,
}

impl EhrhartFit {
    pub fn leading(&self) -> &Rational {
        &self.coefficients[self.dimension]
    }

    pub fn eval(&self, r: u64) -> Rational {
        let x = Rational::from_integer(BigInt::from(r));
        self.coefficients
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * &x + c)
    }
}

/// Fits the counting function `r ↦ #(r q P(k0) ∩ Z^n)` by a polynomial of
/// degree `dim P` through the first `dim P + 1` samples and checks the
/// rest exactly. Any disagreement is [`Error::FitResidualNonzero`].
pub fn ehrhart_fit(rep: &RepSpec, lambda: &[Rational], k0: u64, r_max: u64) -> Result<EhrhartFit> {
    if k0 == 0 {
        return Err(Error::InvalidOptions("k0 must be positive"));
    }
    let base = fiber_polytope(rep, lambda, k0)?;
    let dimension = base.dimension().ok_or(Error::EmptyPolytope)?;
    if r_max < dimension as u64 + 2 {
        return Err(Error::InvalidOptions("r_max must be at least dim P + 2"));
    }
    let period = vertex_period(&base).to_u64().ok_or(Error::CountOverflow)?;
    let mut samples = Vec::with_capacity(r_max as usize);
    for r in 1..=r_max {
        let k = r
            .checked_mul(period)
            .and_then(|x| x.checked_mul(k0))
            .ok_or(Error::CountOverflow)?;
        samples.push((r, fiber_polytope(rep, lambda, k)?.lattice_count()?));
    }
    let nodes = dimension + 1;
    let vandermonde: Vec<Vec<Rational>> = samples[..nodes]
        .iter()
        .map(|&(r, _)| {
            let x = Rational::from_integer(BigInt::from(r));
            let mut p = Rational::one();
            (0..nodes)
                .map(|_| {
                    let out = p.clone();
                    p *= &x;
                    out
                })
                .collect()
        })
        .collect();
    let rhs: Vec<Rational> = samples[..nodes]
        .iter()
        .map(|&(_, c)| Rational::from_integer(BigInt::from(c)))
        .collect();
    let coefficients = solve_any(&vandermonde, &rhs)
        .expect("distinct nodes give an invertible Vandermonde system");
    let mut fit = EhrhartFit {
        k0,
        period,
        dimension,
        samples,
        coefficients,
        normalized_volume: Rational::zero(),
        leading_matches_volume: false,
    };
    for &(r, c) in &fit.samples[nodes..] {
        let predicted = fit.eval(r);
        if predicted != Rational::from_integer(BigInt::from(c)) {
            return Err(Error::FitResidualNonzero(format!(
                "r = {r}: counted {c}, polynomial gives {predicted}"
            )));
        }
    }
    let scaled = fiber_polytope(rep, lambda, period * k0)?;
    fit.normalized_volume = polytope_volume(&scaled)?;
    let factorial: BigInt = (1..=dimension as u64).map(BigInt::from).product();
    fit.leading_matches_volume =
        *fit.leading() == &fit.normalized_volume / Rational::from_integer(factorial);
    Ok(fit)
}
