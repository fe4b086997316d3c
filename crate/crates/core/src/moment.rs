//! Momentum map, Yang–Mills functional, Kempf–Ness length and pointwise
//! identity residuals.

use alloc::vec::Vec;

use crate::linalg;
use crate::rep::{
    act_imaginary, act_infinitesimal, Generator, LieVector, Mode, RepKind, RepSpec, StateVector,
};
use crate::{Complex, Error, Result};

/// `Φ(v)` in the orthonormal Lie algebra basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumValue(pub Vec<f64>);

impl MomentumValue {
    pub fn norm_sqr(&self) -> f64 {
        linalg::dot(&self.0, &self.0)
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    pub fn as_lie(&self) -> LieVector {
        LieVector(self.0.clone())
    }
}

/// Expectations `Re(v^H A_a v)` for the basis generators.
pub(crate) fn expectations(rep: &RepSpec, v: &[Complex]) -> Vec<f64> {
    match rep.kind() {
        RepKind::Torus { weights } => weights
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .map(|(&w, z)| w as f64 * z.norm_sqr())
                    .sum()
            })
            .collect(),
        RepKind::Su2 { .. } => rep
            .basis_generators()
            .iter()
            .map(|g| g.expectation(v))
            .collect(),
    }
}

pub(crate) fn momentum_unchecked(rep: &RepSpec, v: &[Complex]) -> Vec<f64> {
    let e = expectations(rep, v);
    let level = rep.level_f64();
    match rep.mode() {
        Mode::Affine => e.iter().zip(&level).map(|(x, l)| -0.5 * x - l).collect(),
        Mode::Projective => {
            let r2 = linalg::norm_sqr(v);
            e.iter().zip(&level).map(|(x, l)| -x / r2 - l).collect()
        }
    }
}

/// Affine: `Φ^ξ(v) = -½ v^H A_ξ v - ⟨λ, ξ⟩`.
/// Projective: `Φ^ξ([v]) = -v^H A_ξ v / ‖v‖² - ⟨λ, ξ⟩`.
pub fn momentum(rep: &RepSpec, v: &StateVector) -> Result<MomentumValue> {
    rep.check_state(v)?;
    Ok(MomentumValue(momentum_unchecked(rep, &v.0)))
}

/// `μ = ‖Φ‖²`.
pub fn yang_mills(rep: &RepSpec, v: &StateVector) -> Result<f64> {
    Ok(momentum(rep, v)?.norm_sqr())
}

/// `grad μ = 2 J (Φ♯)_M`.
///
/// Affine: `-2 A_Φ v` for the flat metric `Re h`. Projective: the
/// horizontal vector `-2 (A_Φ v - ⟨A_Φ⟩ v)` with `⟨A⟩ = v^H A v / ‖v‖²`. For
/// unit `v` this is the Fubini–Study gradient with the metric normalized as
/// twice the round metric on the sphere quotient, which is the normalization
/// that makes the projective momentum formula above a momentum map. For other
/// representatives it is that gradient at `v/‖v‖` scaled by `‖v‖`.
pub fn grad_yang_mills(rep: &RepSpec, v: &StateVector) -> Result<StateVector> {
    rep.check_state(v)?;
    Ok(StateVector(grad_unchecked(rep, &v.0)))
}

pub(crate) fn grad_unchecked(rep: &RepSpec, v: &[Complex]) -> Vec<Complex> {
    let phi = momentum_unchecked(rep, v);
    let a = rep
        .generator(&LieVector(phi))
        .expect("momentum has Lie algebra length");
    let av = a.apply(v);
    match rep.mode() {
        Mode::Affine => linalg::scale(&av, -2.0),
        Mode::Projective => {
            let mean = linalg::real_inner(&av, v) / linalg::norm_sqr(v);
            av.iter()
                .zip(v)
                .map(|(x, z)| (x - z * mean) * -2.0)
                .collect()
        }
    }
}

/// `‖exp(√-1 ξ) v‖²` twisted by the level character: for a torus,
/// `Σ_j exp(-2⟨w_j + λ, ξ⟩) |v_j|²`. Projective representations are treated
/// through their affine cone.
pub fn kempf_ness_value(rep: &RepSpec, v: &StateVector, xi: &LieVector) -> Result<f64> {
    if v.len() != rep.n() {
        return Err(Error::DimensionMismatch {
            expected: rep.n(),
            got: v.len(),
        });
    }
    rep.check_lie(xi)?;
    match rep.kind() {
        RepKind::Torus { weights } => {
            let level = rep.level_f64();
            let mut total = 0.0;
            for (j, z) in v.0.iter().enumerate() {
                if z.re == 0.0 && z.im == 0.0 {
                    continue;
                }
                let pairing: f64 = (0..weights.len())
                    .map(|a| (weights[a][j] as f64 + level[a]) * xi.0[a])
                    .sum();
                let e = -2.0 * pairing;
                if e > 2.0 * crate::rep::MAX_EXPONENT {
                    return Err(Error::Overflow { exponent: e });
                }
                total += libm::exp(e) * z.norm_sqr();
            }
            Ok(total)
        }
        RepKind::Su2 { .. } => Ok(act_imaginary(rep, xi, 1.0, v)?
            .0
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()),
    }
}

/// Relative residuals of the pointwise identities.
///
/// * `grad_identity`: `‖J ξ_M(v) - grad Φ^ξ(v)‖`, with the gradient from
///   central differences of step `h = 1e-6 (1 + ‖v‖)`, divided by
///   `s ‖ξ‖ ‖v‖` where `s` bounds the generator norms.
/// * `angle_identity`: `|⟨grad r², grad Φ^ξ⟩ - 4 Φ^ξ|` at level zero, with
///   the same difference gradient, divided by `s ‖ξ‖ ‖v‖²`.
/// * `mu_identity`: `|⟨grad r², grad μ⟩ - 8 μ|` at level zero divided by
///   `(s ‖v‖²)²`.
/// * `isotropy`: `max |ω(ξ_M v, η_M v)|` over basis pairs divided by
///   `s² ‖v‖²`; torus representations only.
///
/// Zero scales give zero residuals. Affine mode only.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResiduals {
    pub grad_identity: f64,
    pub angle_identity: f64,
    pub mu_identity: f64,
    pub isotropy: Option<f64>,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        self.grad_identity
            .max(self.angle_identity)
            .max(self.mu_identity)
            .max(self.isotropy.unwrap_or(0.0))
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Quadratic part `-½ v^H A_ξ v` of `Φ^ξ`; the level only adds a constant.
fn phi_xi_quadratic(a: &Generator, v: &[Complex]) -> f64 {
    -0.5 * a.expectation(v)
}

pub fn identity_residuals(
    rep: &RepSpec,
    v: &StateVector,
    xi: &LieVector,
) -> Result<IdentityResiduals> {
    if rep.mode() != Mode::Affine {
        return Err(Error::Unsupported("affine mode"));
    }
    rep.check_state(v)?;
    let a = rep.generator(xi)?;
    let s = rep.generator_scale();
    let r = v.norm();
    let n = v.len();

    let h = 1e-6 * (1.0 + r);
    let mut fd = Vec::with_capacity(n);
    let mut probe = v.0.clone();
    for j in 0..n {
        let mut parts = [0.0; 2];
        for (k, unit) in [Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)]
            .into_iter()
            .enumerate()
        {
            let orig = probe[j];
            probe[j] = orig + unit * h;
            let plus = phi_xi_quadratic(&a, &probe);
            probe[j] = orig - unit * h;
            let minus = phi_xi_quadratic(&a, &probe);
            probe[j] = orig;
            parts[k] = (plus - minus) / (2.0 * h);
        }
        fd.push(Complex::new(parts[0], parts[1]));
    }

    let xi_m = act_infinitesimal(rep, xi, v)?;
    let j_xi_m: Vec<Complex> = xi_m.0.iter().map(|z| z * Complex::new(0.0, 1.0)).collect();
    let grad_identity = ratio(linalg::norm(&linalg::sub(&j_xi_m, &fd)), s * xi.norm() * r);

    let grad_r2 = linalg::scale(&v.0, 2.0);
    let phi_xi0 = phi_xi_quadratic(&a, &v.0);
    let angle_identity = ratio(
        (linalg::real_inner(&grad_r2, &fd) - 4.0 * phi_xi0).abs(),
        s * xi.norm() * r * r,
    );

    let level0 = rep.at_level_zero();
    let mu = momentum_unchecked(&level0, &v.0)
        .iter()
        .map(|x| x * x)
        .sum::<f64>();
    let grad_mu = grad_unchecked(&level0, &v.0);
    let mu_identity = ratio(
        (linalg::real_inner(&grad_r2, &grad_mu) - 8.0 * mu).abs(),
        (s * r * r) * (s * r * r),
    );

    let isotropy = if rep.is_torus() {
        let fields: Vec<Vec<Complex>> = (0..rep.lie_dim())
            .map(|b| act_infinitesimal(rep, &LieVector::basis(rep.lie_dim(), b), v).map(|x| x.0))
            .collect::<Result<_>>()?;
        let mut worst: f64 = 0.0;
        for p in 0..fields.len() {
            for q in (p + 1)..fields.len() {
                worst = worst.max(linalg::hermitian(&fields[p], &fields[q]).im.abs());
            }
        }
        Some(ratio(worst, s * s * r * r))
    } else {
        None
    };

    Ok(IdentityResiduals {
        grad_identity,
        angle_identity,
        mu_identity,
        isotropy,
    })
}
