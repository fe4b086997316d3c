//! Descent flow of `μ = ‖Φ‖²`, stability classification, Kempf–Ness
//! minimization and the combinatorial and one-parameter-subgroup oracles.

use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::hull::{convex_kernel, spans, strictly_positive_kernel};
use crate::linalg::{self, symmetric_eigen};
use crate::moment::{expectations, grad_unchecked, momentum_unchecked};
use crate::ode::{self, Control, Guard, StepControl};
use crate::rep::{
    act_imaginary, stabilizer_rank, LieVector, Mode, RepKind, RepSpec, StateVector,
    DEFAULT_SUPPORT_TOL,
};
use crate::{su2, Complex, Error, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Stop once `‖grad μ‖` falls below this, unless `‖Φ‖` is still inside
    /// `[0.01 phi_tol, 10 phi_tol]`, where the verdict would be unreliable.
    pub grad_stop: f64,
    pub t_max: f64,
    /// Zero-level threshold on `‖Φ‖`.
    pub phi_tol: f64,
    /// Support threshold forwarded to [`stabilizer_rank`].
    pub stab_tol: f64,
    pub max_steps: Option<usize>,
    /// Record every `sample_every`-th accepted step; the first and last
    /// states are always recorded. Zero records only those two.
    pub sample_every: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            grad_stop: 1e-10,
            t_max: 1e12,
            phi_tol: 1e-6,
            stab_tol: DEFAULT_SUPPORT_TOL,
            max_steps: Some(1_000_000),
            sample_every: 1,
        }
    }
}

impl FlowOptions {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.rel_tol,
            self.abs_tol,
            self.grad_stop,
            self.t_max,
            self.phi_tol,
            self.stab_tol,
        ];
        if all.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::InvalidOptions(
                "tolerances and t_max must be positive and finite",
            ));
        }
        if self.grad_stop >= 1.0 {
            return Err(Error::InvalidOptions("grad_stop must be below 1"));
        }
        if self.phi_tol < self.grad_stop {
            return Err(Error::InvalidOptions("phi_tol must be at least grad_stop"));
        }
        Ok(())
    }

    fn in_band(&self, phi: f64) -> bool {
        phi >= 0.01 * self.phi_tol && phi <= 10.0 * self.phi_tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilityTag {
    Unstable,
    Semistable,
    Stable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StabilityClass {
    pub tag: StabilityTag,
    pub closed_orbit: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowSample {
    pub t: f64,
    pub state: StateVector,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowResult {
    pub samples: Vec<FlowSample>,
    /// Final state; unit length in projective mode.
    pub limit: StateVector,
    /// `‖Φ(limit)‖`.
    pub phi_residual: f64,
    pub grad_norm: f64,
    pub t_final: f64,
    pub steps: usize,
    /// `‖grad μ(limit)‖ ≤ grad_stop`.
    pub converged: bool,
    /// `None` when the verdict is indeterminate or could not be computed;
    /// [`classify_point`] reports the reason.
    pub classification: Option<StabilityClass>,
}

/// State of an autonomous system integrated by [`run_flow`].
trait FlowSystem {
    fn rhs(&self, y: &[f64]) -> Vec<f64>;
    fn mu(&self, y: &[f64]) -> f64;
    fn phi_norm(&self, y: &[f64]) -> f64;
    fn grad_norm(&self, y: &[f64]) -> f64;
    /// Magnitude of the terms summed into `Φ`, for the roundoff floor of `μ`.
    fn scale(&self, y: &[f64]) -> f64;
    fn renormalize(&self, y: &mut [f64]);
    fn state(&self, y: &[f64]) -> StateVector;
    /// Row-major Jacobian of [`FlowSystem::rhs`] when the system is stiff
    /// enough to warrant implicit steps.
    fn jacobian(&self, _y: &[f64]) -> Option<Vec<f64>> {
        None
    }
    fn dim(&self) -> usize;
}

/// Torus flow on `s ∈ R^d` with log-moduli `y_k = y0_k + ⟨w_{j_k}, s⟩`
/// over the exact support of the start point. The moduli flow
/// `y_k' = 4 ⟨w_{j_k}, Φ⟩` (minus the mean in projective mode) never leaves
/// `y0 + W^T R^d` up to the projective shift, so `s' = 4 Φ` is the whole
/// flow and phases stay frozen.
struct TorusSystem {
    /// `ws[a][k]`: component `a` of the weight of the `k`-th support index.
    ws: Vec<Vec<f64>>,
    y0: Vec<f64>,
    lam: Vec<f64>,
    projective: bool,
    support: Vec<usize>,
    phases: Vec<Complex>,
    n: usize,
}

impl TorusSystem {
    fn log_moduli(&self, s: &[f64]) -> Vec<f64> {
        (0..self.y0.len())
            .map(|k| {
                self.y0[k]
                    + self
                        .ws
                        .iter()
                        .zip(s)
                        .map(|(row, x)| row[k] * x)
                        .sum::<f64>()
            })
            .collect()
    }

    /// Weights `e^{y_k}` (affine, times ½ inside Φ) or probabilities (projective).
    fn masses(&self, s: &[f64]) -> Vec<f64> {
        let y = self.log_moduli(s);
        if self.projective {
            let top = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let e: Vec<f64> = y.iter().map(|x| libm::exp(x - top)).collect();
            let sum: f64 = e.iter().sum();
            e.into_iter().map(|x| x / sum).collect()
        } else {
            y.iter().map(|&x| libm::exp(x)).collect()
        }
    }

    fn phi(&self, m: &[f64]) -> Vec<f64> {
        let f = if self.projective { 1.0 } else { 0.5 };
        self.ws
            .iter()
            .zip(&self.lam)
            .map(|(row, l)| -f * linalg::dot(row, m) - l)
            .collect()
    }

    fn pairings(&self, phi: &[f64]) -> Vec<f64> {
        (0..self.support.len())
            .map(|k| self.ws.iter().zip(phi).map(|(row, p)| row[k] * p).sum())
            .collect()
    }
}

impl FlowSystem for TorusSystem {
    fn rhs(&self, s: &[f64]) -> Vec<f64> {
        self.phi(&self.masses(s)).iter().map(|x| 4.0 * x).collect()
    }

    /// `-4` times the Hessian of the Kempf–Ness function: `½ Σ m_k w_k w_k^T`
    /// (affine) or the covariance of the weights under `m` (projective).
    fn jacobian(&self, s: &[f64]) -> Option<Vec<f64>> {
        let m = self.masses(s);
        let d = self.ws.len();
        let mean: Vec<f64> = self
            .ws
            .iter()
            .map(|row| {
                if self.projective {
                    linalg::dot(row, &m)
                } else {
                    0.0
                }
            })
            .collect();
        let f = if self.projective { 1.0 } else { 0.5 };
        let mut out = vec![0.0; d * d];
        for a in 0..d {
            for b in 0..d {
                let h: f64 = (0..m.len())
                    .map(|k| m[k] * self.ws[a][k] * (self.ws[b][k] - mean[b]))
                    .sum();
                out[a * d + b] = -4.0 * f * h;
            }
        }
        Some(out)
    }

    fn mu(&self, y: &[f64]) -> f64 {
        let phi = self.phi(&self.masses(y));
        linalg::dot(&phi, &phi)
    }

    fn phi_norm(&self, y: &[f64]) -> f64 {
        libm::sqrt(self.mu(y))
    }

    fn grad_norm(&self, y: &[f64]) -> f64 {
        let m = self.masses(y);
        let pair = self.pairings(&self.phi(&m));
        let s: f64 = if self.projective {
            let mean = linalg::dot(&m, &pair);
            m.iter()
                .zip(&pair)
                .map(|(p, x)| p * (x - mean) * (x - mean))
                .sum()
        } else {
            m.iter().zip(&pair).map(|(e, x)| e * x * x).sum()
        };
        2.0 * libm::sqrt(s)
    }

    fn scale(&self, y: &[f64]) -> f64 {
        let m = self.masses(y);
        let w: f64 = (0..m.len())
            .map(|k| m[k] * self.ws.iter().map(|row| row[k].abs()).sum::<f64>())
            .sum();
        w + self.lam.iter().map(|l| l.abs()).sum::<f64>()
    }

    fn renormalize(&self, _s: &mut [f64]) {}

    fn state(&self, s: &[f64]) -> StateVector {
        let y = self.log_moduli(s);
        let shift = if self.projective {
            let top = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            top + libm::log(y.iter().map(|x| libm::exp(x - top)).sum::<f64>())
        } else {
            0.0
        };
        let mut out = vec![Complex::new(0.0, 0.0); self.n];
        for (k, &j) in self.support.iter().enumerate() {
            out[j] = self.phases[k] * libm::exp((y[k] - shift) / 2.0);
        }
        StateVector(out)
    }

    fn dim(&self) -> usize {
        self.support.len()
    }
}

/// SU(2) flow lifted to the group: `v(t) = Sym(g(t)) v₀` with
/// `g' = (Φ · σ) g`, so that `v' = 2 A_Φ v` up to the projective scalar
/// term. The state never leaves the orbit of `v₀`, which matters on
/// unstable strata: they are invariant but repelling, and roundoff in an
/// ambient integration drifts off them.
///
/// `Sym(g) v₀` loses accuracy to cancellation as `g` grows, which stalls
/// flows whose limit is not in the orbit of `v₀`. The base point is then
/// moved to the current point and `g` reset, but only once `‖Φ‖` is below
/// `rebase_below`, the smallest nonzero critical value of `‖Φ‖`: from there
/// on `μ` cannot return to a repelling critical set, so the roundoff a
/// rebase introduces cannot push the trajectory off one. Affine critical
/// points all lie on the zero level and the bound is infinite.
struct GroupSystem<'a> {
    rep: &'a RepSpec,
    v0: RefCell<Vec<Complex>>,
    rebase_below: f64,
}

const REBASE_NORM_SQR: f64 = 8.0;

const IDENTITY_COORDS: [f64; 8] = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0];

impl<'a> GroupSystem<'a> {
    fn new(rep: &'a RepSpec, v0: Vec<Complex>) -> Self {
        let rebase_below = match rep.mode() {
            Mode::Affine => f64::INFINITY,
            Mode::Projective => 0.5 * min_nonzero_weight(rep),
        };
        GroupSystem {
            rep,
            v0: RefCell::new(v0),
            rebase_below,
        }
    }

    fn group(y: &[f64]) -> su2::M2 {
        [
            [Complex::new(y[0], y[1]), Complex::new(y[2], y[3])],
            [Complex::new(y[4], y[5]), Complex::new(y[6], y[7])],
        ]
    }

    fn point(&self, y: &[f64]) -> Vec<Complex> {
        let w = self.rep.su2_group_apply(&Self::group(y), &self.v0.borrow());
        match self.rep.mode() {
            Mode::Affine => w,
            Mode::Projective => {
                let r = linalg::norm(&w);
                w.iter().map(|z| z / r).collect()
            }
        }
    }
}

impl FlowSystem for GroupSystem<'_> {
    fn rhs(&self, y: &[f64]) -> Vec<f64> {
        let phi = momentum_unchecked(self.rep, &self.point(y));
        let dg = su2::mul2(&su2::sigma_dot(&phi), &Self::group(y));
        dg.iter().flatten().flat_map(|z| [z.re, z.im]).collect()
    }

    /// Central differences; the flows that approach a zero-level point
    /// along a non-closed orbit are stiff in these coordinates too.
    fn jacobian(&self, y: &[f64]) -> Option<Vec<f64>> {
        let n = y.len();
        let mut out = vec![0.0; n * n];
        let mut z = y.to_vec();
        for b in 0..n {
            let e = libm::cbrt(f64::EPSILON) * y[b].abs().max(1.0);
            z[b] = y[b] + e;
            let up = self.rhs(&z);
            z[b] = y[b] - e;
            let down = self.rhs(&z);
            z[b] = y[b];
            for a in 0..n {
                out[a * n + b] = (up[a] - down[a]) / (2.0 * e);
            }
        }
        Some(out)
    }

    fn mu(&self, y: &[f64]) -> f64 {
        momentum_unchecked(self.rep, &self.point(y))
            .iter()
            .map(|x| x * x)
            .sum()
    }

    fn phi_norm(&self, y: &[f64]) -> f64 {
        libm::sqrt(self.mu(y))
    }

    fn grad_norm(&self, y: &[f64]) -> f64 {
        linalg::norm(&grad_unchecked(self.rep, &self.point(y)))
    }

    /// Includes the growth `(‖g‖_F / √2)^m` of roundoff in `Sym(g) v₀`.
    fn scale(&self, y: &[f64]) -> f64 {
        let r2 = linalg::norm_sqr(&self.point(y));
        let f = if self.rep.mode() == Mode::Projective {
            1.0
        } else {
            0.5
        };
        let top = self
            .rep
            .spins()
            .and_then(|sp| sp.iter().copied().max())
            .unwrap_or(0);
        let g2: f64 = y.iter().map(|x| x * x).sum();
        f * self.rep.generator_scale() * r2 * libm::pow((g2 / 2.0).max(1.0), top as f64 / 2.0)
    }

    fn renormalize(&self, y: &mut [f64]) {
        if y.iter().map(|x| x * x).sum::<f64>() > REBASE_NORM_SQR
            && self.phi_norm(y) < self.rebase_below
        {
            let w = self.point(y);
            *self.v0.borrow_mut() = w;
            y.copy_from_slice(&IDENTITY_COORDS);
        }
    }

    fn state(&self, y: &[f64]) -> StateVector {
        StateVector(self.point(y))
    }

    fn dim(&self) -> usize {
        8
    }
}

/// Smallest nonzero `|⟨A₃ u, u⟩|` over the weight basis, which is the
/// smallest nonzero value of `‖Φ‖` at a projective critical point. Zero
/// (no rebasing) if the third generator is not diagonal.
fn min_nonzero_weight(rep: &RepSpec) -> f64 {
    let a3 = &rep.basis_generators()[2];
    let n = rep.n();
    let mut best = f64::INFINITY;
    for j in 0..n {
        let mut e = vec![Complex::new(0.0, 0.0); n];
        e[j] = Complex::new(1.0, 0.0);
        let col = a3.apply(&e);
        if col
            .iter()
            .enumerate()
            .any(|(k, z)| k != j && z.norm() > 1e-12)
        {
            return 0.0;
        }
        let d = col[j].re.abs();
        if d > 1e-12 {
            best = best.min(d);
        }
    }
    best
}

struct RawFlow {
    samples: Vec<FlowSample>,
    limit: StateVector,
    phi_residual: f64,
    grad_norm: f64,
    t_final: f64,
    steps: usize,
}

fn run_flow<S: FlowSystem>(sys: &S, mut y0: Vec<f64>, opts: &FlowOptions) -> Result<RawFlow> {
    sys.renormalize(&mut y0);
    let mut samples = Vec::new();
    let mut accepted = 0usize;
    let eps = f64::EPSILON;
    let noise = |y: &[f64]| 32.0 * (sys.dim().max(1) as f64) * eps * sys.scale(y);
    let ctl = StepControl {
        rel_tol: opts.rel_tol,
        abs_tol: opts.abs_tol,
        h_init: 1e-3,
        h_min: 1e-15,
        max_steps: opts.max_steps,
    };
    let guard = |old: &[f64], new: &[f64]| {
        let before = sys.mu(old);
        let after = sys.mu(new);
        let d = noise(old).max(noise(new));
        if after <= before {
            Guard::Accept
        } else if after <= before + 2.0 * libm::sqrt(before) * d + d * d {
            Guard::Settled
        } else {
            Guard::Reject(before, after)
        }
    };
    let post = |t: f64, y: &mut Vec<f64>| {
        sys.renormalize(y);
        let record =
            accepted == 0 || (opts.sample_every > 0 && accepted.is_multiple_of(opts.sample_every));
        if record {
            samples.push(FlowSample {
                t,
                state: sys.state(y),
                mu: sys.mu(y),
            });
        }
        accepted += 1;
        if sys.grad_norm(y) <= opts.grad_stop && !opts.in_band(sys.phi_norm(y)) {
            Control::Stop
        } else {
            Control::Continue
        }
    };
    let end = if sys.jacobian(&y0).is_some() {
        ode::integrate_stiff(
            &ctl,
            y0,
            opts.t_max,
            |y| sys.rhs(y),
            |y| sys.jacobian(y).expect("stiff system"),
            guard,
            post,
        )?
    } else {
        ode::integrate(&ctl, y0, opts.t_max, |y| sys.rhs(y), guard, post)?
    };
    let limit = sys.state(&end.y);
    if samples.last().map(|s| s.t) != Some(end.t) {
        samples.push(FlowSample {
            t: end.t,
            state: limit.clone(),
            mu: sys.mu(&end.y),
        });
    }
    Ok(RawFlow {
        samples,
        phi_residual: sys.phi_norm(&end.y),
        grad_norm: sys.grad_norm(&end.y),
        limit,
        t_final: end.t,
        steps: end.steps,
    })
}

fn flow_unclassified(rep: &RepSpec, v: &StateVector, opts: &FlowOptions) -> Result<RawFlow> {
    opts.validate()?;
    rep.check_state(v)?;
    match rep.kind() {
        RepKind::Torus { weights } => {
            let support: Vec<usize> = (0..v.len()).filter(|&j| v.0[j].norm_sqr() > 0.0).collect();
            let sys = TorusSystem {
                ws: weights
                    .iter()
                    .map(|row| support.iter().map(|&j| row[j] as f64).collect())
                    .collect(),
                lam: rep.level_f64(),
                projective: rep.mode() == Mode::Projective,
                phases: support.iter().map(|&j| v.0[j] / v.0[j].norm()).collect(),
                y0: support
                    .iter()
                    .map(|&j| libm::log(v.0[j].norm_sqr()))
                    .collect(),
                support: support.clone(),
                n: v.len(),
            };
            run_flow(&sys, vec![0.0; rep.lie_dim()], opts)
        }
        RepKind::Su2 { .. } => {
            let start = match rep.mode() {
                Mode::Affine => v.clone(),
                Mode::Projective => v.normalized(),
            };
            run_flow(
                &GroupSystem::new(rep, start.0),
                IDENTITY_COORDS.to_vec(),
                opts,
            )
        }
    }
}

/// Integrates `v' = -grad μ(v)` with adaptive steps. No accepted step
/// increases `μ` as computed. A candidate step that raises it by more than
/// the roundoff floor is retried smaller and finally reported as
/// [`Error::NonMonotone`]; one that raises it by less means `μ` is
/// stationary to working precision, and the run ends at the current state
/// (`converged` then reflects the gradient there).
///
/// Torus representations evolve `s ∈ R^d` with log-moduli
/// `ln |v_j|² = ln |v_j(0)|² + ⟨w_j, s⟩` on the support of `v` and phases
/// frozen (the flow preserves them), by Radau IIA steps: orbits that are not
/// closed make the system stiff. SU(2) representations evolve a group
/// element `g` with `v(t) = Sym(g) v`, normalized in projective mode, by
/// Dormand–Prince 5(4) steps.
pub fn integrate_flow(rep: &RepSpec, v: &StateVector, opts: &FlowOptions) -> Result<FlowResult> {
    let raw = flow_unclassified(rep, v, opts)?;
    let classification = classify_limit(rep, v, &raw, opts).ok();
    Ok(FlowResult {
        converged: raw.grad_norm <= opts.grad_stop,
        samples: raw.samples,
        limit: raw.limit,
        phi_residual: raw.phi_residual,
        grad_norm: raw.grad_norm,
        t_final: raw.t_final,
        steps: raw.steps,
        classification,
    })
}

fn classify_limit(
    rep: &RepSpec,
    v: &StateVector,
    raw: &RawFlow,
    opts: &FlowOptions,
) -> Result<StabilityClass> {
    let phi = raw.phi_residual;
    if phi > opts.phi_tol && phi < 10.0 * opts.phi_tol {
        return Err(Error::Indeterminate { phi_residual: phi });
    }
    let semistable = phi <= opts.phi_tol;
    // On a closed orbit the stabilizer is tested at the Kempf–Ness minimizer,
    // which lies on the same orbit as the flow limit but is computed to
    // relative rather than absolute accuracy.
    let minimizer = match minimize_kempf_ness(rep, v, opts)?.status {
        KempfNessStatus::Minimum(xi) => Some(act_imaginary(rep, &xi, 1.0, v)?),
        KempfNessStatus::Divergent(_) => None,
    };
    let closed_orbit = minimizer.is_some();
    let tag = match minimizer {
        _ if !semistable => StabilityTag::Unstable,
        Some(m) if stabilizer_rank(rep, &m, opts.stab_tol)?.finite => StabilityTag::Stable,
        _ => StabilityTag::Semistable,
    };
    Ok(StabilityClass { tag, closed_orbit })
}

/// Semistable when `‖Φ‖ ≤ phi_tol` at the flow limit; stable when in
/// addition the orbit is closed (Kempf–Ness minimum exists) and the
/// stabilizer is finite, checked at the Kempf–Ness minimizer. Residuals in `(phi_tol, 10 phi_tol)` give
/// [`Error::Indeterminate`].
pub fn classify_point(
    rep: &RepSpec,
    v: &StateVector,
    opts: &FlowOptions,
) -> Result<StabilityClass> {
    let raw = flow_unclassified(rep, v, opts)?;
    classify_limit(rep, v, &raw, opts)
}

#[derive(Debug, Clone, PartialEq)]
pub enum KempfNessStatus {
    /// The minimum is attained at `exp(√-1 ξ*) v`.
    Minimum(LieVector),
    /// The value keeps decreasing along the witness direction without
    /// attaining its infimum.
    Divergent(LieVector),
}

#[derive(Debug, Clone, PartialEq)]
pub struct KempfNessOutcome {
    pub status: KempfNessStatus,
    /// Value at the final iterate.
    pub value: f64,
    pub iterations: usize,
}

const KN_MAX_ITER: usize = 500;
const KN_GRAD_TOL: f64 = 1e-12;
const KN_CURVATURE_TOL: f64 = 1e-8;
const KN_NOISE_MARGIN: f64 = 1e3;

/// Minimizes `ξ ↦ kempf_ness_value(rep, v, ξ)`.
///
/// Torus: damped Newton on the convex function `log KN` over the span of the
/// shifted support weights. A stationary point is a minimum only if the
/// Hessian restricted to that span is bounded below by `1e-8 s²`; a flat
/// direction there means the infimum sits at infinity. SU(2): damped Newton
/// on `g ↦ ‖g v‖²` over `SL(2, C)` along imaginary directions, where at a
/// minimum the number of flat Hessian directions has to equal the complex
/// dimension of the stabilizer of `v`. In both cases a value below
/// `phi_tol ‖v‖²` or an escaping iterate is reported as divergent.
pub fn minimize_kempf_ness(
    rep: &RepSpec,
    v: &StateVector,
    opts: &FlowOptions,
) -> Result<KempfNessOutcome> {
    if v.len() != rep.n() {
        return Err(Error::DimensionMismatch {
            expected: rep.n(),
            got: v.len(),
        });
    }
    if v.is_zero() {
        return Ok(KempfNessOutcome {
            status: KempfNessStatus::Minimum(LieVector::zeros(rep.lie_dim())),
            value: 0.0,
            iterations: 0,
        });
    }
    match rep.kind() {
        RepKind::Torus { .. } => kn_torus(rep, v, opts),
        RepKind::Su2 { .. } => kn_su2(rep, v, opts),
    }
}

fn unit_or(x: &[f64], fallback: &[f64]) -> LieVector {
    let r = linalg::norm_real(x);
    if r > 0.0 {
        LieVector(x.iter().map(|a| a / r).collect())
    } else {
        LieVector(fallback.to_vec())
    }
}

fn kn_torus(rep: &RepSpec, v: &StateVector, opts: &FlowOptions) -> Result<KempfNessOutcome> {
    let d = rep.lie_dim();
    let support = v.support(opts.stab_tol);
    let wp: Vec<Vec<f64>> = support.iter().map(|&j| rep.shifted_weight(j)).collect();
    let logc: Vec<f64> = support
        .iter()
        .map(|&j| libm::log(v.0[j].norm_sqr()))
        .collect();
    let v2 = linalg::norm_sqr(&v.0);
    let scale = wp
        .iter()
        .flatten()
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(1e-300);

    // orthonormal basis of span{w'_j}
    let mut gram = vec![0.0; d * d];
    for w in &wp {
        for a in 0..d {
            for b in 0..d {
                gram[a * d + b] += w[a] * w[b];
            }
        }
    }
    let (gvals, gvecs) = symmetric_eigen(&gram, d);
    let trace: f64 = gvals.iter().sum();
    let span: Vec<Vec<f64>> = gvals
        .iter()
        .zip(&gvecs)
        .filter(|(l, _)| **l > 1e-12 * trace.max(1e-300))
        .map(|(_, e)| e.clone())
        .collect();

    let eval = |xi: &[f64]| -> (f64, Vec<f64>) {
        let logs: Vec<f64> = wp
            .iter()
            .zip(&logc)
            .map(|(w, c)| c - 2.0 * linalg::dot(w, xi))
            .collect();
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let e: Vec<f64> = logs.iter().map(|x| libm::exp(x - top)).collect();
        let s: f64 = e.iter().sum();
        (top + libm::log(s), e.into_iter().map(|x| x / s).collect())
    };

    let mut xi = vec![0.0; d];
    for it in 0..KN_MAX_ITER {
        let (f, p) = eval(&xi);
        let value = libm::exp(f);
        if value < opts.phi_tol * v2 {
            let g: Vec<f64> = (0..d)
                .map(|a| 2.0 * p.iter().zip(&wp).map(|(pk, w)| pk * w[a]).sum::<f64>())
                .collect();
            return Ok(KempfNessOutcome {
                status: KempfNessStatus::Divergent(unit_or(&xi, &g)),
                value,
                iterations: it,
            });
        }
        let m: Vec<f64> = (0..d)
            .map(|a| p.iter().zip(&wp).map(|(pk, w)| pk * w[a]).sum())
            .collect();
        let g: Vec<f64> = m.iter().map(|x| -2.0 * x).collect();
        let mut h = vec![0.0; d * d];
        for (pk, w) in p.iter().zip(&wp) {
            for a in 0..d {
                for b in 0..d {
                    h[a * d + b] += 4.0 * pk * (w[a] - m[a]) * (w[b] - m[b]);
                }
            }
        }
        let gn = linalg::norm_real(&g);
        let stationary_test = |xi: &[f64], loose: bool| -> Option<KempfNessOutcome> {
            let tol = if loose { 1e-9 } else { KN_GRAD_TOL };
            if gn > tol * scale {
                return None;
            }
            let k = span.len();
            let mut hq = vec![0.0; k * k];
            for r in 0..k {
                for c in 0..k {
                    let mut s = 0.0;
                    for a in 0..d {
                        for b in 0..d {
                            s += span[r][a] * h[a * d + b] * span[c][b];
                        }
                    }
                    hq[r * k + c] = s;
                }
            }
            let (vals, vecs) = symmetric_eigen(&hq, k);
            if vals
                .first()
                .is_none_or(|&l| l >= KN_CURVATURE_TOL * scale * scale)
            {
                return Some(KempfNessOutcome {
                    status: KempfNessStatus::Minimum(LieVector(xi.to_vec())),
                    value,
                    iterations: it,
                });
            }
            let dir: Vec<f64> = (0..d)
                .map(|a| (0..k).map(|r| vecs[0][r] * span[r][a]).sum())
                .collect();
            Some(KempfNessOutcome {
                status: KempfNessStatus::Divergent(unit_or(xi, &dir)),
                value,
                iterations: it,
            })
        };
        if let Some(out) = stationary_test(&xi, false) {
            return Ok(out);
        }
        if linalg::norm_real(&xi) * scale > 1e4 {
            return Ok(KempfNessOutcome {
                status: KempfNessStatus::Divergent(unit_or(&xi, &g)),
                value,
                iterations: it,
            });
        }
        let mut damped = h.clone();
        for a in 0..d {
            damped[a * d + a] += gn;
        }
        let neg_g: Vec<f64> = g.iter().map(|x| -x).collect();
        let step = linalg::solve(&damped, &neg_g, d).unwrap_or_else(|| neg_g.clone());
        let slope = linalg::dot(&g, &step);
        // near the minimum the decrease is below the resolution of `f`
        let floor = 4.0 * f64::EPSILON * f.abs().max(1.0);
        let mut t = 1.0;
        let mut moved = false;
        while t > 1e-14 {
            let trial: Vec<f64> = xi.iter().zip(&step).map(|(x, s)| x + t * s).collect();
            if eval(&trial).0 <= f + 1e-4 * t * slope + floor {
                xi = trial;
                moved = true;
                break;
            }
            t /= 2.0;
        }
        if !moved {
            return stationary_test(&xi, true).ok_or(Error::MaxIterations(it));
        }
    }
    Err(Error::MaxIterations(KN_MAX_ITER))
}

/// Complex dimension of `{ζ ∈ sl(2, C) : ζ · v = 0}`.
fn su2_complex_stabilizer_dim(rep: &RepSpec, v: &StateVector) -> usize {
    let unit = v.normalized();
    let mut vectors = Vec::with_capacity(6);
    for g in rep.basis_generators() {
        let av = g.apply(&unit.0);
        vectors.push(av.iter().map(|z| z * Complex::new(0.0, 1.0)).collect());
        vectors.push(av);
    }
    let (r, _, _) = linalg::real_span_rank(&vectors, 1e-7 * rep.generator_scale());
    3 - r / 2
}

fn kn_su2(rep: &RepSpec, v: &StateVector, opts: &FlowOptions) -> Result<KempfNessOutcome> {
    let v2 = linalg::norm_sqr(&v.0);
    let s = rep.generator_scale();
    let stab = su2_complex_stabilizer_dim(rep, v);
    let top = rep
        .spins()
        .and_then(|sp| sp.iter().copied().max())
        .unwrap_or(0);
    let gens = rep.basis_generators();
    let identity: su2::M2 = [
        [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)],
        [Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)],
    ];
    let mut g = identity;
    for it in 0..KN_MAX_ITER {
        let w = rep.su2_group_apply(&g, &v.0);
        let ww = linalg::norm_sqr(&w);
        let xi_now = su2::polar_log(&g);
        // Absolute roundoff in `g·v` grows like `‖g‖^m`; below a multiple of
        // it the value cannot be told apart from the infimum zero.
        let g_norm = libm::sqrt(g.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>());
        let noise = f64::EPSILON * libm::pow(g_norm, top as f64) * libm::sqrt(v2);
        if ww < opts.phi_tol * v2 || libm::sqrt(ww) <= KN_NOISE_MARGIN * noise {
            let e = expectations(rep, &w);
            return Ok(KempfNessOutcome {
                status: KempfNessStatus::Divergent(unit_or(&xi_now, &e)),
                value: ww,
                iterations: it,
            });
        }
        let e = expectations(rep, &w);
        let grad: Vec<f64> = e.iter().map(|x| -2.0 * x).collect();
        let aw: Vec<Vec<Complex>> = gens.iter().map(|a| a.apply(&w)).collect();
        let mut h = [0.0; 9];
        for a in 0..3 {
            for b in 0..3 {
                h[a * 3 + b] = 4.0 * linalg::real_inner(&aw[a], &aw[b]);
            }
        }
        let gn = linalg::norm_real(&grad);
        let stationary_test = |loose: bool| -> Option<KempfNessOutcome> {
            let tol = if loose { 1e-9 } else { KN_GRAD_TOL };
            if gn > (tol * s * ww).max(10.0 * s * libm::sqrt(ww) * noise) {
                return None;
            }
            let q: Vec<f64> = h.iter().map(|x| x / ww).collect();
            let (vals, vecs) = symmetric_eigen(&q, 3);
            // Along a direction where the value decays exponentially the
            // curvature is comparable to `s` times the relative gradient.
            let flat_tol = (KN_CURVATURE_TOL * s * s).max(100.0 * s * gn / ww);
            let flat = vals.iter().filter(|&&l| l < flat_tol).count();
            if flat <= stab {
                return Some(KempfNessOutcome {
                    status: KempfNessStatus::Minimum(LieVector(xi_now.to_vec())),
                    value: ww,
                    iterations: it,
                });
            }
            Some(KempfNessOutcome {
                status: KempfNessStatus::Divergent(unit_or(&xi_now, &vecs[stab])),
                value: ww,
                iterations: it,
            })
        };
        if let Some(out) = stationary_test(false) {
            return Ok(out);
        }
        if linalg::norm_real(&xi_now) > 60.0 {
            return Ok(KempfNessOutcome {
                status: KempfNessStatus::Divergent(unit_or(&xi_now, &grad)),
                value: ww,
                iterations: it,
            });
        }
        let mut damped = h.to_vec();
        for a in 0..3 {
            damped[a * 3 + a] += gn;
        }
        let neg: Vec<f64> = grad.iter().map(|x| -x).collect();
        let step = linalg::solve(&damped, &neg, 3).unwrap_or_else(|| neg.clone());
        let slope = linalg::dot(&grad, &step);
        let floor = 4.0 * f64::EPSILON * ww;
        let mut t = 1.0;
        let mut moved = false;
        while t > 1e-14 {
            let trial = su2::exp_imaginary(&step, t);
            let tw = rep.su2_group_apply(&trial, &w);
            if linalg::norm_sqr(&tw) <= ww + 1e-4 * t * slope + floor {
                g = su2::mul2(&trial, &g);
                moved = true;
                break;
            }
            t /= 2.0;
        }
        if !moved {
            return stationary_test(true).ok_or(Error::MaxIterations(it));
        }
    }
    Err(Error::MaxIterations(KN_MAX_ITER))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HullVerdict {
    pub semistable: bool,
    pub closed: bool,
    pub stable: bool,
}

/// Exact combinatorial stability of a torus point from `S = supp(v)`
/// (threshold `1e-12 ‖v‖`) and the shifted weights `w_j + λ`, decided by
/// rational linear programming.
///
/// * closed: the origin lies in the relative interior of
///   `conv{w_j + λ : j ∈ S}` (for `v = 0` at level zero, trivially);
/// * stable: closed and `{w_j + λ : j ∈ S}` spans `R^d`;
/// * semistable: always at affine level zero, otherwise the origin lies in
///   `conv{w_j + λ : j ∈ S}`.
pub fn hull_oracle(rep: &RepSpec, v: &StateVector) -> Result<HullVerdict> {
    rep.torus_weights("a torus representation")?;
    rep.check_state(v)?;
    let d = rep.lie_dim();
    let shifted = rep.shifted_weights_exact().expect("torus");
    let support = v.support(DEFAULT_SUPPORT_TOL);
    let m: Vec<Vec<Rational>> = (0..d)
        .map(|a| support.iter().map(|&j| shifted[j][a].clone()).collect())
        .collect();
    let level_zero = rep.level_is_zero();
    if support.is_empty() {
        let at_origin = level_zero && rep.mode() == Mode::Affine;
        return Ok(HullVerdict {
            semistable: at_origin,
            closed: at_origin,
            stable: false,
        });
    }
    let closed = strictly_positive_kernel(&m, support.len()).is_some();
    let semistable = if rep.mode() == Mode::Affine && level_zero {
        true
    } else {
        closed || convex_kernel(&m, support.len()).is_some()
    };
    let stable = closed && spans(&m, d);
    Ok(HullVerdict {
        semistable,
        closed,
        stable,
    })
}

/// Sampling plan for [`one_ps_oracle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnePsGrid {
    /// Number of directions on a Fibonacci sphere.
    pub directions: usize,
    /// How many of the best directions are refined by pattern search.
    pub refine_top: usize,
    pub refine_iters: usize,
}

impl Default for OnePsGrid {
    fn default() -> Self {
        OnePsGrid {
            directions: 200,
            refine_top: 5,
            refine_iters: 400,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OnePsVerdict {
    pub destabilizer_found: bool,
    pub witness: LieVector,
    /// Smallest destabilization score seen; zero exactly along destabilizers.
    pub best_score: f64,
}

/// Fraction of `‖v‖²` carried by components that do not decay along
/// `exp(√-1 t n)`, `t → ∞`: in the eigenframe of `σ_n` the `u_k` component of
/// a spin-`m` block scales as `exp(-t (m/2 - k))`.
fn one_ps_score(rep: &RepSpec, v: &[Complex], n: &[f64]) -> f64 {
    let k = su2::eigenframe(n);
    let kh = su2::adjoint2(&k);
    let c = rep.su2_group_apply(&kh, v);
    let mut bad = 0.0;
    for (spin, offset) in rep.su2_layout() {
        for j in 0..=spin as usize {
            if 2 * j >= spin as usize {
                bad += c[offset + j].norm_sqr();
            }
        }
    }
    bad / linalg::norm_sqr(v)
}

fn fibonacci_sphere(count: usize) -> Vec<[f64; 3]> {
    let golden = core::f64::consts::PI * (3.0 - libm::sqrt(5.0));
    (0..count)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
            let r = libm::sqrt(1.0 - z * z);
            let phi = golden * i as f64;
            [r * libm::cos(phi), r * libm::sin(phi), z]
        })
        .collect()
}

fn tangent_basis(n: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let a = if n[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let dot = a[0] * n[0] + a[1] * n[1] + a[2] * n[2];
    let mut t1 = [a[0] - dot * n[0], a[1] - dot * n[1], a[2] - dot * n[2]];
    let r = linalg::norm_real(&t1);
    for x in t1.iter_mut() {
        *x /= r;
    }
    let t2 = [
        n[1] * t1[2] - n[2] * t1[1],
        n[2] * t1[0] - n[0] * t1[2],
        n[0] * t1[1] - n[1] * t1[0],
    ];
    (t1, t2)
}

/// Numerical Hilbert–Mumford probe for SU(2): searches unit directions `n`
/// for which every component of `v` in the eigenframe of `σ_n` has positive
/// decay rate, so that `exp(√-1 t n) v → 0`. Scores below `1e-12` after
/// refinement count as a destabilizer, scores above `1e-6` everywhere as
/// none; anything between is [`Error::InconclusiveGrid`].
pub fn one_ps_oracle(rep: &RepSpec, v: &StateVector, grid: &OnePsGrid) -> Result<OnePsVerdict> {
    if rep.is_torus() {
        return Err(Error::Unsupported("an SU(2) representation"));
    }
    if v.len() != rep.n() {
        return Err(Error::DimensionMismatch {
            expected: rep.n(),
            got: v.len(),
        });
    }
    if v.is_zero() {
        return Ok(OnePsVerdict {
            destabilizer_found: false,
            witness: LieVector::zeros(3),
            best_score: 1.0,
        });
    }
    let mut scored: Vec<(f64, [f64; 3])> = fibonacci_sphere(grid.directions.max(1))
        .into_iter()
        .map(|n| (one_ps_score(rep, &v.0, &n), n))
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = scored[0];
    for &(score0, n0) in scored.iter().take(grid.refine_top) {
        let (mut score, mut n) = (score0, n0);
        let mut step = 0.2;
        for _ in 0..grid.refine_iters {
            if step < 1e-10 || score == 0.0 {
                break;
            }
            let (t1, t2) = tangent_basis(&n);
            let mut improved = false;
            for (dir, sign) in [(t1, 1.0), (t1, -1.0), (t2, 1.0), (t2, -1.0)] {
                let mut cand = [
                    n[0] + sign * step * dir[0],
                    n[1] + sign * step * dir[1],
                    n[2] + sign * step * dir[2],
                ];
                let r = linalg::norm_real(&cand);
                for x in cand.iter_mut() {
                    *x /= r;
                }
                let s = one_ps_score(rep, &v.0, &cand);
                if s < score {
                    score = s;
                    n = cand;
                    improved = true;
                }
            }
            if !improved {
                step /= 2.0;
            }
        }
        if score < best.0 {
            best = (score, n);
        }
    }
    let (score, n) = best;
    if score < 1e-12 {
        Ok(OnePsVerdict {
            destabilizer_found: true,
            witness: LieVector(n.to_vec()),
            best_score: score,
        })
    } else if score > 1e-6 {
        Ok(OnePsVerdict {
            destabilizer_found: false,
            witness: LieVector(n.to_vec()),
            best_score: score,
        })
    } else {
        Err(Error::InconclusiveGrid { best_score: score })
    }
}

/// Samples `t` on `samples` evenly spaced points of `[-4, 4]` and reports
/// whether `{t : ‖exp(√-1 t ξ) v‖ < radius}` is a contiguous run of grid
/// points. Points whose exponent overflows count as outside.
pub fn orbital_convexity_probe(
    rep: &RepSpec,
    v: &StateVector,
    xi: &LieVector,
    radius: f64,
    samples: usize,
) -> Result<bool> {
    if v.len() != rep.n() {
        return Err(Error::DimensionMismatch {
            expected: rep.n(),
            got: v.len(),
        });
    }
    rep.check_lie(xi)?;
    let inside: Vec<bool> = (0..samples)
        .map(|i| {
            let t = if samples == 1 {
                0.0
            } else {
                -4.0 + 8.0 * i as f64 / (samples - 1) as f64
            };
            match act_imaginary(rep, xi, t, v) {
                Ok(x) => Ok(x.norm() < radius),
                Err(Error::Overflow { .. }) => Ok(false),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let first = inside.iter().position(|&b| b);
    let last = inside.iter().rposition(|&b| b);
    Ok(match (first, last) {
        (Some(a), Some(b)) => inside[a..=b].iter().all(|&x| x),
        _ => true,
    })
}
