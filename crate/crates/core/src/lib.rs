//! Computable symplectic reduction for linear actions of tori and SU(2).
//!
//! The crate works on two model phase spaces: a complex vector space `C^n`
//! with its flat Kähler structure, and the projective space `P^{n-1}` with a
//! Fubini–Study structure. On top of the momentum map it provides the
//! steepest-descent flow of `‖Φ‖²`, stability classification, Kempf–Ness
//! minimization, torus invariant rings, orbit-type strata and exact lattice
//! point multiplicities.
//!
//! Everything here is a pure function of immutable inputs and the crate is
//! `no_std` (it needs `alloc`). File formats, the CLI and seeded instance
//! generation live in the companion `symquot` crate.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * Hermitian form `h(u, v) = Σ u_j conj(v_j)`, Kähler form `ω = -Im h`,
//!   Riemannian metric `Re h`, complex structure `J = multiplication by i`.
//! * A Lie algebra vector `ξ` acts through a Hermitian matrix `A_ξ` as
//!   `ξ_M(v) = i A_ξ v`, so `J ξ_M(v) = -A_ξ v` and
//!   `exp(√-1 t ξ) v = exp(-t A_ξ) v`.
//! * For a torus with weight matrix `W` (column `j` is `w_j`),
//!   `A_ξ = diag(⟨w_j, ξ⟩)`. For SU(2) the basis `e_a = (i/2) σ_a` is
//!   orthonormal for `⟨X, Y⟩ = -2 tr(XY)` and acts on `Sym^m(C²)` through
//!   the spin matrices.
//! * Affine momentum: `Φ^ξ(v) = -½ v^H A_ξ v - ⟨λ, ξ⟩`.
//!   Projective momentum: `Φ^ξ([v]) = -v^H A_ξ v / ‖v‖² - ⟨λ, ξ⟩`.
//! * A level `λ` enters combinatorial questions through the shifted weights
//!   `w_j + λ`: a monomial `z^a` is level-`λ` invariant when
//!   `Σ a_j (w_j + λ) = 0`, i.e. `W a = -|a| λ`.
#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod exact;
pub mod flow;
pub mod hull;
pub mod invariants;
pub mod linalg;
pub mod moment;
pub mod ode;
pub mod polytope;
pub mod quantization;
pub mod rep;
pub mod su2;

pub use error::{Error, Result};
pub use flow::{
    classify_point, hull_oracle, integrate_flow, minimize_kempf_ness, one_ps_oracle,
    orbital_convexity_probe, FlowOptions, FlowResult, HullVerdict, KempfNessOutcome,
    KempfNessStatus, OnePsGrid, OnePsVerdict, StabilityClass, StabilityTag,
};
pub use invariants::{
    enumerate_strata, hilbert_basis, hilbert_map, separates_closed_orbits, Completeness,
    HilbertBasis, MonomialExponent, StratumDescriptor,
};
pub use moment::{
    grad_yang_mills, identity_residuals, kempf_ness_value, momentum, yang_mills, IdentityResiduals,
    MomentumValue,
};
pub use polytope::{fiber_polytope, polytope_volume, DegreeConstraint, FiberPolytope};
pub use quantization::{
    ehrhart_fit, invariant_dimension, su2_multiplicity, verify_qr, verify_su2_dimension,
    weight_multiplicity, EhrhartFit, QrCheck,
};
pub use rep::{
    act_imaginary, act_infinitesimal, build_rep, stabilizer_rank, KindConfig, LieVector, Mode,
    RepConfig, RepKind, RepSpec, StabilizerInfo, StateVector,
};

/// Exact rationals used for levels, polytopes and fits.
pub type Rational = num_rational::BigRational;
/// Complex scalars used for phase-space coordinates.
pub type Complex = num_complex::Complex64;
