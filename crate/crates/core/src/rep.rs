//! Groups, representations and the polar action on phase-space points.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{ToPrimitive, Zero};

use crate::exact::{q, q_to_f64, rank, rank_int};
use crate::linalg::{self, CMatrix};
use crate::su2;
use crate::{Complex, Error, Rational, Result};

/// Largest exponent magnitude `act_imaginary` accepts before reporting
/// [`Error::Overflow`].
pub const MAX_EXPONENT: f64 = 700.0;

/// Default support threshold: `supp(v) = {j : |v_j| > tol ‖v‖}`.
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepKind {
    /// Weight matrix with `d` rows and `n` columns; column `j` is `w_j`.
    Torus { weights: Vec<Vec<i64>> },
    /// Direct sum of `Sym^{m_i}(C²)`.
    Su2 { spins: Vec<u32> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Affine,
    Projective,
}

/// Declarative description accepted by [`build_rep`].
#[derive(Debug, Clone, PartialEq)]
pub struct RepConfig {
    pub kind: KindConfig,
    pub mode: Mode,
    /// Empty means zero.
    pub level: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum KindConfig {
    Torus { weights: Vec<Vec<Rational>> },
    Su2 { spins: Vec<i64> },
}

/// A validated linear action together with phase-space mode and level.
#[derive(Debug, Clone, PartialEq)]
pub struct RepSpec {
    kind: RepKind,
    mode: Mode,
    level: Vec<Rational>,
    n: usize,
    su2_blocks: Vec<Su2Block>,
}

#[derive(Debug, Clone, PartialEq)]
struct Su2Block {
    spin: u32,
    offset: usize,
    generators: [CMatrix; 3],
}

/// Element of the Lie algebra in the fixed orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LieVector(pub Vec<f64>);

/// Point of `C^n`, or homogeneous coordinates of a point of `P^{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(pub Vec<Complex>);

impl StateVector {
    pub fn from_real(xs: &[f64]) -> Self {
        StateVector(xs.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        StateVector(vec![Complex::new(0.0, 0.0); n])
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Unit representative; used where an operation needs `‖v‖ = 1`.
    pub fn normalized(&self) -> Self {
        let r = self.norm();
        StateVector(linalg::scale(&self.0, 1.0 / r))
    }

    /// Indices `j` with `|v_j| > tol ‖v‖`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        let r = self.norm();
        (0..self.0.len())
            .filter(|&j| self.0[j].norm() > tol * r)
            .collect()
    }
}

impl LieVector {
    pub fn zeros(dim: usize) -> Self {
        LieVector(vec![0.0; dim])
    }

    pub fn basis(dim: usize, a: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[a] = 1.0;
        LieVector(v)
    }

    pub fn norm(&self) -> f64 {
        linalg::norm_real(&self.0)
    }
}

/// Hermitian matrix `A_ξ` through which `ξ` acts (`ξ_M(v) = i A_ξ v`).
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Diagonal(Vec<f64>),
    Blocks(Vec<(usize, CMatrix)>),
}

impl Generator {
    pub fn apply(&self, v: &[Complex]) -> Vec<Complex> {
        match self {
            Generator::Diagonal(d) => v.iter().zip(d).map(|(z, a)| z * a).collect(),
            Generator::Blocks(blocks) => {
                let mut out = vec![Complex::new(0.0, 0.0); v.len()];
                for (offset, m) in blocks {
                    let part = m.apply(&v[*offset..*offset + m.cols]);
                    out[*offset..*offset + m.cols].copy_from_slice(&part);
                }
                out
            }
        }
    }

    /// `Re(v^H A v)`.
    pub fn expectation(&self, v: &[Complex]) -> f64 {
        linalg::real_inner(&self.apply(v), v)
    }
}

pub fn build_rep(config: &RepConfig) -> Result<RepSpec> {
    let malformed = |msg: &str| Error::MalformedConfig(msg.to_string());
    let (kind, n, lie_dim) = match &config.kind {
        KindConfig::Torus { weights } => {
            let d = weights.len();
            if d == 0 {
                return Err(malformed("torus of rank 0"));
            }
            let n = weights[0].len();
            if n == 0 {
                return Err(malformed("torus acting on a zero-dimensional space"));
            }
            let mut rows = Vec::with_capacity(d);
            for (a, row) in weights.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::MalformedConfig(format!(
                        "weight row {a} has {} entries, expected {n}",
                        row.len()
                    )));
                }
                let mut ints = Vec::with_capacity(n);
                for w in row {
                    if !w.is_integer() {
                        return Err(malformed("non-integer weight"));
                    }
                    ints.push(
                        w.to_integer()
                            .to_i64()
                            .ok_or_else(|| malformed("weight out of range"))?,
                    );
                }
                rows.push(ints);
            }
            (RepKind::Torus { weights: rows }, n, d)
        }
        KindConfig::Su2 { spins } => {
            if spins.is_empty() {
                return Err(malformed("empty spin list"));
            }
            let mut out = Vec::with_capacity(spins.len());
            for &m in spins {
                if !(0..=64).contains(&m) {
                    return Err(malformed("spins must be integers in 0..=64"));
                }
                out.push(m as u32);
            }
            let n = out.iter().map(|&m| m as usize + 1).sum();
            (RepKind::Su2 { spins: out }, n, 3)
        }
    };
    if config.mode == Mode::Projective && n < 2 {
        return Err(malformed("projective mode needs n >= 2"));
    }
    let level = match (&kind, config.level.is_empty()) {
        (_, true) => vec![Rational::zero(); lie_dim],
        (RepKind::Torus { .. }, false) => {
            if config.level.len() != lie_dim {
                return Err(Error::MalformedConfig(format!(
                    "level has {} entries, expected {lie_dim}",
                    config.level.len()
                )));
            }
            config.level.clone()
        }
        (RepKind::Su2 { .. }, false) => {
            if config.level.iter().any(|x| !x.is_zero()) {
                return Err(malformed("nonzero SU(2) levels are not supported"));
            }
            vec![Rational::zero(); lie_dim]
        }
    };
    let su2_blocks = match &kind {
        RepKind::Su2 { spins } => {
            let mut offset = 0;
            spins
                .iter()
                .map(|&spin| {
                    let b = Su2Block {
                        spin,
                        offset,
                        generators: su2::spin_matrices(spin),
                    };
                    offset += spin as usize + 1;
                    b
                })
                .collect()
        }
        RepKind::Torus { .. } => Vec::new(),
    };
    Ok(RepSpec {
        kind,
        mode: config.mode,
        level,
        n,
        su2_blocks,
    })
}

impl RepSpec {
    pub fn kind(&self) -> &RepKind {
        &self.kind
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn level(&self) -> &[Rational] {
        &self.level
    }

    pub fn level_f64(&self) -> Vec<f64> {
        self.level.iter().map(q_to_f64).collect()
    }

    pub fn level_is_zero(&self) -> bool {
        self.level.iter().all(Zero::is_zero)
    }

    /// The same action and mode at level zero.
    pub fn at_level_zero(&self) -> RepSpec {
        let mut out = self.clone();
        out.level = vec![Rational::zero(); self.level.len()];
        out
    }

    /// The same action and mode at another level.
    pub fn with_level(&self, level: &[Rational]) -> Result<RepSpec> {
        if level.len() != self.level.len() {
            return Err(Error::DimensionMismatch {
                expected: self.level.len(),
                got: level.len(),
            });
        }
        if !self.is_torus() && level.iter().any(|x| !x.is_zero()) {
            return Err(Error::Unsupported("SU(2) levels other than zero"));
        }
        let mut out = self.clone();
        out.level = level.to_vec();
        Ok(out)
    }

    /// The same action and level in the other mode.
    pub fn with_mode(&self, mode: Mode) -> RepSpec {
        let mut out = self.clone();
        out.mode = mode;
        out
    }

    /// Complex dimension of the underlying vector space.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of the Lie algebra.
    pub fn lie_dim(&self) -> usize {
        match &self.kind {
            RepKind::Torus { weights } => weights.len(),
            RepKind::Su2 { .. } => 3,
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self.kind, RepKind::Torus { .. })
    }

    pub fn weights(&self) -> Option<&[Vec<i64>]> {
        match &self.kind {
            RepKind::Torus { weights } => Some(weights),
            RepKind::Su2 { .. } => None,
        }
    }

    pub fn spins(&self) -> Option<&[u32]> {
        match &self.kind {
            RepKind::Su2 { spins } => Some(spins),
            RepKind::Torus { .. } => None,
        }
    }

    pub(crate) fn torus_weights(&self, what: &'static str) -> Result<&[Vec<i64>]> {
        self.weights().ok_or(Error::Unsupported(what))
    }

    /// Weight `w_j` as a float vector.
    pub fn weight(&self, j: usize) -> Vec<f64> {
        match &self.kind {
            RepKind::Torus { weights } => weights.iter().map(|row| row[j] as f64).collect(),
            RepKind::Su2 { .. } => Vec::new(),
        }
    }

    /// Level-shifted weights `w_j + λ`, exactly, one column per coordinate.
    pub fn shifted_weights_exact(&self) -> Option<Vec<Vec<Rational>>> {
        let w = self.weights()?;
        Some(
            (0..self.n)
                .map(|j| (0..w.len()).map(|a| q(w[a][j]) + &self.level[a]).collect())
                .collect(),
        )
    }

    pub fn shifted_weight(&self, j: usize) -> Vec<f64> {
        let lv = self.level_f64();
        self.weight(j).iter().zip(&lv).map(|(w, l)| w + l).collect()
    }

    /// Largest `|⟨w_j, ξ⟩|`-type scale of the basis generators; used for
    /// relative tolerances.
    pub fn generator_scale(&self) -> f64 {
        match &self.kind {
            RepKind::Torus { weights } => {
                let m = weights
                    .iter()
                    .flatten()
                    .map(|w| w.unsigned_abs())
                    .max()
                    .unwrap_or(0);
                (m as f64).max(1.0)
            }
            RepKind::Su2 { spins } => (f64::from(*spins.iter().max().unwrap_or(&0)) / 2.0).max(0.5),
        }
    }

    pub fn check_state(&self, v: &StateVector) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        if self.mode == Mode::Projective && v.is_zero() {
            return Err(Error::ZeroVectorInProjectiveMode);
        }
        Ok(())
    }

    pub fn check_lie(&self, xi: &LieVector) -> Result<()> {
        if xi.0.len() != self.lie_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.lie_dim(),
                got: xi.0.len(),
            });
        }
        Ok(())
    }

    /// The Hermitian matrix `A_ξ`.
    pub fn generator(&self, xi: &LieVector) -> Result<Generator> {
        self.check_lie(xi)?;
        Ok(match &self.kind {
            RepKind::Torus { weights } => Generator::Diagonal(
                (0..self.n)
                    .map(|j| {
                        weights
                            .iter()
                            .zip(&xi.0)
                            .map(|(row, x)| row[j] as f64 * x)
                            .sum()
                    })
                    .collect(),
            ),
            RepKind::Su2 { .. } => Generator::Blocks(
                self.su2_blocks
                    .iter()
                    .map(|b| {
                        let mut m = CMatrix::zeros(b.spin as usize + 1, b.spin as usize + 1);
                        for (g, &x) in b.generators.iter().zip(&xi.0) {
                            m.add_assign_scaled(g, x);
                        }
                        (b.offset, m)
                    })
                    .collect(),
            ),
        })
    }

    /// Basis generators `A_{e_a}`.
    pub fn basis_generators(&self) -> Vec<Generator> {
        (0..self.lie_dim())
            .map(|a| {
                self.generator(&LieVector::basis(self.lie_dim(), a))
                    .expect("basis vector has the right length")
            })
            .collect()
    }

    /// SU(2) blocks as `(spin, offset)`.
    pub fn su2_layout(&self) -> Vec<(u32, usize)> {
        self.su2_blocks.iter().map(|b| (b.spin, b.offset)).collect()
    }

    /// `Sym(g)` applied blockwise to `v` for a 2×2 group element `g`.
    pub(crate) fn su2_group_apply(&self, g: &su2::M2, v: &[Complex]) -> Vec<Complex> {
        let mut out = v.to_vec();
        for b in &self.su2_blocks {
            let n = b.spin as usize + 1;
            let part = su2::sym_power(g, b.spin).apply(&v[b.offset..b.offset + n]);
            out[b.offset..b.offset + n].copy_from_slice(&part);
        }
        out
    }
}

/// `ξ_M(v)`: torus coordinate `j` is multiplied by `√-1 ⟨w_j, ξ⟩`.
pub fn act_infinitesimal(rep: &RepSpec, xi: &LieVector, v: &StateVector) -> Result<StateVector> {
    if v.len() != rep.n() {
        return Err(Error::DimensionMismatch {
            expected: rep.n(),
            got: v.len(),
        });
    }
    let a = rep.generator(xi)?;
    Ok(StateVector(
        a.apply(&v.0)
            .into_iter()
            .map(|z| z * Complex::new(0.0, 1.0))
            .collect(),
    ))
}

/// `exp(√-1 t ξ) · v = exp(-t A_ξ) v`.
pub fn act_imaginary(
    rep: &RepSpec,
    xi: &LieVector,
    t: f64,
    v: &StateVector,
) -> Result<StateVector> {
    if v.len() != rep.n() {
        return Err(Error::DimensionMismatch {
            expected: rep.n(),
            got: v.len(),
        });
    }
    rep.check_lie(xi)?;
    match rep.kind() {
        RepKind::Torus { .. } => {
            let Generator::Diagonal(d) = rep.generator(xi)? else {
                unreachable!()
            };
            let mut out = Vec::with_capacity(v.len());
            for (z, a) in v.0.iter().zip(&d) {
                let e = -t * a;
                if e.abs() > MAX_EXPONENT || !e.is_finite() {
                    return Err(Error::Overflow { exponent: e });
                }
                out.push(z * libm::exp(e));
            }
            Ok(StateVector(out))
        }
        RepKind::Su2 { spins } => {
            let max_spin = f64::from(*spins.iter().max().unwrap_or(&0));
            let e = t.abs() * xi.norm() * max_spin / 2.0;
            if e > MAX_EXPONENT || !e.is_finite() {
                return Err(Error::Overflow { exponent: e });
            }
            let g = su2::exp_imaginary(&xi.0, t);
            Ok(StateVector(rep.su2_group_apply(&g, &v.0)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StabilizerInfo {
    pub lie_dimension: usize,
    pub finite: bool,
}

/// Dimension of the stabilizer of `v` (affine) or `[v]` (projective).
///
/// Torus, affine: `d - rank(W restricted to supp(v))`. Torus, projective:
/// `d - rank{w_j - w_k : j, k ∈ supp(v)}`. SU(2): numerical kernel of
/// `ξ ↦ A_ξ v` (projected off `C v` in projective mode) with singular values
/// below `sqrt(tol) · ‖v‖ · scale` counted as zero.
pub fn stabilizer_rank(rep: &RepSpec, v: &StateVector, tol: f64) -> Result<StabilizerInfo> {
    if v.len() != rep.n() {
        return Err(Error::DimensionMismatch {
            expected: rep.n(),
            got: v.len(),
        });
    }
    let d = rep.lie_dim();
    if v.is_zero() {
        return Ok(StabilizerInfo {
            lie_dimension: d,
            finite: false,
        });
    }
    let support = v.support(tol);
    let lie_dimension = match rep.kind() {
        RepKind::Torus { weights } => {
            let r = match rep.mode() {
                Mode::Affine => {
                    let m: Vec<Vec<i64>> = weights
                        .iter()
                        .map(|row| support.iter().map(|&j| row[j]).collect())
                        .collect();
                    rank_int(&m)
                }
                Mode::Projective => {
                    let Some((&first, rest)) = support.split_first() else {
                        return Ok(StabilizerInfo {
                            lie_dimension: d,
                            finite: false,
                        });
                    };
                    let m: Vec<Vec<Rational>> = weights
                        .iter()
                        .map(|row| rest.iter().map(|&j| q(row[j] - row[first])).collect())
                        .collect();
                    rank(&m)
                }
            };
            d - r
        }
        RepKind::Su2 { .. } => {
            let unit = v.normalized();
            let vectors: Vec<Vec<Complex>> = rep
                .basis_generators()
                .iter()
                .map(|g| {
                    let av = g.apply(&unit.0);
                    match rep.mode() {
                        Mode::Affine => av,
                        Mode::Projective => {
                            let c = linalg::hermitian(&av, &unit.0);
                            av.iter().zip(&unit.0).map(|(a, u)| a - u * c).collect()
                        }
                    }
                })
                .collect();
            let threshold = libm::sqrt(tol) * rep.generator_scale();
            let (r, _, _) = linalg::real_span_rank(&vectors, threshold);
            d - r
        }
    };
    Ok(StabilizerInfo {
        lie_dimension,
        finite: lie_dimension == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    pub(crate) fn torus(weights: &[&[i64]], mode: Mode) -> RepSpec {
        build_rep(&RepConfig {
            kind: KindConfig::Torus {
                weights: weights
                    .iter()
                    .map(|r| r.iter().map(|&x| q(x)).collect())
                    .collect(),
            },
            mode,
            level: Vec::new(),
        })
        .unwrap()
    }

    fn su2(spins: &[i64], mode: Mode) -> RepSpec {
        build_rep(&RepConfig {
            kind: KindConfig::Su2 {
                spins: spins.to_vec(),
            },
            mode,
            level: Vec::new(),
        })
        .unwrap()
    }

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn build_examples() {
        let r = torus(&[&[1, -1]], Mode::Affine);
        assert_eq!((r.lie_dim(), r.n()), (1, 2));
        assert_eq!(su2(&[3], Mode::Affine).n(), 4);
        let r = build_rep(&RepConfig {
            kind: KindConfig::Torus {
                weights: vec![vec![q(1), q(0), q(-1)], vec![q(0), q(1), q(-1)]],
            },
            mode: Mode::Projective,
            level: vec![q(0), q(0)],
        })
        .unwrap();
        assert_eq!((r.lie_dim(), r.n()), (2, 3));
    }

    #[test]
    fn build_rejects_malformed() {
        let bad = |kind, mode, level| build_rep(&RepConfig { kind, mode, level }).unwrap_err();
        assert!(matches!(
            bad(KindConfig::Torus { weights: vec![] }, Mode::Affine, vec![]),
            Error::MalformedConfig(_)
        ));
        assert!(matches!(
            bad(KindConfig::Su2 { spins: vec![] }, Mode::Affine, vec![]),
            Error::MalformedConfig(_)
        ));
        assert!(matches!(
            bad(
                KindConfig::Torus {
                    weights: vec![vec![q(1), q(2)], vec![q(1)]]
                },
                Mode::Affine,
                vec![]
            ),
            Error::MalformedConfig(_)
        ));
        let half = Rational::new(1.into(), 2.into());
        assert!(matches!(
            bad(
                KindConfig::Torus {
                    weights: vec![vec![half]]
                },
                Mode::Affine,
                vec![]
            ),
            Error::MalformedConfig(_)
        ));
        assert!(matches!(
            bad(
                KindConfig::Torus {
                    weights: vec![vec![q(1)]]
                },
                Mode::Projective,
                vec![]
            ),
            Error::MalformedConfig(_)
        ));
        assert!(matches!(
            bad(KindConfig::Su2 { spins: vec![0] }, Mode::Projective, vec![]),
            Error::MalformedConfig(_)
        ));
        assert!(matches!(
            bad(KindConfig::Su2 { spins: vec![2] }, Mode::Affine, vec![q(1)]),
            Error::MalformedConfig(_)
        ));
    }

    #[test]
    fn infinitesimal_examples() {
        let r = torus(&[&[1, -1]], Mode::Affine);
        let out = act_infinitesimal(
            &r,
            &LieVector(vec![1.0]),
            &StateVector::from_real(&[1.0, 1.0]),
        )
        .unwrap();
        assert_eq!(out.0, vec![c(0.0, 1.0), c(0.0, -1.0)]);
        let zero = act_infinitesimal(
            &r,
            &LieVector(vec![0.0]),
            &StateVector::from_real(&[3.0, 1.0]),
        )
        .unwrap();
        assert!(zero.is_zero());
        let s = su2(&[1], Mode::Affine);
        let out = act_infinitesimal(
            &s,
            &LieVector::basis(3, 2),
            &StateVector::from_real(&[1.0, 0.0]),
        )
        .unwrap();
        assert!((out.0[0] - c(0.0, 0.5)).norm() < 1e-15 && out.0[1].norm() < 1e-15);
        assert!(matches!(
            act_infinitesimal(&r, &LieVector(vec![1.0]), &StateVector::from_real(&[1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn imaginary_action_examples() {
        let r = torus(&[&[1, -1]], Mode::Affine);
        let v = StateVector::from_real(&[1.0, 1.0]);
        let t = 0.37;
        let out = act_imaginary(&r, &LieVector(vec![1.0]), t, &v).unwrap();
        assert!((out.0[0].re - libm::exp(-t)).abs() < 1e-15);
        assert!((out.0[1].re - libm::exp(t)).abs() < 1e-15);
        assert_eq!(
            act_imaginary(&r, &LieVector(vec![2.0]), 0.0, &v).unwrap(),
            v
        );
        assert!(matches!(
            act_imaginary(&r, &LieVector(vec![1.0]), 1e4, &v),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn imaginary_action_matches_rk4_integration_of_j_xi() {
        // d/dt x = J ξ_M(x) = -A_ξ x, integrated with classical RK4
        let s = su2(&[2, 1], Mode::Affine);
        let xi = LieVector(vec![0.3, -0.7, 0.5]);
        let a = s.generator(&xi).unwrap();
        let v0 = StateVector(vec![
            c(0.2, 0.1),
            c(-0.4, 0.3),
            c(1.0, 0.0),
            c(0.5, -0.5),
            c(0.1, 0.9),
        ]);
        let f = |x: &[Complex]| -> Vec<Complex> { a.apply(x).into_iter().map(|z| -z).collect() };
        let steps = 2000;
        let h = 1.3 / steps as f64;
        let mut x = v0.0.clone();
        for _ in 0..steps {
            let k1 = f(&x);
            let x2: Vec<Complex> = x.iter().zip(&k1).map(|(a, b)| a + b * (h / 2.0)).collect();
            let k2 = f(&x2);
            let x3: Vec<Complex> = x.iter().zip(&k2).map(|(a, b)| a + b * (h / 2.0)).collect();
            let k3 = f(&x3);
            let x4: Vec<Complex> = x.iter().zip(&k3).map(|(a, b)| a + b * h).collect();
            let k4 = f(&x4);
            for i in 0..x.len() {
                x[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
            }
        }
        let exact = act_imaginary(&s, &xi, 1.3, &v0).unwrap();
        for (p, e) in x.iter().zip(&exact.0) {
            assert!((p - e).norm() < 1e-10);
        }
    }

    #[test]
    fn stabilizer_examples() {
        let r = torus(&[&[1, -1]], Mode::Affine);
        let info = stabilizer_rank(
            &r,
            &StateVector::from_real(&[1.0, 1.0]),
            DEFAULT_SUPPORT_TOL,
        )
        .unwrap();
        assert_eq!(
            info,
            StabilizerInfo {
                lie_dimension: 0,
                finite: true
            }
        );
        let info = stabilizer_rank(&r, &StateVector::zeros(2), DEFAULT_SUPPORT_TOL).unwrap();
        assert_eq!(
            info,
            StabilizerInfo {
                lie_dimension: 1,
                finite: false
            }
        );
        let r = torus(&[&[1, 0], &[0, 0]], Mode::Affine);
        let info = stabilizer_rank(
            &r,
            &StateVector::from_real(&[1.0, 0.0]),
            DEFAULT_SUPPORT_TOL,
        )
        .unwrap();
        assert_eq!(
            info,
            StabilizerInfo {
                lie_dimension: 1,
                finite: false
            }
        );
        let s = su2(&[3], Mode::Affine);
        assert_eq!(
            stabilizer_rank(&s, &StateVector::zeros(4), 1e-12)
                .unwrap()
                .lie_dimension,
            3
        );
        // x³ + y³ has a finite stabilizer in SU(2); x y² ... weight vectors keep a circle
        let cubic = StateVector(su2::binary_form(&[
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ]));
        assert!(stabilizer_rank(&s, &cubic, 1e-12).unwrap().finite);
        let sp = su2(&[3], Mode::Projective);
        let weight_vec = StateVector(su2::binary_form(&[
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
        ]));
        assert_eq!(
            stabilizer_rank(&sp, &weight_vec, 1e-12)
                .unwrap()
                .lie_dimension,
            1
        );
    }
}
