//! SU(2) and its irreducible representations `Sym^m(C²)`.
//!
//! `Sym^m(C²)` carries the orthonormal basis
//! `u_k = sqrt(C(m, k)) e1^{m-k} e2^k`, `k = 0..=m`. Under the diagonal
//! torus `u_k` has weight `m - 2k` (in units where the defining
//! representation has weights ±1), equivalently eigenvalue `m/2 - k` of the
//! spin operator `S_3`.
//!
//! A binary form `Σ c_k x^{m-k} y^k` is identified with
//! `Σ c_k / sqrt(C(m, k)) u_k`; see [`binary_form`].

use alloc::vec::Vec;

use crate::exact::binomial;
use crate::linalg::CMatrix;
use crate::Complex;

/// A 2×2 complex matrix, row-major.
pub type M2 = [[Complex; 2]; 2];

const fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// Pauli matrices σ_1, σ_2, σ_3.
pub fn pauli(a: usize) -> M2 {
    match a {
        0 => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        1 => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        _ => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
    }
}

/// `Σ ξ_a σ_a`.
pub fn sigma_dot(xi: &[f64]) -> M2 {
    let mut m = [[c(0.0, 0.0); 2]; 2];
    for (a, &x) in xi.iter().enumerate().take(3) {
        let p = pauli(a);
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] += p[i][j] * x;
            }
        }
    }
    m
}

pub fn mul2(a: &M2, b: &M2) -> M2 {
    let mut m = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

pub fn adjoint2(a: &M2) -> M2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

/// `exp(-t σ_ξ / 2)`, the defining-representation image of `exp(√-1 t ξ)`.
pub fn exp_imaginary(xi: &[f64], t: f64) -> M2 {
    let r = libm::sqrt(xi.iter().map(|x| x * x).sum::<f64>());
    if r == 0.0 || t == 0.0 {
        return [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
    }
    let s = t * r / 2.0;
    let ch = libm::cosh(s);
    let sh = libm::sinh(s);
    let unit: [f64; 3] = [xi[0] / r, xi[1] / r, xi[2] / r];
    let sig = sigma_dot(&unit);
    let mut m = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j { ch } else { 0.0 };
            m[i][j] = c(id, 0.0) - sig[i][j] * sh;
        }
    }
    m
}

/// Unitary `k` whose columns are the `+1` and `-1` eigenvectors of `σ_n` for
/// a unit vector `n`, so that `k^H σ_n k = diag(1, -1)`.
pub fn eigenframe(n: &[f64]) -> M2 {
    let (x, y, z) = (n[0], n[1], n[2]);
    if z > -0.5 {
        let s = libm::sqrt(2.0 * (1.0 + z));
        let plus = [c((1.0 + z) / s, 0.0), c(x / s, y / s)];
        let minus = [c(-x / s, y / s), c((1.0 + z) / s, 0.0)];
        [[plus[0], minus[0]], [plus[1], minus[1]]]
    } else {
        let s = libm::sqrt(2.0 * (1.0 - z));
        let plus = [c(x / s, -y / s), c((1.0 - z) / s, 0.0)];
        let minus = [c((1.0 - z) / s, 0.0), c(-x / s, -y / s)];
        [[plus[0], minus[0]], [plus[1], minus[1]]]
    }
}

/// For `g = k p` with `k` unitary and `p = exp(-σ_ξ/2)` positive, returns `ξ`.
/// Requires `det g = 1`.
pub fn polar_log(g: &M2) -> [f64; 3] {
    let m = mul2(&adjoint2(g), g);
    let a = m[0][0].re;
    let d = m[1][1].re;
    let b = m[0][1];
    let alpha = (a + d) / 2.0;
    let bx = b.re;
    let by = -b.im;
    let bz = (a - d) / 2.0;
    let beta = libm::sqrt(bx * bx + by * by + bz * bz);
    if beta == 0.0 {
        return [0.0; 3];
    }
    let coeff = -0.5 * libm::log((alpha + beta) / (alpha - beta));
    [coeff * bx / beta, coeff * by / beta, coeff * bz / beta]
}

/// Matrix of `Sym^m(g)` in the orthonormal basis `u_k`.
pub fn sym_power(g: &M2, m: u32) -> CMatrix {
    let n = m as usize + 1;
    let mut out = CMatrix::zeros(n, n);
    // g e1 = g00 e1 + g10 e2, g e2 = g01 e1 + g11 e2; track coefficients of
    // e1^{m-l} e2^l as a polynomial in e2.
    let ge1 = [g[0][0], g[1][0]];
    let ge2 = [g[0][1], g[1][1]];
    for k in 0..n {
        let mut poly: Vec<Complex> = alloc::vec![c(1.0, 0.0)];
        for _ in 0..(n - 1 - k) {
            poly = poly_mul_linear(&poly, ge1);
        }
        for _ in 0..k {
            poly = poly_mul_linear(&poly, ge2);
        }
        let sk = libm::sqrt(binomial(u64::from(m), k as u64) as f64);
        for (l, coeff) in poly.iter().enumerate() {
            let sl = libm::sqrt(binomial(u64::from(m), l as u64) as f64);
            out[(l, k)] = coeff * (sk / sl);
        }
    }
    out
}

fn poly_mul_linear(p: &[Complex], lin: [Complex; 2]) -> Vec<Complex> {
    let mut out = alloc::vec![c(0.0, 0.0); p.len() + 1];
    for (i, a) in p.iter().enumerate() {
        out[i] += a * lin[0];
        out[i + 1] += a * lin[1];
    }
    out
}

/// Matrix of the derived representation `dSym^m(y)` for any 2×2 `y`.
pub fn derived(y: &M2, m: u32) -> CMatrix {
    let n = m as usize + 1;
    let mf = f64::from(m);
    let mut out = CMatrix::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        out[(k, k)] = y[0][0] * (mf - kf) + y[1][1] * kf;
        if k + 1 < n {
            out[(k + 1, k)] = y[1][0] * libm::sqrt((mf - kf) * (kf + 1.0));
        }
        if k >= 1 {
            out[(k - 1, k)] = y[0][1] * libm::sqrt(kf * (mf - kf + 1.0));
        }
    }
    out
}

/// Hermitian spin matrices `S_a = dSym^m(σ_a / 2)`, `a = 0, 1, 2`.
pub fn spin_matrices(m: u32) -> [CMatrix; 3] {
    let half = |a: usize| {
        let p = pauli(a);
        [
            [p[0][0] * 0.5, p[0][1] * 0.5],
            [p[1][0] * 0.5, p[1][1] * 0.5],
        ]
    };
    [
        derived(&half(0), m),
        derived(&half(1), m),
        derived(&half(2), m),
    ]
}

/// Coordinates in the basis `u_k` of the binary form `Σ coeffs[k] x^{m-k} y^k`.
pub fn binary_form(coeffs: &[Complex]) -> Vec<Complex> {
    let m = coeffs.len().saturating_sub(1) as u64;
    coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| a / libm::sqrt(binomial(m, k as u64) as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        a.data
            .iter()
            .zip(&b.data)
            .all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn derived_matches_difference_quotient_of_sym_power() {
        let y: M2 = [[c(0.3, 0.1), c(-0.2, 0.5)], [c(0.7, -0.4), c(-0.1, 0.2)]];
        for m in 1..=4 {
            let h = 1e-6;
            let plus = sym_power(
                &[
                    [c(1.0, 0.0) + y[0][0] * h, y[0][1] * h],
                    [y[1][0] * h, c(1.0, 0.0) + y[1][1] * h],
                ],
                m,
            );
            let minus = sym_power(
                &[
                    [c(1.0, 0.0) - y[0][0] * h, -y[0][1] * h],
                    [-y[1][0] * h, c(1.0, 0.0) - y[1][1] * h],
                ],
                m,
            );
            let mut fd = plus.clone();
            fd.add_assign_scaled(&minus, -1.0);
            let fd = fd.scaled(1.0 / (2.0 * h));
            assert!(close(&fd, &derived(&y, m), 1e-7), "m = {m}");
        }
    }

    #[test]
    fn sym_power_is_a_homomorphism_and_unitary() {
        let a = exp_imaginary(&[0.3, -0.2, 0.9], 0.7);
        let b = eigenframe(&[0.0, 0.6, 0.8]);
        for m in 0..=3 {
            let lhs = sym_power(&mul2(&a, &b), m);
            let rhs = sym_power(&a, m).mul(&sym_power(&b, m));
            assert!(close(&lhs, &rhs, 1e-12));
            let kb = sym_power(&b, m);
            assert!(close(
                &kb.adjoint().mul(&kb),
                &CMatrix::identity(m as usize + 1),
                1e-12
            ));
        }
    }

    #[test]
    fn spin_half_generator_on_e1() {
        // third basis vector e_3 = (i/2) σ_3 sends (1, 0) to (i/2, 0)
        let s = spin_matrices(1);
        let v = s[2].apply(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let xi_v: Vec<Complex> = v.iter().map(|z| z * c(0.0, 1.0)).collect();
        assert!((xi_v[0] - c(0.0, 0.5)).norm() < 1e-15);
        assert!(xi_v[1].norm() < 1e-15);
    }

    #[test]
    fn eigenframe_diagonalizes() {
        for n in [
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
            [0.6, 0.0, 0.8],
            [0.36, 0.48, -0.8],
        ] {
            let k = eigenframe(&n);
            let d = mul2(&adjoint2(&k), &mul2(&sigma_dot(&n), &k));
            assert!((d[0][0] - c(1.0, 0.0)).norm() < 1e-14);
            assert!((d[1][1] - c(-1.0, 0.0)).norm() < 1e-14);
            assert!(d[0][1].norm() < 1e-14 && d[1][0].norm() < 1e-14);
        }
    }

    #[test]
    fn polar_log_inverts_exp() {
        let xi = [0.4, -1.1, 0.3];
        let p = exp_imaginary(&xi, 1.0);
        let k = eigenframe(&[0.6, 0.0, 0.8]);
        let got = polar_log(&mul2(&k, &p));
        for a in 0..3 {
            assert!((got[a] - xi[a]).abs() < 1e-12);
        }
    }
}
