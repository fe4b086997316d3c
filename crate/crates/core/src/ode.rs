//! Adaptive integration with a step guard: explicit Dormand–Prince 5(4)
//! and, for stiff systems with a known Jacobian, three-stage Radau IIA.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub max_steps: Option<usize>,
}

/// One Dormand–Prince step of size `h` (the system is autonomous). Returns
/// the fifth-order solution and the RMS of the error estimate scaled by
/// `abs_tol + rel_tol · max(|y|, |y_new|)`.
pub fn dopri_step<F: FnMut(&[f64]) -> Vec<f64>>(
    f: &mut F,
    y: &[f64],
    h: f64,
    ctl: &StepControl,
) -> (Vec<f64>, f64) {
    let n = y.len();
    let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
    let mut tmp = y.to_vec();
    for s in 0..7 {
        for i in 0..n {
            tmp[i] = y[i] + h * (0..s).map(|r| A[s][r] * k[r][i]).sum::<f64>();
        }
        k.push(f(&tmp));
    }
    let mut y5 = y.to_vec();
    let mut err = 0.0;
    for i in 0..n {
        let mut s5 = 0.0;
        let mut s4 = 0.0;
        for s in 0..7 {
            s5 += B5[s] * k[s][i];
            s4 += B4[s] * k[s][i];
        }
        y5[i] = y[i] + h * s5;
        let sc = ctl.abs_tol + ctl.rel_tol * y[i].abs().max(y5[i].abs());
        let e = h * (s5 - s4) / sc;
        err += e * e;
    }
    (y5, libm::sqrt(err / n.max(1) as f64))
}

/// Verdict of the step guard on a candidate step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Guard {
    Accept,
    /// Retry with a smaller step; carries the monitored value before and after.
    Reject(f64, f64),
    /// The monitored value no longer changes beyond roundoff: end the run at
    /// the current state without taking the step.
    Settled,
}

/// What the caller wants after an accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunEnd {
    pub t: f64,
    pub y: Vec<f64>,
    pub steps: usize,
    pub reached_t_max: bool,
}

/// Integrates `y' = f(y)` from `t = 0` to at most `t_max` with
/// Dormand–Prince steps.
///
/// Every candidate step that passes the error test is offered to `guard`.
/// Rejected steps are retried with a quarter of the step size, and a
/// rejection at `h_min` becomes [`Error::NonMonotone`]; [`Guard::Settled`]
/// ends the run. After acceptance `post` may modify the
/// state in place (for example to renormalize) and decide whether to stop.
pub fn integrate<F, G, P>(
    ctl: &StepControl,
    y0: Vec<f64>,
    t_max: f64,
    mut f: F,
    guard: G,
    post: P,
) -> Result<RunEnd>
where
    F: FnMut(&[f64]) -> Vec<f64>,
    G: FnMut(&[f64], &[f64]) -> Guard,
    P: FnMut(f64, &mut Vec<f64>) -> Control,
{
    drive(
        ctl,
        0.2,
        y0,
        t_max,
        |y, h| Some(dopri_step(&mut f, y, h, ctl)),
        guard,
        post,
    )
}

/// Same contract as [`integrate`], with Radau IIA steps. `jac` returns the
/// row-major Jacobian of `f`.
pub fn integrate_stiff<F, J, G, P>(
    ctl: &StepControl,
    y0: Vec<f64>,
    t_max: f64,
    mut f: F,
    mut jac: J,
    guard: G,
    post: P,
) -> Result<RunEnd>
where
    F: FnMut(&[f64]) -> Vec<f64>,
    J: FnMut(&[f64]) -> Vec<f64>,
    G: FnMut(&[f64], &[f64]) -> Guard,
    P: FnMut(f64, &mut Vec<f64>) -> Control,
{
    drive(
        ctl,
        1.0 / 6.0,
        y0,
        t_max,
        |y, h| radau_doubled(&mut f, &mut jac, y, h, ctl),
        guard,
        post,
    )
}

fn drive<S, G, P>(
    ctl: &StepControl,
    exponent: f64,
    y0: Vec<f64>,
    t_max: f64,
    mut step: S,
    mut guard: G,
    mut post: P,
) -> Result<RunEnd>
where
    S: FnMut(&[f64], f64) -> Option<(Vec<f64>, f64)>,
    G: FnMut(&[f64], &[f64]) -> Guard,
    P: FnMut(f64, &mut Vec<f64>) -> Control,
{
    let mut t = 0.0;
    let mut y = y0;
    let mut h = ctl.h_init.min(t_max);
    let mut steps = 0;
    if post(t, &mut y) == Control::Stop {
        return Ok(RunEnd {
            t,
            y,
            steps,
            reached_t_max: false,
        });
    }
    while t < t_max {
        if let Some(max) = ctl.max_steps {
            if steps >= max {
                return Err(Error::MaxIterations(max));
            }
        }
        let h_try = h.min(t_max - t);
        let (y_new, err) = step(&y, h_try).unwrap_or((Vec::new(), f64::INFINITY));
        if !err.is_finite() || err > 1.0 {
            let factor = if err.is_finite() {
                (0.9 * libm::pow(err, -exponent)).clamp(0.1, 0.9)
            } else {
                0.25
            };
            h = h_try * factor;
            if h < ctl.h_min {
                return Err(Error::InvalidOptions("step size underflow"));
            }
            continue;
        }
        match guard(&y, &y_new) {
            Guard::Accept => {}
            Guard::Reject(before, after) => {
                if h_try <= ctl.h_min {
                    return Err(Error::NonMonotone { t, before, after });
                }
                h = (h_try / 4.0).max(ctl.h_min);
                continue;
            }
            Guard::Settled => {
                return Ok(RunEnd {
                    t,
                    y,
                    steps,
                    reached_t_max: false,
                })
            }
        }
        t += h_try;
        y = y_new;
        steps += 1;
        let grow = if err == 0.0 {
            5.0
        } else {
            (0.9 * libm::pow(err, -exponent)).clamp(0.2, 5.0)
        };
        h = h_try * grow;
        if post(t, &mut y) == Control::Stop {
            return Ok(RunEnd {
                t,
                y,
                steps,
                reached_t_max: false,
            });
        }
    }
    Ok(RunEnd {
        t,
        y,
        steps,
        reached_t_max: true,
    })
}

const SQ6: f64 = 2.449_489_742_783_178;
const RADAU: [[f64; 3]; 3] = [
    [
        (88.0 - 7.0 * SQ6) / 360.0,
        (296.0 - 169.0 * SQ6) / 1800.0,
        (-2.0 + 3.0 * SQ6) / 225.0,
    ],
    [
        (296.0 + 169.0 * SQ6) / 1800.0,
        (88.0 + 7.0 * SQ6) / 360.0,
        (-2.0 - 3.0 * SQ6) / 225.0,
    ],
    [(16.0 - SQ6) / 36.0, (16.0 + SQ6) / 36.0, 1.0 / 9.0],
];
const NEWTON_MAX: usize = 30;
const NEWTON_TOL: f64 = 1e-3;

/// One Radau IIA step (order 5, stiffly accurate). The stage equations are
/// solved by simplified Newton with the Jacobian `jy` taken at `y`. `None`
/// when the iteration diverges or does not converge.
pub fn radau_step<F>(
    f: &mut F,
    jy: &[f64],
    y: &[f64],
    h: f64,
    ctl: &StepControl,
) -> Option<Vec<f64>>
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    let n = y.len();
    let m = 3 * n;
    let mut a = vec![0.0; m * m];
    for i in 0..3 {
        for k in 0..n {
            let row = i * n + k;
            a[row * m + row] += 1.0;
            for j in 0..3 {
                for l in 0..n {
                    a[row * m + j * n + l] -= h * RADAU[i][j] * jy[k * n + l];
                }
            }
        }
    }
    let mut z = vec![0.0; m];
    let stage = |z: &[f64], i: usize| -> Vec<f64> { (0..n).map(|k| y[k] + z[i * n + k]).collect() };
    let mut last = f64::INFINITY;
    for it in 0..NEWTON_MAX {
        let fs: Vec<Vec<f64>> = (0..3).map(|i| f(&stage(&z, i))).collect();
        let mut g = vec![0.0; m];
        for i in 0..3 {
            for k in 0..n {
                g[i * n + k] =
                    z[i * n + k] - h * (0..3).map(|j| RADAU[i][j] * fs[j][k]).sum::<f64>();
            }
        }
        if g.iter().any(|x| !x.is_finite()) {
            return None;
        }
        let dz = crate::linalg::solve(&a, &g, m)?;
        let mut size = 0.0;
        for (row, d) in dz.iter().enumerate() {
            z[row] -= d;
            let sc = ctl.abs_tol + ctl.rel_tol * y[row % n].abs();
            size += (d / sc) * (d / sc);
        }
        let size = libm::sqrt(size / m.max(1) as f64);
        if !size.is_finite() {
            return None;
        }
        let theta = size / last;
        last = size;
        if size <= NEWTON_TOL
            || (it > 0 && theta < 1.0 && size * theta / (1.0 - theta) <= NEWTON_TOL)
        {
            return Some(stage(&z, 2));
        }
        if it > 0 && theta >= 1.0 {
            return None;
        }
    }
    None
}

/// Two half steps against one full step; the error of the half-step result
/// is estimated as `|y_half - y_full| / 31`.
fn radau_doubled<F, J>(
    f: &mut F,
    jac: &mut J,
    y: &[f64],
    h: f64,
    ctl: &StepControl,
) -> Option<(Vec<f64>, f64)>
where
    F: FnMut(&[f64]) -> Vec<f64>,
    J: FnMut(&[f64]) -> Vec<f64>,
{
    let jy = jac(y);
    let full = radau_step(f, &jy, y, h, ctl)?;
    let mid = radau_step(f, &jy, y, h / 2.0, ctl)?;
    let half = radau_step(f, &jac(&mid), &mid, h / 2.0, ctl)?;
    let n = y.len();
    let mut err = 0.0;
    for i in 0..n {
        let sc = ctl.abs_tol + ctl.rel_tol * y[i].abs().max(half[i].abs());
        let e = (half[i] - full[i]) / 31.0 / sc;
        err += e * e;
    }
    Some((half, libm::sqrt(err / n.max(1) as f64)))
}
