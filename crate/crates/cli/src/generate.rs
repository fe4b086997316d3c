//! Seeded instance generation.
//!
//! The stream is ChaCha8 (`rand_chacha::ChaCha8Rng`) keyed by the seed: the
//! 32-byte key holds the seed as little-endian `u64` in bytes 0..8 and zeros
//! elsewhere, stream and counter start at 0, and each `u64` is two
//! consecutive 32-bit output words, low word first. All derived draws use
//! only `next_u64`:
//!
//! * uniform `[0, 1)`: `(x >> 11) · 2^-53`;
//! * integer in `[lo, hi]`: with `span = hi - lo + 1`, reject `x` while
//!   `x ≥ span · ⌊2^64 / span⌋`, then `lo + x mod span`;
//! * standard normal pairs by Box–Muller: `u1 = 1 - uniform`, `u2 = uniform`,
//!   `r = sqrt(-2 ln u1)`, giving `(r cos 2πu2, r sin 2πu2)`;
//! * complex normal coordinate: real part and imaginary part are the two
//!   members of one Box–Muller pair.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symquot_core::{
    build_rep, Complex, KindConfig, LieVector, Mode, Rational, RepConfig, RepSpec, StateVector,
};

pub struct InstanceGen {
    rng: ChaCha8Rng,
}

impl InstanceGen {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        InstanceGen {
            rng: ChaCha8Rng::from_seed(key),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        let span = (hi as i128 - lo as i128 + 1) as u128;
        if span > u128::from(u64::MAX) {
            return self.next_u64() as i64;
        }
        let zone = (1u128 << 64) / span * span;
        loop {
            let x = u128::from(self.next_u64());
            if x < zone {
                return (lo as i128 + (x % span) as i128) as i64;
            }
        }
    }

    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        (r * theta.cos(), r * theta.sin())
    }

    pub fn complex_normal(&mut self) -> Complex {
        let (a, b) = self.normal_pair();
        Complex::new(a, b)
    }

    pub fn state(&mut self, n: usize) -> StateVector {
        StateVector((0..n).map(|_| self.complex_normal()).collect())
    }

    /// Complex normal coordinates, each independently zeroed with
    /// probability `p_zero` (decided before the coordinate is drawn).
    pub fn sparse_state(&mut self, n: usize, p_zero: f64) -> StateVector {
        StateVector(
            (0..n)
                .map(|_| {
                    if self.uniform() < p_zero {
                        Complex::new(0.0, 0.0)
                    } else {
                        self.complex_normal()
                    }
                })
                .collect(),
        )
    }

    /// Standard normal coordinates (drawn in pairs; the second member of
    /// the last pair is discarded when `dim` is odd).
    pub fn lie(&mut self, dim: usize) -> LieVector {
        let mut out = Vec::with_capacity(dim);
        while out.len() < dim {
            let (a, b) = self.normal_pair();
            out.push(a);
            if out.len() < dim {
                out.push(b);
            }
        }
        LieVector(out)
    }

    /// Row-major `d × n` weights uniform in `[-bound, bound]`.
    pub fn weights(&mut self, d: usize, n: usize, bound: i64) -> Vec<Vec<i64>> {
        (0..d)
            .map(|_| (0..n).map(|_| self.int_in(-bound, bound)).collect())
            .collect()
    }

    /// Torus with `n ∈ [n_lo, n_hi]`, `d ∈ [d_lo, d_hi]` (drawn in that
    /// order) and weights in `[-bound, bound]`. Projective mode raises
    /// `n_lo` to 2.
    pub fn torus(
        &mut self,
        n: (usize, usize),
        d: (usize, usize),
        bound: i64,
        mode: Mode,
        level: &[Rational],
    ) -> RepSpec {
        let lo = if mode == Mode::Projective {
            n.0.max(2)
        } else {
            n.0
        };
        let n = self.int_in(lo as i64, n.1.max(lo) as i64) as usize;
        let d = self.int_in(d.0 as i64, d.1 as i64) as usize;
        let weights = self.weights(d, n, bound);
        torus_rep(
            &weights,
            mode,
            if level.is_empty() {
                &[]
            } else {
                &level[..d.min(level.len())]
            },
        )
    }

    /// SU(2) with one to `max_blocks` blocks of spins in `[0, max_spin]`,
    /// at least one of them nonzero.
    pub fn su2(&mut self, max_blocks: usize, max_spin: u32, mode: Mode) -> RepSpec {
        loop {
            let blocks = self.int_in(1, max_blocks as i64) as usize;
            let spins: Vec<i64> = (0..blocks)
                .map(|_| self.int_in(0, i64::from(max_spin)))
                .collect();
            let n: i64 = spins.iter().map(|s| s + 1).sum();
            if spins.iter().any(|&s| s > 0) && (mode == Mode::Affine || n >= 2) {
                return build_rep(&RepConfig {
                    kind: KindConfig::Su2 { spins },
                    mode,
                    level: vec![],
                })
                .expect("valid spins");
            }
        }
    }
}

pub fn torus_rep(weights: &[Vec<i64>], mode: Mode, level: &[Rational]) -> RepSpec {
    build_rep(&RepConfig {
        kind: KindConfig::Torus {
            weights: weights
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| Rational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
        },
        mode,
        level: level.to_vec(),
    })
    .expect("generated weights are valid")
}
