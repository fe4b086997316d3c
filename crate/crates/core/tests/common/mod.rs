#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symquot_core::exact::q;
use symquot_core::{build_rep, Complex, KindConfig, Mode, RepConfig, RepSpec, StateVector};

pub fn torus(weights: &[&[i64]], mode: Mode) -> RepSpec {
    torus_at(weights, mode, &[])
}

pub fn torus_at(weights: &[&[i64]], mode: Mode, level: &[i64]) -> RepSpec {
    build_rep(&RepConfig {
        kind: KindConfig::Torus {
            weights: weights
                .iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        },
        mode,
        level: level.iter().map(|&x| q(x)).collect(),
    })
    .unwrap()
}

pub fn su2(spins: &[i64], mode: Mode) -> RepSpec {
    build_rep(&RepConfig {
        kind: KindConfig::Su2 {
            spins: spins.to_vec(),
        },
        mode,
        level: vec![],
    })
    .unwrap()
}

pub fn real(xs: &[f64]) -> StateVector {
    StateVector::from_real(xs)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_weights<R: Rng>(rng: &mut R, d: usize, n: usize) -> Vec<Vec<i64>> {
    (0..d)
        .map(|_| (0..n).map(|_| rng.random_range(-3..=3)).collect())
        .collect()
}

pub fn random_torus<R: Rng>(rng: &mut R, max_n: usize, max_d: usize, mode: Mode) -> RepSpec {
    let n = rng.random_range(2..=max_n);
    let d = rng.random_range(1..=max_d);
    let w = random_weights(rng, d, n);
    let rows: Vec<&[i64]> = w.iter().map(Vec::as_slice).collect();
    torus(&rows, mode)
}

/// Complex Gaussian entries, each zeroed with probability `p_zero`.
pub fn random_state<R: Rng>(rng: &mut R, n: usize, p_zero: f64) -> StateVector {
    StateVector(
        (0..n)
            .map(|_| {
                if rng.random_bool(p_zero) {
                    Complex::new(0.0, 0.0)
                } else {
                    Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                }
            })
            .collect(),
    )
}
