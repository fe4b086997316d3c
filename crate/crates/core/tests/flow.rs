mod common;

use common::*;
use symquot_core::su2::binary_form;
use symquot_core::{
    classify_point, hull_oracle, integrate_flow, minimize_kempf_ness, momentum, one_ps_oracle,
    orbital_convexity_probe, Complex, Error, FlowOptions, HullVerdict, KempfNessStatus, LieVector,
    Mode, OnePsGrid, StabilityTag, StateVector,
};

fn cubic(coeffs: &[f64]) -> StateVector {
    StateVector(binary_form(
        &coeffs
            .iter()
            .map(|&c| Complex::new(c, 0.0))
            .collect::<Vec<_>>(),
    ))
}

#[test]
fn zero_level_point_is_its_own_limit() {
    let rep = torus(&[&[1, -1]], Mode::Affine);
    let v = real(&[1.0, 1.0]);
    let r = integrate_flow(&rep, &v, &FlowOptions::default()).unwrap();
    assert!(r.converged);
    assert_eq!(r.t_final, 0.0);
    assert_eq!(r.limit, v);
}

#[test]
fn resonance_vertex_point_flows_to_origin() {
    let rep = torus(&[&[1, -1]], Mode::Affine);
    let opts = FlowOptions::default();
    let r = integrate_flow(&rep, &real(&[1.0, 0.0]), &opts).unwrap();
    assert!(r.phi_residual < opts.phi_tol);
    // v₁' = -|v₁|² v₁ / 2 scaled: |v₁|² decays like 1/t, so the limit is 0
    assert!(r.limit.norm() < 1e-2);
    assert!(r.samples.windows(2).all(|w| w[1].mu <= w[0].mu));
}

#[test]
fn resonance_classifications() {
    let rep = torus(&[&[1, -1]], Mode::Affine);
    let opts = FlowOptions::default();
    let c = classify_point(&rep, &real(&[1.0, 1.0]), &opts).unwrap();
    assert_eq!(c.tag, StabilityTag::Stable);
    assert!(c.closed_orbit);
    let c = classify_point(&rep, &real(&[0.0, 0.0]), &opts).unwrap();
    assert_eq!(c.tag, StabilityTag::Semistable);
    let c = classify_point(&rep, &real(&[1.0, 0.0]), &opts).unwrap();
    assert_eq!(c.tag, StabilityTag::Semistable);
    assert!(!c.closed_orbit);
}

#[test]
fn binary_cubics() {
    let rep = su2(&[3], Mode::Projective);
    let opts = FlowOptions::default();
    let double_root = cubic(&[0.0, 1.0, 0.0, 0.0]);
    let simple_roots = cubic(&[1.0, 0.0, 0.0, 1.0]);
    let r = integrate_flow(&rep, &double_root, &opts).unwrap();
    assert!(r.phi_residual > opts.phi_tol);
    assert_eq!(
        classify_point(&rep, &double_root, &opts).unwrap().tag,
        StabilityTag::Unstable
    );
    assert_eq!(
        classify_point(&rep, &simple_roots, &opts).unwrap().tag,
        StabilityTag::Stable
    );

    let affine = su2(&[3], Mode::Affine);
    let grid = OnePsGrid::default();
    assert!(
        one_ps_oracle(&affine, &double_root, &grid)
            .unwrap()
            .destabilizer_found
    );
    assert!(
        !one_ps_oracle(&affine, &simple_roots, &grid)
            .unwrap()
            .destabilizer_found
    );
    assert!(
        !one_ps_oracle(&affine, &StateVector::zeros(4), &grid)
            .unwrap()
            .destabilizer_found
    );
}

#[test]
fn triple_root_and_generic_cubic() {
    let rep = su2(&[3], Mode::Projective);
    let opts = FlowOptions::default();
    assert_eq!(
        classify_point(&rep, &cubic(&[1.0, 0.0, 0.0, 0.0]), &opts)
            .unwrap()
            .tag,
        StabilityTag::Unstable
    );
    // (x - y)(x + 2y)(x - 3y) has simple roots
    let c = cubic(&[1.0, -2.0, -5.0, 6.0]);
    assert_eq!(
        classify_point(&rep, &c, &opts).unwrap().tag,
        StabilityTag::Stable
    );
    // x (x - y)^2 has a double root
    let c = cubic(&[1.0, -2.0, 1.0, 0.0]);
    assert_eq!(
        classify_point(&rep, &c, &opts).unwrap().tag,
        StabilityTag::Unstable
    );
    assert!(
        one_ps_oracle(&su2(&[3], Mode::Affine), &c, &OnePsGrid::default())
            .unwrap()
            .destabilizer_found
    );
}

fn from_roots(roots: &[Complex]) -> StateVector {
    let mut c = vec![Complex::new(1.0, 0.0)];
    for r in roots {
        let mut next = vec![Complex::new(0.0, 0.0); c.len() + 1];
        for (k, a) in c.iter().enumerate() {
            next[k] += a;
            next[k + 1] -= a * r;
        }
        c = next;
    }
    StateVector(binary_form(&c))
}

#[test]
fn repeated_roots_in_general_position() {
    let (a, b, c, d) = (
        Complex::new(0.3, -1.1),
        Complex::new(-0.7, 0.4),
        Complex::new(1.2, 0.5),
        Complex::new(-0.2, -0.9),
    );
    let opts = FlowOptions::default();
    let cases = [
        (vec![a, a, b], StabilityTag::Unstable, false),
        (vec![a, a, b, c], StabilityTag::Semistable, false),
        (vec![a, a, b, b], StabilityTag::Semistable, true),
        (vec![a, a, a, b, c], StabilityTag::Unstable, false),
        (vec![a, b, c, d, a, b], StabilityTag::Stable, true),
    ];
    for (roots, want, closed_orbit) in cases {
        let rep = su2(&[roots.len() as i64], Mode::Projective);
        let v = from_roots(&roots);
        let got = classify_point(&rep, &v, &opts).unwrap();
        assert_eq!(got.tag, want, "{roots:?}");
        let closed = matches!(
            minimize_kempf_ness(&rep, &v, &opts).unwrap().status,
            KempfNessStatus::Minimum(_)
        );
        assert_eq!(closed, closed_orbit, "{roots:?}");
    }
}

#[test]
fn kempf_ness_examples() {
    let opts = FlowOptions::default();
    let rep = torus(&[&[1, -1]], Mode::Affine);
    let out = minimize_kempf_ness(&rep, &real(&[1.0, 1.0]), &opts).unwrap();
    match out.status {
        KempfNessStatus::Minimum(xi) => assert!(xi.norm() < 1e-9),
        other => panic!("{other:?}"),
    }
    assert!((out.value - 2.0).abs() < 1e-12);
    assert!(matches!(
        minimize_kempf_ness(&rep, &real(&[1.0, 0.0]), &opts)
            .unwrap()
            .status,
        KempfNessStatus::Divergent(_)
    ));
    let pos = torus(&[&[1, 1]], Mode::Affine);
    match minimize_kempf_ness(&pos, &real(&[1.0, 1.0]), &opts)
        .unwrap()
        .status
    {
        KempfNessStatus::Divergent(dir) => assert!(dir.0[0] > 0.0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn kempf_ness_minimum_lies_on_the_zero_level() {
    let opts = FlowOptions::default();
    let rep = torus(&[&[1, -2, 1], &[0, 1, -1]], Mode::Affine);
    let v = StateVector(vec![
        Complex::new(0.3, 0.2),
        Complex::new(1.4, 0.0),
        Complex::new(0.0, -0.7),
    ]);
    let KempfNessStatus::Minimum(xi) = minimize_kempf_ness(&rep, &v, &opts).unwrap().status else {
        panic!()
    };
    let w = symquot_core::act_imaginary(&rep, &xi, 1.0, &v).unwrap();
    assert!(momentum(&rep, &w).unwrap().norm() < opts.phi_tol);

    let cubic_rep = su2(&[3], Mode::Affine);
    let c = cubic(&[1.0, -2.0, -5.0, 6.0]);
    let KempfNessStatus::Minimum(xi) = minimize_kempf_ness(&cubic_rep, &c, &opts).unwrap().status
    else {
        panic!()
    };
    let w = symquot_core::act_imaginary(&cubic_rep, &xi, 1.0, &c).unwrap();
    assert!(momentum(&cubic_rep, &w).unwrap().norm() < opts.phi_tol);
    let double = cubic(&[0.0, 1.0, 0.0, 0.0]);
    assert!(matches!(
        minimize_kempf_ness(&cubic_rep, &double, &opts)
            .unwrap()
            .status,
        KempfNessStatus::Divergent(_)
    ));
}

#[test]
fn hull_examples() {
    let rep = torus(&[&[1, -1]], Mode::Affine);
    assert_eq!(
        hull_oracle(&rep, &real(&[1.0, 1.0])).unwrap(),
        HullVerdict {
            semistable: true,
            closed: true,
            stable: true
        }
    );
    assert_eq!(
        hull_oracle(&rep, &real(&[1.0, 0.0])).unwrap(),
        HullVerdict {
            semistable: true,
            closed: false,
            stable: false
        }
    );
    let p2 = torus_at(&[&[1, 0, -1]], Mode::Projective, &[2]);
    let mut g = rng(5);
    for _ in 0..20 {
        let v = random_state(&mut g, 3, 0.2);
        if v.is_zero() {
            continue;
        }
        assert!(!hull_oracle(&p2, &v).unwrap().semistable);
        let c = classify_point(&p2, &v, &FlowOptions::default()).unwrap();
        assert_eq!(c.tag, StabilityTag::Unstable);
    }
}

#[test]
fn convexity_probe_examples() {
    let rep = torus(&[&[1, -1]], Mode::Affine);
    let v = real(&[1.0, 1.0]);
    assert!(orbital_convexity_probe(&rep, &v, &LieVector(vec![1.0]), 1.6, 401).unwrap());
    assert!(orbital_convexity_probe(&rep, &v, &LieVector(vec![0.0]), 1.0, 11).unwrap());
}

#[test]
fn same_orbit_limits_agree_in_moduli() {
    let opts = FlowOptions::default();
    let rep = torus(&[&[1, -1, 2]], Mode::Affine);
    let v = real(&[0.8, 1.1, 0.3]);
    let w = symquot_core::act_imaginary(&rep, &LieVector(vec![0.4]), 1.0, &v).unwrap();
    let moduli = |s: &StateVector| {
        let mut m: Vec<f64> = s.0.iter().map(|z| z.norm()).collect();
        m.sort_by(f64::total_cmp);
        m
    };
    let a = moduli(&integrate_flow(&rep, &v, &opts).unwrap().limit);
    let b = moduli(&integrate_flow(&rep, &w, &opts).unwrap().limit);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-6, "{a:?} vs {b:?}");
    }
}

#[test]
fn options_are_validated() {
    let rep = torus(&[&[1, -1]], Mode::Affine);
    let bad = FlowOptions {
        phi_tol: 1e-12,
        ..FlowOptions::default()
    };
    assert!(matches!(
        integrate_flow(&rep, &real(&[1.0, 1.0]), &bad),
        Err(Error::InvalidOptions(_))
    ));
    let proj = su2(&[1], Mode::Projective);
    assert!(matches!(
        integrate_flow(&proj, &StateVector::zeros(2), &FlowOptions::default()),
        Err(Error::ZeroVectorInProjectiveMode)
    ));
}
