use bch_lab::orbit::q_via_x;
use bch_lab::profile::*;
use bch_lab::WaveParams;
use proptest::prelude::*;

fn b2() -> WaveProfile {
    build_profile(&WaveParams::new(2.0, 1.0, 0.25).unwrap(), 1024, 1e-12).unwrap()
}

#[test]
fn crest_and_shape() {
    let pr = b2();
    let m = pr.len() / 2;
    assert!((pr.crest() - 0.5).abs() < 1e-14);
    assert_eq!(pr.x_samples[m], 0.0);
    assert_eq!(pr.phi_prime[m], 0.0);
    for j in 1..m {
        assert!((pr.phi[m + j] - pr.phi[m - j]).abs() <= 1e-10);
        assert!(pr.phi[m + j] < pr.phi[m + j - 1]);
        assert!(pr.phi_prime[m + j] < 0.0);
    }
    assert!((pr.mu[0] - 0.25).abs() < 1e-12);
    pr.validate().unwrap();
}

#[test]
fn momentum_agrees_three_ways() {
    let pr = b2();
    let mu = momentum_of(&pr).unwrap();
    for (a, b) in mu.iter().zip(&pr.mu) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!(spectral_momentum_error(&pr) <= 1e-6);
    assert!(ode_residual(&pr) <= 1e-6);
}

#[test]
fn residual_detects_perturbation() {
    let pr = b2();
    let base = ode_residual(&pr);
    let mut bumped = pr.clone();
    for (f, &x) in bumped.phi.iter_mut().zip(&pr.x_samples) {
        *f += 1e-3 * (-(x - 1.0) * (x - 1.0)).exp();
    }
    assert!(ode_residual(&bumped) >= 10.0 * base.max(1e-12));
}

#[test]
fn constant_state_has_zero_residual() {
    let mut pr = b2();
    let k = pr.params.k;
    pr.phi.iter_mut().for_each(|v| *v = k);
    pr.phi_prime.iter_mut().for_each(|v| *v = 0.0);
    assert!(ode_residual(&pr) < 1e-15);
}

#[test]
fn decay_exponent_limits() {
    let small = build_profile(&WaveParams::new(2.0, 1.0, 1e-3).unwrap(), 1024, 1e-12).unwrap();
    assert!(small.decay_exponent_fit < 1.0 && small.decay_exponent_fit > 0.99);
    let wide = build_profile(&WaveParams::new(2.0, 1.0, 0.333).unwrap(), 1024, 1e-12).unwrap();
    assert!(wide.decay_exponent_fit < 0.05 && wide.decay_exponent_fit > 0.0);
    assert!(b2().decay_exponent_fit - 0.5774 < 0.02 * 0.5774);
}

#[test]
fn refinement_keeps_crest() {
    let p = WaveParams::new(3.0, 1.0, 0.1).unwrap();
    let a = build_profile_on(&p, 512, 40.0, 1e-12).unwrap();
    let b = build_profile_on(&p, 1024, 40.0, 1e-12).unwrap();
    assert_eq!(a.crest(), b.crest());
    for j in 0..512 {
        assert!((a.phi[j] - b.phi[2 * j]).abs() < 1e-9);
    }
}

#[test]
fn short_box_is_rejected() {
    let p = WaveParams::new(2.0, 1.0, 0.25).unwrap();
    assert!(matches!(
        build_profile_on(&p, 256, 10.0, 1e-10),
        Err(bch_lab::Error::InsufficientTail(_))
    ));
    assert!(build_profile_on(&p, 32, 50.0, 1e-10).is_err());
}

#[test]
fn physical_q_matches_level_curve_quadrature() {
    // Q as the physical integral of b(φ-k)/(c-φ) + 1 - ((c-k)/(c-φ))^b, trapezoid on the periodic grid
    for (b, c, k) in [(2.0, 1.0, 0.25), (3.0, 2.0, 0.3), (1.5, 1.0, 0.2)] {
        let p = WaveParams::new(b, c, k).unwrap();
        let pr = build_profile(&p, 2048, 1e-12).unwrap();
        let dx = pr.period() / pr.len() as f64;
        let q: f64 = pr
            .phi
            .iter()
            .map(|&f| b * (f - k) / (c - f) + 1.0 - ((c - k) / (c - f)).powf(b))
            .sum::<f64>()
            * dx;
        let reference = q_via_x(&p, 1e-12).unwrap().value;
        assert!((q - reference).abs() < 1e-8 * reference.abs(), "{q} {reference}");
    }
}

#[test]
fn file_roundtrip() {
    let pr = b2();
    let f = pr.to_file();
    let s = serde_json::to_string(&f).unwrap();
    let back: ProfileFile = serde_json::from_str(&s).unwrap();
    assert_eq!(back.n, 1024);
    assert_eq!(back.phi, pr.phi);
    assert!(s.contains("\"L\""));
    assert_eq!(pr.to_csv().lines().count(), 1025);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn profiles_are_valid(b in 1.05f64..8.0, c in 0.5f64..3.0, frac in 0.05f64..0.9) {
        let p = WaveParams::new(b, c, frac * c / (b + 1.0)).unwrap();
        let pr = build_profile(&p, 1024, 1e-11).unwrap();
        prop_assert!(pr.energy_drift < 1e-9);
        prop_assert!(pr.mu.iter().all(|&v| v > 0.0));
        prop_assert!((pr.decay_exponent_fit / p.gamma.sqrt() - 1.0).abs() < 0.02);
    }
}
