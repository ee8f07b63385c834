use bch_lab::pde::*;
use bch_lab::profile::build_profile;
use bch_lab::WaveParams;
use proptest::prelude::*;

fn wave(b: f64, k: f64, n: usize) -> (SimGrid, bch_lab::profile::WaveProfile) {
    let p = WaveParams::new(b, 1.0, k).unwrap();
    let prof = build_profile(&p, n, 1e-12).unwrap();
    (SimGrid::new(prof.period(), n).unwrap(), prof)
}

fn shifted(grid: &SimGrid, f: &[f64], x0: f64) -> Vec<f64> {
    // band-limited interpolation of f(x - x0)
    let mut c = grid.spectral().forward(f);
    for (v, &xi) in c.iter_mut().zip(grid.wavenumbers()) {
        *v *= rustfft::num_complex::Complex64::from_polar(1.0, -xi * x0);
    }
    grid.spectral().inverse(c)
}

#[test]
fn constant_state_survives_a_thousand_steps() {
    let g = SimGrid::new(30.0, 256).unwrap();
    let mut s = SimState {
        t: 0.0,
        m: vec![0.4; 256],
        k_background: 0.4,
    };
    for _ in 0..1000 {
        s = step(&g, 3.0, &s, 0.05);
    }
    assert!(s.m.iter().all(|&v| (v - 0.4).abs() <= 1e-15));
}

#[test]
fn helmholtz_recovers_profile() {
    let (g, prof) = wave(2.0, 0.25, 1024);
    let u = helmholtz_inverse(&g, &prof.mu, 0.25);
    let err = u.iter().zip(&prof.phi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err <= 1e-8, "{err:e}");
}

#[test]
fn rhs_of_wave_is_advection_at_speed_c() {
    let (g, prof) = wave(2.0, 0.25, 1024);
    let r = rhs(&g, 2.0, &prof.mu);
    let mux = g.spectral().derivative(&prof.mu, 1);
    let scale = mux.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let err = r.iter().zip(&mux).map(|(a, b)| (a + b).abs()).fold(0.0, f64::max);
    assert!(err <= 1e-8 * scale, "{err:e}");
}

#[test]
fn linearized_single_mode_symbol() {
    // m = k + a cos(ξx): m_t ≈ -k(1 + b/(1+ξ²)) m_x to first order in a
    let (l, k, b, a) = (20.0, 0.3, 2.5, 1e-7);
    let g = SimGrid::new(l, 256).unwrap();
    let xi = 2.0 * std::f64::consts::PI * 3.0 / l;
    let m: Vec<f64> = g.x().iter().map(|&x| k + a * (xi * x).cos()).collect();
    let r = rhs(&g, b, &m);
    let speed = k * (1.0 + b / (1.0 + xi * xi));
    for (ri, &x) in r.iter().zip(&g.x()) {
        let lin = speed * a * xi * (xi * x).sin();
        assert!((ri - lin).abs() <= 1e-6 * a * xi, "{ri} vs {lin}");
    }
}

#[test]
fn orbital_distance_identity_and_shift() {
    let (g, prof) = wave(2.0, 0.25, 1024);
    let (d, s) = orbital_distance(&g, &prof.mu, &prof.mu);
    assert!(d <= 1e-12 && s.abs() <= 1e-10, "{d:e} {s:e}");
    let m = shifted(&g, &prof.mu, 0.7);
    let (d, s) = orbital_distance(&g, &m, &prof.mu);
    assert!(d <= 1e-10, "{d:e}");
    assert!((s - 0.7).abs() <= 1e-10, "{s}");
}

#[test]
fn orbital_distance_bounded_by_perturbation() {
    let (g, prof) = wave(3.0, 0.1, 1024);
    let w: Vec<f64> = g.x().iter().map(|&x| (-(x - 1.0) * (x - 1.0)).exp()).collect();
    let nw = h1_norm(&g, &w);
    let eps = 1e-3;
    let m: Vec<f64> = prof.mu.iter().zip(&w).map(|(a, b)| a + eps * b / nw).collect();
    let (d, _) = orbital_distance(&g, &m, &prof.mu);
    assert!(d <= eps * (1.0 + 1e-12) && d > 0.0, "{d:e}");
}

#[test]
fn orbital_distance_is_translation_invariant() {
    let (g, prof) = wave(2.0, 0.2, 512);
    let pert = Perturbation::for_wave(&prof.params, 0.05);
    let m = perturbed_momentum(&prof.x_samples, &prof.mu, &pert).unwrap();
    let (d0, s0) = orbital_distance(&g, &m, &prof.mu);
    for step in [1usize, 17, 200] {
        let mut r = m.clone();
        r.rotate_right(step);
        let (d, s) = orbital_distance(&g, &r, &prof.mu);
        assert!((d - d0).abs() <= 1e-12, "{d} {d0}");
        let ds = (s - s0 - step as f64 * g.dx).rem_euclid(g.l);
        assert!(ds.min(g.l - ds) <= 1e-9, "{s} {s0}");
    }
}

#[test]
fn h1_norm_of_a_mode() {
    let l = 10.0;
    let g = SimGrid::new(l, 256).unwrap();
    let xi = 2.0 * std::f64::consts::PI * 2.0 / l;
    let w: Vec<f64> = g.x().iter().map(|&x| (xi * x).sin()).collect();
    let exact = (0.5 * l * (1.0 + xi * xi)).sqrt();
    assert!((h1_norm(&g, &w) - exact).abs() <= 1e-12 * exact);
}

#[test]
fn solitary_wave_translates() {
    let p = WaveParams::new(2.0, 1.0, 0.25).unwrap();
    let t = 50.0;
    let r = stability_experiment(&p, 0.0, t, &ExperimentOptions::default()).unwrap();
    assert_eq!(r.status, RunStatus::Pass, "{}", r.status);
    assert!(r.final_relative_distance() <= 1e-3, "{:e}", r.final_relative_distance());
    assert!(r.max_d <= 1e-6, "{:e}", r.max_d);
    assert!(r.casimir_drift <= 1e-8, "{:e}", r.casimir_drift);
    assert!(r.mass_like_drift <= 1e-8, "{:e}", r.mass_like_drift);
    let expect = (p.c * t).rem_euclid(r.grid.l);
    let got = r.records.last().unwrap().shift.rem_euclid(r.grid.l);
    assert!((got - expect).abs() <= 1e-6, "{got} {expect}");
}

#[test]
fn halving_dt_reduces_error_eightfold() {
    let (g, prof) = wave(2.0, 0.25, 1024);
    let t_end = 2.0;
    let limits = RunLimits::default();
    let err = |dt: f64| {
        let s = SimState {
            t: 0.0,
            m: prof.mu.clone(),
            k_background: 0.25,
        };
        let s = advance(&g, 2.0, s, t_end, DtPolicy::Fixed(dt), f64::INFINITY, &limits).unwrap();
        let exact = shifted(&g, &prof.mu, t_end);
        let diff: Vec<f64> = s.m.iter().zip(&exact).map(|(a, b)| a - b).collect();
        h1_norm(&g, &diff)
    };
    let (e1, e2) = (err(0.16), err(0.08));
    assert!(e1 > 1e-9, "time error swamped by round-off: {e1:e}");
    assert!(e1 / e2 >= 8.0, "{e1:e} {e2:e}");
}

#[test]
fn perturbed_waves_stay_close() {
    for (b, k) in [(2.0, 0.25), (4.0, 0.15)] {
        let p = WaveParams::new(b, 1.0, k).unwrap();
        let r = stability_experiment(&p, 0.01, 50.0, &ExperimentOptions::default()).unwrap();
        assert!(r.d0 > 0.0);
        assert_eq!(r.status, RunStatus::Pass, "b={b}: {} max_d/d0={}", r.status, r.max_d / r.d0);
        assert!(r.casimir_drift <= 1e-8, "{:e}", r.casimir_drift);
        assert!(r.to_csv().lines().count() == 52);
    }
}

#[test]
fn under_resolved_runs_abort() {
    // a sharp additive spike on a coarse grid cannot pass the tail check
    let p = WaveParams::new(2.0, 1.0, 0.25).unwrap();
    let opts = ExperimentOptions {
        n: 256,
        perturbation: Some(Perturbation {
            eps: 0.0,
            center: 0.0,
            width: 0.3,
            additive: 0.5,
        }),
        ..Default::default()
    };
    let r = stability_experiment(&p, 0.0, 1.0, &opts).unwrap();
    assert!(matches!(r.status, RunStatus::Aborted(_)), "{}", r.status);
}

#[test]
fn negative_momentum_is_rejected() {
    let x = [0.0, 1.0];
    let mu = [0.5, 0.3];
    let pert = Perturbation {
        eps: -2.0,
        center: 0.0,
        width: 1.0,
        additive: 0.0,
    };
    assert!(perturbed_momentum(&x, &mu, &pert).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn upper_bound_at_zero_shift(amp in -0.1f64..0.1, c0 in -5.0f64..5.0) {
        let g = SimGrid::new(40.0, 256).unwrap();
        let mu: Vec<f64> = g.x().iter().map(|&x| 0.2 + 0.5 / (x * 0.8).cosh().powi(2)).collect();
        let m: Vec<f64> = g.x().iter().zip(&mu).map(|(&x, &v)| v + amp * (-(x - c0).powi(2)).exp()).collect();
        let diff: Vec<f64> = m.iter().zip(&mu).map(|(a, b)| a - b).collect();
        let (d, _) = orbital_distance(&g, &m, &mu);
        prop_assert!(d <= h1_norm(&g, &diff) * (1.0 + 1e-12) + 1e-15);
    }
}
