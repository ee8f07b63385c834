//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;

use bch_lab::exact::{self, int, rat, resultant_nu, ExactPoly, Monomial, Pair, UniPoly};
use bch_lab::orbit::{self, DEFAULT_TOL};
use bch_lab::pde::{stability_experiment, ExperimentOptions, RunStatus};
use bch_lab::profile::{build_profile, ode_residual};
use bch_lab::WaveParams;

const BS: [f64; 6] = [1.5, 2.0, 2.5, 3.0, 4.0, 10.0];

fn h_grid() -> Vec<f64> {
    (0..10).map(|i| 1.05 * (20.0f64 / 1.05).powf(i as f64 / 9.0)).collect()
}

struct Line {
    id: u32,
    ok: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn c1() -> Line {
    let (elim, dt) = timed(|| resultant_nu(&exact::poly_r(), &exact::poly_rp()).unwrap());
    let expected = exact::expected_r_eliminant();
    let ok = elim == expected && dt < Duration::from_secs(1);
    Line {
        id: 1,
        ok,
        detail: format!("Res = {elim} (expected {expected}), {:.3} s", dt.as_secs_f64()),
    }
}

fn c2() -> Line {
    let ((z_power, rem_zero, cofactor), dt) = timed(|| {
        let res = resultant_nu(&exact::poly_p(), &exact::poly_pp_scaled()).unwrap();
        let e = res.z_valuation().unwrap_or(0);
        let z4 = ExactPoly::term(int(1), Monomial::new(4, 0, 0));
        let (q, r4) = res.div_rem(&z4).unwrap();
        let (cof, rl) = q.div_rem(&exact::poly_l()).unwrap();
        (e, r4.is_zero() && rl.is_zero(), cof)
    });
    let report = exact::eliminant_p_report();
    let archived = report.cofactor.is_some() && !cofactor.is_zero();
    let ok = z_power >= 4 && rem_zero && archived && dt < Duration::from_secs(1);
    Line {
        id: 2,
        ok,
        detail: format!(
            "z-power {z_power}, zero remainders {rem_zero}, cofactor {}, {:.3} s",
            report.cofactor.unwrap_or_default(),
            dt.as_secs_f64()
        ),
    }
}

fn c3() -> Line {
    let (h2_at3, _) = exact::sign_combinations(3);
    let (_, h1_at2) = exact::sign_combinations(2);
    let want_r = UniPoly::from_ints(&[0, 0, 0, -4, 2]);
    let want_p = UniPoly::from_ints(&[0, 0, 0, 0, 2]);
    let ids = exact::verify_identity_expansions();
    let ok = h2_at3 == want_r && h1_at2 == want_p && ids.verdict.passed();
    Line {
        id: 3,
        ok,
        detail: format!(
            "b=3: {}, b=2: {}, identity expansions {}",
            ExactPoly::from_univariate_z(&h2_at3),
            ExactPoly::from_univariate_z(&h1_at2),
            ids.verdict
        ),
    }
}

fn c4() -> Line {
    let ids = exact::verify_identity_expansions();
    let integer_ok = ids.entries.iter().all(|e| e.taylor_ok);
    let mut worst = 0.0f64;
    let mut boundary_ok = true;
    for (n, d) in [(3, 2), (5, 2), (7, 2)] {
        let bq = rat(n, d);
        let one = BigRational::from_integer(1.into());
        let zero = BigRational::zero();
        let r1 = exact::poly_r().eval(&one, &zero, &bq);
        let p1 = exact::poly_p().eval(&one, &zero, &bq);
        let bm1 = &bq - &one;
        boundary_ok &= r1 == &one - &bq && p1 == int(2) * &bm1 * &bm1;
        let b = n as f64 / d as f64;
        let r3 = b / 6.0 * (1.0 - b) * (1.0 + b);
        let p4 = b * b * (b + 1.0) * (b - 1.0).powi(2) / 6.0;
        let er = (orbit::taylor_leading(Pair::R, b).unwrap() - r3).abs() / r3.abs();
        let ep = (orbit::taylor_leading(Pair::P, b).unwrap() - p4).abs() / p4.abs();
        worst = worst.max(er).max(ep);
    }
    let ok = integer_ok && boundary_ok && worst <= 1e-6;
    Line {
        id: 4,
        ok,
        detail: format!(
            "integer b exact {integer_ok}, R(1), P(1) exact at b=3/2,5/2,7/2 {boundary_ok}, \
             series fit worst rel. error {worst:.2e}"
        ),
    }
}

fn c5() -> Line {
    let bs: Vec<f64> = (0..200).map(|i| 1.1 + 8.9 * i as f64 / 199.0).collect();
    let zs: Vec<f64> = (1..=500).map(|i| i as f64 / 501.0).collect();
    let (r, dt) = timed(|| orbit::hypothesis_grid_check(&bs, &zs).unwrap());
    let ok = r.verdict.passed() && r.offending.is_empty() && dt < Duration::from_secs(30);
    Line {
        id: 5,
        ok,
        detail: format!(
            "200x500 nodes, violations {}, max R/z^3 {:.3e}, min P/z^4 {:.3e}, {:.2} s",
            r.offending.len(),
            r.max_r_normalized,
            r.min_p_normalized,
            dt.as_secs_f64()
        ),
    }
}

fn c6() -> Line {
    let (worst, dt) = timed(|| {
        let mut worst = 0.0f64;
        for b in BS {
            for h in h_grid() {
                let u = orbit::q_via_ubar(b, h, DEFAULT_TOL).unwrap().value;
                let x = orbit::q_via_x(&WaveParams::from_h(b, 1.0, h).unwrap(), DEFAULT_TOL)
                    .unwrap()
                    .value;
                worst = worst.max((u - x).abs() / x.abs());
            }
        }
        worst
    });
    Line {
        id: 6,
        ok: worst <= 1e-6 && dt < Duration::from_secs(60),
        detail: format!("worst rel. gap {worst:.2e} on 6x10 grid, {:.2} s", dt.as_secs_f64()),
    }
}

fn c7() -> Line {
    let (mut w2, mut w1) = (0.0f64, 0.0f64);
    for b in BS {
        for h in h_grid() {
            let q = orbit::q_via_ubar(b, h, DEFAULT_TOL).unwrap().value;
            let i1 = orbit::i1_prime(b, h, DEFAULT_TOL).unwrap().value;
            let i2 = orbit::i2_prime(b, h, DEFAULT_TOL).unwrap().value;
            w2 = w2.max((0.5 * q / h.sqrt() + i2).abs() / i2.abs());
            let fd = orbit::dq_dh_fd(b, h, 1e-12).unwrap();
            w1 = w1.max((fd - i1 / h.sqrt()).abs() / (i1 / h.sqrt()).abs());
        }
    }
    Line {
        id: 7,
        ok: w2 <= 1e-6 && w1 <= 1e-4,
        detail: format!("I2 identity worst {w2:.2e}, FD identity worst {w1:.2e}"),
    }
}

fn c8() -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for b in [1.01, 1.5, 2.0, 3.0, 4.0, 10.0] {
        let kmax = 1.0 / (b + 1.0);
        let ks: Vec<f64> = (0..20).map(|i| kmax * (0.05 + 0.9 * i as f64 / 19.0)).collect();
        let r = orbit::monotonicity_scan(b, 1.0, &ks, DEFAULT_TOL).unwrap();
        let min_i1 = r.points.iter().map(|p| p.i1p).fold(f64::INFINITY, f64::min);
        ok &= r.verdict.passed() && min_i1 > 0.0 && r.min_margin() > 0.0;
        parts.push(format!("b={b}: margin {:.2e}, min I1' {:.2e}", r.min_margin(), min_i1));
    }
    Line {
        id: 8,
        ok,
        detail: parts.join("; "),
    }
}

fn c9() -> Line {
    let points = [
        (1.5, 0.1),
        (2.0, 0.05),
        (2.0, 0.25),
        (2.0, 0.3),
        (2.5, 0.15),
        (3.0, 0.1),
        (3.0, 0.2),
        (4.0, 0.15),
        (6.0, 0.05),
        (10.0, 0.06),
    ];
    let (res, dt) = timed(|| {
        let mut ok = true;
        let (mut worst_res, mut worst_decay) = (0.0f64, 0.0f64);
        for (b, k) in points {
            let p = WaveParams::new(b, 1.0, k).unwrap();
            let prof = build_profile(&p, 2048, 1e-12).unwrap();
            let r = ode_residual(&prof);
            let d = (prof.decay_exponent_fit - p.gamma.sqrt()).abs() / p.gamma.sqrt();
            let bounds = prof.phi.iter().all(|&f| f > p.k && f < p.c) && prof.mu.iter().all(|&m| m > 0.0);
            let tails = (prof.mu[0] - p.k).abs() <= 1e-10 && (prof.phi[0] - p.k).abs() <= 1e-10;
            ok &= prof.validate().is_ok() && r <= 1e-6 && d <= 0.02 && bounds && tails;
            worst_res = worst_res.max(r);
            worst_decay = worst_decay.max(d);
        }
        (ok, worst_res, worst_decay)
    });
    let (ok, wr, wd) = res;
    Line {
        id: 9,
        ok: ok && dt < Duration::from_secs(60),
        detail: format!(
            "10 points, worst residual {wr:.2e}, worst decay error {:.3}%, {:.2} s",
            100.0 * wd,
            dt.as_secs_f64()
        ),
    }
}

fn c10() -> Line {
    let p = WaveParams::new(2.0, 1.0, 0.25).unwrap();
    let t = 50.0 / p.c;
    let r = stability_experiment(&p, 0.0, t, &ExperimentOptions::default()).unwrap();
    let rel = r.final_relative_distance();
    let l = r.grid.l;
    let got = r.records.last().map_or(f64::NAN, |x| x.shift.rem_euclid(l));
    let want = (p.c * t).rem_euclid(l);
    let shift_err = (got - want).abs().min(l - (got - want).abs());
    let ok = r.status == RunStatus::Pass && rel <= 1e-3 && r.casimir_drift <= 1e-8 && shift_err <= 1e-3;
    Line {
        id: 10,
        ok,
        detail: format!(
            "N={} T={t}: rel. H1 distance {rel:.2e}, Casimir drift {:.2e}, shift error {shift_err:.2e}",
            r.grid.n, r.casimir_drift
        ),
    }
}

fn c11() -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for (b, k) in [(2.0, 0.25), (3.0, 0.125), (4.0, 0.15)] {
        let p = WaveParams::new(b, 1.0, k).unwrap();
        let r = stability_experiment(&p, 0.01, 50.0 / p.c, &ExperimentOptions::default()).unwrap();
        let labelled = r.scope.contains("finite-horizon evidence");
        ok &= r.passed() && labelled && r.d0 > 0.0 && r.max_d <= 10.0 * r.d0;
        parts.push(format!("b={b} k={k}: {} max d/d0 {:.2}", r.status, r.max_d / r.d0));
    }
    Line {
        id: 11,
        ok,
        detail: format!("{} (finite-horizon evidence)", parts.join("; ")),
    }
}

fn main() {
    let checks: [fn() -> Line; 11] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11];
    let mut failed = 0;
    for check in checks {
        let line = check();
        let tag = if line.ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2}: {tag}  {}", line.id, line.detail);
        if !line.ok {
            failed += 1;
        }
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
