use bch_lab::params::*;
use bch_lab::WaveParams;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn kernel_signs(z in 1e-6f64..0.999_999, b in 1.001f64..12.0) {
        let v = eval_kernel(z, b).unwrap();
        prop_assert!(v.a < 0.0 && v.b < 0.0 && v.f < 0.0, "{v:?}");
        prop_assert!(v.a_prime < 0.0 && v.b_prime < 0.0, "{v:?}");
    }

    #[test]
    fn b_minus_a_identity(z in 1e-4f64..0.999, b in 1.01f64..10.0) {
        let v = eval_kernel(z, b).unwrap();
        let gap = v.b - v.a - b * (b - 1.0) * z * z * pow1m(z, b - 1.0);
        prop_assert!(gap.abs() <= 1e-12 * (v.a.abs() + v.b.abs()), "{gap:e}");
    }

    #[test]
    fn r_p_match_polynomial_forms(z in 1e-2f64..0.99, b in 1.01f64..10.0) {
        let r = eval_r(z, b).unwrap();
        let p = eval_p(z, b).unwrap();
        // the ν-forms sum O(b²) terms down to O(z³), so compare against the term scale
        let scale = 1e-13 * (1.0 + b).powi(3);
        prop_assert!((r_nu_form(z, b) - r).abs() <= 1e-11 * r.abs() + scale, "R {r} vs {}", r_nu_form(z, b));
        prop_assert!((p_nu_form(z, b) - p).abs() <= 1e-11 * p.abs() + scale, "P {p} vs {}", p_nu_form(z, b));
    }

    #[test]
    fn r_matches_defining_combination(z in 1e-2f64..0.99, b in 1.01f64..10.0) {
        let v = eval_kernel(z, b).unwrap();
        let direct = 0.5 * z * (1.0 - z) * v.b_prime + 0.5 * (b - 1.0) * z * v.b - (1.0 - z) * v.b;
        prop_assert!(rel(eval_r(z, b).unwrap(), direct) <= 1e-11);
        let direct_p = 2.0 * (1.0 - z) * v.a_prime * v.f + (b - 1.0) * v.a * v.f
            - (1.0 - z) * v.a * v.f_prime;
        prop_assert!(rel(eval_p(z, b).unwrap(), direct_p) <= 1e-11);
    }

    #[test]
    fn normalized_first_integral_is_conserved(b in 1.05f64..8.0, g in 0.05f64..0.95, x in -0.5f64..0.9, y in -1.0f64..1.0) {
        // dH/dt = H_x·y - 2y·F, so H_x must equal 2F
        let p = WaveParams::from_gamma(b, 1.0, g).unwrap();
        let (_, force) = vector_field_normalized(x, y, &p).unwrap();
        let poly = 2.0 * (1.0 - g) + 2.0 * (1.0 - g) * (b - 1.0) * x + b * (b - 1.0) * x * x;
        let dpoly = 2.0 * (1.0 - g) * (b - 1.0) + 2.0 * b * (b - 1.0) * x;
        let hx = (-(b - 1.0) * pow1m(x, b - 2.0) * poly + pow1m(x, b - 1.0) * dpoly)
            / (g * b * (b - 1.0));
        let scale = hx.abs().max(1e-3 * x.abs());
        prop_assert!((hx - 2.0 * force).abs() <= 1e-10 * scale.max(1e-300), "{hx} {force}");
    }

    #[test]
    fn transformed_first_integral_is_conserved(z in 1e-3f64..0.99, u in -3.0f64..3.0, b in 1.05f64..8.0) {
        let v = eval_kernel(z, b).unwrap();
        let (_, du) = vector_field_transformed(z, u, b).unwrap();
        let quotient = (v.a_prime * v.b - v.a * v.b_prime) / (v.b * v.b);
        prop_assert!(rel(du, quotient) <= 1e-10, "{du} {quotient}");
    }
}

#[test]
fn closed_forms_at_b_two() {
    for i in 1..200 {
        let z = i as f64 / 200.0;
        let v = eval_kernel(z, 2.0).unwrap();
        assert!(rel(v.a, -2.0 * z * z) <= 1e-14);
        assert!(rel(v.b, -2.0 * z * z * z) <= 1e-14);
        assert!(rel(v.f, -z * z * z) <= 1e-14);
        assert!(rel(a_over_b(z, 2.0), 1.0 / z) <= 1e-14);
    }
}

#[test]
fn finite_difference_orders() {
    for b in [1.5, 2.5, 4.0] {
        for z in [0.1, 0.5, 0.9] {
            let v = eval_kernel(z, b).unwrap();
            let comp = |w: f64| {
                let (a, bb, f) = abf(w, b);
                [a, bb, f]
            };
            let exact = [v.a_prime, v.b_prime, v.f_prime];
            let err = |h: f64| -> [f64; 3] {
                let (p, m) = (comp(z + h), comp(z - h));
                std::array::from_fn(|i| ((p[i] - m[i]) / (2.0 * h) - exact[i]).abs())
            };
            let (e1, e2) = (err(1e-3), err(5e-4));
            for i in 0..3 {
                let order = (e1[i] / e2[i]).log2();
                assert!(order >= 1.9, "b={b} z={z} component {i}: order {order}");
            }
        }
    }
}
