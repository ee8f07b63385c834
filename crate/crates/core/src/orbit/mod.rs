//! Level-curve quadrature of `Q` and of the derivative integrals `I'₁`, `I'₂`.
//!
//! Two coordinate systems describe the same homoclinic loop. In the normalized
//! plane `(x, y)` the loop is `H̄ = 2(1-γ)/(γ b(b-1))`; in the transformed plane
//! `(z, ū)` it is the level set `A/B - ū² = h` with `h = 1/γ`, and `z = x`.
//! Every integral here is written over the upper branch, parametrized by the
//! amplitude coordinate on `(0, turning point)` and doubled by symmetry where
//! the loop is closed. The turning-point square-root zero is removed with
//! `z = z_t - s²`.

mod scan;

pub use scan::{
    hypothesis_grid_check, level_curve_homoclinic, level_curve_transformed, monotonicity_scan,
    taylor_leading, GridNode, GridReport, LevelCurve, MonotonicityReport, ScanPoint,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{self, bracket_root, panel_mean, QuadOptions};
use crate::params::{a_over_b_pt, a_over_b_prime_pt, abf_pt, check_b, p_pt, r_pt, Pt, WaveParams};

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    #[serde(rename = "x-route")]
    X,
    #[serde(rename = "ubar-route")]
    Ubar,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurveIntegral {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub turning_point: f64,
    pub route: Route,
    pub evaluations: usize,
}

fn check_h(h: f64) -> Result<()> {
    if !(h > 1.0) || !h.is_finite() {
        return Err(Error::ParameterDomain {
            name: "h",
            value: h,
            bound: "h > 1".into(),
        });
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// Level function of the homoclinic loop on `y = 0`, zero at the turning point.
fn homoclinic_gap(p: Pt, b: f64, gamma: f64) -> f64 {
    let x = p.z;
    let poly = 2.0 * (1.0 - gamma) + 2.0 * (1.0 - gamma) * (b - 1.0) * x + b * (b - 1.0) * x * x;
    p.pow(b - 1.0) * poly - 2.0 * (1.0 - gamma)
}

/// Most negative `ln(1-z)` searched; for `b` close to 1 the turning point
/// approaches `z = 1` faster than any fixed power as `k → 0`.
const LOG_FLOOR: f64 = -700.0;

/// Rightmost point of the homoclinic loop on the `x` axis, with its complement.
pub fn turning_point_x_pt(p: &WaveParams) -> Result<Pt> {
    let (b, g) = (p.b, p.gamma);
    let lo = p.center();
    let t_center = (-lo).ln_1p();
    let t = bracket_root(|t| homoclinic_gap(Pt::from_log(t), b, g), LOG_FLOOR, t_center)?;
    let pt = Pt::from_log(t);
    let res = homoclinic_gap(pt, b, g);
    if !(pt.z > lo && pt.z < 1.0) || res.abs() > 1e-12 {
        return Err(Error::Bracket(format!(
            "turning point x = {} has residual {res:e} (b = {b}, gamma = {g})",
            pt.z
        )));
    }
    Ok(pt)
}

/// Rightmost point of the homoclinic loop on the `x` axis.
pub fn turning_point_x(p: &WaveParams) -> Result<f64> {
    Ok(turning_point_x_pt(p)?.z)
}

const Z_LO: f64 = 1e-10;

/// Solution of `A(z)/B(z) = h`, with its complement.
///
/// The search runs in `t = ln(1-z)` from `z = 1e-10` towards `z = 1`. Before
/// bisecting, `A/B - h` is probed on a grid; more than one sign change is
/// reported as a bracket error, since monotonicity of `A/B` is relied on but
/// checked rather than assumed.
pub fn turning_point_z_pt(b: f64, h: f64) -> Result<Pt> {
    check_b(b, 1.0 + f64::EPSILON)?;
    check_h(h)?;
    let g = |t: f64| a_over_b_pt(Pt::from_log(t), b) - h;
    let mut probe: Vec<f64> = (0..=40)
        .map(|i| Z_LO * 10f64.powf(i as f64 * 0.25))
        .filter(|&z| z < 0.01)
        .map(|z: f64| (-z).ln_1p())
        .collect();
    probe.extend((1..100).map(|i| (-(i as f64) / 100.0).ln_1p()));
    let mut t = (0.01f64).ln();
    while t > LOG_FLOOR {
        t -= 2.0;
        probe.push(t.max(LOG_FLOOR));
    }
    let vals: Vec<f64> = probe.iter().map(|&t| g(t)).collect();
    let changes: Vec<usize> = (1..vals.len())
        .filter(|&i| vals[i - 1].signum() != vals[i].signum())
        .collect();
    if changes.len() != 1 {
        return Err(Error::Bracket(format!(
            "A/B - h changes sign {} times on [{Z_LO}, 1) (b = {b}, h = {h})",
            changes.len()
        )));
    }
    let i = changes[0];
    let t = bracket_root(g, probe[i], probe[i - 1])?;
    let res = g(t);
    if res.abs() > 1e-12 * h {
        return Err(Error::Bracket(format!(
            "turning point z = {} has residual {res:e} (b = {b}, h = {h})",
            -t.exp_m1()
        )));
    }
    Ok(Pt::from_log(t))
}

/// Solution of `A(z)/B(z) = h`.
pub fn turning_point_z(b: f64, h: f64) -> Result<f64> {
    Ok(turning_point_z_pt(b, h)?.z)
}

/// `-(A/B)'`, positive on `(0,1)`.
fn slope(p: Pt, b: f64) -> f64 {
    -a_over_b_prime_pt(p, b)
}

/// Maps `s` to the point `z_t - s²` of the branch, keeping the complement exact.
fn branch_point(tp: Pt, s2: f64) -> Pt {
    Pt::from_pair(tp.z - s2, tp.w() + s2)
}

/// Width of the `s²` window near the turning point where divided differences are used.
fn near_window(tp: Pt) -> f64 {
    (0.05 * tp.z).min(0.25 * tp.w())
}

/// `∫₀^{z_t} w(z)/ū(z) dz` on the level set `ū² = A/B - h`.
///
/// With `z = z_t - s²` the integrand becomes `2 w s/ū`. Close to the turning
/// point `ū²/s²` is the mean of `-(A/B)'` over `[z, z_t]`, which avoids the
/// cancellation in `A/B - h`.
fn ubar_integral<W: Fn(Pt) -> f64>(
    w: W,
    b: f64,
    h: f64,
    tp: Pt,
    tol: f64,
) -> Result<numeric::QuadResult> {
    let near = near_window(tp);
    let integrand = |s: f64| {
        let s2 = s * s;
        let p = branch_point(tp, s2);
        if p.z <= 0.0 {
            return 0.0;
        }
        if s2 < near {
            let ratio = panel_mean(|u| slope(branch_point(tp, u), b), 0.0, s2);
            2.0 * w(p) / ratio.sqrt()
        } else {
            let u2 = a_over_b_pt(p, b) - h;
            2.0 * w(p) * s / u2.sqrt()
        }
    };
    numeric::integrate(integrand, 0.0, tp.z.sqrt(), QuadOptions::new(tol))
}

/// `Q` from the physical-variable form: `γ^{-1/2}·2∫₀^{x_max} G(x)/y(x) dx`.
pub fn q_via_x(p: &WaveParams, tol: f64) -> Result<CurveIntegral> {
    check_tol(tol)?;
    let (b, g) = (p.b, p.gamma);
    let tp = turning_point_x_pt(p)?;
    let scale = 1.0 / (g * b * (b - 1.0));
    let big_g = |q: Pt| {
        b * q.z * q.pow(0.5 * (b - 3.0)) + q.pow(0.5 * (b - 1.0)) - q.pow(-0.5 * (b + 1.0))
    };
    let force = |q: Pt| q.z * q.pow(b - 2.0) * (1.0 - (b + 1.0) * q.z / (2.0 * g));
    let near = near_window(tp);
    let integrand = |s: f64| {
        let s2 = s * s;
        let q = branch_point(tp, s2);
        if q.z <= 0.0 {
            return 0.0;
        }
        // y² = 2∫_x^{x_max} (-F) near the turning point
        if s2 < near {
            let ratio = 2.0 * panel_mean(|u| -force(branch_point(tp, u)), 0.0, s2);
            2.0 * big_g(q) / ratio.sqrt()
        } else {
            let y2 = scale * homoclinic_gap(q, b, g);
            2.0 * big_g(q) * s / y2.sqrt()
        }
    };
    let pref = 2.0 / g.sqrt();
    let r = numeric::integrate(integrand, 0.0, tp.z.sqrt(), QuadOptions::new(tol / pref))?;
    Ok(CurveIntegral {
        value: pref * r.value,
        abs_error_estimate: pref * r.abs_error,
        turning_point: tp.z,
        route: Route::X,
        evaluations: r.evaluations,
    })
}

/// Weight `g(z) = A(-B)^{3/2} / (2√(b(b-1)) z (1-z)^{(3b-3)/2} f)` of the `ū`-form of `Q`.
pub fn q_weight(z: f64, b: f64) -> f64 {
    q_weight_pt(Pt::from_z(z), b)
}

fn q_weight_pt(p: Pt, b: f64) -> f64 {
    let (a, bb, f) = abf_pt(p, b);
    let nu = p.pow(b - 1.0);
    a * (-bb / nu).powf(1.5) / (2.0 * (b * (b - 1.0)).sqrt() * p.z * f)
}

/// `Q = h^{1/2}∫_{Γ_h} g dū`, evaluated along the upper branch in `z`.
pub fn q_via_ubar(b: f64, h: f64, tol: f64) -> Result<CurveIntegral> {
    check_tol(tol)?;
    let tp = turning_point_z_pt(b, h)?;
    let pref = h.sqrt();
    // dū = -(A/B)'/(2ū) dz on the upper branch; doubling cancels the ½
    let w = |p: Pt| -q_weight_pt(p, b) * slope(p, b);
    let r = ubar_integral(w, b, h, tp, tol / pref)?;
    Ok(CurveIntegral {
        value: pref * r.value,
        abs_error_estimate: pref * r.abs_error,
        turning_point: tp.z,
        route: Route::Ubar,
        evaluations: r.evaluations,
    })
}

/// Contribution to [`q_via_ubar`] from `ū > ubar_max` on the upper branch.
///
/// Equivalently the part of the `z`-integral below `z_c` where
/// `A/B(z_c) = h + ubar_max²`; `z_c ≈ 3/((b+1)(h+ubar_max²))`.
pub fn ubar_tail(b: f64, h: f64, ubar_max: f64, tol: f64) -> Result<f64> {
    check_b(b, 1.0 + f64::EPSILON)?;
    check_h(h)?;
    if !(ubar_max > 0.0) {
        return Err(Error::Config(format!("ubar_max must be positive, got {ubar_max}")));
    }
    let level = h + ubar_max * ubar_max;
    let zc = turning_point_z(b, level)?;
    let integrand = |z: f64| {
        if z <= 0.0 {
            return 0.0;
        }
        let p = Pt::from_z(z);
        let u = (a_over_b_pt(p, b) - h).sqrt();
        -q_weight_pt(p, b) * slope(p, b) / (2.0 * u)
    };
    let r = numeric::integrate(integrand, 0.0, zc, QuadOptions::new(tol))?;
    Ok(h.sqrt() * r.value)
}

fn bb_scale(b: f64) -> f64 {
    2.0 * (b * (b - 1.0)).powf(1.5)
}

/// P-part of the `I'₁` weight, `A(-B)^{5/2}P / (2(b(b-1))^{3/2} z²(1-z)^{(5b-5)/2} f³)`.
pub fn i1_weight_p(z: f64, b: f64) -> f64 {
    i1_weight_p_pt(Pt::from_z(z), b)
}

fn i1_weight_p_pt(q: Pt, b: f64) -> f64 {
    let (a, bb, f) = abf_pt(q, b);
    let nu = q.pow(b - 1.0);
    let z = q.z;
    a * (-bb / nu).powf(2.5) * p_pt(q, b) / (bb_scale(b) * z * z * f * f * f)
}

/// R-part of the `I'₁` weight, `-A²(-B)^{3/2}R / (2(b(b-1))^{3/2} z³(1-z)^{(5b-5)/2} f²)`.
pub fn i1_weight_r(z: f64, b: f64) -> f64 {
    i1_weight_r_pt(Pt::from_z(z), b)
}

fn i1_weight_r_pt(q: Pt, b: f64) -> f64 {
    let (a, bb, f) = abf_pt(q, b);
    let nu = q.pow(b - 1.0);
    let z = q.z;
    -a * a * (-bb / nu).powf(1.5) * r_pt(q, b) / (nu * bb_scale(b) * z * z * z * f * f)
}

/// `I'₁ = h^{1/2} dQ/dh` as a single integral over the upper branch.
pub fn i1_prime(b: f64, h: f64, tol: f64) -> Result<CurveIntegral> {
    check_tol(tol)?;
    let tp = turning_point_z_pt(b, h)?;
    let w = |p: Pt| 0.5 * (i1_weight_p_pt(p, b) + i1_weight_r_pt(p, b)) * slope(p, b);
    let r = ubar_integral(w, b, h, tp, tol)?;
    Ok(CurveIntegral {
        value: r.value,
        abs_error_estimate: r.abs_error,
        turning_point: tp.z,
        route: Route::Ubar,
        evaluations: r.evaluations,
    })
}

/// Weight `√(b(b-1)) A / (2(1-z)^{(b+1)/2} √(-B))` of `I'₂`.
pub fn i2_weight(z: f64, b: f64) -> f64 {
    i2_weight_pt(Pt::from_z(z), b)
}

fn i2_weight_pt(p: Pt, b: f64) -> f64 {
    let (a, bb, _) = abf_pt(p, b);
    (b * (b - 1.0)).sqrt() * a / (2.0 * p.pow(0.5 * (b + 1.0)) * (-bb).sqrt())
}

/// `I'₂ = -∫₀^{z_t} F(z)/ū dz`, which equals `-½h^{-1/2}Q`.
pub fn i2_prime(b: f64, h: f64, tol: f64) -> Result<CurveIntegral> {
    check_tol(tol)?;
    let tp = turning_point_z_pt(b, h)?;
    let r = ubar_integral(|p| -i2_weight_pt(p, b), b, h, tp, tol)?;
    Ok(CurveIntegral {
        value: r.value,
        abs_error_estimate: r.abs_error,
        turning_point: tp.z,
        route: Route::Ubar,
        evaluations: r.evaluations,
    })
}

/// Richardson-extrapolated centered difference of [`q_via_ubar`] in `h`.
pub fn dq_dh_fd(b: f64, h: f64, tol: f64) -> Result<f64> {
    check_h(h)?;
    let delta = 0.02 * (h - 1.0).min(1.0);
    let d = |dl: f64| -> Result<f64> {
        let qp = q_via_ubar(b, h + dl, tol)?.value;
        let qm = q_via_ubar(b, h - dl, tol)?.value;
        Ok((qp - qm) / (2.0 * dl))
    };
    let d1 = d(delta)?;
    let d2 = d(0.5 * delta)?;
    Ok((4.0 * d2 - d1) / 3.0)
}
