//! Wave parameters and the closed-form scalar kernel.
//!
//! The traveling-wave reduction of the b-family leads to three functions of the
//! normalized amplitude `z ∈ (0,1)`:
//!
//! ```text
//! A(z) = 2(1-z)^{b-1} + 2(b-1) z (1-z)^{b-1} - 2
//! B(z) = A(z) + b(b-1) z^2 (1-z)^{b-1}
//! f(z) = 2 - 2(1-z)^b - (b+1) z - (b-1) z (1-z)^b
//! ```
//!
//! All three vanish to high order at `z = 0` (`A ~ z^2`, `B ~ z^3`, `f ~ z^3`),
//! so the closed forms cancel catastrophically there. Below a `b`-dependent
//! switch point the kernel sums the convergent binomial series instead, with
//! the identically-zero low-order coefficients dropped exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default lower bound on `b`. Factors of `(b-1)` appear in denominators.
pub const DEFAULT_B_FLOOR: f64 = 1.0 + 1e-3;

/// `(1-z)^a` evaluated through `log1p`, exact at the endpoint `z = 1`.
#[inline]
pub fn pow1m(z: f64, a: f64) -> f64 {
    if z == 1.0 {
        return if a == 0.0 {
            1.0
        } else if a > 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
    }
    (a * (-z).ln_1p()).exp()
}

/// Validated parameter bundle `(b, c, k)` with `gamma` and `h = 1/gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    pub b: f64,
    pub c: f64,
    pub k: f64,
    pub gamma: f64,
    pub h: f64,
}

impl WaveParams {
    pub fn new(b: f64, c: f64, k: f64) -> Result<Self> {
        Self::with_b_floor(b, c, k, DEFAULT_B_FLOOR)
    }

    pub fn with_b_floor(b: f64, c: f64, k: f64, b_floor: f64) -> Result<Self> {
        check_b(b, b_floor)?;
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::ParameterDomain {
                name: "c",
                value: c,
                bound: "c > 0".into(),
            });
        }
        let k_max = c / (b + 1.0);
        if !(k > 0.0 && k < k_max) {
            return Err(Error::ParameterDomain {
                name: "k",
                value: k,
                bound: format!("0 < k < c/(b+1) = {k_max}"),
            });
        }
        let gamma = (c - k * (b + 1.0)) / (c - k);
        Ok(Self {
            b,
            c,
            k,
            gamma,
            h: 1.0 / gamma,
        })
    }

    /// Parameters realizing a prescribed `gamma ∈ (0,1)` at wave speed `c`.
    pub fn from_gamma(b: f64, c: f64, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::ParameterDomain {
                name: "gamma",
                value: gamma,
                bound: "0 < gamma < 1".into(),
            });
        }
        let k = c * (1.0 - gamma) / (b + 1.0 - gamma);
        let mut p = Self::new(b, c, k)?;
        // keep the requested gamma bit-exact; k carries the rounding
        p.gamma = gamma;
        p.h = 1.0 / gamma;
        Ok(p)
    }

    pub fn from_h(b: f64, c: f64, h: f64) -> Result<Self> {
        if !(h > 1.0) {
            return Err(Error::ParameterDomain {
                name: "h",
                value: h,
                bound: "h > 1".into(),
            });
        }
        let mut p = Self::from_gamma(b, c, 1.0 / h)?;
        p.h = h;
        Ok(p)
    }

    /// `x`-coordinate of the center equilibrium of the normalized system.
    pub fn center(&self) -> f64 {
        2.0 * self.gamma / (self.b + 1.0)
    }

    /// `d gamma / d k`, negative on the whole admissible range.
    pub fn dgamma_dk(&self) -> f64 {
        -self.b * self.c / (self.c - self.k).powi(2)
    }

    /// Level of the homoclinic loop through the saddle `(0,0)`.
    pub fn homoclinic_level(&self) -> f64 {
        let b = self.b;
        2.0 * (1.0 - self.gamma) / (self.gamma * b * (b - 1.0))
    }
}

pub(crate) fn check_b(b: f64, b_floor: f64) -> Result<()> {
    if !(b > 1.0 && b >= b_floor) || !b.is_finite() {
        return Err(Error::ParameterDomain {
            name: "b",
            value: b,
            bound: format!("b > 1 and b >= {b_floor}"),
        });
    }
    Ok(())
}

fn check_unit_open(name: &'static str, z: f64) -> Result<()> {
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::Domain {
            name,
            value: z,
            domain: "(0, 1)",
        });
    }
    Ok(())
}

fn check_unit_closed(name: &'static str, z: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::Domain {
            name,
            value: z,
            domain: "[0, 1]",
        });
    }
    Ok(())
}

/// Values of `A, A', A'', B, B', B'', f, f'` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValues {
    pub a: f64,
    pub a_prime: f64,
    pub a_second: f64,
    pub b: f64,
    pub b_prime: f64,
    pub b_second: f64,
    pub f: f64,
    pub f_prime: f64,
}

/// Upper end of the series region for a given `b`.
pub fn series_switch(b: f64) -> f64 {
    if b <= 3.0 {
        0.5
    } else {
        1.5 / b
    }
}

/// `(A, B, f)` from their Maclaurin series.
///
/// Coefficients come from the binomial recurrences for `(1-z)^{b-1}` and
/// `(1-z)^b`; the terms known to vanish (`A` below `z^2`, `B` and `f` below
/// `z^3`) are skipped so that the leading power is exact.
pub fn abf_series(z: f64, b: f64) -> (f64, f64, f64) {
    let bm1 = b - 1.0;
    // c_n: coefficients of (1-z)^{b-1}; e_n: of (1-z)^b
    let mut c_nm2 = 0.0;
    let mut c_nm1 = 1.0;
    let mut e_nm1 = 1.0;
    let (mut sa, mut sb, mut sf) = (0.0, 0.0, 0.0);
    let mut zn = 1.0;
    let mut quiet = 0;
    for n in 1..600 {
        let nf = n as f64;
        let c_n = c_nm1 * (nf - b) / nf;
        let e_n = e_nm1 * (nf - 1.0 - b) / nf;
        zn *= z;
        let ta = if n >= 2 { 2.0 * (c_n + bm1 * c_nm1) * zn } else { 0.0 };
        let tb = if n >= 3 {
            (2.0 * (c_n + bm1 * c_nm1) + b * bm1 * c_nm2) * zn
        } else {
            0.0
        };
        let tf = if n >= 3 {
            (-2.0 * e_n - bm1 * e_nm1) * zn
        } else {
            0.0
        };
        sa += ta;
        sb += tb;
        sf += tf;
        if n > 4 {
            let small = ta.abs() <= 1e-18 * sa.abs()
                && tb.abs() <= 1e-18 * sb.abs()
                && tf.abs() <= 1e-18 * sf.abs();
            if small {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        c_nm2 = c_nm1;
        c_nm1 = c_n;
        e_nm1 = e_n;
    }
    (sa, sb, sf)
}

/// Point of `[0,1]` carried together with `ln(1-z)`.
///
/// Near `z = 1` the complement `1-z` cannot be recovered from `z` in double
/// precision; callers that know it accurately build the point from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pt {
    pub z: f64,
    pub l: f64,
}

impl Pt {
    pub fn from_z(z: f64) -> Self {
        Self { z, l: (-z).ln_1p() }
    }

    /// From `z` and its complement `w = 1 - z`, using whichever is accurate.
    pub fn from_pair(z: f64, w: f64) -> Self {
        if z < 0.5 {
            Self::from_z(z)
        } else {
            Self { z, l: w.ln() }
        }
    }

    /// From `t = ln(1-z) ≤ 0`.
    pub fn from_log(t: f64) -> Self {
        Self { z: -t.exp_m1(), l: t }
    }

    /// `1 - z`.
    pub fn w(&self) -> f64 {
        self.l.exp()
    }

    /// `(1-z)^a`.
    pub fn pow(&self, a: f64) -> f64 {
        if self.l == f64::NEG_INFINITY {
            return pow1m(1.0, a);
        }
        (a * self.l).exp()
    }
}

/// `(A, B, f)` from the closed forms.
pub fn abf_closed(z: f64, b: f64) -> (f64, f64, f64) {
    abf_closed_pt(Pt::from_z(z), b)
}

fn abf_closed_pt(p: Pt, b: f64) -> (f64, f64, f64) {
    let (z, l1mz) = (p.z, p.l);
    let bm1 = b - 1.0;
    let a = 2.0 * ((bm1 * z).ln_1p() + bm1 * l1mz).exp_m1();
    let bb = 2.0 * ((bm1 * z + 0.5 * b * bm1 * z * z).ln_1p() + bm1 * l1mz).exp_m1();
    let f = (2.0 - (b + 1.0) * z) - (2.0 + bm1 * z) * p.pow(b);
    (a, bb, f)
}

/// `(A, B, f)` choosing the accurate branch.
pub fn abf(z: f64, b: f64) -> (f64, f64, f64) {
    abf_pt(Pt::from_z(z), b)
}

pub fn abf_pt(p: Pt, b: f64) -> (f64, f64, f64) {
    if p.z == 1.0 {
        return (-2.0, -2.0, 1.0 - b);
    }
    if p.z < series_switch(b) {
        abf_series(p.z, b)
    } else {
        abf_closed_pt(p, b)
    }
}

/// All eight kernel values at `z ∈ (0,1)`.
pub fn eval_kernel(z: f64, b: f64) -> Result<KernelValues> {
    check_unit_open("z", z)?;
    check_b(b, 1.0 + f64::EPSILON)?;
    Ok(kernel_unchecked(z, b))
}

pub(crate) fn kernel_unchecked(z: f64, b: f64) -> KernelValues {
    let (a, bb, f) = abf(z, b);
    let bm1 = b - 1.0;
    let nu2 = pow1m(z, b - 2.0);
    let nu3 = pow1m(z, b - 3.0);
    KernelValues {
        a,
        a_prime: -2.0 * b * bm1 * z * nu2,
        a_second: 2.0 * b * bm1 * nu3 * (bm1 * z - 1.0),
        b: bb,
        b_prime: -b * bm1 * (b + 1.0) * z * z * nu2,
        b_second: b * bm1 * (b + 1.0) * z * nu3 * (b * z - 2.0),
        f,
        f_prime: 0.5 * (b + 1.0) * a,
    }
}

/// `A(z)/B(z)`.
pub fn a_over_b(z: f64, b: f64) -> f64 {
    a_over_b_pt(Pt::from_z(z), b)
}

pub fn a_over_b_pt(p: Pt, b: f64) -> f64 {
    let (a, bb, _) = abf_pt(p, b);
    a / bb
}

/// `d/dz (A/B) = (A'B - AB')/B^2`, which equals `2b(b-1) z (1-z)^{b-2} f / B^2`.
pub fn a_over_b_prime(z: f64, b: f64) -> f64 {
    a_over_b_prime_pt(Pt::from_z(z), b)
}

pub fn a_over_b_prime_pt(p: Pt, b: f64) -> f64 {
    let (_, bb, f) = abf_pt(p, b);
    2.0 * b * (b - 1.0) * p.z * p.pow(b - 2.0) * f / (bb * bb)
}

/// Leading constant `z ≈ C / ū^2` of the level curve `H = h` as `ū → ∞`.
///
/// Local analysis gives `A/B ≈ 3/((b+1) z)`, so `C = 3/(b+1)`. This is exact
/// (`C = 1`) at `b = 2`; for other `b` it differs from the unit constant that a
/// naive reading of the asymptotics would suggest.
pub fn tail_constant(b: f64) -> f64 {
    3.0 / (b + 1.0)
}

/// Sign-condition combination `½z(1-z)B' + ½(b-1)zB - (1-z)B`.
///
/// Evaluated with `(1-z)B'` folded into `-b(b²-1) z² (1-z)^{b-1}` so that the
/// endpoint `z = 1` is finite for every `b > 1`.
pub fn eval_r(z: f64, b: f64) -> Result<f64> {
    check_unit_closed("z", z)?;
    check_b(b, 1.0 + f64::EPSILON)?;
    Ok(r_unchecked(z, b))
}

pub(crate) fn r_unchecked(z: f64, b: f64) -> f64 {
    r_pt(Pt::from_z(z), b)
}

pub fn r_pt(p: Pt, b: f64) -> f64 {
    let z = p.z;
    if z == 0.0 {
        return 0.0;
    }
    let (_, bb, _) = abf_pt(p, b);
    let omz_bp = -b * (b - 1.0) * (b + 1.0) * z * z * p.pow(b - 1.0);
    0.5 * z * omz_bp + (0.5 * (b + 1.0) * z - 1.0) * bb
}

/// Sign-condition combination `2(1-z)A'f + (b-1)Af - (1-z)Af'`.
pub fn eval_p(z: f64, b: f64) -> Result<f64> {
    check_unit_closed("z", z)?;
    check_b(b, 1.0 + f64::EPSILON)?;
    Ok(p_unchecked(z, b))
}

pub(crate) fn p_unchecked(z: f64, b: f64) -> f64 {
    p_pt(Pt::from_z(z), b)
}

pub fn p_pt(p: Pt, b: f64) -> f64 {
    let z = p.z;
    if z == 0.0 {
        return 0.0;
    }
    let (a, _, f) = abf_pt(p, b);
    let omz_ap = -2.0 * b * (b - 1.0) * z * p.pow(b - 1.0);
    let fp = 0.5 * (b + 1.0) * a;
    2.0 * omz_ap * f + (b - 1.0) * a * f - p.w() * a * fp
}

/// `l(z) = (b-1)^3 z^2 + (12b-4)(1-z)`.
pub fn eval_l(z: f64, b: f64) -> Result<f64> {
    check_unit_closed("z", z)?;
    check_b(b, 1.0 + f64::EPSILON)?;
    Ok((b - 1.0).powi(3) * z * z + (12.0 * b - 4.0) * (1.0 - z))
}

/// `R` written as a polynomial in `(z, ν)` with `ν = (1-z)^{b-1}` substituted.
pub fn r_nu_form(z: f64, b: f64) -> f64 {
    let nu = pow1m(z, b - 1.0);
    nu * ((b - 1.0) * z * z + (3.0 - b) * z - 2.0) - (b + 1.0) * z + 2.0
}

/// `P` written as a polynomial in `(z, ν)` with `ν = (1-z)^{b-1}` substituted.
pub fn p_nu_form(z: f64, b: f64) -> f64 {
    let nu = pow1m(z, b - 1.0);
    let bm1 = b - 1.0;
    let c2 = 2.0 * bm1 * bm1 * z * z - 2.0 * (b * b - 5.0 * b + 2.0) * z - 6.0 * b + 2.0;
    let c1 = 2.0 * b * bm1 * bm1 * z * z - 4.0 * (3.0 * b - 1.0) * z + 12.0 * b - 4.0;
    let c0 = 2.0 * b * (b + 1.0) * z - 6.0 * b + 2.0;
    (c2 * nu + c1) * nu + c0
}

/// First integral `H̄(x,y)` of the normalized `(x,y)` system.
pub fn first_integral_normalized(x: f64, y: f64, p: &WaveParams) -> Result<f64> {
    if !(x < 1.0) {
        return Err(Error::SingularLine(x));
    }
    let (b, g) = (p.b, p.gamma);
    let poly = 2.0 * (1.0 - g) + 2.0 * (1.0 - g) * (b - 1.0) * x + b * (b - 1.0) * x * x;
    Ok(pow1m(x, b - 1.0) / (g * b * (b - 1.0)) * poly - y * y)
}

/// `H(z, ū) = A(z)/B(z) - ū²`.
pub fn first_integral_transformed(z: f64, ubar: f64, b: f64) -> Result<f64> {
    check_unit_open("z", z)?;
    check_b(b, 1.0 + f64::EPSILON)?;
    Ok(a_over_b(z, b) - ubar * ubar)
}

/// Right-hand side `x(1-x)^{b-2}(1 - (b+1)x/(2γ))` of the normalized equation.
pub(crate) fn normalized_force(x: f64, b: f64, gamma: f64) -> f64 {
    x * pow1m(x, b - 2.0) * (1.0 - (b + 1.0) * x / (2.0 * gamma))
}

/// `(dx/dt, dy/dt)` of the normalized planar system.
pub fn vector_field_normalized(x: f64, y: f64, p: &WaveParams) -> Result<(f64, f64)> {
    if !(x < 1.0) {
        return Err(Error::SingularLine(x));
    }
    Ok((y, normalized_force(x, p.b, p.gamma)))
}

/// `(dz/dτ, dū/dτ)` of the transformed Hamiltonian system.
pub fn vector_field_transformed(z: f64, ubar: f64, b: f64) -> Result<(f64, f64)> {
    if z >= 1.0 {
        return Err(Error::SingularLine(z));
    }
    check_unit_open("z", z)?;
    check_b(b, 1.0 + f64::EPSILON)?;
    let (_, bb, f) = abf(z, b);
    let du = 2.0 * b * (b - 1.0) * z * pow1m(z, b - 2.0) / (bb * bb) * f;
    Ok((2.0 * ubar, du))
}
