//! Physical solitary-wave profiles `φ(x)`, `φ'(x)` and `μ = φ - φ''`.
//!
//! The homoclinic loop is followed from its turning point (the crest, `x = 0`)
//! towards the saddle, directly in the physical coordinate, landing on each
//! grid point of the right half. Three regimes are used:
//!
//! 1. near the crest, the planar system for `(x_max - φ_n, y)`;
//! 2. once `φ_n ≤ x_max/2`, the scalar equation for `ln φ_n` with `y` taken
//!    from the level curve, which is immune to the saddle's unstable direction;
//! 3. below `φ_n = 1e-12`, the saddle linearization `φ_n ∝ exp(-√γ x)`.
//!
//! The left half is the mirror image.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Dopri5;
use crate::orbit::turning_point_x_pt;
use crate::params::{abf_pt, Pt, WaveParams};
use crate::pde::spectral::Spectral;

/// `φ_n` below which the tail is continued by the saddle linearization.
pub const TAIL_CUTOFF: f64 = 1e-12;

/// Relative tail height required at `x = ±half_length`.
pub const TAIL_BOUND: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct WaveProfile {
    pub params: WaveParams,
    pub x_samples: Vec<f64>,
    pub phi: Vec<f64>,
    pub phi_prime: Vec<f64>,
    pub mu: Vec<f64>,
    pub half_length: f64,
    pub decay_exponent_fit: f64,
    /// Largest `|H̄ - level|` seen at the landing points of the planar phase.
    pub energy_drift: f64,
}

/// On-disk initial-condition format shared with the simulator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileFile {
    pub b: f64,
    pub c: f64,
    pub k: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub x: Vec<f64>,
    pub phi: Vec<f64>,
    pub phi_prime: Vec<f64>,
    pub mu: Vec<f64>,
}

/// Half-length making the tail bound hold with a safety factor for the prefactor.
pub fn default_half_length(p: &WaveParams) -> f64 {
    (1e12f64.ln() + 16f64.ln()) / p.gamma.sqrt()
}

/// Profile on `n` points of `[-L, L)` with an automatically chosen `L`.
pub fn build_profile(p: &WaveParams, n: usize, tol: f64) -> Result<WaveProfile> {
    let mut half = default_half_length(p);
    for _ in 0..8 {
        match build_profile_on(p, n, half, tol) {
            Err(Error::InsufficientTail(_)) => half *= 1.25,
            other => return other,
        }
    }
    Err(Error::InsufficientTail(format!(
        "tail bound not reached with half_length up to {half}"
    )))
}

struct Setup {
    b: f64,
    gamma: f64,
    ck: f64,
    s: f64,
    xmax: f64,
    wmax: f64,
}

impl Setup {
    /// `dζ/dx` at a point with complement `w = 1 - φ_n`.
    fn jac(&self, w: f64) -> f64 {
        self.s * (self.ck * w).powf(-0.5 * (self.b - 1.0))
    }

    fn force(&self, phi_n: f64, w: f64) -> f64 {
        phi_n * w.powf(self.b - 2.0) * (1.0 - (self.b + 1.0) * phi_n / (2.0 * self.gamma))
    }

    /// `y/φ_n` on the homoclinic loop for `0 < φ_n ≤ 1/2`.
    fn y_ratio(&self, phi_n: f64) -> f64 {
        let (a, bb, _) = abf_pt(Pt::from_z(phi_n), self.b);
        let z2 = phi_n * phi_n;
        ((bb / z2 - self.gamma * a / z2) / (self.gamma * self.b * (self.b - 1.0))).sqrt()
    }

    fn energy_gap(&self, phi_n: f64, w: f64, y: f64) -> f64 {
        let (b, g) = (self.b, self.gamma);
        let pt = Pt::from_pair(phi_n, w);
        let poly = 2.0 * (1.0 - g) + 2.0 * (1.0 - g) * (b - 1.0) * phi_n + b * (b - 1.0) * phi_n * phi_n;
        let hbar = pt.pow(b - 1.0) * poly / (g * b * (b - 1.0)) - y * y;
        hbar - 2.0 * (1.0 - g) / (g * b * (b - 1.0))
    }
}

/// Profile on `n` points `x_j = (j - n/2)·2L/n`, `L = half_length`.
pub fn build_profile_on(p: &WaveParams, n: usize, half_length: f64, tol: f64) -> Result<WaveProfile> {
    if n < 64 || !n.is_multiple_of(2) {
        return Err(Error::Config(format!("profile needs an even n >= 64, got {n}")));
    }
    if !(half_length > 0.0) || !(tol > 0.0) {
        return Err(Error::Config("half_length and tol must be positive".into()));
    }
    let (b, c, k, g) = (p.b, p.c, p.k, p.gamma);
    let tp = turning_point_x_pt(p)?;
    let ck = c - k;
    let st = Setup {
        b,
        gamma: g,
        ck,
        s: (c - k * (b + 1.0)).sqrt() * ck.powf(0.5 * (b - 2.0)),
        xmax: tp.z,
        wmax: tp.w(),
    };
    let dx = 2.0 * half_length / n as f64;
    let m = n / 2;
    // right half, index i ↔ x = i·dx, i = 0..=m
    let mut phin = vec![0.0; m + 1];
    let mut comp = vec![0.0; m + 1];
    let mut dphin = vec![0.0; m + 1];
    phin[0] = st.xmax;
    comp[0] = st.wmax;

    let solver = Dopri5::new(tol, tol * 1e-3);
    let mut drift = 0.0f64;
    let mut i = 0;
    let mut x = 0.0;
    let mut h = dx.min(0.1 / g.sqrt());

    // planar phase
    let mut state = [0.0, 0.0];
    let mut planar = |_x: f64, s: &[f64; 2]| {
        let w = st.wmax + s[0];
        let phi_n = st.xmax - s[0];
        let j = st.jac(w);
        [-s[1] * j, st.force(phi_n, w) * j]
    };
    while i < m {
        let x1 = (i + 1) as f64 * dx;
        let (s, stats) = solver.integrate(&mut planar, x, state, x1, h)?;
        state = s;
        h = stats.last_h.abs().max(1e-6 * dx);
        x = x1;
        i += 1;
        let phi_n = st.xmax - state[0];
        let w = st.wmax + state[0];
        if !(phi_n > 0.0) {
            return Err(Error::Integration(format!("planar phase left the loop at x = {x}")));
        }
        phin[i] = phi_n;
        comp[i] = w;
        dphin[i] = state[1] * st.jac(w);
        drift = drift.max(st.energy_gap(phi_n, w, state[1]).abs());
        if phi_n <= 0.5 * st.xmax {
            break;
        }
    }

    // logarithmic phase
    let mut lw = [phin[i].ln()];
    let mut scalar = |_x: f64, s: &[f64; 1]| {
        let phi_n = s[0].exp();
        [-st.y_ratio(phi_n) * st.jac(1.0 - phi_n)]
    };
    while i < m && phin[i] >= TAIL_CUTOFF {
        let x1 = (i + 1) as f64 * dx;
        let (s, stats) = solver.integrate(&mut scalar, x, lw, x1, h)?;
        lw = s;
        h = stats.last_h.abs().max(1e-6 * dx);
        x = x1;
        i += 1;
        let phi_n = lw[0].exp();
        phin[i] = phi_n;
        comp[i] = 1.0 - phi_n;
        dphin[i] = -phi_n * st.y_ratio(phi_n) * st.jac(1.0 - phi_n);
    }

    // linearized tail
    let rate = g.sqrt();
    let (i0, x0, p0) = (i, x, phin[i]);
    while i < m {
        i += 1;
        let phi_n = p0 * (-rate * ((i - i0) as f64 * dx)).exp();
        phin[i] = phi_n;
        comp[i] = 1.0 - phi_n;
        dphin[i] = -rate * phi_n;
    }
    let _ = x0;

    let mut x_samples = vec![0.0; n];
    let mut phi = vec![0.0; n];
    let mut phi_prime = vec![0.0; n];
    let mut mu = vec![0.0; n];
    for j in 0..n {
        let off = j as isize - m as isize;
        let idx = off.unsigned_abs();
        let sgn = if off < 0 { -1.0 } else { 1.0 };
        x_samples[j] = off as f64 * dx;
        phi[j] = k + ck * phin[idx];
        phi_prime[j] = sgn * ck * dphin[idx];
        mu[j] = momentum_at(p, phi_prime[j], phi[j], ck * comp[idx]);
    }
    let mut prof = WaveProfile {
        params: *p,
        x_samples,
        phi,
        phi_prime,
        mu,
        half_length,
        decay_exponent_fit: f64::NAN,
        energy_drift: drift,
    };
    prof.validate()?;
    prof.decay_exponent_fit = decay_fit(&prof)?;
    Ok(prof)
}

/// `φ - φ''` from the integrated second-order equation; `c_minus_phi` is passed
/// separately so that it can be supplied without cancellation.
fn momentum_at(p: &WaveParams, phi_prime: f64, phi: f64, c_minus_phi: f64) -> f64 {
    let (b, c, k) = (p.b, p.c, p.k);
    (c * k - 0.5 * (b + 1.0) * k * k - 0.5 * (b - 1.0) * (phi_prime * phi_prime - phi * phi))
        / c_minus_phi
}

/// `μ` recomputed from the stored `φ, φ'`.
pub fn momentum_of(profile: &WaveProfile) -> Result<Vec<f64>> {
    let p = &profile.params;
    profile
        .phi
        .iter()
        .zip(&profile.phi_prime)
        .map(|(&f, &fp)| {
            let gap = p.c - f;
            if !(gap > 0.0) {
                return Err(Error::Domain {
                    name: "phi",
                    value: f,
                    domain: "(k, c)",
                });
            }
            Ok(momentum_at(p, fp, f, gap))
        })
        .collect()
}

impl WaveProfile {
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    /// Period of the grid, `2·half_length`.
    pub fn period(&self) -> f64 {
        2.0 * self.half_length
    }

    pub fn crest(&self) -> f64 {
        self.phi[self.len() / 2]
    }

    pub fn spectral(&self) -> Spectral {
        Spectral::new(self.len(), self.period())
    }

    /// Checks the invariants listed on the type.
    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        let n = self.len();
        let m = n / 2;
        let top = self.crest();
        for j in 1..m {
            if self.phi[m + j] != self.phi[m - j] {
                return Err(Error::Integration("profile is not even".into()));
            }
            if self.phi[m + j] > self.phi[m + j - 1] {
                return Err(Error::Integration(format!(
                    "profile not monotone at x = {}",
                    self.x_samples[m + j]
                )));
            }
        }
        for (&f, &u) in self.phi.iter().zip(&self.mu) {
            if !(f > p.k && f <= top && top < p.c) {
                return Err(Error::Domain {
                    name: "phi",
                    value: f,
                    domain: "(k, c)",
                });
            }
            if !(u > 0.0) {
                return Err(Error::Domain {
                    name: "mu",
                    value: u,
                    domain: "(0, inf)",
                });
            }
        }
        let tail = (self.phi[0] - p.k) / (top - p.k);
        if tail > TAIL_BOUND {
            return Err(Error::InsufficientTail(format!(
                "relative tail height {tail:e} at x = -{} exceeds {TAIL_BOUND:e}",
                self.half_length
            )));
        }
        Ok(())
    }

    pub fn to_file(&self) -> ProfileFile {
        ProfileFile {
            b: self.params.b,
            c: self.params.c,
            k: self.params.k,
            l: self.period(),
            n: self.len(),
            x: self.x_samples.clone(),
            phi: self.phi.clone(),
            phi_prime: self.phi_prime.clone(),
            mu: self.mu.clone(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,phi,phi_prime,mu\n");
        for j in 0..self.len() {
            s.push_str(&format!(
                "{:e},{:e},{:e},{:e}\n",
                self.x_samples[j], self.phi[j], self.phi_prime[j], self.mu[j]
            ));
        }
        s
    }
}

/// Largest residual of `(c-φ)(φ-φ'') + ½(b-1)(φ'²-φ²) - ck + ½(b+1)k²`, with `φ''` spectral.
pub fn ode_residual(profile: &WaveProfile) -> f64 {
    let p = &profile.params;
    let (b, c, k) = (p.b, p.c, p.k);
    let d2 = profile.spectral().derivative(&profile.phi, 2);
    profile
        .phi
        .iter()
        .zip(&profile.phi_prime)
        .zip(&d2)
        .map(|((&f, &fp), &fpp)| {
            ((c - f) * (f - fpp) + 0.5 * (b - 1.0) * (fp * fp - f * f) - c * k
                + 0.5 * (b + 1.0) * k * k)
                .abs()
        })
        .fold(0.0, f64::max)
}

/// `‖(φ - φ''_spectral) - μ‖∞ / ‖μ‖∞`.
pub fn spectral_momentum_error(profile: &WaveProfile) -> f64 {
    let d2 = profile.spectral().derivative(&profile.phi, 2);
    let mut err = 0.0f64;
    let mut scale = 0.0f64;
    for ((f, f2), m) in profile.phi.iter().zip(&d2).zip(&profile.mu) {
        err = err.max((f - f2 - m).abs());
        scale = scale.max(m.abs());
    }
    err / scale
}

/// Exponential decay rate of `φ - k` from a least-squares fit on the right tail.
///
/// The window is `1e-11 ≤ (φ-k)/(φ(0)-k) ≤ 1e-4`, raised if necessary to stay
/// above the linearized region; it must span at least four decades.
pub fn decay_fit(profile: &WaveProfile) -> Result<f64> {
    let p = &profile.params;
    let top = profile.crest() - p.k;
    let xmax = top / (p.c - p.k);
    let lo = 1e-11f64.max(10.0 * TAIL_CUTOFF / xmax);
    let hi = 1e-4;
    if hi / lo < 1e4 {
        return Err(Error::InsufficientTail(format!(
            "fit window [{lo:e}, {hi:e}] spans fewer than 4 decades"
        )));
    }
    let m = profile.len() / 2;
    let pts: Vec<(f64, f64)> = (m..profile.len())
        .filter_map(|j| {
            let r = (profile.phi[j] - p.k) / top;
            (r >= lo && r <= hi).then(|| (profile.x_samples[j], r.ln()))
        })
        .collect();
    if pts.len() < 4 {
        return Err(Error::InsufficientTail(format!(
            "only {} samples in the decay window",
            pts.len()
        )));
    }
    let nf = pts.len() as f64;
    let mx = pts.iter().map(|q| q.0).sum::<f64>() / nf;
    let my = pts.iter().map(|q| q.1).sum::<f64>() / nf;
    let sxy: f64 = pts.iter().map(|q| (q.0 - mx) * (q.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|q| (q.0 - mx).powi(2)).sum();
    Ok(-sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crest_b2() {
        let p = WaveParams::new(2.0, 1.0, 0.25).unwrap();
        let prof = build_profile(&p, 1024, 1e-12).unwrap();
        assert!((prof.crest() - 0.5).abs() < 1e-14);
        assert_eq!(prof.phi_prime[512], 0.0);
        assert!(prof.energy_drift < 1e-9);
    }
}
