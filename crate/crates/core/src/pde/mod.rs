//! Periodic pseudo-spectral evolution of `m_t + u m_x + b m u_x = 0`.
//!
//! `u = k + (1 - ∂²)^{-1}(m - k)` is applied in Fourier space. Products are
//! dealiased with the 2/3 rule and time stepping is classical RK4 under a
//! CFL-type step bound.

mod experiment;
mod orbital;
pub mod spectral;

pub use experiment::{
    perturbed_momentum, stability_experiment, stability_experiment_on, ExperimentOptions, GridInfo,
    Perturbation, Record, RunStatus, StabilityReport, ABS_DISTANCE_FLOOR, SCOPE,
};
pub use orbital::{h1_norm, orbital_distance};

use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use spectral::Spectral;

/// Relative spectral tail above which a state counts as under-resolved.
pub const RESOLUTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SimGrid {
    pub l: f64,
    pub n: usize,
    pub dx: f64,
    spectral: Spectral,
}

impl SimGrid {
    pub fn new(l: f64, n: usize) -> Result<Self> {
        if n < 256 || !n.is_power_of_two() {
            return Err(Error::Config(format!("N must be a power of two >= 256, got {n}")));
        }
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::Config(format!("domain length must be positive, got {l}")));
        }
        Ok(Self {
            l,
            n,
            dx: l / n as f64,
            spectral: Spectral::new(n, l),
        })
    }

    pub fn wavenumbers(&self) -> &[f64] {
        self.spectral.wavenumbers()
    }

    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    /// Grid points `x_j = (j - N/2)·dx`, matching the profile layout.
    pub fn x(&self) -> Vec<f64> {
        (0..self.n)
            .map(|j| (j as f64 - (self.n / 2) as f64) * self.dx)
            .collect()
    }

    /// Largest retained index under the 2/3 rule.
    pub fn cutoff(&self) -> usize {
        self.n / 3
    }

    fn signed(&self, j: usize) -> usize {
        if j <= self.n / 2 {
            j
        } else {
            self.n - j
        }
    }

    fn dealias(&self, c: &mut [Complex64]) {
        let cut = self.cutoff();
        for (j, v) in c.iter_mut().enumerate() {
            if self.signed(j) > cut {
                *v = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Largest coefficient in the top third of the retained band, relative to
    /// the largest non-mean coefficient.
    pub fn spectral_tail(&self, m: &[f64]) -> f64 {
        let c = self.spectral.forward(m);
        let cut = self.cutoff();
        let lo = 2 * cut / 3;
        let mut top = 0.0f64;
        let mut all = 0.0f64;
        for (j, v) in c.iter().enumerate().skip(1) {
            let s = self.signed(j);
            let a = v.norm();
            all = all.max(a);
            if s >= lo && s <= cut {
                top = top.max(a);
            }
        }
        if all == 0.0 {
            0.0
        } else {
            top / all
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimState {
    pub t: f64,
    pub m: Vec<f64>,
    pub k_background: f64,
}

/// `u = k + (1 - ∂²)^{-1}(m - k)`.
pub fn helmholtz_inverse(grid: &SimGrid, m: &[f64], k: f64) -> Vec<f64> {
    let shifted: Vec<f64> = m.iter().map(|v| v - k).collect();
    let mut c = grid.spectral.forward(&shifted);
    for (v, &xi) in c.iter_mut().zip(grid.wavenumbers()) {
        *v /= 1.0 + xi * xi;
    }
    grid.spectral
        .inverse(c)
        .into_iter()
        .map(|v| v + k)
        .collect()
}

/// `-(u m_x + b m u_x)` with dealiased products.
pub fn rhs(grid: &SimGrid, b: f64, m: &[f64]) -> Vec<f64> {
    let sp = &grid.spectral;
    let mut mh = sp.forward(m);
    grid.dealias(&mut mh);
    let wn = grid.wavenumbers();
    let nyq = grid.n / 2;
    let deriv = |c: &[Complex64]| -> Vec<Complex64> {
        c.iter()
            .zip(wn)
            .enumerate()
            .map(|(j, (v, &xi))| {
                if j == nyq {
                    Complex64::new(0.0, 0.0)
                } else {
                    v * Complex64::new(0.0, xi)
                }
            })
            .collect()
    };
    let uh: Vec<Complex64> = mh.iter().zip(wn).map(|(v, &xi)| v / (1.0 + xi * xi)).collect();
    let mf = sp.inverse(mh.clone());
    let mx = sp.inverse(deriv(&mh));
    let u = sp.inverse(uh.clone());
    let ux = sp.inverse(deriv(&uh));
    let prod: Vec<f64> = (0..grid.n)
        .map(|j| u[j] * mx[j] + b * mf[j] * ux[j])
        .collect();
    let mut ph = sp.forward(&prod);
    grid.dealias(&mut ph);
    sp.inverse(ph).into_iter().map(|v| -v).collect()
}

/// `∫ m^{1/b} dx`.
pub fn casimir(grid: &SimGrid, b: f64, m: &[f64]) -> f64 {
    m.iter().map(|&v| v.powf(1.0 / b)).sum::<f64>() * grid.dx
}

/// `∫ (m^{1/b} - k^{1/b}) dx`.
pub fn casimir_excess(grid: &SimGrid, b: f64, m: &[f64], k: f64) -> f64 {
    let kb = k.powf(1.0 / b);
    m.iter().map(|&v| v.powf(1.0 / b) - kb).sum::<f64>() * grid.dx
}

/// One classical RK4 step.
pub fn step(grid: &SimGrid, b: f64, state: &SimState, dt: f64) -> SimState {
    let m = &state.m;
    let n = grid.n;
    let axpy = |a: &[f64], s: f64, d: &[f64]| -> Vec<f64> { (0..n).map(|j| a[j] + s * d[j]).collect() };
    let k1 = rhs(grid, b, m);
    let k2 = rhs(grid, b, &axpy(m, 0.5 * dt, &k1));
    let k3 = rhs(grid, b, &axpy(m, 0.5 * dt, &k2));
    let k4 = rhs(grid, b, &axpy(m, dt, &k3));
    let m_new = (0..n)
        .map(|j| m[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]))
        .collect();
    SimState {
        t: state.t + dt,
        m: m_new,
        k_background: state.k_background,
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub enum DtPolicy {
    /// `dt ≤ C·dx/max|u|`, re-evaluated at every output interval.
    Cfl(f64),
    Fixed(f64),
}

impl Default for DtPolicy {
    fn default() -> Self {
        Self::Cfl(0.5)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RunLimits {
    /// Abort when `max m` exceeds this multiple of its initial value.
    pub blowup_factor: f64,
    pub resolution_tol: f64,
}

impl Default for RunLimits {
    fn default() -> Self {
        Self {
            blowup_factor: 10.0,
            resolution_tol: RESOLUTION_TOL,
        }
    }
}

/// Step size for one output interval of length `span`.
pub fn choose_dt(grid: &SimGrid, policy: DtPolicy, m: &[f64], k: f64, span: f64) -> f64 {
    let dt = match policy {
        DtPolicy::Fixed(dt) => dt,
        DtPolicy::Cfl(c) => {
            let u = helmholtz_inverse(grid, m, k);
            let umax = u.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-12);
            c * grid.dx / umax
        }
    };
    span / (span / dt).ceil()
}

fn check_state(grid: &SimGrid, s: &SimState, m_cap: f64, limits: &RunLimits) -> Result<()> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in &s.m {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !(lo > 0.0) {
        return Err(Error::Positivity { t: s.t, min_m: lo });
    }
    if !(hi <= m_cap) {
        return Err(Error::BlowUp { t: s.t, max_m: hi });
    }
    let tail = grid.spectral_tail(&s.m);
    if tail > limits.resolution_tol {
        return Err(Error::Resolution { t: s.t, tail });
    }
    Ok(())
}

/// Advance `state` to `t_end` in steps no longer than the policy allows,
/// landing exactly on `t_end`.
pub fn advance(
    grid: &SimGrid,
    b: f64,
    state: SimState,
    t_end: f64,
    policy: DtPolicy,
    m_cap: f64,
    limits: &RunLimits,
) -> Result<SimState> {
    let span = t_end - state.t;
    if span <= 0.0 {
        return Ok(state);
    }
    let dt = choose_dt(grid, policy, &state.m, state.k_background, span);
    let steps = (span / dt).round() as usize;
    let t0 = state.t;
    let mut s = state;
    for i in 0..steps {
        s = step(grid, b, &s, dt);
        s.t = if i + 1 == steps { t_end } else { t0 + (i + 1) as f64 * dt };
        check_state(grid, &s, m_cap, limits)?;
    }
    Ok(s)
}
