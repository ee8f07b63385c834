//! H¹ distance from a state to the translation orbit of a reference wave.

use rustfft::num_complex::Complex64;

use super::SimGrid;

/// `(∫ w² + w_x² dx)^{1/2}` by Plancherel.
pub fn h1_norm(grid: &SimGrid, w: &[f64]) -> f64 {
    let c = grid.spectral().forward(w);
    weighted_sq(grid, c.iter().copied()).sqrt()
}

fn weighted_sq(grid: &SimGrid, c: impl Iterator<Item = Complex64>) -> f64 {
    let s = grid.l / (grid.n as f64 * grid.n as f64);
    c.zip(grid.wavenumbers())
        .map(|(v, &xi)| (1.0 + xi * xi) * v.norm_sqr())
        .sum::<f64>()
        * s
}

/// Precomputed reference spectrum.
#[derive(Debug, Clone)]
pub(crate) struct OrbitRef {
    mu_hat: Vec<Complex64>,
}

impl OrbitRef {
    pub(crate) fn new(grid: &SimGrid, mu: &[f64]) -> Self {
        Self {
            mu_hat: grid.spectral().forward(mu),
        }
    }

    pub(crate) fn distance(&self, grid: &SimGrid, m: &[f64]) -> (f64, f64) {
        let n = grid.n;
        let wn = grid.wavenumbers();
        let m_hat = grid.spectral().forward(m);
        // C(x0) = Re Σ (1+ξ²) m̂ conj(μ̂) e^{iξx0} is maximal where the distance is minimal
        let p: Vec<Complex64> = (0..n)
            .map(|j| (1.0 + wn[j] * wn[j]) * m_hat[j] * self.mu_hat[j].conj())
            .collect();
        let mut buf = p.clone();
        let mut planner = rustfft::FftPlanner::new();
        planner.plan_fft_inverse(n).process(&mut buf);
        let (jbest, _) = buf
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (j, v)| if v.re > acc.1 { (j, v.re) } else { acc });

        let c_at = |x0: f64, order: u32| -> f64 {
            let mut s = 0.0;
            for j in 0..n {
                let e = Complex64::from_polar(1.0, wn[j] * x0);
                let ik = Complex64::new(0.0, wn[j]).powu(order);
                s += (p[j] * ik * e).re;
            }
            s
        };

        let dx = grid.dx;
        let mut x = jbest as f64 * dx;
        // parabolic refinement on the three neighbouring grid values
        let (cm, c0, cp) = (
            buf[(jbest + n - 1) % n].re,
            buf[jbest].re,
            buf[(jbest + 1) % n].re,
        );
        let den = cm - 2.0 * c0 + cp;
        if den < 0.0 {
            x += 0.5 * dx * (cm - cp) / den;
        }
        let anchor = jbest as f64 * dx;
        for _ in 0..50 {
            let d1 = c_at(x, 1);
            let d2 = c_at(x, 2);
            if !(d2 < 0.0) {
                break;
            }
            let dxn = -d1 / d2;
            x = (x + dxn).clamp(anchor - dx, anchor + dx);
            if dxn.abs() < 1e-13 * grid.l.max(1.0) {
                break;
            }
        }

        let diff = (0..n).map(|j| m_hat[j] - self.mu_hat[j] * Complex64::from_polar(1.0, -wn[j] * x));
        let d = weighted_sq(grid, diff).max(0.0).sqrt();
        let l = grid.l;
        let mut shift = x.rem_euclid(l);
        if shift > 0.5 * l {
            shift -= l;
        }
        (d, shift)
    }
}

/// `min_{x0} ‖m − μ(· − x0)‖_{H¹}` and the minimizing shift in `(−L/2, L/2]`.
pub fn orbital_distance(grid: &SimGrid, m: &[f64], mu: &[f64]) -> (f64, f64) {
    OrbitRef::new(grid, mu).distance(grid, m)
}
