//! Real-data FFT helpers on a uniform periodic grid.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub struct Spectral {
    n: usize,
    length: f64,
    wn: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral")
            .field("n", &self.n)
            .field("length", &self.length)
            .finish()
    }
}

impl Clone for Spectral {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            length: self.length,
            wn: self.wn.clone(),
            fwd: Arc::clone(&self.fwd),
            inv: Arc::clone(&self.inv),
        }
    }
}

impl Spectral {
    /// `n` points on a period of `length`.
    pub fn new(n: usize, length: f64) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let base = 2.0 * PI / length;
        let wn = (0..n)
            .map(|j| {
                let m = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
                base * m
            })
            .collect();
        Self {
            n,
            length,
            wn,
            fwd,
            inv,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Angular wavenumbers in FFT order; the Nyquist entry is `+π n/L`.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wn
    }

    pub fn forward(&self, f: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    /// Inverse transform, normalized, real part only.
    pub fn inverse(&self, mut c: Vec<Complex64>) -> Vec<f64> {
        self.inv.process(&mut c);
        let s = 1.0 / self.n as f64;
        c.iter().map(|v| v.re * s).collect()
    }

    /// `d^order f / dx^order`. Odd derivatives drop the Nyquist mode.
    pub fn derivative(&self, f: &[f64], order: u32) -> Vec<f64> {
        let mut c = self.forward(f);
        let nyq = if self.n.is_multiple_of(2) { Some(self.n / 2) } else { None };
        for (j, v) in c.iter_mut().enumerate() {
            if order % 2 == 1 && Some(j) == nyq {
                *v = Complex64::new(0.0, 0.0);
                continue;
            }
            let ik = Complex64::new(0.0, self.wn[j]);
            *v *= ik.powu(order);
        }
        self.inverse(c)
    }
}
