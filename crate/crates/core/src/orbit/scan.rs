use rayon::prelude::*;
use serde::Serialize;

use super::{dq_dh_fd, i1_prime, i2_prime, q_via_x, turning_point_x, turning_point_z};
use crate::error::{Error, Result};
use crate::exact::{Pair, Verdict};
use crate::params::{a_over_b, check_b, first_integral_normalized, p_unchecked, r_unchecked, WaveParams};

#[derive(Debug, Clone, Serialize)]
pub struct ScanPoint {
    pub b: f64,
    pub c: f64,
    pub k: f64,
    pub gamma: f64,
    pub h: f64,
    pub q: f64,
    pub dqdh_fd: f64,
    pub i1p: f64,
    pub i2p: f64,
    /// `Q(k_{i+1}) - Q(k_i)`, absent at the last grid point.
    pub q_increment: Option<f64>,
    /// Smallest of `I'₁`, `dQ/dh` and the increment; positive means the point passes.
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    pub b: f64,
    pub c: f64,
    pub tol: f64,
    pub points: Vec<ScanPoint>,
    pub verdict: Verdict,
}

impl MonotonicityReport {
    pub const CSV_HEADER: &'static str = "b,c,k,gamma,h,Q,dQdh_fd,I1p,I2p,Q_increment,margin";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for p in &self.points {
            let inc = p.q_increment.map(|v| format!("{v:e}")).unwrap_or_default();
            s.push_str(&format!(
                "{},{},{},{:e},{:e},{:e},{:e},{:e},{:e},{},{:e}\n",
                p.b, p.c, p.k, p.gamma, p.h, p.q, p.dqdh_fd, p.i1p, p.i2p, inc, p.margin
            ));
        }
        s
    }

    pub fn min_margin(&self) -> f64 {
        self.points.iter().map(|p| p.margin).fold(f64::INFINITY, f64::min)
    }
}

/// Monotonicity of `k ↦ Q` over a grid, with `I'₁` and a finite-difference check at each point.
pub fn monotonicity_scan(b: f64, c: f64, k_grid: &[f64], tol: f64) -> Result<MonotonicityReport> {
    if k_grid.len() < 3 {
        return Err(Error::Config(format!(
            "monotonicity scan needs at least 3 grid points, got {}",
            k_grid.len()
        )));
    }
    if k_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("k grid must be strictly increasing".into()));
    }
    let raw: Vec<(WaveParams, f64, f64, f64, f64)> = k_grid
        .par_iter()
        .map(|&k| {
            let p = WaveParams::new(b, c, k)?;
            let q = q_via_x(&p, tol)?.value;
            let fd = dq_dh_fd(b, p.h, tol.min(1e-12))?;
            let i1 = i1_prime(b, p.h, tol)?.value;
            let i2 = i2_prime(b, p.h, tol)?.value;
            Ok((p, q, fd, i1, i2))
        })
        .collect::<Result<_>>()?;
    let mut points = Vec::with_capacity(raw.len());
    for (i, &(p, q, fd, i1, i2)) in raw.iter().enumerate() {
        let inc = raw.get(i + 1).map(|n| n.1 - q);
        let margin = i1.min(fd).min(inc.unwrap_or(f64::INFINITY));
        points.push(ScanPoint {
            b,
            c,
            k: p.k,
            gamma: p.gamma,
            h: p.h,
            q,
            dqdh_fd: fd,
            i1p: i1,
            i2p: i2,
            q_increment: inc,
            margin,
        });
    }
    let ok = points.iter().all(|p| p.margin > 0.0);
    Ok(MonotonicityReport {
        b,
        c,
        tol,
        points,
        verdict: Verdict::from_bool(ok),
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridNode {
    pub b: f64,
    pub z: f64,
    pub pair: Pair,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridReport {
    pub nodes_b: usize,
    pub nodes_z: usize,
    /// Largest `R/z³` seen (must stay negative).
    pub max_r_normalized: f64,
    /// Smallest `P/z⁴` seen (must stay positive).
    pub min_p_normalized: f64,
    pub offending: Vec<GridNode>,
    pub verdict: Verdict,
}

/// Sign of `R/z³ < 0` and `P/z⁴ > 0` at every `(b, z)` node.
pub fn hypothesis_grid_check(b_grid: &[f64], z_grid: &[f64]) -> Result<GridReport> {
    for &b in b_grid {
        check_b(b, 1.0 + f64::EPSILON)?;
    }
    if let Some(&z) = z_grid.iter().find(|&&z| !(z > 0.0 && z < 1.0)) {
        return Err(Error::Domain {
            name: "z",
            value: z,
            domain: "(0, 1)",
        });
    }
    let rows: Vec<(f64, f64, Vec<GridNode>)> = b_grid
        .par_iter()
        .map(|&b| {
            let mut rmax = f64::NEG_INFINITY;
            let mut pmin = f64::INFINITY;
            let mut bad = Vec::new();
            for &z in z_grid {
                let r = r_unchecked(z, b) / (z * z * z);
                let p = p_unchecked(z, b) / (z * z * z * z);
                rmax = rmax.max(r);
                pmin = pmin.min(p);
                if !(r < 0.0) {
                    bad.push(GridNode { b, z, pair: Pair::R, value: r });
                }
                if !(p > 0.0) {
                    bad.push(GridNode { b, z, pair: Pair::P, value: p });
                }
            }
            (rmax, pmin, bad)
        })
        .collect();
    let mut offending = Vec::new();
    let mut rmax = f64::NEG_INFINITY;
    let mut pmin = f64::INFINITY;
    for (r, p, bad) in rows {
        rmax = rmax.max(r);
        pmin = pmin.min(p);
        offending.extend(bad);
    }
    let verdict = Verdict::from_bool(offending.is_empty());
    Ok(GridReport {
        nodes_b: b_grid.len(),
        nodes_z: z_grid.len(),
        max_r_normalized: rmax,
        min_p_normalized: pmin,
        offending,
        verdict,
    })
}

/// Limit of `R/z³` or `P/z⁴` as `z → 0`, by polynomial extrapolation.
///
/// Samples at `z = 0.02·2^{-j}` are extrapolated to zero with Neville's scheme.
pub fn taylor_leading(pair: Pair, b: f64) -> Result<f64> {
    check_b(b, 1.0 + f64::EPSILON)?;
    let n = 8;
    let zs: Vec<f64> = (0..n).map(|j| 0.02 * 0.5f64.powi(j)).collect();
    let mut t: Vec<f64> = zs
        .iter()
        .map(|&z| match pair {
            Pair::R => r_unchecked(z, b) / (z * z * z),
            Pair::P => p_unchecked(z, b) / (z * z * z * z),
        })
        .collect();
    for m in 1..n as usize {
        for i in 0..n as usize - m {
            t[i] = (zs[i] * t[i + 1] - zs[i + m] * t[i]) / (zs[i] - zs[i + m]);
        }
    }
    Ok(t[0])
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelCurve {
    /// `"homoclinic"` in `(x, y)` or `"gamma_h"` in `(z, ū)`.
    pub kind: &'static str,
    pub b: f64,
    pub gamma: f64,
    pub level: f64,
    pub points: Vec<(f64, f64)>,
    pub max_residual: f64,
}

impl LevelCurve {
    pub fn to_csv(&self) -> String {
        let (a, b) = if self.kind == "homoclinic" { ("x", "y") } else { ("z", "ubar") };
        let mut s = format!("{a},{b}\n");
        for (u, v) in &self.points {
            s.push_str(&format!("{u:e},{v:e}\n"));
        }
        s
    }
}

/// Upper half of the homoclinic loop from the saddle `(0,0)` to the turning point.
pub fn level_curve_homoclinic(p: &WaveParams, n: usize) -> Result<LevelCurve> {
    if n < 2 {
        return Err(Error::Config("need at least 2 samples".into()));
    }
    let xm = turning_point_x(p)?;
    let level = p.homoclinic_level();
    let scale = 1.0 / (p.gamma * p.b * (p.b - 1.0));
    let mut points = Vec::with_capacity(n);
    let mut worst = 0.0f64;
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        let x = if i == n - 1 {
            xm
        } else {
            xm * 0.5 * (1.0 - (std::f64::consts::PI * t).cos())
        };
        let poly = 2.0 * (1.0 - p.gamma)
            + 2.0 * (1.0 - p.gamma) * (p.b - 1.0) * x
            + p.b * (p.b - 1.0) * x * x;
        let y2 = scale * (crate::params::pow1m(x, p.b - 1.0) * poly - 2.0 * (1.0 - p.gamma));
        let y = y2.max(0.0).sqrt();
        worst = worst.max((first_integral_normalized(x, y, p)? - level).abs());
        points.push((x, y));
    }
    Ok(LevelCurve {
        kind: "homoclinic",
        b: p.b,
        gamma: p.gamma,
        level,
        points,
        max_residual: worst,
    })
}

/// Upper branch of `A/B - ū² = h` for `z` from `z_min` up to the turning point.
pub fn level_curve_transformed(b: f64, h: f64, n: usize, z_min: f64) -> Result<LevelCurve> {
    if n < 2 {
        return Err(Error::Config("need at least 2 samples".into()));
    }
    let zt = turning_point_z(b, h)?;
    if !(z_min > 0.0 && z_min < zt) {
        return Err(Error::Domain {
            name: "z_min",
            value: z_min,
            domain: "(0, z_t)",
        });
    }
    let mut points = Vec::with_capacity(n);
    let mut worst = 0.0f64;
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        // geometric spacing resolves the ū → ∞ end
        let z = if i == n - 1 { zt } else { z_min * (zt / z_min).powf(t) };
        let u = (a_over_b(z, b) - h).max(0.0).sqrt();
        let res = (a_over_b(z, b) - u * u - h).abs() / h;
        worst = worst.max(res);
        points.push((z, u));
    }
    Ok(LevelCurve {
        kind: "gamma_h",
        b,
        gamma: 1.0 / h,
        level: h,
        points,
        max_residual: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_limits() {
        assert!((taylor_leading(Pair::R, 3.0).unwrap() + 4.0).abs() < 1e-9);
        assert!((taylor_leading(Pair::P, 2.0).unwrap() - 2.0).abs() < 1e-9);
        for &b in &[1.5f64, 2.5, 3.5] {
            let r = b / 6.0 * (1.0 - b) * (1.0 + b);
            let p = b * b * (b + 1.0) * (b - 1.0).powi(2) / 6.0;
            assert!((taylor_leading(Pair::R, b).unwrap() - r).abs() < 1e-8 * r.abs());
            assert!((taylor_leading(Pair::P, b).unwrap() - p).abs() < 1e-8 * p.abs());
        }
    }

    #[test]
    fn level_curve_b2_closed_form() {
        let c = level_curve_transformed(2.0, 2.0, 50, 1e-3).unwrap();
        for &(z, u) in &c.points {
            assert!((u - (1.0 / z - 2.0).max(0.0).sqrt()).abs() < 1e-10 * (1.0 + u));
        }
        assert_eq!(c.points.last().unwrap().0, 0.5);
        let p = WaveParams::from_h(2.0, 1.0, 3.0).unwrap();
        let hc = level_curve_homoclinic(&p, 40).unwrap();
        assert_eq!(hc.points[0], (0.0, 0.0));
        assert!(hc.max_residual < 1e-10);
    }
}
