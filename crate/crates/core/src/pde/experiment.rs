use serde::{Serialize, Serializer};

use super::orbital::{h1_norm, OrbitRef};
use super::{advance, casimir, casimir_excess, DtPolicy, RunLimits, SimGrid, SimState};
use crate::error::{Error, Result};
use crate::params::WaveParams;
use crate::profile::{build_profile, build_profile_on, ProfileFile};

/// Scope statement attached to every stability report.
pub const SCOPE: &str = "finite-horizon evidence: a single perturbation evolved to a finite time T \
on a periodic box; this supports, but does not prove, orbital stability";

/// Distances below this are treated as round-off when the initial distance vanishes.
pub const ABS_DISTANCE_FLOOR: f64 = 1e-6;

/// `m0 = μ·(1 + eps·g) + additive·g` with `g` a Gaussian bump.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Perturbation {
    pub eps: f64,
    pub center: f64,
    pub width: f64,
    pub additive: f64,
}

impl Perturbation {
    /// Multiplicative bump one wave-width wide, half a width off the crest.
    pub fn for_wave(p: &WaveParams, eps: f64) -> Self {
        let w = 1.0 / p.gamma.sqrt();
        Self {
            eps,
            center: 0.5 * w,
            width: w,
            additive: 0.0,
        }
    }

    fn bump(&self, x: f64) -> f64 {
        let s = (x - self.center) / self.width;
        (-s * s).exp()
    }
}

pub fn perturbed_momentum(x: &[f64], mu: &[f64], pert: &Perturbation) -> Result<Vec<f64>> {
    let m: Vec<f64> = x
        .iter()
        .zip(mu)
        .map(|(&xi, &mi)| {
            let g = pert.bump(xi);
            mi * (1.0 + pert.eps * g) + pert.additive * g
        })
        .collect();
    let lo = m.iter().copied().fold(f64::INFINITY, f64::min);
    if !(lo > 0.0) {
        return Err(Error::Positivity { t: 0.0, min_m: lo });
    }
    Ok(m)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentOptions {
    pub n: usize,
    /// Box length; `None` uses twice the profile's default half-length.
    pub domain_l: Option<f64>,
    pub records: usize,
    pub stability_factor: f64,
    pub dt_policy: DtPolicy,
    pub limits: RunLimits,
    pub profile_tol: f64,
    /// Overrides the default bump placement and width.
    pub perturbation: Option<Perturbation>,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        Self {
            n: 4096,
            domain_l: None,
            records: 50,
            stability_factor: 10.0,
            dt_policy: DtPolicy::default(),
            limits: RunLimits::default(),
            profile_tol: 1e-12,
            perturbation: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Record {
    pub t: f64,
    pub d: f64,
    pub shift: f64,
    pub casimir: f64,
    pub mass_like: f64,
    pub max_m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Pass,
    Fail,
    Aborted(String),
}

impl std::fmt::Display for RunStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Pass => write!(f, "PASS"),
            Self::Fail => write!(f, "FAIL"),
            Self::Aborted(r) => write!(f, "ABORTED({r})"),
        }
    }
}

impl Serialize for RunStatus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridInfo {
    pub l: f64,
    pub n: usize,
    pub dx: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub scope: &'static str,
    pub params: WaveParams,
    pub t_end: f64,
    pub grid: GridInfo,
    pub dt_policy: DtPolicy,
    pub limits: RunLimits,
    pub perturbation: Perturbation,
    pub stability_factor: f64,
    pub mu_h1: f64,
    pub d0: f64,
    pub max_d: f64,
    pub threshold: f64,
    pub casimir_drift: f64,
    pub mass_like_drift: f64,
    pub status: RunStatus,
    #[serde(skip)]
    pub records: Vec<Record>,
}

impl StabilityReport {
    pub const CSV_HEADER: &'static str = "t,d,shift,casimir,mass_like,max_m";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for r in &self.records {
            s.push_str(&format!(
                "{:e},{:e},{:e},{:e},{:e},{:e}\n",
                r.t, r.d, r.shift, r.casimir, r.mass_like, r.max_m
            ));
        }
        s
    }

    pub fn passed(&self) -> bool {
        self.status == RunStatus::Pass
    }

    /// Final distance relative to the wave's own H¹ norm.
    pub fn final_relative_distance(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.d / self.mu_h1)
    }
}

/// Build the profile, perturb it and evolve to `t_end`.
pub fn stability_experiment(
    p: &WaveParams,
    eps: f64,
    t_end: f64,
    opts: &ExperimentOptions,
) -> Result<StabilityReport> {
    let profile = match opts.domain_l {
        None => build_profile(p, opts.n, opts.profile_tol)?,
        Some(l) => build_profile_on(p, opts.n, 0.5 * l, opts.profile_tol)?,
    };
    stability_experiment_on(&profile.to_file(), eps, t_end, opts)
}

/// Same as [`stability_experiment`] from a stored profile; its grid wins over `opts.n`.
pub fn stability_experiment_on(
    profile: &ProfileFile,
    eps: f64,
    t_end: f64,
    opts: &ExperimentOptions,
) -> Result<StabilityReport> {
    let p = WaveParams::new(profile.b, profile.c, profile.k)?;
    if !(t_end > 0.0) || opts.records == 0 {
        return Err(Error::Config("T must be positive with at least one record".into()));
    }
    let grid = SimGrid::new(profile.l, profile.n)?;
    let pert = opts
        .perturbation
        .map(|q| Perturbation { eps, ..q })
        .unwrap_or_else(|| Perturbation::for_wave(&p, eps));
    let m0 = perturbed_momentum(&profile.x, &profile.mu, &pert)?;
    let orbit = OrbitRef::new(&grid, &profile.mu);

    let record = |s: &SimState| -> Record {
        let (d, shift) = orbit.distance(&grid, &s.m);
        Record {
            t: s.t,
            d,
            shift,
            casimir: casimir(&grid, p.b, &s.m),
            mass_like: casimir_excess(&grid, p.b, &s.m, p.k),
            max_m: s.m.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    };

    let mut state = SimState {
        t: 0.0,
        m: m0,
        k_background: p.k,
    };
    let first = record(&state);
    let m_cap = opts.limits.blowup_factor * first.max_m;
    let mut records = vec![first];
    let mut abort = None;
    for i in 1..=opts.records {
        let t_next = t_end * i as f64 / opts.records as f64;
        match advance(&grid, p.b, state.clone(), t_next, opts.dt_policy, m_cap, &opts.limits) {
            Ok(s) => {
                state = s;
                records.push(record(&state));
            }
            Err(e) => {
                abort = Some(e.to_string());
                break;
            }
        }
    }

    let d0 = first.d;
    let max_d = records.iter().map(|r| r.d).fold(0.0, f64::max);
    let threshold = (opts.stability_factor * d0).max(ABS_DISTANCE_FLOOR);
    let drift = |f: fn(&Record) -> f64| {
        let base = f(&first).abs();
        records.iter().map(|r| (f(r) - f(&first)).abs()).fold(0.0, f64::max) / base
    };
    let status = match abort {
        Some(r) => RunStatus::Aborted(r),
        None if max_d <= threshold => RunStatus::Pass,
        None => RunStatus::Fail,
    };
    Ok(StabilityReport {
        scope: SCOPE,
        params: p,
        t_end,
        grid: GridInfo {
            l: grid.l,
            n: grid.n,
            dx: grid.dx,
        },
        dt_policy: opts.dt_policy,
        limits: opts.limits,
        perturbation: pert,
        stability_factor: opts.stability_factor,
        mu_h1: h1_norm(&grid, &profile.mu),
        d0,
        max_d,
        threshold,
        casimir_drift: drift(|r| r.casimir),
        mass_like_drift: drift(|r| r.mass_like),
        status,
        records,
    })
}
