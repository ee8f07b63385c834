//! Run configuration and the five report pipelines behind the `bchlab` binary.
//!
//! Every command validates its configuration before computing, writes JSON
//! and CSV files into the output directory and returns an exit code:
//! 0 when all checks pass, 1 on a verification failure, 2 on a bad config.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{self, ExactPoly, Monomial, Pair, Verdict};
use crate::orbit::{self, level_curve_homoclinic, level_curve_transformed};
use crate::params::WaveParams;
use crate::pde::{self, ExperimentOptions};
use crate::profile::{self, ProfileFile};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Level-equation residual accepted by the `phase` command.
pub const PHASE_RESIDUAL_TOL: f64 = 1e-10;

/// Parameters shared by all commands. Unused fields are ignored by a command
/// but still recorded in its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub b: f64,
    pub c: f64,
    pub k: Option<f64>,
    /// Overrides `k` in `phase`.
    pub gamma: Option<f64>,
    /// `lo:hi:n`, inclusive and uniformly spaced.
    pub k_grid: Option<String>,
    pub b_set: Vec<String>,
    pub tol: f64,
    /// Samples for profiles and level curves.
    pub grid_n: usize,
    #[serde(rename = "domain_L")]
    pub domain_l: Option<f64>,
    #[serde(rename = "N")]
    pub n: usize,
    /// Defaults to `50/c`.
    #[serde(rename = "T")]
    pub t_end: Option<f64>,
    pub eps: f64,
    pub out: PathBuf,
    pub seed: u64,
    /// Hypothesis grid size as `[n_b, n_z]`.
    pub hyp_grid: [usize; 2],
    /// Initial profile file for `simulate`.
    pub init: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            b: 2.0,
            c: 1.0,
            k: None,
            gamma: None,
            k_grid: None,
            b_set: ["3/2", "2", "5/2", "3", "4", "10"].map(String::from).to_vec(),
            tol: orbit::DEFAULT_TOL,
            grid_n: 2048,
            domain_l: None,
            n: 4096,
            t_end: None,
            eps: 0.01,
            out: PathBuf::from("out"),
            seed: 0,
            hyp_grid: [200, 500],
            init: None,
        }
    }
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// `k` if given, otherwise the middle of the admissible range.
    pub fn k_or_default(&self) -> f64 {
        self.k.unwrap_or(0.5 * self.c / (self.b + 1.0))
    }

    pub fn wave_params(&self) -> Result<WaveParams> {
        WaveParams::new(self.b, self.c, self.k_or_default())
    }

    pub fn t_end(&self) -> f64 {
        self.t_end.unwrap_or(50.0 / self.c)
    }

    /// The configured `k` grid, or 20 points across 5%..95% of the admissible range.
    pub fn k_values(&self) -> Result<Vec<f64>> {
        match &self.k_grid {
            Some(s) => parse_grid(s),
            None => {
                let kmax = self.c / (self.b + 1.0);
                Ok((0..20).map(|i| kmax * (0.05 + 0.9 * i as f64 / 19.0)).collect())
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be finite")))
            }
        };
        finite("b", self.b)?;
        finite("c", self.c)?;
        finite("eps", self.eps)?;
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::Config(format!("tol must lie in (0, 1), got {}", self.tol)));
        }
        if let Some(t) = self.t_end {
            if !(t > 0.0) {
                return Err(Error::Config(format!("T must be positive, got {t}")));
            }
        }
        if self.hyp_grid.contains(&0) {
            return Err(Error::Config("hyp_grid entries must be positive".into()));
        }
        Ok(())
    }
}

/// Parse `lo:hi:n` into `n ≥ 2` uniformly spaced values.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("grid must be lo:hi:n, got {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n < 2 || !(lo < hi) {
        return Err(bad());
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

/// Outcome of a command: exit code and files written.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub files: Vec<PathBuf>,
    pub summary: String,
}

/// Map a library error to an exit code: parameter and config problems are 2.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::ParameterDomain { .. } | Error::Domain { .. } | Error::Config(_) => EXIT_CONFIG,
        _ => EXIT_FAIL,
    }
}

fn header(command: &str, cfg: &RunConfig) -> Value {
    json!({
        "tool": "bchlab",
        "version": VERSION,
        "command": command,
        "seed": cfg.seed,
        "config": cfg,
    })
}

fn csv_preamble(command: &str, cfg: &RunConfig) -> String {
    format!(
        "# bchlab {VERSION} {command} seed={} config={}\n",
        cfg.seed,
        serde_json::to_string(cfg).expect("config serializes")
    )
}

struct Writer {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, text: &str) -> Result<()> {
        let p = self.dir.join(name);
        fs::write(&p, text)?;
        self.files.push(p);
        Ok(())
    }

    fn json(&mut self, name: &str, v: &Value) -> Result<()> {
        let mut s = serde_json::to_string_pretty(v)?;
        s.push('\n');
        self.write(name, &s)
    }

    fn done(self, ok: bool, summary: String) -> Outcome {
        Outcome {
            code: if ok { EXIT_PASS } else { EXIT_FAIL },
            files: self.files,
            summary,
        }
    }
}

/// Test hook: `R` with a stray `z⁵` term, used as a negative control.
pub fn corrupted_r() -> ExactPoly {
    &exact::poly_r() + &ExactPoly::term(exact::int(1), Monomial::new(5, 0, 0))
}

pub fn cmd_hypotheses(cfg: &RunConfig, corrupt_r: bool) -> Result<Outcome> {
    cfg.validate()?;
    let bs = cfg
        .b_set
        .iter()
        .map(|s| exact::parse_rational(s))
        .collect::<Result<Vec<_>>>()?;
    if let Some(b) = bs.iter().find(|b| exact::rat_to_f64(b) <= 1.0) {
        return Err(Error::Config(format!("b-set entries must exceed 1, got {b}")));
    }

    let r = if corrupt_r { corrupted_r() } else { exact::poly_r() };
    let identities = exact::verify_identity_expansions_with(
        &r,
        &exact::poly_p(),
        &exact::poly_pp_scaled(),
        &[2, 3, 4, 5],
    );
    let r_elim = Pair::R.eliminant();
    let r_expected = exact::expected_r_eliminant();
    let r_ok = r_elim == &r_expected;
    let p_report = exact::eliminant_p_report();
    let p_ok = p_report.z_power >= 4 && p_report.l_divides;

    let mut certificates = Vec::new();
    for b in &bs {
        for pair in [Pair::R, Pair::P] {
            certificates.push(exact::certify_no_common_roots(pair, b)?);
        }
    }
    let cert_ok = certificates.iter().all(|c| c.verdict.passed());

    let [nb, nz] = cfg.hyp_grid;
    let b_grid: Vec<f64> = (0..nb)
        .map(|i| if nb == 1 { 1.1 } else { 1.1 + 8.9 * i as f64 / (nb - 1) as f64 })
        .collect();
    let z_grid: Vec<f64> = (1..=nz).map(|i| i as f64 / (nz + 1) as f64).collect();
    let grid = orbit::hypothesis_grid_check(&b_grid, &z_grid)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rb: Vec<f64> = (0..64).map(|_| rng.gen_range(1.1..10.0)).collect();
    let rz: Vec<f64> = (0..64).map(|_| rng.gen_range(1e-6..1.0 - 1e-6)).collect();
    let sample = orbit::hypothesis_grid_check(&rb, &rz)?;

    let ok = identities.verdict.passed()
        && r_ok
        && p_ok
        && cert_ok
        && grid.verdict.passed()
        && sample.verdict.passed();

    let mut doc = header("hypotheses", cfg);
    doc["r_eliminant"] = json!({
        "computed": r_elim.to_string(),
        "expected": r_expected.to_string(),
        "verdict": Verdict::from_bool(r_ok),
    });
    doc["p_eliminant"] = json!({ "report": p_report, "verdict": Verdict::from_bool(p_ok) });
    doc["identities"] = serde_json::to_value(&identities)?;
    doc["certificates"] = serde_json::to_value(&certificates)?;
    doc["grid"] = serde_json::to_value(&grid)?;
    doc["random_sample"] = serde_json::to_value(&sample)?;
    doc["verdict"] = json!(Verdict::from_bool(ok));

    let mut w = Writer::new(&cfg.out)?;
    w.json("hypotheses.json", &doc)?;
    let mut summary = format!(
        "identities {} | R eliminant {} | P eliminant {} | certificates {} | grid {} | sample {}",
        identities.verdict,
        Verdict::from_bool(r_ok),
        Verdict::from_bool(p_ok),
        Verdict::from_bool(cert_ok),
        grid.verdict,
        sample.verdict
    );
    for e in identities.entries.iter().filter(|e| !e.verdict.passed()) {
        summary.push_str(&format!(
            "\nb={}: R difference {}; P difference {}",
            e.b, e.r_difference, e.p_difference
        ));
    }
    Ok(w.done(ok, summary))
}

pub fn cmd_qscan(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let ks = cfg.k_values()?;
    for &k in &ks {
        WaveParams::new(cfg.b, cfg.c, k)?;
    }
    let report = orbit::monotonicity_scan(cfg.b, cfg.c, &ks, cfg.tol)?;
    let ok = report.verdict.passed();
    let mut doc = header("qscan", cfg);
    doc["b"] = json!(report.b);
    doc["c"] = json!(report.c);
    doc["points"] = json!(report.points.len());
    doc["min_margin"] = json!(report.min_margin());
    doc["verdict"] = json!(report.verdict);
    let mut w = Writer::new(&cfg.out)?;
    w.json("qscan.json", &doc)?;
    w.write("qscan.csv", &(csv_preamble("qscan", cfg) + &report.to_csv()))?;
    let summary = format!(
        "Q monotone in k over {} points: {} (min margin {:e})",
        report.points.len(),
        report.verdict,
        report.min_margin()
    );
    Ok(w.done(ok, summary))
}

/// Profile acceptance: residual, bounds and decay rate.
pub const PROFILE_RESIDUAL_TOL: f64 = 1e-6;
pub const DECAY_REL_TOL: f64 = 0.02;

pub fn cmd_profile(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let p = cfg.wave_params()?;
    let prof = match cfg.domain_l {
        None => profile::build_profile(&p, cfg.grid_n, 1e-12)?,
        Some(l) => profile::build_profile_on(&p, cfg.grid_n, 0.5 * l, 1e-12)?,
    };
    let valid = prof.validate();
    let residual = profile::ode_residual(&prof);
    let decay = prof.decay_exponent_fit;
    let decay_err = (decay - p.gamma.sqrt()).abs() / p.gamma.sqrt();
    let ok = valid.is_ok() && residual <= PROFILE_RESIDUAL_TOL && decay_err <= DECAY_REL_TOL;

    let mut doc = header("profile", cfg);
    doc["diagnostics"] = json!({
        "gamma": p.gamma,
        "crest": prof.crest(),
        "half_length": prof.half_length,
        "ode_residual": residual,
        "decay_exponent_fit": decay,
        "decay_exponent_expected": p.gamma.sqrt(),
        "energy_drift": prof.energy_drift,
        "validation": valid.as_ref().map(|_| "ok".to_string()).unwrap_or_else(|e| e.to_string()),
        "verdict": Verdict::from_bool(ok),
    });
    let file = serde_json::to_value(prof.to_file())?;
    if let (Value::Object(d), Value::Object(f)) = (&mut doc, file) {
        d.extend(f);
    }
    let mut w = Writer::new(&cfg.out)?;
    w.json("profile.json", &doc)?;
    w.write("profile.csv", &(csv_preamble("profile", cfg) + &prof.to_csv()))?;
    let summary = format!(
        "profile b={} c={} k={}: residual {residual:e}, decay {decay:.6} vs {:.6}: {}",
        p.b,
        p.c,
        p.k,
        p.gamma.sqrt(),
        Verdict::from_bool(ok)
    );
    Ok(w.done(ok, summary))
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let opts = ExperimentOptions {
        n: cfg.n,
        domain_l: cfg.domain_l,
        ..Default::default()
    };
    let report = match &cfg.init {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            let pf: ProfileFile = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            pde::stability_experiment_on(&pf, cfg.eps, cfg.t_end(), &opts)?
        }
        None => {
            let p = cfg.wave_params()?;
            pde::stability_experiment(&p, cfg.eps, cfg.t_end(), &opts)?
        }
    };
    let ok = report.passed();
    let mut doc = header("simulate", cfg);
    doc["report"] = serde_json::to_value(&report)?;
    let mut w = Writer::new(&cfg.out)?;
    w.json("simulate.json", &doc)?;
    w.write("simulate.csv", &(csv_preamble("simulate", cfg) + &report.to_csv()))?;
    let summary = format!(
        "{}: max d = {:e}, d(0) = {:e}, threshold {:e}, Casimir drift {:e} [{}]",
        report.status, report.max_d, report.d0, report.threshold, report.casimir_drift, report.scope
    );
    Ok(w.done(ok, summary))
}

pub fn cmd_phase(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let p = match cfg.gamma {
        Some(g) => WaveParams::from_gamma(cfg.b, cfg.c, g)?,
        None => cfg.wave_params()?,
    };
    if cfg.grid_n < 2 {
        return Err(Error::Config("grid_n must be at least 2".into()));
    }
    let homo = level_curve_homoclinic(&p, cfg.grid_n)?;
    let trans = level_curve_transformed(p.b, p.h, cfg.grid_n, 1e-3)?;
    let ok = homo.max_residual <= PHASE_RESIDUAL_TOL && trans.max_residual <= PHASE_RESIDUAL_TOL;
    let mut doc = header("phase", cfg);
    doc["params"] = serde_json::to_value(p)?;
    doc["homoclinic"] = json!({ "level": homo.level, "samples": homo.points.len(), "max_residual": homo.max_residual });
    doc["transformed"] = json!({ "level": trans.level, "samples": trans.points.len(), "max_residual": trans.max_residual });
    doc["verdict"] = json!(Verdict::from_bool(ok));
    let mut w = Writer::new(&cfg.out)?;
    w.json("phase.json", &doc)?;
    w.write("phase_homoclinic.csv", &(csv_preamble("phase", cfg) + &homo.to_csv()))?;
    w.write("phase_transformed.csv", &(csv_preamble("phase", cfg) + &trans.to_csv()))?;
    let summary = format!(
        "level curves b={} gamma={}: residuals {:e}, {:e}: {}",
        p.b,
        p.gamma,
        homo.max_residual,
        trans.max_residual,
        Verdict::from_bool(ok)
    );
    Ok(w.done(ok, summary))
}
