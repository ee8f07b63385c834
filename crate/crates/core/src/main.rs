use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bch_lab::report::{self, RunConfig, EXIT_CONFIG};

#[derive(Parser)]
#[command(name = "bchlab", version, about = "Orbital stability checks for b-family solitary waves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact eliminants, certificates and sign grids for the two hypotheses.
    Hypotheses {
        #[command(flatten)]
        common: Common,
        /// Replace R by a corrupted polynomial (negative control).
        #[arg(long, hide = true)]
        corrupt_r: bool,
    },
    /// Scan Q over a k-grid and check strict monotonicity.
    Qscan(Common),
    /// Build and validate a solitary-wave profile.
    Profile(Common),
    /// Evolve a perturbed wave and track its orbital distance.
    Simulate(Common),
    /// Sample the homoclinic loop and the transformed level curve.
    Phase(Common),
}

#[derive(Args, Clone, Default)]
struct Common {
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// lo:hi:n
    #[arg(long = "k-grid")]
    k_grid: Option<String>,
    /// Comma-separated rationals, e.g. 3/2,2,5/2
    #[arg(long = "b-set", value_delimiter = ',')]
    b_set: Option<Vec<String>>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "grid-n")]
    grid_n: Option<usize>,
    #[arg(long = "domain-L")]
    domain_l: Option<f64>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long = "T")]
    t_end: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Hypothesis grid as n_b,n_z
    #[arg(long = "hyp-grid", value_delimiter = ',')]
    hyp_grid: Option<Vec<usize>>,
    /// Initial profile (JSON) for simulate
    #[arg(long)]
    init: Option<PathBuf>,
    /// JSON config; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn resolve(self) -> bch_lab::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_json_file(p)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { cfg.$f = v; } )* };
        }
        macro_rules! set_opt {
            ($($f:ident),*) => { $( if self.$f.is_some() { cfg.$f = self.$f; } )* };
        }
        set!(b, c, b_set, tol, grid_n, n, eps, out, seed);
        set_opt!(k, gamma, k_grid, domain_l, t_end, init);
        if let Some(g) = self.hyp_grid {
            match g[..] {
                [nb, nz] => cfg.hyp_grid = [nb, nz],
                _ => return Err(bch_lab::Error::Config("--hyp-grid takes n_b,n_z".into())),
            }
        }
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common, corrupt) = match cli.command {
        Command::Hypotheses { common, corrupt_r } => ("hypotheses", common, corrupt_r),
        Command::Qscan(c) => ("qscan", c, false),
        Command::Profile(c) => ("profile", c, false),
        Command::Simulate(c) => ("simulate", c, false),
        Command::Phase(c) => ("phase", c, false),
    };
    let cfg = match common.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("bchlab {name}: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let result = match name {
        "hypotheses" => report::cmd_hypotheses(&cfg, corrupt),
        "qscan" => report::cmd_qscan(&cfg),
        "profile" => report::cmd_profile(&cfg),
        "simulate" => report::cmd_simulate(&cfg),
        _ => report::cmd_phase(&cfg),
    };
    match result {
        Ok(o) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", o.summary);
            for f in &o.files {
                let _ = writeln!(out, "wrote {}", f.display());
            }
            ExitCode::from(o.code as u8)
        }
        Err(e) => {
            eprintln!("bchlab {name}: {e}");
            ExitCode::from(report::error_code(&e) as u8)
        }
    }
}
