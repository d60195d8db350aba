//! `qmod`: build quotient-module frames from an ideal spec, run the
//! numerical experiments, and write a deterministic JSON/CSV report.
//!
//! Exit codes: 0 all requested checks passed, 1 a verification failed,
//! 2 bad input (spec, arguments, or budget). Nothing is written on exit 2.

mod args;
mod experiments;
mod report;
mod specdoc;

use clap::{Args, Parser, Subcommand};
use experiments::{Ctx, Experiment, Output};
use qmod_core::QmodError;
use report::RunReport;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qmod", version, about = "Quotient-module experiments over H²(𝔻ᵈ)")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Ideal spec JSON file (default: the squared diagonal line J² in d = 3)
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Frame truncation degree D
    #[arg(long, global = true, default_value_t = 30)]
    degree: u32,
    /// Output directory for report.json and profiles/*.csv
    #[arg(long, global = true, default_value = "qml-out")]
    out: PathBuf,
    /// Seed for all randomized draws
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance overrides: comma-separated experiment=value pairs
    #[arg(long, global = true)]
    tol: Option<String>,
}

#[derive(Subcommand, Clone)]
enum Command {
    /// Per-degree ideal and quotient dimensions
    Dims {
        #[command(flatten)]
        common: Common,
    },
    /// Compress a multiplier to the quotient and profile its blocks
    Compress {
        #[command(flatten)]
        common: Common,
        /// Multiplier polynomial, e.g. "z1", "w2^2", "2*z1*z3 - z2^2"
        #[arg(long, default_value = "z1")]
        multiplier: String,
    },
    /// Profile the commutator [S_i*, S_j] of compressed coordinate shifts
    Commutator {
        #[command(flatten)]
        common: Common,
        /// Row coordinate index (0-based)
        #[arg(long, default_value_t = 0)]
        i: usize,
        /// Column coordinate index (0-based)
        #[arg(long, default_value_t = 0)]
        j: usize,
    },
    /// Verify the closed-form limit of Σ tr [S_{f1}*, S_{f2}] against the
    /// extrapolated cumulative trace
    TraceFormula {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "z1")]
        f1: String,
        #[arg(long, default_value = "z1")]
        f2: String,
    },
    /// Verify compressed-shift matrix elements against the coefficient formula
    ShiftCoeffs {
        #[command(flatten)]
        common: Common,
        /// Target summand index (row)
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Source summand index (column); must be < m
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// Coordinate index of the shift (0-based)
        #[arg(long, default_value_t = 0)]
        i: usize,
        /// Index of f in the orthonormal basis of summand m
        #[arg(long, default_value_t = 0)]
        f_index: usize,
        /// Index of g in the orthonormal basis of summand n
        #[arg(long, default_value_t = 0)]
        g_index: usize,
        #[arg(long, default_value_t = 40)]
        k_max: u32,
    },
    /// Verify that upward and same-level cross blocks of the shifts vanish
    ZeroBlocks {
        #[command(flatten)]
        common: Common,
        /// Coordinate index (0-based); default checks every coordinate
        #[arg(long)]
        i: Option<usize>,
    },
    /// Verify the restriction multiplicativity r_g(f·h) = r(f)·r_g(h)
    ModuleMap {
        #[command(flatten)]
        common: Common,
        /// Multiplier polynomial; omitted = seeded random multipliers
        #[arg(long)]
        f: Option<String>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Check the normalized-pairing decay of line representers for two
    /// directions, with the closed form and its domain of validity
    AsymOrth {
        #[command(flatten)]
        common: Common,
        /// First direction, comma-separated unimodular components
        #[arg(long, default_value = "1,1,1")]
        theta_i: String,
        /// Second direction
        #[arg(long, default_value = "1,1,-1")]
        theta_j: String,
        #[arg(long, default_value_t = 40)]
        k_max: u32,
    },
    /// Contrast self-commutator growth across the spec components
    NonnormalDemo {
        #[command(flatten)]
        common: Common,
    },
    /// Boundary-regularity witness: S_f non-zero with compact-consistent
    /// block-norm decay
    BoundaryWitness {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "w2")]
        f: String,
    },
    /// Smallest eigenvalue of Σ (λ_i − S_i)(λ_i − S_i)* on a tail window
    SpectrumProbe {
        #[command(flatten)]
        common: Common,
        /// Probe point λ, comma-separated complex components
        #[arg(long, default_value = "1,1,1")]
        lambda: String,
        /// First degree of the tail window (default D − 10)
        #[arg(long)]
        tail_start: Option<u32>,
    },
    /// Run a set of experiments with default parameters
    Suite {
        #[command(flatten)]
        common: Common,
        /// Comma-separated experiment names (default: all)
        #[arg(long)]
        experiments: Option<String>,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Dims { common }
            | Command::Compress { common, .. }
            | Command::Commutator { common, .. }
            | Command::TraceFormula { common, .. }
            | Command::ShiftCoeffs { common, .. }
            | Command::ZeroBlocks { common, .. }
            | Command::ModuleMap { common, .. }
            | Command::AsymOrth { common, .. }
            | Command::NonnormalDemo { common }
            | Command::BoundaryWitness { common, .. }
            | Command::SpectrumProbe { common, .. }
            | Command::Suite { common, .. } => common,
        }
    }
}

const SUITE_DEFAULT: &[&str] = &[
    "dims",
    "compress",
    "commutator",
    "trace-formula",
    "shift-coeffs",
    "zero-blocks",
    "module-map",
    "asym-orth",
    "nonnormal-demo",
    "boundary-witness",
    "spectrum-probe",
];

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match execute(&cli.cmd) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// QML_THREADS caps the rayon pool used for frame assembly and the suite.
fn init_threads() {
    if let Ok(v) = std::env::var("QML_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn execute(cmd: &Command) -> Result<bool, QmodError> {
    let common = cmd.common();
    if common.degree < 3 {
        return Err(QmodError::InvalidArgument(format!(
            "truncation degree {} < 3",
            common.degree
        )));
    }
    let spec = match &common.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                QmodError::SpecParse(format!("{}: {e}", path.display()))
            })?;
            specdoc::parse_ideal_spec(&text)?
        }
        None => specdoc::validate(specdoc::default_doc())?,
    };
    let tol = match &common.tol {
        Some(text) => args::parse_tol(text)?,
        None => BTreeMap::new(),
    };

    let plan: Vec<Experiment> = match cmd {
        Command::Dims { .. } => vec![Experiment::Dims],
        Command::Compress { multiplier, .. } => vec![Experiment::Compress {
            multiplier: multiplier.clone(),
        }],
        Command::Commutator { i, j, .. } => vec![Experiment::Commutator { i: *i, j: *j }],
        Command::TraceFormula { f1, f2, .. } => vec![Experiment::TraceFormula {
            f1: f1.clone(),
            f2: f2.clone(),
        }],
        Command::ShiftCoeffs {
            m,
            n,
            i,
            f_index,
            g_index,
            k_max,
            ..
        } => vec![Experiment::ShiftCoeffs {
            m: *m,
            n: *n,
            i: *i,
            f_index: *f_index,
            g_index: *g_index,
            k_max: *k_max,
        }],
        Command::ZeroBlocks { i, .. } => vec![Experiment::ZeroBlocks { i: *i }],
        Command::ModuleMap { f, samples, .. } => vec![Experiment::ModuleMap {
            f: f.clone(),
            samples: *samples,
        }],
        Command::AsymOrth {
            theta_i,
            theta_j,
            k_max,
            ..
        } => vec![Experiment::AsymOrth {
            theta_i: theta_i.clone(),
            theta_j: theta_j.clone(),
            k_max: *k_max,
        }],
        Command::NonnormalDemo { .. } => vec![Experiment::NonnormalDemo],
        Command::BoundaryWitness { f, .. } => vec![Experiment::BoundaryWitness { f: f.clone() }],
        Command::SpectrumProbe {
            lambda, tail_start, ..
        } => vec![Experiment::SpectrumProbe {
            lambda: lambda.clone(),
            tail_start: *tail_start,
        }],
        Command::Suite { experiments, .. } => {
            let names: Vec<String> = match experiments {
                Some(list) => list.split(',').map(|s| s.trim().to_string()).collect(),
                None => SUITE_DEFAULT.iter().map(|s| s.to_string()).collect(),
            };
            names
                .iter()
                .map(|n| Experiment::with_defaults(n, spec.d))
                .collect::<Result<Vec<_>, _>>()?
        }
    };

    // validate tolerance override names against the plan
    for name in tol.keys() {
        if !plan.iter().any(|e| e.name() == name) {
            return Err(QmodError::InvalidArgument(format!(
                "tolerance override for `{name}` matches no requested experiment"
            )));
        }
    }

    let ctx = Ctx {
        spec: &spec,
        degree: common.degree,
        seed: common.seed,
    };
    // run everything (suite members in parallel), then assemble in plan order
    // so the report is deterministic
    let results: Vec<Result<Output, QmodError>> = {
        use rayon::prelude::*;
        plan.par_iter().map(|e| experiments::run(e, &ctx)).collect()
    };
    let mut reports = Vec::new();
    let mut profiles = Vec::new();
    let mut dims = Vec::new();
    for (exp, result) in plan.iter().zip(results) {
        let mut out = result?;
        if let Some(&t) = tol.get(exp.name()) {
            out.reports = out.reports.into_iter().map(|r| r.with_tolerance(t)).collect();
        }
        reports.append(&mut out.reports);
        profiles.append(&mut out.profiles);
        dims.append(&mut out.dims);
    }
    let all_pass = reports.iter().all(|r| r.pass);

    let mut config: BTreeMap<String, serde_json::Value> = BTreeMap::new();
    config.insert("degree".into(), common.degree.into());
    config.insert("seed".into(), common.seed.into());
    config.insert("spec".into(), serde_json::to_value(&spec.doc)?);
    config.insert(
        "experiments".into(),
        plan.iter().map(|e| e.name()).collect::<Vec<_>>().into(),
    );
    if !tol.is_empty() {
        config.insert("tolerance_overrides".into(), serde_json::to_value(&tol)?);
    }

    let run_report = RunReport {
        schema: "qml-report/1",
        timestamp: chrono::Utc::now().to_rfc3339(),
        command: cmd_name(cmd).to_string(),
        config,
        reports,
        profiles,
        dims,
    };
    report::write_outputs(&common.out, &run_report).map_err(|e| {
        QmodError::SpecParse(format!("writing {}: {e}", common.out.display()))
    })?;

    for r in &run_report.reports {
        let status = if r.pass { "pass" } else { "FAIL" };
        println!("[{status}] {}", r.claim);
        if !r.pass {
            eprintln!("verification failed: {}", r.claim);
        }
    }
    println!(
        "report: {}",
        common.out.join("report.json").display()
    );
    Ok(all_pass)
}

fn cmd_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Dims { .. } => "dims",
        Command::Compress { .. } => "compress",
        Command::Commutator { .. } => "commutator",
        Command::TraceFormula { .. } => "trace-formula",
        Command::ShiftCoeffs { .. } => "shift-coeffs",
        Command::ZeroBlocks { .. } => "zero-blocks",
        Command::ModuleMap { .. } => "module-map",
        Command::AsymOrth { .. } => "asym-orth",
        Command::NonnormalDemo { .. } => "nonnormal-demo",
        Command::BoundaryWitness { .. } => "boundary-witness",
        Command::SpectrumProbe { .. } => "spectrum-probe",
        Command::Suite { .. } => "suite",
    }
}
