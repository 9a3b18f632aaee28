//! `ellspec` — spectral perturbation analysis for ellipsoids near the
//! unit sphere, with machine-readable output.
//!
//! Every subcommand prints one envelope to stdout,
//! `{"command", "inputs", "results", "diagnostics"}` as JSON by default
//! or a flat table with `--format csv`. Numbers round-trip exactly, so
//! re-running with the echoed inputs reproduces the output byte for
//! byte. Exit codes: 0 success, 2 invalid input, 3 numerical failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ellspec::comparison::compare;
use ellspec::eigensolve::pd_verdict;
use ellspec::geometry::{
    axis_admissible, classify, curvature_extrema, curvature_grid, epsilon_admissible_interval,
    Ellipsoid, PerturbationParams,
};
use ellspec::oracle::GalerkinConfig;
use ellspec::perturbation::{
    assemble_spectrum_raw, build_matrix, matrix_dimensions, MatrixFamily, ModeLabel,
    SpectrumEntry,
};

#[derive(Parser)]
#[command(name = "ellspec", version, about = "Laplace-Beltrami eigenvalue perturbation on near-sphere ellipsoids")]
struct Cli {
    /// Output format on stdout
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads (default: machine parallelism, or ELLSPEC_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Curvature extrema and admissibility of one ellipsoid
    Curvature(CurvatureArgs),
    /// Admissible perturbation sizes for direction coefficients
    Admissible(AdmissibleArgs),
    /// First-order eigenvalue spectrum l(l+1) + lambda1*eps
    Perturb(PerturbArgs),
    /// Positive-definiteness checks of the four matrix families
    Pdcheck(PdcheckArgs),
    /// Sorted comparison against the round-sphere spectrum
    Compare(CompareArgs),
}

#[derive(Args)]
struct CurvatureArgs {
    /// Semi-axis lengths "A,B,C"
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, conflicts_with = "params")]
    axes: Option<Triple>,

    /// Direction coefficients "alpha,beta,gamma" (with --eps)
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, requires = "eps")]
    params: Option<Triple>,

    /// Perturbation size for --params
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,

    /// Also sample the curvature on an n x 2n latitude/longitude grid
    #[arg(long, value_name = "N")]
    grid: Option<usize>,
}

#[derive(Args)]
struct AdmissibleArgs {
    #[arg(short, long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(short, long, allow_negative_numbers = true)]
    beta: f64,
    #[arg(short, long, allow_negative_numbers = true)]
    gamma: f64,
}

#[derive(Args)]
struct PerturbArgs {
    /// Level cap
    #[arg(long = "L")]
    level_cap: u32,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long, allow_negative_numbers = true)]
    eps: f64,
    /// Also dump the tridiagonal family matrices per level
    #[arg(long)]
    matrices: bool,
}

#[derive(Args)]
struct PdcheckArgs {
    /// Level (l >= 1)
    #[arg(long = "l")]
    level: u32,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, allow_negative_numbers = true)]
    gamma: f64,
}

#[derive(Args)]
struct CompareArgs {
    /// Level cap
    #[arg(long = "L")]
    level_cap: u32,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long, allow_negative_numbers = true)]
    eps: f64,
    /// Cross-check the closed forms against the Galerkin oracle
    #[arg(long)]
    oracle: bool,
    /// Oracle basis degree
    #[arg(long, default_value_t = 12, requires = "oracle")]
    degree: usize,
}

type Triple = [f64; 3];

fn parse_triple(s: &str) -> Result<Triple, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {s:?}"));
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("bad number {part:?}: {e}"))?;
        if !slot.is_finite() {
            return Err(format!("non-finite value {part:?}"));
        }
    }
    Ok(out)
}

/// stderr + exit code carrier.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<ellspec::Error> for Failure {
    fn from(e: ellspec::Error) -> Self {
        Self {
            code: if e.is_invalid_input() { 2 } else { 3 },
            message: e.to_string(),
        }
    }
}

/// Assembled output: the JSON envelope plus a CSV rendering.
struct Output {
    envelope: Value,
    csv: String,
}

fn main() {
    let cli = Cli::parse();
    configure_threads(cli.threads);
    match run(&cli.command) {
        Ok(output) => {
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&output.envelope).expect("serializable envelope")
                ),
                Format::Csv => print!("{}", output.csv),
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}

fn configure_threads(cli_threads: Option<usize>) {
    let n = cli_threads.or_else(|| {
        std::env::var("ELLSPEC_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(n) = n.filter(|&n| n > 0) {
        // assembly sums are per-entry sequential, so any pool size gives
        // identical bits; failure here only means a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn run(command: &Command) -> Result<Output, Failure> {
    match command {
        Command::Curvature(args) => cmd_curvature(args),
        Command::Admissible(args) => cmd_admissible(args),
        Command::Perturb(args) => cmd_perturb(args),
        Command::Pdcheck(args) => cmd_pdcheck(args),
        Command::Compare(args) => cmd_compare(args),
    }
}

fn envelope(command: &str, inputs: Value, results: Value, diagnostics: &[String]) -> Value {
    json!({
        "command": command,
        "inputs": inputs,
        "results": results,
        "diagnostics": diagnostics,
    })
}

/// 17 significant digits; parses back to the identical f64.
fn csv_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn cmd_curvature(args: &CurvatureArgs) -> Result<Output, Failure> {
    let (ellipsoid, inputs) = match (&args.axes, &args.params) {
        (Some(axes), None) => (
            Ellipsoid::new(axes[0], axes[1], axes[2])?,
            json!({ "axes": axes, "grid": args.grid }),
        ),
        (None, Some(p)) => {
            let eps = args.eps.expect("clap enforces --eps with --params");
            let params = PerturbationParams::new(p[0], p[1], p[2], eps)?;
            (
                params.ellipsoid(),
                json!({ "params": p, "eps": eps, "grid": args.grid }),
            )
        }
        _ => return Err(Failure::invalid("provide exactly one of --axes or --params")),
    };

    let extrema = curvature_extrema(&ellipsoid);
    let admissible = axis_admissible(&ellipsoid);
    let grid = args.grid.map(|n| {
        if n < 2 {
            return Err(Failure::invalid("--grid needs at least 2 rows"));
        }
        Ok(curvature_grid(&ellipsoid, n, 2 * n))
    });
    let grid = grid.transpose()?;

    let results = json!({
        "axes": ellipsoid.semi_axes(),
        "class": classify(&ellipsoid),
        "k_min": extrema.k_min,
        "k_max": extrema.k_max,
        "argmin": extrema.argmin,
        "argmax": extrema.argmax,
        "admissible": admissible,
        "grid": grid,
    });

    let mut csv = String::new();
    let [a, b, c] = ellipsoid.semi_axes();
    csv.push_str(&format!(
        "# axes={},{},{};k_min={};k_max={};admissible={}\n",
        csv_num(a),
        csv_num(b),
        csv_num(c),
        csv_num(extrema.k_min),
        csv_num(extrema.k_max),
        admissible
    ));
    if let Some(points) = &grid {
        csv.push_str("theta,phi,k\n");
        for &(theta, phi, k) in points {
            csv.push_str(&format!("{},{},{}\n", csv_num(theta), csv_num(phi), csv_num(k)));
        }
    }

    Ok(Output {
        envelope: envelope("curvature", inputs, results, &[]),
        csv,
    })
}

fn cmd_admissible(args: &AdmissibleArgs) -> Result<Output, Failure> {
    let interval = epsilon_admissible_interval(args.alpha, args.beta, args.gamma);
    let inputs = json!({ "alpha": args.alpha, "beta": args.beta, "gamma": args.gamma });
    let results = json!({
        "interval": interval,
        "display": interval.to_string(),
    });
    let csv = format!(
        "alpha,beta,gamma,interval\n{},{},{},{}\n",
        csv_num(args.alpha),
        csv_num(args.beta),
        csv_num(args.gamma),
        interval
    );
    Ok(Output {
        envelope: envelope("admissible", inputs, results, &[]),
        csv,
    })
}

fn spectrum_diagnostics(
    alpha: f64,
    beta: f64,
    gamma: f64,
    eps: f64,
    entries: &[SpectrumEntry],
) -> Vec<String> {
    let mut diagnostics = Vec::new();
    let min_axis = [alpha, beta, gamma]
        .iter()
        .map(|t| 1.0 + t * eps)
        .fold(f64::INFINITY, f64::min);
    if min_axis <= 0.0 {
        diagnostics.push(format!(
            "axes are not all positive at eps = {eps}; the first-order model is formal here"
        ));
    }
    let flagged = entries.iter().filter(|e| e.cluster_flag).count();
    if flagged > 0 {
        diagnostics.push(format!(
            "{flagged} entries leave their level window [l(l+1)-2l, l(l+1)+2l); eps may be too large for the expansion"
        ));
    }
    diagnostics
}

fn spectrum_csv(entries: &[SpectrumEntry]) -> String {
    let mut csv =
        String::from("level,kind,m,family,position,multiplicity,lambda1,value,cluster_flag\n");
    for e in entries {
        let (kind, m, family, position) = match e.label {
            ModeLabel::Order { m } => ("order", m.to_string(), String::new(), String::new()),
            ModeLabel::Family { family, position } => (
                "family",
                String::new(),
                family.to_string(),
                position.to_string(),
            ),
        };
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            e.level,
            kind,
            m,
            family,
            position,
            e.multiplicity,
            csv_num(e.lambda1),
            csv_num(e.value),
            e.cluster_flag
        ));
    }
    csv
}

fn cmd_perturb(args: &PerturbArgs) -> Result<Output, Failure> {
    let entries = assemble_spectrum_raw(args.level_cap, args.alpha, args.beta, args.gamma, args.eps);
    let diagnostics =
        spectrum_diagnostics(args.alpha, args.beta, args.gamma, args.eps, &entries);

    let matrices = if args.matrices {
        let mut dump = Vec::new();
        for l in 1..=args.level_cap {
            let dims = matrix_dimensions(l)?;
            for family in MatrixFamily::ALL {
                if dims.get(family) == 0 {
                    continue;
                }
                let m = build_matrix(l, family, args.alpha, args.beta, args.gamma)?;
                dump.push(json!({
                    "level": l,
                    "family": family,
                    "diag": m.diag(),
                    "offdiag": m.offdiag(),
                }));
            }
        }
        Some(dump)
    } else {
        None
    };

    let inputs = json!({
        "L": args.level_cap,
        "alpha": args.alpha,
        "beta": args.beta,
        "gamma": args.gamma,
        "eps": args.eps,
        "matrices": args.matrices,
    });
    let results = json!({
        "entries": entries,
        "matrices": matrices,
    });
    let csv = spectrum_csv(&entries);
    Ok(Output {
        envelope: envelope("perturb", inputs, results, &diagnostics),
        csv,
    })
}

fn cmd_pdcheck(args: &PdcheckArgs) -> Result<Output, Failure> {
    let dims = matrix_dimensions(args.level)?;
    let mut families = Vec::new();
    let mut csv = String::from("family,dim,exact,sufficient,min_eigenvalue\n");
    for family in MatrixFamily::ALL {
        if dims.get(family) == 0 {
            families.push(json!({ "family": family, "dim": 0 }));
            csv.push_str(&format!("{family},0,,,\n"));
            continue;
        }
        let m = build_matrix(args.level, family, args.alpha, args.beta, args.gamma)?;
        let verdict = pd_verdict(&m);
        let eigenvalues = ellspec::eigensolve::tridiag_eigenvalues(&m);
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            family,
            m.dim(),
            verdict.exact,
            verdict.sufficient,
            csv_num(eigenvalues[0])
        ));
        families.push(json!({
            "family": family,
            "dim": m.dim(),
            "diag": m.diag(),
            "offdiag": m.offdiag(),
            "verdict": verdict,
            "eigenvalues": eigenvalues,
        }));
    }
    let inputs = json!({
        "l": args.level,
        "alpha": args.alpha,
        "beta": args.beta,
        "gamma": args.gamma,
    });
    Ok(Output {
        envelope: envelope("pdcheck", inputs, json!({ "families": families }), &[]),
        csv,
    })
}

fn cmd_compare(args: &CompareArgs) -> Result<Output, Failure> {
    let params = PerturbationParams::new(args.alpha, args.beta, args.gamma, args.eps)?;
    let oracle_cfg = args.oracle.then(|| GalerkinConfig::with_degree(args.degree));
    let report = compare(args.level_cap, &params, oracle_cfg.as_ref())?;

    let mut diagnostics = Vec::new();
    if !report.admissible {
        diagnostics.push(format!(
            "parameters are not curvature-admissible ({})",
            report.admissibility_condition
        ));
    }
    if report.cluster_flags > 0 {
        diagnostics.push(format!(
            "{} model entries leave their level window; margins there are not trustworthy",
            report.cluster_flags
        ));
    }

    let mut csv = format!(
        "# admissible={};verdict={};eps_interval={}\n",
        report.admissible, report.verdict, report.epsilon_interval
    );
    csv.push_str("index,sphere,perturbed,margin\n");
    for e in &report.entries {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            e.index,
            csv_num(e.sphere),
            csv_num(e.perturbed),
            csv_num(e.margin)
        ));
    }
    if let Some(devs) = &report.oracle_crosscheck {
        csv.push_str("level,max_abs_deviation\n");
        for d in devs {
            csv.push_str(&format!("{},{}\n", d.level, csv_num(d.max_abs_deviation)));
        }
    }

    let inputs = json!({
        "L": args.level_cap,
        "alpha": args.alpha,
        "beta": args.beta,
        "gamma": args.gamma,
        "eps": args.eps,
        "oracle": args.oracle,
        "degree": args.oracle.then_some(args.degree),
    });
    Ok(Output {
        envelope: envelope("compare", inputs, serde_json::to_value(&report).unwrap(), &diagnostics),
        csv,
    })
}
