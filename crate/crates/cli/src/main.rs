//! `hagedorn`: validate parameter files, build and cross-check polynomial
//! tables, evaluate wave packets on grids and check orthonormality.
//!
//! Exit status: 0 success, 1 a mathematical check failed, 2 usage or input
//! error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hagedorn::export::{format_f64, gram_csv, grid_csv};
use hagedorn::linalg::ADMISSIBLE_TOL;
use hagedorn::params::GeneratorOptions;
use hagedorn::verify::{crosscheck, CROSSCHECK_TOL};
use hagedorn::{
    check_admissible, eval_grid, generate_params_with, gram_matrix, Error, Exec, GridSpec, Method, MultiIndex,
    PacketParams, ParamsFile, PolyTable,
};

const GRAM_TOL: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "hagedorn", version, about = "Semiclassical wave-packet polynomials and checks")]
struct Cli {
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the admissibility conditions of a parameter file.
    Validate {
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = ADMISSIBLE_TOL)]
        tol: f64,
    },
    /// Write a seeded admissible parameter set.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        spread: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a polynomial table and write it as JSON.
    Tables {
        #[command(flatten)]
        source: Source,
        #[arg(long = "K")]
        order: u32,
        /// recurrence, generating, rodrigues or ladder
        #[arg(long, default_value = "recurrence")]
        method: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build all constructions and compare them pairwise.
    Crosscheck {
        #[command(flatten)]
        source: Source,
        #[arg(long = "K")]
        order: u32,
        #[arg(long, default_value_t = CROSSCHECK_TOL)]
        tol: f64,
        /// Compare a stored table against a fresh build of the same method.
        #[arg(long)]
        verify: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate phi_k on a grid and write CSV.
    Eval {
        #[command(flatten)]
        source: Source,
        /// Multi-index, e.g. "1,0" or "[1,0]".
        #[arg(long)]
        index: String,
        /// "min:max:count[,min:max:count...]"
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long = "K")]
        order: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gram matrix of phi_k for |k| <= K by Gauss-Hermite quadrature.
    Gram {
        #[command(flatten)]
        source: Source,
        #[arg(long = "K")]
        order: u32,
        /// Nodes per dimension; defaults to K + 3.
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long, default_value_t = GRAM_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parameters come from a file or, explicitly, from a seed and dimension.
#[derive(Args)]
struct Source {
    #[arg(long, conflicts_with_all = ["seed", "d"])]
    params: Option<PathBuf>,
    #[arg(long, requires = "d")]
    seed: Option<u64>,
    #[arg(long, requires = "seed")]
    d: Option<usize>,
}

/// What went wrong, mapped onto the exit-status contract.
enum Failure {
    Check(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::Usage(err.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_tol(tol: f64) -> CmdResult {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Failure::Usage(format!("tolerance must be positive, got {tol}")))
    }
}

impl Source {
    fn load(&self) -> Result<PacketParams, Failure> {
        match (&self.params, self.seed, self.d) {
            (Some(path), _, _) => Ok(PacketParams::from_json(&read(path)?)?),
            (None, Some(seed), Some(d)) => Ok(generate_params_with(seed, d, &GeneratorOptions::default())?),
            _ => Err(Failure::Usage("either --params or --seed with --d is required".into())),
        }
    }
}

fn parse_index(text: &str) -> Result<MultiIndex, Failure> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    let comps: Result<Vec<u32>, _> = inner.split(',').map(|c| c.trim().parse::<u32>()).collect();
    comps
        .map(MultiIndex::new)
        .map_err(|_| Failure::Usage(format!("bad multi-index {text:?}")))
}

fn cmd_validate(params: &Path, tol: f64) -> CmdResult {
    check_tol(tol)?;
    let file = ParamsFile::from_json(&read(params)?)?;
    let (a, b) = file.matrices()?;
    let report = check_admissible(&a, &b, tol)?;
    println!("residual1 = {}", format_f64(report.residual1));
    println!("residual2 = {}", format_f64(report.residual2));
    if !(file.hbar.is_finite() && file.hbar > 0.0) {
        return Err(Failure::Check(format!("hbar must be positive, got {}", file.hbar)));
    }
    if report.ok {
        println!("admissible at tolerance {}", format_f64(tol));
        Ok(())
    } else {
        Err(Failure::Check(format!("not admissible at tolerance {}", format_f64(tol))))
    }
}

fn cmd_crosscheck(
    params: &PacketParams,
    order: u32,
    tol: f64,
    verify: Option<&Path>,
    out: Option<&Path>,
    exec: Exec,
) -> CmdResult {
    check_tol(tol)?;
    let report = crosscheck(params, order, exec)?;
    let mut text = String::new();
    for pair in &report.pairs {
        text.push_str(&format!(
            "{} vs {}: {} (worst k = {})\n",
            pair.first.as_str(),
            pair.second.as_str(),
            format_f64(pair.distance.max),
            pair.distance.worst
        ));
    }
    let mut failure = None;
    if !report.passes(tol) {
        let worst = report.worst();
        failure = Some(format!(
            "{} vs {} differ by {} at k = {}",
            worst.first.as_str(),
            worst.second.as_str(),
            format_f64(worst.distance.max),
            worst.distance.worst
        ));
    }
    if let Some(path) = verify {
        let stored = match PolyTable::from_json(&read(path)?) {
            Ok(t) => t,
            Err(Error::Validation(msg)) => return Err(Failure::Check(format!("stored table is invalid: {msg}"))),
            Err(e) => return Err(e.into()),
        };
        let fresh = report
            .table(stored.method())
            .ok_or_else(|| Failure::Usage("stored table has an unknown method".into()))?;
        if stored.dim() != fresh.dim() || stored.order() > fresh.order() {
            return Err(Failure::Usage(format!(
                "stored table (d = {}, K = {}) does not fit this check (d = {}, K = {order})",
                stored.dim(),
                stored.order(),
                fresh.dim()
            )));
        }
        let dist = stored.distance(fresh)?;
        text.push_str(&format!(
            "stored {} vs fresh: {} (worst k = {})\n",
            stored.method().as_str(),
            format_f64(dist.max),
            dist.worst
        ));
        if (dist.max.is_nan() || dist.max > tol) && failure.is_none() {
            failure = Some(format!(
                "stored table differs by {} at k = {}",
                format_f64(dist.max),
                dist.worst
            ));
        }
    }
    emit(out, &text)?;
    match failure {
        Some(msg) => Err(Failure::Check(msg)),
        None => Ok(()),
    }
}

fn cmd_eval(
    params: &PacketParams,
    index: &str,
    grid: &str,
    order: Option<u32>,
    out: Option<&Path>,
    exec: Exec,
) -> CmdResult {
    let k = parse_index(index)?;
    if k.dim() != params.dim() {
        return Err(Failure::Usage(format!(
            "multi-index {k} has {} components, parameters are {}-dimensional",
            k.dim(),
            params.dim()
        )));
    }
    let order = order.unwrap_or(k.order());
    if k.order() > order {
        return Err(Failure::Usage(format!("|k| = {} exceeds K = {order}", k.order())));
    }
    let grid = GridSpec::parse(grid)?;
    let table = hagedorn::build_recurrence(params, order)?;
    let values = eval_grid(params, &k, &table, &grid, exec)?;
    emit(out, &grid_csv(&grid, &values))
}

fn cmd_gram(
    params: &PacketParams,
    order: u32,
    nodes: Option<usize>,
    tol: f64,
    out: Option<&Path>,
    exec: Exec,
) -> CmdResult {
    check_tol(tol)?;
    let nodes = nodes.unwrap_or(order as usize + 3);
    if nodes < order as usize + 1 {
        return Err(Failure::Usage(format!(
            "{nodes} nodes per dimension under-resolve K = {order}; need at least {}",
            order + 1
        )));
    }
    let table = hagedorn::build_recurrence(params, order)?;
    let gram = gram_matrix(params, order, nodes, &table, exec)?;
    emit(out, &gram_csv(&gram))?;
    let dev = gram.max_deviation();
    eprintln!("max |G - I| = {}", format_f64(dev));
    if dev <= tol {
        Ok(())
    } else {
        Err(Failure::Check(format!("Gram matrix deviates from identity by {}", format_f64(dev))))
    }
}

fn run(cli: Cli) -> CmdResult {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match cli.command {
        Command::Validate { params, tol } => cmd_validate(&params, tol),
        Command::Gen {
            seed,
            d,
            spread,
            hbar,
            out,
        } => {
            let opts = GeneratorOptions {
                spread,
                hbar,
                ..GeneratorOptions::default()
            };
            let params = generate_params_with(seed, d, &opts)?;
            emit(out.as_deref(), &(params.to_json() + "\n"))
        }
        Command::Tables {
            source,
            order,
            method,
            out,
        } => {
            let params = source.load()?;
            let method: Method = method.parse()?;
            let table = hagedorn::build_table(method, &params, order)?;
            emit(out.as_deref(), &(table.to_json() + "\n"))
        }
        Command::Crosscheck {
            source,
            order,
            tol,
            verify,
            out,
        } => {
            let params = source.load()?;
            cmd_crosscheck(&params, order, tol, verify.as_deref(), out.as_deref(), exec)
        }
        Command::Eval {
            source,
            index,
            grid,
            order,
            out,
        } => {
            let params = source.load()?;
            cmd_eval(&params, &index, &grid, order, out.as_deref(), exec)
        }
        Command::Gram {
            source,
            order,
            nodes,
            tol,
            out,
        } => {
            let params = source.load()?;
            cmd_gram(&params, order, nodes, tol, out.as_deref(), exec)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
