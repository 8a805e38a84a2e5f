use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use femlearn_core::network::model_to_string;
use femlearn_core::{
    h1_error, l2_error, train_run, CostKind, Error, NetworkParams, Partition, PiecewiseLinear,
    QuadratureConfig, Regime, TrainConfig64, TrainingTrace64, TridiagonalSystem,
};

use crate::output::{parse_numeric_csv, report_csv, solution_csv, write_atomic, ReportRow};
use crate::presets::{self, DEFAULT_RECORD_EVERY, DEFAULT_SEED, PRESETS};
use crate::{plot, Cli, Command, PlotArgs, SolveArgs, TableArgs, TrainArgs};
use crate::{EXIT_DIVERGENCE, EXIT_IO, EXIT_USAGE};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(Error::Divergence { .. }) => EXIT_DIVERGENCE,
            CliError::Core(Error::Io(_) | Error::Parse { .. }) => EXIT_IO,
            CliError::Core(_) => EXIT_USAGE,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Runs one command, writing human-readable output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Solve(a) => solve_cmd(&a, out),
        Command::Train(a) => train_cmd(&a, out),
        Command::Table(a) => table_cmd(&a, out),
        Command::Plot(a) => plot_cmd(&a, out),
        Command::Presets => presets_cmd(out),
    }
}

/// Discrete solution and its L2 / H1-seminorm errors.
pub struct Discrete {
    pub partition: Partition<f64>,
    pub solution: PiecewiseLinear<f64>,
    pub l2: f64,
    pub h1: f64,
}

pub fn discrete_solution(eps: f64, n: usize, kind: CostKind) -> femlearn_core::Result<Discrete> {
    let partition = Partition::uniform(n)?;
    let solution = TridiagonalSystem::assemble(&partition, eps, kind)?
        .solve()?
        .to_piecewise_linear();
    let q = QuadratureConfig::default();
    Ok(Discrete {
        l2: l2_error(&solution, eps, &q),
        h1: h1_error(&solution, eps, &q),
        partition,
        solution,
    })
}

fn solve_cmd(a: &SolveArgs, out: &mut dyn Write) -> CliResult<()> {
    let kind = CostKind::from(a.method);
    let d = discrete_solution(a.eps, a.n, kind)?;
    write_atomic(
        &a.out,
        solution_csv(&d.partition, a.eps, &d.solution).as_bytes(),
    )?;
    let _ = writeln!(
        out,
        "method={kind} eps={} n={} l2={:.6e} h1={:.6e}",
        a.eps, a.n, d.l2, d.h1
    );
    Ok(())
}

pub fn default_train_config() -> TrainConfig64 {
    TrainConfig64 {
        n: 20,
        eps: 0.1,
        kind: CostKind::Galerkin,
        regime: Regime::FeInitFrozen,
        eta: 1e-6,
        n_iter: 1_000,
        beta: 0.0,
        seed: DEFAULT_SEED,
        record_every: DEFAULT_RECORD_EVERY,
    }
}

/// Defaults, then the preset, then explicit flags. Returns the config and a
/// label for the output directory.
pub fn resolve_train_config(a: &TrainArgs) -> CliResult<(TrainConfig64, String)> {
    let (mut cfg, label) = match &a.preset {
        Some(name) => {
            let p = presets::find(name).ok_or_else(|| {
                let known: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
                CliError::Usage(format!(
                    "unknown preset `{name}` (known: {})",
                    known.join(", ")
                ))
            })?;
            (p.config.clone(), p.name.to_string())
        }
        None => (default_train_config(), "train".to_string()),
    };
    if let Some(v) = a.regime {
        cfg.regime = v.into();
    }
    if let Some(v) = a.n {
        cfg.n = v;
    }
    if let Some(v) = a.eps {
        cfg.eps = v;
    }
    if let Some(v) = a.cost {
        cfg.kind = v.into();
    }
    if let Some(v) = a.eta {
        cfg.eta = v;
    }
    if let Some(v) = a.iters {
        cfg.n_iter = v;
    }
    if let Some(v) = a.beta {
        cfg.beta = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.record_every {
        cfg.record_every = v;
    }
    cfg.validate()?;
    Ok((cfg, label))
}

pub fn format_config(cfg: &TrainConfig64, out_dir: &Path) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "regime = {}", cfg.regime);
    let _ = writeln!(s, "cost = {}", cfg.kind);
    let _ = writeln!(s, "eps = {:e}", cfg.eps);
    let _ = writeln!(s, "n = {}", cfg.n);
    let _ = writeln!(s, "eta = {:e}", cfg.eta);
    let _ = writeln!(s, "iters = {}", cfg.n_iter);
    let _ = writeln!(s, "beta = {:e}", cfg.beta);
    let _ = writeln!(s, "seed = {}", cfg.seed);
    let _ = writeln!(s, "record_every = {}", cfg.record_every);
    let _ = writeln!(s, "out = {}", out_dir.display());
    s
}

pub struct TrainOutcome {
    pub config: TrainConfig64,
    pub params: NetworkParams<f64>,
    pub trace: TrainingTrace64,
    pub final_cost: f64,
    pub l2: f64,
    pub h1: f64,
}

pub fn train(cfg: &TrainConfig64) -> femlearn_core::Result<TrainOutcome> {
    let (params, trace) = train_run(cfg)?;
    let pl = params.to_piecewise_linear();
    let q = QuadratureConfig::default();
    Ok(TrainOutcome {
        config: cfg.clone(),
        final_cost: trace.final_cost().expect("at least one recorded iteration"),
        l2: l2_error(&pl, cfg.eps, &q),
        h1: h1_error(&pl, cfg.eps, &q),
        params,
        trace,
    })
}

/// Writes `model.txt`, `trace.csv` and `solution.csv` into `dir`.
pub fn write_train_outputs(o: &TrainOutcome, dir: &Path) -> femlearn_core::Result<()> {
    let p = Partition::uniform(o.config.n)?;
    write_atomic(
        &dir.join("model.txt"),
        model_to_string(&o.params).as_bytes(),
    )?;
    write_atomic(&dir.join("trace.csv"), o.trace.to_csv_string().as_bytes())?;
    let pl = o.params.to_piecewise_linear();
    write_atomic(
        &dir.join("solution.csv"),
        solution_csv(&p, o.config.eps, &pl).as_bytes(),
    )?;
    Ok(())
}

fn train_cmd(a: &TrainArgs, out: &mut dyn Write) -> CliResult<()> {
    let (cfg, label) = resolve_train_config(a)?;
    let dir = a
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("runs").join(&label));
    if a.dump_config {
        let _ = write!(out, "{}", format_config(&cfg, &dir));
        return Ok(());
    }
    let o = train(&cfg)?;
    write_train_outputs(&o, &dir)?;
    let reference = discrete_solution(cfg.eps, cfg.n, cfg.kind)?;
    let _ = writeln!(
        out,
        "{label}: iters={} final_cost={:.6e} l2={:.6e} h1={:.6e} (discrete l2={:.6e} h1={:.6e}) -> {}",
        cfg.n_iter,
        o.final_cost,
        o.l2,
        o.h1,
        reference.l2,
        reference.h1,
        dir.display()
    );
    Ok(())
}

/// (N, iterations, learning rate) for the network columns of each table.
pub const TABLE1_BUDGETS: [(usize, usize, f64); 3] = [
    (20, 200_000, 1e-6),
    (40, 500_000, 1e-7),
    (100, 500_000, 1e-8),
];
pub const TABLE2_BUDGETS: [(usize, usize, f64); 3] = [
    (20, 1_000_000, 1e-6),
    (40, 2_000_000, 1e-7),
    (100, 400_000, 1e-9),
];

/// Problem setup for table 1 or 2.
pub fn table_setup(which: u8) -> (f64, CostKind, &'static str, [(usize, usize, f64); 3]) {
    match which {
        1 => (0.1, CostKind::Galerkin, "FEM", TABLE1_BUDGETS),
        _ => (0.001, CostKind::Supg, "SUPG", TABLE2_BUDGETS),
    }
}

/// One row per N. The network jobs run on separate threads with seed
/// `seed + N`.
pub fn table_rows(
    which: u8,
    seed: u64,
    iters: Option<usize>,
) -> femlearn_core::Result<Vec<ReportRow>> {
    let (eps, kind, method, budgets) = table_setup(which);
    std::thread::scope(|s| {
        let jobs: Vec<_> = budgets
            .iter()
            .map(|&(n, n_iter, eta)| {
                s.spawn(move || -> femlearn_core::Result<ReportRow> {
                    let d = discrete_solution(eps, n, kind)?;
                    let n_iter = iters.unwrap_or(n_iter);
                    let cfg = TrainConfig64 {
                        n,
                        eps,
                        kind,
                        regime: Regime::FeInitFrozen,
                        eta,
                        n_iter,
                        beta: 0.0,
                        seed: seed.wrapping_add(n as u64),
                        record_every: n_iter.max(1),
                    };
                    let o = train(&cfg)?;
                    Ok(ReportRow {
                        method,
                        n,
                        l2_ref: d.l2,
                        h1_ref: d.h1,
                        l2_nn: o.l2,
                        h1_nn: o.h1,
                    })
                })
            })
            .collect();
        jobs.into_iter()
            .map(|j| j.join().expect("table job panicked"))
            .collect()
    })
}

fn table_cmd(a: &TableArgs, out: &mut dyn Write) -> CliResult<()> {
    let rows = table_rows(a.which, a.seed, a.iters)?;
    let path = a
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("table{}.csv", a.which)));
    let csv = report_csv(&rows);
    write_atomic(&path, csv.as_bytes())?;
    let _ = write!(out, "{csv}");
    Ok(())
}

fn plot_cmd(a: &PlotArgs, out: &mut dyn Write) -> CliResult<()> {
    let text = fs::read_to_string(&a.input)?;
    let table = parse_numeric_csv(&text)?;
    let svg = plot::render_csv(&table)?;
    let path = a
        .out
        .clone()
        .unwrap_or_else(|| a.input.with_extension("svg"));
    write_atomic(&path, svg.as_bytes())?;
    let _ = writeln!(out, "{}", path.display());
    Ok(())
}

fn presets_cmd(out: &mut dyn Write) -> CliResult<()> {
    let _ = writeln!(
        out,
        "{:<7} {:<3} {:<9} {:>6} {:>4} {:>8} {:>6} {:>6}  description",
        "name", "reg", "cost", "eps", "N", "iters", "eta", "beta"
    );
    for p in &PRESETS {
        let c = &p.config;
        let _ = writeln!(
            out,
            "{:<7} {:<3} {:<9} {:>6} {:>4} {:>8} {:>6.0e} {:>6.0e}  {}",
            p.name, c.regime, c.kind, c.eps, c.n, c.n_iter, c.eta, c.beta, p.summary
        );
    }
    Ok(())
}
