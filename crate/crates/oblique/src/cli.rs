//! Command-line interface. Each command writes one JSON document; progress
//! goes to stderr.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use oblique_core::channels::{decompose_fixed_point, is_fixed_point, ObliqueChannel, ResidualNorm};
use oblique_core::conjecture::{DimsSummary, SearchConfig, HISTOGRAM_EDGES};
use oblique_core::measures::{
    discord_info, evaluate, fixed_point_search, oblique_geometric, MeasureKind, MeasureResult,
    OptimizerConfig,
};
use oblique_core::states::hierarchy_witnesses;

use crate::config::{read_settings, OptimizerEcho, OptimizerSettings, SearchEcho, SearchSettings};
use crate::error::CliError;
use crate::formats::{
    matrix_json, read_basis, read_state, to_pretty, vectors_json, BasisJson, Pair, StateJson,
    FORMAT_VERSION,
};
use crate::search::{
    analyze, default_threads, ensure_writable, read_logs, run_search, RecordJson, Shard,
};

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CANDIDATE: i32 = 2;
pub const EXIT_REGRESSION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "oblique",
    version,
    about = "Oblique discord computations with JSON input and output"
)]
pub struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dual basis, Gram matrix and conditioning of a basis file.
    DualBasis {
        basis: PathBuf,
        #[arg(long)]
        condition_cap: Option<f64>,
    },
    /// Whether a state is a fixed point of an oblique channel.
    CheckZod(CheckZodArgs),
    /// Evaluate one measure on a state file.
    Measure(MeasureArgs),
    /// Check the witnesses of the strict hierarchy.
    HierarchyDemo(DemoArgs),
    /// Search for states and channels with I(ρ) < I(Φρ).
    Conjecture(ConjectureArgs),
}

#[derive(Debug, Default, Args)]
pub struct OptimizerFlags {
    /// JSON file with optimizer settings; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Objective spread at which a simplex is converged.
    #[arg(long)]
    pub opt_tolerance: Option<f64>,
    #[arg(long)]
    pub initial_scale: Option<f64>,
    #[arg(long)]
    pub condition_cap: Option<f64>,
    /// Restrict oblique searches to orthonormal bases.
    #[arg(long)]
    pub orthonormal: bool,
}

impl OptimizerFlags {
    fn settings(&self) -> OptimizerSettings {
        OptimizerSettings {
            restarts: self.restarts,
            max_iterations: self.max_iterations,
            tolerance: self.opt_tolerance,
            initial_scale: self.initial_scale,
            seed: self.seed,
            condition_cap: self.condition_cap,
            orthonormal_only: self.orthonormal.then_some(true),
        }
    }

    fn resolve(&self, defaults: &OptimizerConfig) -> Result<OptimizerConfig, CliError> {
        let file: OptimizerSettings = read_settings(self.config.as_deref())?;
        self.settings().over(file).resolve(defaults)
    }
}

#[derive(Debug, Args)]
pub struct CheckZodArgs {
    pub state: PathBuf,
    /// Basis file for the channel.
    #[arg(long, conflicts_with = "search", required_unless_present = "search")]
    pub basis: Option<PathBuf>,
    /// Search this many random starts for a fixing channel.
    #[arg(long)]
    pub search: Option<usize>,
    /// Largest max-norm residual accepted as a fixed point.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    /// Subsystem the channel acts on.
    #[arg(long, default_value_t = 0)]
    pub target: usize,
    #[command(flatten)]
    pub optimizer: OptimizerFlags,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// One of discord, discord-geo, discord-global, discord-global-geo,
    /// d-go, d-go1, d-o, d-go-global, d-o-global.
    pub name: String,
    pub state: PathBuf,
    #[command(flatten)]
    pub optimizer: OptimizerFlags,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Restarts for the discord values.
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    /// Restarts for the geometric oblique discord.
    #[arg(long, default_value_t = 64)]
    pub go_restarts: usize,
    /// Random starts of the fixed-point search for witnesses without a basis.
    #[arg(long, default_value_t = 10_000)]
    pub starts: usize,
    /// Nelder–Mead iterations per fixed-point search start.
    #[arg(long, default_value_t = 200)]
    pub search_iterations: usize,
    /// Largest fixed-point residual or measure value counted as zero.
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    /// Objective spread at which a simplex is converged.
    #[arg(long, default_value_t = 1e-14)]
    pub opt_tolerance: f64,
    /// Nelder–Mead iterations per restart for the measures.
    #[arg(long, default_value_t = 5000)]
    pub max_iterations: usize,
}

#[derive(Debug, Args)]
pub struct ConjectureArgs {
    /// JSON file with search settings; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Dims to sweep, e.g. `2x2`; repeatable.
    #[arg(long = "dims", value_parser = parse_dims)]
    pub dims: Vec<Vec<usize>>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub orthonormal: bool,
    /// JSONL log path.
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Run only shard `k/M` (indices ≡ k mod M).
    #[arg(long)]
    pub shard: Option<Shard>,
    /// Worker threads; defaults to `OBLIQUE_THREADS` or 1.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Summarize these logs instead of searching; repeatable.
    #[arg(long)]
    pub merge: Vec<PathBuf>,
}

fn parse_dims(s: &str) -> Result<Vec<usize>, String> {
    s.split(['x', ','])
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad dims `{s}`"))
        })
        .collect()
}

/// Parses `args` and runs the command; returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok((text, code)) => match &cli.output {
            Some(path) => match std::fs::write(path, text) {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: {}: {e}", path.display());
                    EXIT_INPUT
                }
            },
            None => {
                print!("{text}");
                code
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

/// Runs a parsed command, returning its JSON text and exit code.
pub fn run(cli: &Cli) -> Result<(String, i32), CliError> {
    match &cli.command {
        Command::DualBasis {
            basis,
            condition_cap,
        } => dual_basis(basis, *condition_cap),
        Command::CheckZod(a) => check_zod(a),
        Command::Measure(a) => measure(a),
        Command::HierarchyDemo(a) => hierarchy_demo(a),
        Command::Conjecture(a) => conjecture(a),
    }
}

#[derive(Serialize)]
struct DualBasisOut {
    v: u32,
    command: &'static str,
    dim: usize,
    vectors: Vec<Vec<Pair>>,
    duals: Vec<Vec<Pair>>,
    gram: Vec<Vec<Pair>>,
    condition: f64,
    biorthogonality_residual: f64,
    config: BTreeMap<&'static str, f64>,
}

fn dual_basis(path: &PathBuf, cap: Option<f64>) -> Result<(String, i32), CliError> {
    let cap = cap.unwrap_or(oblique_core::channels::DEFAULT_CONDITION_CAP);
    let b = read_basis(path, cap)?;
    let out = DualBasisOut {
        v: FORMAT_VERSION,
        command: "dual-basis",
        dim: b.dim(),
        vectors: vectors_json(b.vectors()),
        duals: vectors_json(b.duals()),
        gram: matrix_json(&b.gram()),
        condition: b.condition(),
        biorthogonality_residual: b.biorthogonality_residual(),
        config: BTreeMap::from([("condition_cap", cap)]),
    };
    Ok((to_pretty(&out), EXIT_OK))
}

#[derive(Serialize)]
struct ComponentOut {
    index: usize,
    weight: f64,
    conditional: StateJson,
}

#[derive(Serialize)]
struct CheckZodConfig {
    mode: &'static str,
    tolerance: f64,
    target: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimizer: Option<OptimizerEcho>,
}

#[derive(Serialize)]
struct CheckZodOut {
    v: u32,
    command: &'static str,
    verdict: bool,
    residual: f64,
    basis: Option<BasisJson>,
    decomposition: Option<Vec<ComponentOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_start_residuals: Option<Vec<f64>>,
    config: CheckZodConfig,
}

fn check_zod(a: &CheckZodArgs) -> Result<(String, i32), CliError> {
    let rho = read_state(&a.state)?;
    if a.target >= rho.num_subsystems() {
        return Err(oblique_core::Error::InvalidSubsystem {
            index: a.target,
            count: rho.num_subsystems(),
        }
        .into());
    }
    if rho.num_subsystems() < 2 {
        return Err(CliError::Input(
            "check-zod needs at least two subsystems".into(),
        ));
    }
    let (basis, residual, per_start, optimizer, mode) = match (&a.basis, a.search) {
        (Some(path), _) => {
            let cfg = a.optimizer.resolve(&OptimizerConfig::default())?;
            let basis = read_basis(path, cfg.condition_cap)?;
            let check = is_fixed_point(
                &ObliqueChannel::new(a.target, basis.clone()),
                &rho,
                a.tolerance,
            )?;
            (Some(basis), check.residual, None, None, "basis")
        }
        (None, Some(starts)) => {
            let defaults = OptimizerConfig {
                restarts: starts,
                ..OptimizerConfig::default()
            };
            let mut cfg = a.optimizer.resolve(&defaults)?;
            cfg.restarts = starts;
            cfg.validate()?;
            let found = fixed_point_search(&rho, a.target, ResidualNorm::Max, &cfg)?;
            (
                found.basis,
                found.residual,
                Some(found.per_start_residuals),
                Some(OptimizerEcho::from(&cfg)),
                "search",
            )
        }
        (None, None) => {
            return Err(CliError::Usage(
                "either --basis or --search is required".into(),
            ))
        }
    };
    let verdict = residual <= a.tolerance;
    let decomposition = match (&basis, verdict) {
        (Some(b), true) => decompose_fixed_point(&ObliqueChannel::new(a.target, b.clone()), &rho)
            .ok()
            .map(|cs| {
                cs.into_iter()
                    .map(|c| ComponentOut {
                        index: c.index,
                        weight: c.weight,
                        conditional: StateJson::from_state(&c.state),
                    })
                    .collect()
            }),
        _ => None,
    };
    let out = CheckZodOut {
        v: FORMAT_VERSION,
        command: "check-zod",
        verdict,
        residual,
        basis: basis.as_ref().map(BasisJson::from_basis),
        decomposition,
        per_start_residuals: per_start,
        config: CheckZodConfig {
            mode,
            tolerance: a.tolerance,
            target: a.target,
            optimizer,
        },
    };
    Ok((to_pretty(&out), EXIT_OK))
}

#[derive(Serialize)]
struct BestBasisOut {
    subsystems: Vec<BasisJson>,
}

#[derive(Serialize)]
pub(crate) struct MeasureOut {
    v: u32,
    command: &'static str,
    measure: &'static str,
    value: f64,
    units: &'static str,
    converged: bool,
    restarts: usize,
    best_basis: BestBasisOut,
    best_parameters: Vec<f64>,
    per_restart: Vec<f64>,
    seed: u64,
    counterexample_candidate: bool,
    config: OptimizerEcho,
}

impl MeasureOut {
    fn new(r: &MeasureResult, config: &OptimizerConfig) -> Self {
        Self {
            v: FORMAT_VERSION,
            command: "measure",
            measure: r.kind.name(),
            value: r.value,
            units: if r.kind.is_information() {
                "bits"
            } else {
                "hs_squared"
            },
            converged: r.converged,
            restarts: r.restarts_used,
            best_basis: BestBasisOut {
                subsystems: r.best_bases.iter().map(BasisJson::from_basis).collect(),
            },
            best_parameters: r.best_parameters.clone(),
            per_restart: r.per_restart_values.clone(),
            seed: r.seed.0,
            counterexample_candidate: r.counterexample_candidate,
            config: config.into(),
        }
    }
}

fn measure(a: &MeasureArgs) -> Result<(String, i32), CliError> {
    let kind: MeasureKind = a.name.parse()?;
    let config = a.optimizer.resolve(&OptimizerConfig::default())?;
    let rho = read_state(&a.state)?;
    let r = evaluate(kind, &rho, &config)?;
    Ok((to_pretty(&MeasureOut::new(&r, &config)), EXIT_OK))
}

#[derive(Serialize)]
struct WitnessOut {
    label: &'static str,
    description: &'static str,
    state: StateJson,
    discord: f64,
    d_go: f64,
    d_go_per_restart_min: f64,
    d_go_per_restart_max: f64,
    fixed_point_residual: f64,
    residual_source: &'static str,
    basis: Option<BasisJson>,
    expected: [&'static str; 2],
    observed: [&'static str; 2],
    ok: bool,
}

#[derive(Serialize)]
struct DemoConfig {
    seed: u64,
    restarts: usize,
    go_restarts: usize,
    starts: usize,
    search_iterations: usize,
    tolerance: f64,
    opt_tolerance: f64,
    max_iterations: usize,
    discord_positive: f64,
    oblique_positive: f64,
}

#[derive(Serialize)]
struct DemoOut {
    v: u32,
    command: &'static str,
    pattern_ok: bool,
    witnesses: Vec<WitnessOut>,
    config: DemoConfig,
}

/// Thresholds separating "positive" from "zero" in the hierarchy report.
const DISCORD_POSITIVE: f64 = 0.01;
const OBLIQUE_POSITIVE: f64 = 1e-3;

fn hierarchy_demo(a: &DemoArgs) -> Result<(String, i32), CliError> {
    let base = OptimizerConfig {
        restarts: a.restarts,
        max_iterations: a.max_iterations,
        tolerance: a.opt_tolerance,
        seed: oblique_core::states::RngSeed(a.seed),
        ..OptimizerConfig::default()
    };
    base.validate()?;
    let go_config = OptimizerConfig {
        restarts: a.go_restarts,
        ..base
    };
    let search_config = OptimizerConfig {
        restarts: a.starts,
        max_iterations: a.search_iterations,
        tolerance: OptimizerConfig::default().tolerance,
        ..base
    };
    let expected = [
        ["zero", "zero"],
        ["positive", "zero"],
        ["positive", "positive"],
    ];
    let mut witnesses = Vec::new();
    for (w, expected) in hierarchy_witnesses().into_iter().zip(expected) {
        let discord = discord_info(&w.state, &base)?.value;
        let go = oblique_geometric(&w.state, &go_config)?;
        let (residual, source, basis) = match &w.basis {
            Some(b) => {
                let check =
                    is_fixed_point(&ObliqueChannel::new(0, b.clone()), &w.state, a.tolerance)?;
                (check.residual, "witness_basis", Some(b.clone()))
            }
            None => {
                let found = fixed_point_search(&w.state, 0, ResidualNorm::Max, &search_config)?;
                (found.residual, "search", found.basis)
            }
        };
        let go_min = go
            .per_restart_values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let go_max = go
            .per_restart_values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let discord_class = if discord > DISCORD_POSITIVE {
            "positive"
        } else if discord.abs() <= a.tolerance {
            "zero"
        } else {
            "indeterminate"
        };
        let oblique_class = if residual > OBLIQUE_POSITIVE && go.value > OBLIQUE_POSITIVE {
            "positive"
        } else if residual <= a.tolerance && go.value.abs() <= a.tolerance {
            "zero"
        } else {
            "indeterminate"
        };
        let observed = [discord_class, oblique_class];
        witnesses.push(WitnessOut {
            label: w.label,
            description: w.description,
            state: StateJson::from_state(&w.state),
            discord,
            d_go: go.value,
            d_go_per_restart_min: go_min,
            d_go_per_restart_max: go_max,
            fixed_point_residual: residual,
            residual_source: source,
            basis: basis.as_ref().map(BasisJson::from_basis),
            expected,
            observed,
            ok: observed == expected,
        });
    }
    let pattern_ok = witnesses.iter().all(|w| w.ok);
    let out = DemoOut {
        v: FORMAT_VERSION,
        command: "hierarchy-demo",
        pattern_ok,
        witnesses,
        config: DemoConfig {
            seed: a.seed,
            restarts: a.restarts,
            go_restarts: a.go_restarts,
            starts: a.starts,
            search_iterations: a.search_iterations,
            tolerance: a.tolerance,
            opt_tolerance: a.opt_tolerance,
            max_iterations: a.max_iterations,
            discord_positive: DISCORD_POSITIVE,
            oblique_positive: OBLIQUE_POSITIVE,
        },
    };
    let code = if pattern_ok { EXIT_OK } else { EXIT_REGRESSION };
    Ok((to_pretty(&out), code))
}

#[derive(Serialize)]
struct DimsOut {
    dims: Vec<usize>,
    records: usize,
    below_threshold: usize,
    min_delta_i: f64,
    min_record: RecordJson,
    histogram: Vec<usize>,
}

impl From<&DimsSummary> for DimsOut {
    fn from(d: &DimsSummary) -> Self {
        Self {
            dims: d.dims.clone(),
            records: d.records,
            below_threshold: d.below_threshold,
            min_delta_i: d.min.delta_i,
            min_record: RecordJson::new(&d.min, None),
            histogram: d.histogram.clone(),
        }
    }
}

#[derive(Serialize)]
struct CertificateOut {
    record: RecordJson,
    state: StateJson,
    basis: BasisJson,
    duals: Vec<Vec<Pair>>,
    delta_i: f64,
    delta_i_by_clamp: Vec<[f64; 2]>,
    compensated_summation: bool,
    biorthogonality_residual: f64,
    condition: f64,
    state_min_eigenvalue: f64,
    output_min_eigenvalue: f64,
    state_hermitian_residual: f64,
    state_trace_residual: f64,
}

#[derive(Serialize)]
struct CandidatesOut {
    below_threshold: usize,
    certified: usize,
    rejected: BTreeMap<String, usize>,
    best_certificate: Option<CertificateOut>,
}

#[derive(Serialize)]
struct ConjectureOut {
    v: u32,
    command: &'static str,
    samples: usize,
    records: usize,
    global_min: Option<RecordJson>,
    histogram_edges: Vec<f64>,
    per_dims: Vec<DimsOut>,
    candidates: CandidatesOut,
    exit_code: i32,
    config: ConjectureConfigOut,
}

#[derive(Serialize)]
struct ConjectureConfigOut {
    #[serde(flatten)]
    search: SearchEcho,
    shard: Shard,
    merged_logs: Vec<PathBuf>,
}

fn conjecture(a: &ConjectureArgs) -> Result<(String, i32), CliError> {
    let file: SearchSettings = read_settings(a.config.as_deref())?;
    let flags = SearchSettings {
        dims: (!a.dims.is_empty()).then(|| a.dims.clone()),
        samples_per_dims: a.samples,
        seed: a.seed,
        max_iterations: a.max_iterations,
        threshold: a.threshold,
        orthonormal_only: a.orthonormal.then_some(true),
        output: a.log.clone(),
        ..SearchSettings::default()
    };
    let (config, log): (SearchConfig, PathBuf) = flags.over(file).resolve()?;
    let shard = a.shard.unwrap_or_default();
    let records = if a.merge.is_empty() {
        ensure_writable(&log)?;
        let threads = a.threads.unwrap_or_else(default_threads);
        run_search(&config, &log, shard, threads, |done, total| {
            if done == total || done % 1000 < (threads as u64 * 8) {
                eprintln!("conjecture: {done}/{total} samples");
            }
        })?
    } else {
        read_logs(&a.merge)?
    };
    let analysis = analyze(&config, &records);
    let code = if analysis.certified > 0 {
        EXIT_CANDIDATE
    } else {
        EXIT_OK
    };
    let best_certificate = analysis.best.as_ref().map(|(r, c)| CertificateOut {
        record: RecordJson::new(r, None),
        state: StateJson::from_state(&c.state),
        basis: BasisJson::from_basis(&c.basis),
        duals: vectors_json(c.basis.duals()),
        delta_i: c.delta_i,
        delta_i_by_clamp: c.delta_i_by_clamp.iter().map(|&(k, v)| [k, v]).collect(),
        compensated_summation: c.compensated_summation,
        biorthogonality_residual: c.biorthogonality_residual,
        condition: c.condition,
        state_min_eigenvalue: c.state_validity.min_eigenvalue,
        output_min_eigenvalue: c.output_validity.min_eigenvalue,
        state_hermitian_residual: c.state_validity.hermitian_residual,
        state_trace_residual: c.state_validity.trace_residual,
    });
    let out = ConjectureOut {
        v: FORMAT_VERSION,
        command: "conjecture",
        samples: analysis.samples,
        records: analysis.summary.records,
        global_min: analysis
            .summary
            .global_min
            .as_ref()
            .map(|r| RecordJson::new(r, None)),
        histogram_edges: HISTOGRAM_EDGES.to_vec(),
        per_dims: analysis
            .summary
            .per_dims
            .iter()
            .map(DimsOut::from)
            .collect(),
        candidates: CandidatesOut {
            below_threshold: analysis.summary.below_threshold,
            certified: analysis.certified,
            rejected: analysis.rejected,
            best_certificate,
        },
        exit_code: code,
        config: ConjectureConfigOut {
            search: SearchEcho::new(&config, &log),
            shard,
            merged_logs: a.merge.clone(),
        },
    };
    Ok((to_pretty(&out), code))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_flag() {
        assert_eq!(parse_dims("2x3").unwrap(), vec![2, 3]);
        assert_eq!(parse_dims("2,2,2").unwrap(), vec![2, 2, 2]);
        assert!(parse_dims("2xa").is_err());
    }

    #[test]
    fn only_help_and_version_use_stdout() {
        let e = Cli::try_parse_from(["oblique", "measure", "--bogus"]).unwrap_err();
        assert!(e.use_stderr());
        let e = Cli::try_parse_from(["oblique", "--help"]).unwrap_err();
        assert!(!e.use_stderr());
    }
}
