//! Command-line front end: generate instances, solve one model, run the
//! benchmark table, sweep warm-start budgets, and check solution files.
//!
//! Exit codes: 0 success, 2 infeasible, 3 time limit without an incumbent.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fsmvrp::formulations::{build_model, BuildOptions, ModelKind};
use fsmvrp::harness::{
    run_benchmark, sweep_warmstart_budget, write_report, write_sweep_csv, BenchParams, ReportFormat, VariantSpec,
};
use fsmvrp::instance::{default_type_profiles, generate_instance, load_instance, save_instance, DemandProfile};
use fsmvrp::solver::{solve_mip, MipStatus, SolveParams};
use fsmvrp::strengthen::StrengthenConfig;
use fsmvrp::warmstart::{construct_initial, encode_start, lns_improve, load_solution, save_solution};
use fsmvrp::{checker, Instance};

#[derive(Parser)]
#[command(name = "fsmvrp", version, about = "Fleet size and mix split-delivery VRP toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance document
    Gen(GenArgs),
    /// Solve one instance with one model variant
    Solve(SolveArgs),
    /// Run the benchmark table over instances and variants
    Bench(BenchArgs),
    /// Sweep the warm-start budget split on one instance
    Sweep(SweepArgs),
    /// Validate a solution file against an instance
    Check(CheckArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    customers: usize,
    #[arg(long, default_value_t = 2)]
    commodities: usize,
    /// Demand regime: modest | near-truckload | split-heavy
    #[arg(long, default_value = "split-heavy")]
    profile: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct StrengthenArgs {
    /// all, none, or a comma list of cut families
    #[arg(long, default_value = "none")]
    cuts: String,
    /// all, none, or a comma list of symmetry families
    #[arg(long, default_value = "none")]
    symmetry: String,
    /// on/off: farthest-first customer re-indexing
    #[arg(long, default_value = "off")]
    ordering: String,
}

impl StrengthenArgs {
    fn config(&self, kind: ModelKind) -> Result<StrengthenConfig, String> {
        let mut cfg = StrengthenConfig::none();
        cfg.parse_cuts(&self.cuts)?;
        cfg.parse_symmetry(&self.symmetry, kind.fleet, kind.routing)?;
        cfg.reorder_customers = match self.ordering.as_str() {
            "on" | "all" => true,
            "off" | "none" => false,
            other => return Err(format!("unknown ordering {other:?} (use on/off)")),
        };
        Ok(cfg)
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Model kind: sc | sv | fc | ff
    #[arg(long, default_value = "sc")]
    model: String,
    #[command(flatten)]
    strengthen: StrengthenArgs,
    #[arg(long, default_value_t = 900.0)]
    time_limit: f64,
    /// Heuristic seconds before the MIP; omit for a cold start
    #[arg(long)]
    warmstart_budget: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the best solution document here
    #[arg(long)]
    output: Option<PathBuf>,
    /// Export the model in LP text format
    #[arg(long)]
    lp_out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance documents
    #[arg(long, required = true, num_args = 1..)]
    instances: Vec<PathBuf>,
    /// Comma list of model kinds
    #[arg(long, default_value = "sc,sv,fc,ff")]
    models: String,
    #[command(flatten)]
    strengthen: StrengthenArgs,
    #[arg(long, default_value_t = 900.0)]
    time_limit: f64,
    #[arg(long)]
    warmstart_budget: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// csv | markdown
    #[arg(long, default_value = "csv")]
    format: String,
    /// Report deterministic work-based times for reproducible output
    #[arg(long, default_value_t = false)]
    logical_clock: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value = "sc")]
    model: String,
    #[command(flatten)]
    strengthen: StrengthenArgs,
    /// Comma list of heuristic budgets in seconds
    #[arg(long, default_value = "0,1,5")]
    budgets: String,
    /// Total seconds shared by heuristic and MIP
    #[arg(long, default_value_t = 60.0)]
    total: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    solution: PathBuf,
}

fn main() -> ExitCode {
    env_logger::init();
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn read_instance(path: &PathBuf) -> Result<Instance, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    load_instance(&text).map_err(|e| e.to_string())
}

fn parse_kind(code: &str) -> Result<ModelKind, String> {
    ModelKind::parse(code).ok_or_else(|| format!("unknown model {code:?} (expected sc|sv|fc|ff)"))
}

fn emit(path: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen(args) => {
            let profile = match args.profile.as_str() {
                "modest" => DemandProfile::Modest,
                "near-truckload" => DemandProfile::NearTruckload,
                "split-heavy" => DemandProfile::SplitHeavy,
                other => return Err(format!("unknown profile {other:?}")),
            };
            let profiles = default_type_profiles(args.commodities);
            let inst: Instance = generate_instance(args.seed, args.customers, args.commodities, &profiles, profile)
                .map_err(|e| e.to_string())?;
            emit(&args.output, &save_instance(&inst))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve(args) => {
            let inst = read_instance(&args.instance)?;
            let kind = parse_kind(&args.model)?;
            let options = BuildOptions { strengthen: args.strengthen.config(kind)?, ..BuildOptions::default() };
            let built = build_model(&inst, kind, &options).map_err(|e| e.to_string())?;
            if let Some(lp_path) = &args.lp_out {
                fs::write(lp_path, built.model.write_lp()).map_err(|e| e.to_string())?;
            }
            let warm = match args.warmstart_budget {
                Some(budget) => {
                    let sol0 = construct_initial(&built.instance, &built.fleet, args.seed).map_err(|e| e.to_string())?;
                    let sol = lns_improve(&built.instance, &built.fleet, &sol0, budget - sol0.construction_s, args.seed);
                    Some(encode_start(&built, &sol).map_err(|e| e.to_string())?)
                }
                None => None,
            };
            let params = SolveParams { time_limit_s: args.time_limit, seed: args.seed, ..SolveParams::default() };
            let result = solve_mip(&built, &params, warm.as_ref()).map_err(|e| e.to_string())?;
            eprintln!(
                "status {:?}  value {:?}  bound {:.4}  gap {:.4}%  nodes {}  subtour cuts {}  wall {:.2}s",
                result.status,
                result.objective,
                result.bound,
                result.gap * 100.0,
                result.nodes,
                result.subtour_cuts,
                result.wall_s
            );
            match result.status {
                MipStatus::Infeasible => return Ok(ExitCode::from(2)),
                MipStatus::Unknown => return Ok(ExitCode::from(3)),
                _ => {}
            }
            if let Some(assignment) = &result.incumbent {
                let sol = checker::decode_solution(&built, &assignment.values).map_err(|e| e.to_string())?;
                let report = checker::validate_solution(&built.instance, &built.fleet, &sol);
                if !report.pass() {
                    return Err(format!("internal: decoded solution failed validation: {}", report.summary()));
                }
                if args.output.is_some() {
                    emit(&args.output, &save_solution(&built.instance, &sol))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench(args) => {
            let mut instances = Vec::new();
            for path in &args.instances {
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                instances.push((name, read_instance(path)?));
            }
            let mut variants = Vec::new();
            for code in args.models.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let kind = parse_kind(code)?;
                let options = BuildOptions { strengthen: args.strengthen.config(kind)?, ..BuildOptions::default() };
                variants.push(VariantSpec::new(kind, options));
            }
            let params = BenchParams {
                solve: SolveParams { time_limit_s: args.time_limit, seed: args.seed, ..SolveParams::default() },
                logical_clock: args.logical_clock,
                warmstart_budget_s: args.warmstart_budget,
                seed: args.seed,
            };
            let rows = run_benchmark(&instances, &variants, &params).map_err(|e| e.to_string())?;
            let format = match args.format.as_str() {
                "csv" => ReportFormat::Csv,
                "markdown" => ReportFormat::Markdown,
                other => return Err(format!("unknown format {other:?}")),
            };
            emit(&args.output, &write_report(&rows, format).map_err(|e| e.to_string())?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep(args) => {
            let inst = read_instance(&args.instance)?;
            let kind = parse_kind(&args.model)?;
            let options = BuildOptions { strengthen: args.strengthen.config(kind)?, ..BuildOptions::default() };
            let variant = VariantSpec::new(kind, options);
            let budgets: Vec<f64> = args
                .budgets
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            let points =
                sweep_warmstart_budget(&inst, &variant, &budgets, args.total, args.seed).map_err(|e| e.to_string())?;
            emit(&args.output, &write_sweep_csv(&points).map_err(|e| e.to_string())?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check(args) => {
            let inst = read_instance(&args.instance)?;
            let text = fs::read_to_string(&args.solution).map_err(|e| e.to_string())?;
            let sol = load_solution(&inst, &text)?;
            // the document's per-vehicle types are authoritative for capacity
            // and compatibility, which is the flexible-fleet view
            let fleet = fsmvrp::instance::Fleet::Flexible { count: sol.n_vehicles() };
            let report = checker::validate_solution(&inst, &fleet, &sol);
            println!(
                "objective {:.2}\nverdict: {}",
                report.objective,
                if report.pass() { "PASS".to_string() } else { format!("FAIL ({})", report.summary()) }
            );
            if report.pass() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
    }
}
