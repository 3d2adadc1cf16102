mod config;
mod scenario;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use campopt_core::{influence_vector, iterate_dynamics, steady_state, verify};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use config::{resolve, Config, ConfigError, ScenarioArgs};
use scenario::{load_dataset, run_setting, Dataset, Outcome, RunError};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Parser)]
#[command(
    name = "camp-opt",
    version,
    about = "Optimal investment strategies for two competing camps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one setting and write report.json and allocations.csv.
    Run(ScenarioArgs),
    /// Simulate the opinion dynamics under a setting's optimal strategies.
    Trajectory(ScenarioArgs),
    /// Run the oracle cross-checks.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Print summary statistics of a dataset.
    Info(ScenarioArgs),
}

#[derive(Serialize)]
struct NetworkSummary {
    dataset: String,
    nodes: usize,
    edges: usize,
    weights: &'static str,
    influence_method: Option<Value>,
    influence_residual: Option<f64>,
    bias_term: Option<f64>,
}

#[derive(Serialize)]
struct Allocations<'a> {
    x: &'a [f64],
    y: &'a [f64],
}

#[derive(Serialize)]
struct ErrorInfo {
    code: &'static str,
    message: String,
}

#[derive(Serialize)]
struct Report<'a> {
    setting: &'a str,
    config: &'a Config,
    network: NetworkSummary,
    values: BTreeMap<String, Value>,
    allocations: Option<Allocations<'a>>,
    diagnostics: BTreeMap<String, Value>,
    error: Option<ErrorInfo>,
}

fn summary(cfg: &Config, ds: &Dataset) -> NetworkSummary {
    let r = influence_vector(&ds.net).ok();
    NetworkSummary {
        dataset: cfg.dataset.clone(),
        nodes: ds.net.n(),
        edges: ds.edges,
        weights: if cfg.alpha.is_some() {
            "weighted-class"
        } else {
            "generated"
        },
        influence_method: r.as_ref().and_then(|r| serde_json::to_value(r.method).ok()),
        influence_residual: r.as_ref().map(|r| r.residual),
        bias_term: ds.net.bias_term().ok(),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), ConfigError> {
    fs::write(path, contents)
        .map_err(|e| ConfigError::new(format!("cannot write {}: {e}", path.display())))
}

fn write_report(cfg: &Config, report: &Report) -> Result<(), ConfigError> {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    write_file(&Path::new(&cfg.out_dir).join("report.json"), &text)
}

fn allocations_csv(ds: &Dataset, out: &Outcome) -> Result<String, campopt_core::Error> {
    let net = &ds.net;
    let r = influence_vector(net)?;
    let sg = net.good_scores()?;
    let sb = net.bad_scores()?;
    let v = steady_state(net, &out.x, &out.y)?;
    let mut s = String::from("node,x,y,r,r_wg,r_wb,v_final\n");
    for i in 0..net.n() {
        writeln!(
            s,
            "{},{},{},{},{},{},{}",
            ds.ids[i], out.x[i], out.y[i], r[i], sg[i], sb[i], v.v[i]
        )
        .unwrap();
    }
    Ok(s)
}

fn prepare(
    args: &ScenarioArgs,
    default_setting: Option<&str>,
    need_setting: bool,
) -> Result<(Config, Dataset), ConfigError> {
    let cfg = resolve(args, default_setting, need_setting)?;
    let ds = load_dataset(&cfg)?;
    Ok((cfg, ds))
}

fn ensure_out_dir(cfg: &Config) -> Result<(), ConfigError> {
    fs::create_dir_all(&cfg.out_dir)
        .map_err(|e| ConfigError::new(format!("cannot create {}: {e}", cfg.out_dir)))
}

fn config_failure(e: ConfigError) -> ExitCode {
    eprintln!("{e}");
    ExitCode::from(EXIT_CONFIG)
}

fn cmd_run(args: &ScenarioArgs) -> ExitCode {
    let (cfg, ds) = match prepare(args, None, true).and_then(|p| ensure_out_dir(&p.0).map(|_| p)) {
        Ok(p) => p,
        Err(e) => return config_failure(e),
    };
    let mut report = Report {
        setting: &cfg.setting,
        config: &cfg,
        network: summary(&cfg, &ds),
        values: BTreeMap::new(),
        allocations: None,
        diagnostics: BTreeMap::new(),
        error: None,
    };
    let solver_failure = |report: &mut Report, e: campopt_core::Error| {
        eprintln!("solver error {}: {e}", e.code());
        report.error = Some(ErrorInfo {
            code: e.code(),
            message: e.to_string(),
        });
    };
    let out = match run_setting(&cfg, &ds) {
        Ok(o) => o,
        Err(RunError::Config(e)) => return config_failure(e),
        Err(RunError::Solver(e)) => {
            solver_failure(&mut report, e);
            return match write_report(&cfg, &report) {
                Ok(()) => ExitCode::from(EXIT_SOLVER),
                Err(e) => config_failure(e),
            };
        }
    };
    let csv = match allocations_csv(&ds, &out) {
        Ok(c) => Some(c),
        Err(e) => {
            solver_failure(&mut report, e);
            None
        }
    };
    report.values = out.values.clone();
    report.diagnostics = out.diagnostics.clone();
    let total = |v: &[f64]| v.iter().sum::<f64>();
    report
        .diagnostics
        .insert("x_total".into(), total(&out.x).into());
    report
        .diagnostics
        .insert("y_total".into(), total(&out.y).into());
    report.allocations = Some(Allocations {
        x: &out.x,
        y: &out.y,
    });
    let failed = report.error.is_some();
    if let Err(e) = write_report(&cfg, &report) {
        return config_failure(e);
    }
    if let Some(csv) = csv {
        if let Err(e) = write_file(&Path::new(&cfg.out_dir).join("allocations.csv"), &csv) {
            return config_failure(e);
        }
    }
    if failed {
        return ExitCode::from(EXIT_SOLVER);
    }
    for (k, v) in &report.values {
        println!("{k} = {v}");
    }
    ExitCode::SUCCESS
}

fn cmd_trajectory(args: &ScenarioArgs) -> ExitCode {
    let (cfg, ds) = match prepare(args, Some("fundamental"), true)
        .and_then(|p| ensure_out_dir(&p.0).map(|_| p))
    {
        Ok(p) => p,
        Err(e) => return config_failure(e),
    };
    let solver_failure = |e: campopt_core::Error| {
        eprintln!("solver error {}: {e}", e.code());
        ExitCode::from(EXIT_SOLVER)
    };
    let out = match run_setting(&cfg, &ds) {
        Ok(o) => o,
        Err(RunError::Config(e)) => return config_failure(e),
        Err(RunError::Solver(e)) => return solver_failure(e),
    };
    let traj = match iterate_dynamics(&ds.net, &out.x, &out.y, cfg.tau_max, cfg.tol) {
        Ok(t) => t,
        Err(e) => return solver_failure(e.into()),
    };
    let mut opinions = String::from("tau,node,opinion\n");
    let mut sums = String::from("tau,sum\n");
    for s in &traj.states {
        for (i, v) in s.v.iter().enumerate() {
            writeln!(opinions, "{},{},{}", s.tau, ds.ids[i], v).unwrap();
        }
        writeln!(sums, "{},{}", s.tau, s.v.iter().sum::<f64>()).unwrap();
    }
    let dir = Path::new(&cfg.out_dir);
    for (name, text) in [("trajectory.csv", &opinions), ("trajectory_sum.csv", &sums)] {
        if let Err(e) = write_file(&dir.join(name), text) {
            return config_failure(e);
        }
    }
    match traj.converged_at {
        Some(t) => println!("converged after {t} steps (tol {})", cfg.tol),
        None => println!(
            "no convergence within {} steps (tol {})",
            cfg.tau_max, cfg.tol
        ),
    }
    ExitCode::SUCCESS
}

fn cmd_verify(suite: &str) -> ExitCode {
    let Some(reports) = verify::run_suite(suite) else {
        eprintln!(
            "config error: unknown suite `{suite}`; expected one of {}",
            verify::SUITES.join(", ")
        );
        return ExitCode::from(EXIT_CONFIG);
    };
    for r in &reports {
        println!("{}", r.line());
    }
    if reports.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    }
}

fn cmd_info(args: &ScenarioArgs) -> ExitCode {
    let (cfg, ds) = match prepare(args, None, false) {
        Ok(p) => p,
        Err(e) => return config_failure(e),
    };
    let net = &ds.net;
    let stats = (|| -> Result<_, campopt_core::Error> {
        let r = influence_vector(net)?;
        Ok((r.clone(), net.good_scores()?, net.bad_scores()?))
    })();
    let (r, sg, sb) = match stats {
        Ok(s) => s,
        Err(e) => {
            eprintln!("solver error {}: {e}", e.code());
            return ExitCode::from(EXIT_SOLVER);
        }
    };
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let argmax = |v: &[f64]| {
        let m = max(v);
        v.iter()
            .position(|&s| s == m)
            .map(|i| ds.ids[i].as_str())
            .unwrap_or("-")
    };
    println!("dataset          {}", cfg.dataset);
    println!("nodes            {}", net.n());
    println!("edges            {}", ds.edges);
    println!(
        "weights          {}",
        if cfg.alpha.is_some() {
            "weighted-class"
        } else {
            "generated"
        }
    );
    println!(
        "influence solve  {:?} (residual {:e})",
        r.method, r.residual
    );
    println!("influence range  [{}, {}]", min(&r), max(&r));
    println!("max r*w_g        {} (node {})", max(&sg), argmax(&sg));
    println!("max r*w_b        {} (node {})", max(&sb), argmax(&sb));
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Trajectory(a) => cmd_trajectory(a),
        Command::Verify { suite } => cmd_verify(suite),
        Command::Info(a) => cmd_info(a),
    }
}
