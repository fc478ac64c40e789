//! Command-line front end: scenario files in, CSV/JSON results out.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure,
//! 3 infeasible optimization target.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use uwsec::channels::{builtin_presets, parse_preset_registry, ChannelPreset};
use uwsec::error::Error;
use uwsec::montecarlo::{mc_pnz, mc_sop_exact, mc_sop_lower, McConfig};
use uwsec::optimizer::{min_power_for_target, saturation_floor, PowerTarget, TargetMetric};
use uwsec::scenario::{ResolvedScenario, Scenario};
use uwsec::selftest::{self, SelftestTolerances};
use uwsec::sweep::{eval_point, run_sweep};
use uwsec::EvalOptions;

#[derive(Parser)]
#[command(
    name = "uwsec",
    about = "Secrecy performance of two-hop mixed RF/underwater-optical links",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario JSON path, or '-' to read from stdin.
    #[arg(long)]
    scenario: String,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relative tolerance override for the analytic evaluators.
    #[arg(long)]
    tol: Option<f64>,
    /// Extra preset registry JSON merged over the built-in presets
    /// (matching labels replace the built-ins).
    #[arg(long)]
    presets: Option<PathBuf>,
    /// Override the Monte Carlo master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the Monte Carlo trial count.
    #[arg(long)]
    trials: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate all analytic metrics at the scenario's operating point
    /// (JSON output).
    Eval(ScenarioArgs),
    /// Run the scenario's parameter sweep (CSV output).
    Sweep(ScenarioArgs),
    /// Monte Carlo estimates of SOP (exact and lower bound) and PNZ at the
    /// scenario's operating point (JSON output).
    Mc(ScenarioArgs),
    /// Find the minimal main-link SNR meeting a target metric.
    Optimize {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Metric to target.
        #[arg(long, value_parser = parse_metric)]
        metric: TargetMetric,
        /// Target value in (0,1): an upper bound for SOP, a lower bound
        /// for PNZ.
        #[arg(long)]
        target: f64,
        #[arg(long, default_value_t = 0.0)]
        lo_db: f64,
        #[arg(long, default_value_t = 50.0)]
        hi_db: f64,
        #[arg(long, default_value_t = 0.05)]
        tol_db: f64,
    },
    /// Run the built-in invariant suite.
    Selftest,
}

fn parse_metric(s: &str) -> Result<TargetMetric, String> {
    match s {
        "sop" => Ok(TargetMetric::Sop),
        "pnz" => Ok(TargetMetric::Pnz),
        other => Err(format!("unknown metric {other:?} (expected 'sop' or 'pnz')")),
    }
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::Convergence { .. } => ExitCode::from(2),
        Error::Infeasible { .. } => ExitCode::from(3),
        _ => ExitCode::from(1),
    }
}

fn load_registry(args: &ScenarioArgs) -> Result<Vec<ChannelPreset>, Error> {
    let mut registry = builtin_presets();
    if let Some(path) = &args.presets {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config { msg: format!("cannot read {}: {e}", path.display()) })?;
        for preset in parse_preset_registry(&text)? {
            registry.retain(|p| p.label != preset.label);
            registry.push(preset);
        }
    }
    Ok(registry)
}

fn load_scenario(args: &ScenarioArgs) -> Result<ResolvedScenario, Error> {
    let text = if args.scenario == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Config { msg: format!("cannot read stdin: {e}") })?;
        buf
    } else {
        fs::read_to_string(&args.scenario).map_err(|e| Error::Config {
            msg: format!("cannot read {}: {e}", args.scenario),
        })?
    };
    let registry = load_registry(args)?;
    let mut resolved = Scenario::from_json(&text)?.resolve(&registry)?;
    if args.seed.is_some() || args.trials.is_some() {
        let mut mc = resolved.mc.unwrap_or_default();
        if let Some(seed) = args.seed {
            mc.master_seed = seed;
        }
        if let Some(trials) = args.trials {
            mc.trials = trials;
        }
        mc.validate()?;
        resolved.mc = Some(mc);
    }
    Ok(resolved)
}

fn options_for(args: &ScenarioArgs) -> EvalOptions {
    match args.tol {
        Some(tol) => EvalOptions::with_rel_tol(tol),
        None => EvalOptions::default(),
    }
}

fn write_output(out: &Option<PathBuf>, content: &[u8]) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Error::Config { msg: format!("cannot write {}: {e}", path.display()) }),
        None => io::stdout()
            .write_all(content)
            .map_err(|e| Error::Config { msg: format!("cannot write stdout: {e}") }),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Eval(args) => {
            let scenario = load_scenario(&args)?;
            let report = eval_point(&scenario, &options_for(&args))?;
            let json = serde_json::to_string_pretty(&report)
                .map_err(|e| Error::Config { msg: e.to_string() })?;
            write_output(&args.out, format!("{json}\n").as_bytes())
        }
        Command::Sweep(args) => {
            let scenario = load_scenario(&args)?;
            let table = run_sweep(&scenario, &options_for(&args))?;
            let mut buf = Vec::new();
            table
                .write_csv(&mut buf)
                .map_err(|e| Error::Config { msg: e.to_string() })?;
            write_output(&args.out, &buf)
        }
        Command::Mc(args) => {
            let scenario = load_scenario(&args)?;
            let mc: McConfig = scenario.mc.unwrap_or_default();
            let sop_lower =
                mc_sop_lower(&scenario.links, &scenario.eve, &scenario.relay, &scenario.secrecy, &mc)?;
            let sop_exact =
                mc_sop_exact(&scenario.links, &scenario.eve, &scenario.relay, &scenario.secrecy, &mc)?;
            let pnz = mc_pnz(&scenario.links, &scenario.eve, &scenario.relay, &mc)?;
            let json = serde_json::json!({
                "trials": mc.trials,
                "master_seed": mc.master_seed,
                "stream_count": mc.stream_count,
                "sop_lower": sop_lower,
                "sop_exact": sop_exact,
                "pnz": pnz,
            });
            let text = serde_json::to_string_pretty(&json)
                .map_err(|e| Error::Config { msg: e.to_string() })?;
            write_output(&args.out, format!("{text}\n").as_bytes())
        }
        Command::Optimize { scenario, metric, target, lo_db, hi_db, tol_db } => {
            let resolved = load_scenario(&scenario)?;
            let opts = options_for(&scenario);
            let t = PowerTarget {
                metric,
                target,
                search_lo_db: lo_db,
                search_hi_db: hi_db,
                tol_db,
            };
            let g1_db = min_power_for_target(
                &resolved.links,
                &resolved.eve,
                &resolved.relay,
                &resolved.secrecy,
                &t,
                &opts,
            )?;
            let floor = saturation_floor(
                &resolved.links,
                &resolved.eve,
                &resolved.relay,
                &resolved.secrecy,
                metric,
                lo_db,
                hi_db,
                &opts,
            )?;
            let json = serde_json::json!({
                "gamma1_db": g1_db,
                "target": target,
                "tol_db": tol_db,
                "saturation": floor,
            });
            let text = serde_json::to_string_pretty(&json)
                .map_err(|e| Error::Config { msg: e.to_string() })?;
            write_output(&scenario.out, format!("{text}\n").as_bytes())
        }
        Command::Selftest => {
            let report = selftest::run(&SelftestTolerances::default());
            for c in &report.checks {
                println!(
                    "[{}] {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if report.passed() {
                println!("selftest passed ({} checks)", report.checks.len());
                Ok(())
            } else {
                Err(Error::Convergence {
                    context: "selftest reported failures".into(),
                    axis: None,
                    nodes: 0,
                })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    return ExitCode::SUCCESS;
                }
                _ => ExitCode::from(1),
            };
            eprint!("{e}");
            return code;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
