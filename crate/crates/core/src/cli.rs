//! Command-line front end for the `branchsim` binary.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 verification
//! failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analysis::chsh_scan;
use crate::config::{template, ConfigFile};
use crate::error::{Error, Result};
use crate::lattice::SiteId;
use crate::numfmt::scalar_text;
use crate::report::RunReport;
use crate::scenario::catalogue;
use crate::verify::{render_table, run_verification, verify_run, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "branchsim", version, about = "Exact lattice simulator for decoherence-driven branching")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario from a config file and write its report.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the number of time steps.
        #[arg(long)]
        horizon: Option<usize>,
        /// Override the decoherence/branch tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Cross-check every step against the dense engine.
        #[arg(long)]
        verify: bool,
    },
    /// Reproduce the reference states and run the differential suite.
    Verify {
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        /// Number of random gate sequences for the differential check.
        #[arg(long, default_value_t = 1000)]
        sequences: usize,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Grid-search CHSH settings for two sites at one step of a run.
    ChshScan {
        #[arg(long)]
        config: PathBuf,
        /// Two site indices, e.g. `2,3`.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        sites: Vec<i64>,
        /// Grid spacing in degrees, in (0, 90].
        #[arg(long, default_value_t = 1.0)]
        resolution: f64,
        /// Step to analyse; defaults to the final step.
        #[arg(long)]
        step: Option<usize>,
        /// Directory for `chsh_grid.csv` and `chsh.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Built-in scenarios.
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum ScenarioAction {
    /// List built-in scenarios.
    List,
    /// Print a starter config for a built-in scenario.
    Show { name: String },
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Run { config, out, horizon, tolerance, verify } => cmd_run(&config, &out, horizon, tolerance, verify),
        Command::Verify { tolerance, sequences, inject_fault } => {
            Ok(cmd_verify(&VerifyOptions { tolerance, corrupt_gate: inject_fault, random_sequences: sequences, ..VerifyOptions::default() }))
        }
        Command::ChshScan { config, sites, resolution, step, out } => cmd_chsh_scan(&config, &sites, resolution, step, out.as_deref()),
        Command::Scenario { action: ScenarioAction::List } => {
            for (name, about) in catalogue() {
                println!("{name:<14} {about}");
            }
            Ok(EXIT_OK)
        }
        Command::Scenario { action: ScenarioAction::Show { name } } => match template(&name) {
            Some(t) => {
                print!("{}", t.to_toml());
                Ok(EXIT_OK)
            }
            None => Err(Error::Config(format!("unknown scenario {name:?}"))),
        },
    }
}

pub fn cmd_run(config: &Path, out: &Path, horizon: Option<usize>, tolerance: Option<f64>, verify: bool) -> Result<i32> {
    let mut file = ConfigFile::load(config)?;
    if horizon.is_some() {
        file.horizon = horizon;
    }
    if tolerance.is_some() {
        file.tolerance = tolerance;
    }
    let scenario = file.build()?;
    for w in &scenario.warnings {
        eprintln!("warning: {w}");
    }
    let report = RunReport::generate(&scenario, Some(&file))?;
    report.write(out)?;
    println!(
        "{}: {} steps, final branch count {}, written to {} in {:.3} s",
        report.name,
        report.steps.len(),
        report.steps.last().map_or(0, |s| s.branch_count),
        out.display(),
        report.wall_time.as_secs_f64()
    );
    if verify {
        let states: Vec<_> = report.steps.iter().map(|s| s.state.clone()).collect();
        let check = verify_run(&scenario, &states, 1e-10);
        print!("{}", render_table(std::slice::from_ref(&check)));
        if !check.passed {
            return Ok(EXIT_VERIFY);
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(opts: &VerifyOptions) -> i32 {
    let checks = run_verification(opts);
    print!("{}", render_table(&checks));
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed == 0 {
        println!("all {} checks passed", checks.len());
        EXIT_OK
    } else {
        println!("{failed} of {} checks failed", checks.len());
        EXIT_VERIFY
    }
}

pub fn cmd_chsh_scan(config: &Path, sites: &[i64], resolution: f64, step: Option<usize>, out: Option<&Path>) -> Result<i32> {
    let scenario = ConfigFile::load(config)?.build()?;
    let [a, b] = sites else {
        return Err(Error::Config("--sites takes exactly two site indices".into()));
    };
    let (a, b) = (SiteId(*a), SiteId(*b));
    for s in [a, b] {
        if !scenario.lattice().contains(s) {
            return Err(Error::Config(format!("site {s} is not on the lattice")));
        }
    }
    if a == b {
        return Err(Error::Config("--sites must name two different sites".into()));
    }
    let states = scenario.run()?;
    let t = step.unwrap_or(states.len() - 1);
    let state = states.get(t).ok_or_else(|| Error::Config(format!("step {t} beyond horizon {}", states.len() - 1)))?;
    let scan = chsh_scan(state, a, b, resolution).map_err(|e| Error::Config(e.to_string()))?;
    let deg = |x: f64| scalar_text(x.to_degrees());
    println!(
        "sites {a},{b} at t={t}: grid max {} ({} points per angle), refined max {}",
        scalar_text(scan.grid_max),
        scan.points_per_angle,
        scalar_text(scan.refined_max)
    );
    let s = scan.refined_argmax;
    println!("maximizer (deg): a={} a'={} b={} b'={}", deg(s.a), deg(s.a_prime), deg(s.b), deg(s.b_prime));
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        let mut w = csv::Writer::from_path(dir.join("chsh_grid.csv"))?;
        w.write_record(["b_deg", "b_prime_deg", "a_deg", "a_prime_deg", "chsh"])?;
        for r in &scan.rows {
            w.write_record([deg(r.b), deg(r.b_prime), deg(r.a), deg(r.a_prime), scalar_text(r.value)])?;
        }
        w.flush()?;
        let summary = serde_json::json!({
            "sites": [a, b],
            "step": t,
            "resolution_deg": resolution,
            "points_per_angle": scan.points_per_angle,
            "grid_max": scan.grid_max,
            "grid_argmax_deg": scan.grid_argmax.as_array().map(f64::to_degrees),
            "refined_max": scan.refined_max,
            "refined_argmax_deg": s.as_array().map(f64::to_degrees),
        });
        fs::write(dir.join("chsh.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    }
    Ok(EXIT_OK)
}
