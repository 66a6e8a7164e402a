use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use dglab::analysis::{
    default_residual_cases, parse_grids, run_compare, run_convergence, run_correction,
    run_residual, run_spectrum, taylor_report, Check, RunConfig,
};

#[derive(Parser)]
#[command(name = "dglab", version, about = "Accuracy studies for DG and FV advection schemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Error and EOC table for one scheme
    Convergence(RunArgs),
    /// DG P1 against both second-order finite-volume variants
    Compare(RunArgs),
    /// Re-measure modified-equation coefficients from instantaneous rates
    Residual(StudyArgs),
    /// Eigenvalues of the Fourier symbol on a theta grid
    Spectrum {
        #[arg(short, long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 256)]
        n_theta: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Size and leading coefficient of the interface correction term
    Correction(StudyArgs),
    /// Print the exact modified equations
    Taylor,
}

#[derive(Args, Clone)]
struct Common {
    /// Directory for CSV output; prints to stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit nonzero if any check fails
    #[arg(long)]
    assert: bool,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    scheme: Option<String>,
    /// Comma-separated, strictly increasing cell counts
    #[arg(long)]
    grids: Option<String>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    periods: Option<f64>,
    /// sine, gauss:<sigma> or step
    #[arg(long)]
    ic: Option<String>,
    /// euler, ssprk2 or ssprk3
    #[arg(long)]
    integrator: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// key=value file; flags given on the command line win
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct StudyArgs {
    /// Doubling sequence of cell counts
    #[arg(long, default_value = "20,40,80,160,320")]
    grids: String,
    #[command(flatten)]
    common: Common,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig> {
        let mut c = RunConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            c.apply_kv_text(&text)?;
        }
        let overrides = [
            ("scheme", self.scheme.clone()),
            ("grids", self.grids.clone()),
            ("cfl", self.cfl.map(|v| v.to_string())),
            ("periods", self.periods.map(|v| v.to_string())),
            ("ic", self.ic.clone()),
            ("integrator", self.integrator.clone()),
            ("seed", self.seed.map(|v| v.to_string())),
        ];
        for (k, v) in overrides {
            if let Some(v) = v {
                c.set(k, &v)?;
            }
        }
        if let Some(out) = &self.common.out {
            c.out_dir = Some(out.clone());
        }
        c.validate()?;
        Ok(c)
    }
}

fn emit(out: Option<&Path>, file: &str, csv: &str, summary: &str) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(file);
            fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
            print!("{summary}");
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn report(checks: &[Check], assert: bool) -> ExitCode {
    if assert {
        for c in checks {
            eprintln!("{}", c.line());
        }
    }
    if assert && checks.iter().any(|c| !c.passed) {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    Ok(match cli.command {
        Command::Convergence(args) => {
            let c = args.config()?;
            let t = run_convergence(&c)?;
            let file = format!("convergence_{}.csv", c.scheme.name());
            emit(c.out_dir.as_deref(), &file, &t.to_csv(), &t.summary())?;
            report(&t.checks(), args.common.assert)
        }
        Command::Compare(args) => {
            let c = args.config()?;
            let t = run_compare(&c)?;
            emit(c.out_dir.as_deref(), "compare.csv", &t.to_csv(), &t.summary())?;
            // a qualitative comparison: nothing to assert
            report(&[], args.common.assert)
        }
        Command::Residual(args) => {
            let r = run_residual(&parse_grids(&args.grids)?, &default_residual_cases())?;
            emit(args.common.out.as_deref(), "residual.csv", &r.to_csv(), &r.summary())?;
            report(&r.checks(), args.common.assert)
        }
        Command::Spectrum { k, n_theta, common } => {
            let s = run_spectrum(k, n_theta)?;
            let summary = format!("{}\n", s.summary());
            emit(common.out.as_deref(), &format!("spectrum_k{k}.csv"), &s.to_csv(), &summary)?;
            report(&s.checks(), common.assert)
        }
        Command::Correction(args) => {
            let r = run_correction(&parse_grids(&args.grids)?)?;
            emit(args.common.out.as_deref(), "correction.csv", &r.to_csv(), &r.summary())?;
            report(&r.checks(), args.common.assert)
        }
        Command::Taylor => {
            print!("{}", taylor_report()?);
            ExitCode::SUCCESS
        }
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
