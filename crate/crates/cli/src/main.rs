//! Command-line front end: solve bases, print formulas, evaluate fields,
//! verify residuals, and cross-check the printed tables.
//!
//! Exit codes: 0 success, 2 validation error, 3 domain error,
//! 4 verification failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use biharm_core::characteristic::{char_residual, solve_g, w_coefficients};
use biharm_core::config::{OutputFormat, RunConfig};
use biharm_core::error::Error;
use biharm_core::solutions::{grid_eval, Point3, SolutionSpec};
use biharm_core::verify::verify_spec;
use biharm_core::Cx;

mod paper_check;

#[derive(Parser)]
#[command(
    name = "biharm",
    about = "Exact solutions of the 3D biharmonic equation from nilpotent commutative algebras",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Path to the JSON run config
    #[arg(long)]
    config: PathBuf,
    /// Override output.path from the config
    #[arg(long)]
    output: Option<PathBuf>,
    /// Override output.format from the config (csv|json)
    #[arg(long)]
    format: Option<String>,
    /// Override solution.k_index from the config
    #[arg(long)]
    k_index: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the characteristic equation and print the basis triple
    Basis {
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Print the symbolic formula for U_k
    Formula {
        /// Family index k
        k: usize,
        /// Emit LaTeX instead of plain text
        #[arg(long)]
        latex: bool,
        /// Write to a file instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate U_k on the configured grid and export the field
    Eval {
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Run the symbolic and finite-difference residual oracles
    Verify {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Write the machine-readable report to a file
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Regenerate the printed resolvent tables and closed forms and
    /// report agreement with first principles
    PaperCheck {
        /// Write the report to a file as well as stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn read_config(args: &ConfigArgs) -> Result<RunConfig, Error> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| Error::InvalidConfig(format!("{}: {e}", args.config.display())))?;
    let mut cfg = RunConfig::from_json(&text)?;
    if let Some(path) = &args.output {
        cfg.output.path = Some(path.display().to_string());
    }
    if let Some(fmt) = &args.format {
        cfg.output.format = match fmt.as_str() {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown format '{other}', expected csv or json"
                )))
            }
        };
    }
    if let Some(k) = args.k_index {
        let sol = cfg.solution.get_or_insert_with(|| biharm_core::config::SolutionSection {
            k_index: None,
            k_range: None,
        });
        sol.k_index = Some(k);
        sol.k_range = None;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Basis { cfg } => cmd_basis(&read_config(&cfg)?),
        Command::Formula { k, latex, output } => cmd_formula(k, latex, output),
        Command::Eval { cfg } => cmd_eval(&read_config(&cfg)?),
        Command::Verify { cfg, report } => cmd_verify(&read_config(&cfg)?, report),
        Command::PaperCheck { output } => paper_check::run(output),
    }
}

fn fmt_cx(c: Cx) -> String {
    format!("{}{}{}i", c.re, if c.im < 0.0 { " - " } else { " + " }, c.im.abs())
}

fn cmd_basis(cfg: &RunConfig) -> Result<(), Error> {
    let params = cfg.algebra.to_params()?;
    let triple = solve_g(&params)?;
    println!("n = {}, mode = {:?}, branch = {:?}", params.n, params.mode, params.branch);
    for (r, g) in triple.g().iter().enumerate() {
        println!("g_{r} = {}", fmt_cx(*g));
    }
    println!("constrained_count = {}", triple.constrained_count());
    let w = w_coefficients(triple.k(), triple.m(), triple.g())?;
    for (r, v) in w.0.iter().enumerate() {
        println!("W_{r} = {}", fmt_cx(*v));
    }
    let residual = char_residual(&triple);
    let tol = 1e-10 * triple.input_scale().powi(4);
    let max = residual.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    println!("char_residual max |entry| = {max:.3e} (tolerance {tol:.3e})");
    if max <= tol {
        println!("characteristic equation: satisfied");
        Ok(())
    } else {
        Err(Error::VerificationFailed(format!(
            "characteristic residual {max:.3e} exceeds {tol:.3e}"
        )))
    }
}

fn cmd_formula(k: usize, latex: bool, output: Option<PathBuf>) -> Result<(), Error> {
    let formula = biharm_core::resolvent::u_formula(k)?;
    let text = if latex { formula.to_latex() } else { formula.to_text() };
    match output {
        Some(path) => fs::write(&path, text + "\n")
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn build_spec(cfg: &RunConfig, k: usize) -> Result<SolutionSpec, Error> {
    let params = cfg.algebra.to_params()?;
    let triple = solve_g(&params)?;
    let f = cfg.function()?.to_fn()?;
    SolutionSpec::new(triple, f, k)
}

fn cmd_eval(cfg: &RunConfig) -> Result<(), Error> {
    let k = cfg.solution()?.single_index()?;
    let spec = build_spec(cfg, k)?;
    let grid = cfg.grid()?;
    let field = grid_eval(&spec, grid)?;
    let rendered = match cfg.output.format {
        OutputFormat::Csv => {
            let mut out = String::from("x,y,z,re,im\n");
            for (p, v) in field.grid.points().zip(&field.values) {
                out.push_str(&format!("{},{},{},{},{}\n", p.x, p.y, p.z, v.re, v.im));
            }
            out
        }
        OutputFormat::Json => {
            let g: Vec<[f64; 2]> = spec.basis().g().iter().map(|c| [c.re, c.im]).collect();
            let values: Vec<[f64; 2]> = field.values.iter().map(|c| [c.re, c.im]).collect();
            let doc = serde_json::json!({
                "grid": field.grid,
                "k_index": k,
                "g": g,
                "constrained_count": spec.basis().constrained_count(),
                "values": values,
            });
            serde_json::to_string_pretty(&doc).expect("field serializes") + "\n"
        }
    };
    match &cfg.output.path {
        Some(path) => fs::write(path, rendered)
            .map_err(|e| Error::InvalidConfig(format!("{path}: {e}")))?,
        None => print!("{rendered}"),
    }
    Ok(())
}

/// Deterministic probe points inside the unit box, used when the config
/// gives no grid.
fn default_probe_points() -> Vec<Point3> {
    let vals = [0.31, -0.47, 0.73, 0.11, -0.89];
    let mut pts = Vec::new();
    for i in 0..5 {
        pts.push(Point3 {
            x: vals[i],
            y: vals[(i + 1) % 5],
            z: vals[(i + 2) % 5],
        });
    }
    pts
}

fn cmd_verify(cfg: &RunConfig, report_path: Option<PathBuf>) -> Result<(), Error> {
    let indices = cfg.solution()?.indices()?;
    let fd_cfg = cfg.verify.fd_config();
    let points: Vec<Point3> = match &cfg.grid {
        Some(g) => {
            g.validate()?;
            g.points().take(20).collect()
        }
        None => default_probe_points(),
    };
    let mut reports = Vec::new();
    let mut all_passed = true;
    for k in indices {
        let spec = build_spec(cfg, k)?;
        let rep = verify_spec(
            &format!("k{k}"),
            cfg.algebra.mode,
            &spec,
            &points,
            &fd_cfg,
            cfg.verify.tolerance,
        )?;
        println!(
            "U_{k}: symbolic_zero={} (max coeff {:.3e}), fd_residual={:.3e}, harmonic_zero={} -> {}",
            rep.symbolic_zero,
            rep.max_coeff,
            rep.fd_residual,
            rep.harmonic_zero,
            if rep.passed { "PASS" } else { "FAIL" }
        );
        all_passed &= rep.passed;
        reports.push(rep);
    }
    if let Some(path) = report_path {
        let json = serde_json::to_string_pretty(&reports).expect("report serializes");
        fs::write(&path, json + "\n")
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
    }
    if all_passed {
        Ok(())
    } else {
        Err(Error::VerificationFailed("residual gates failed".into()))
    }
}
