//! `rph`: certify, generate start systems, solve and bound sparse real systems.
//!
//! Exit codes: 0 success, 3 not certified, 4 parse or validation error,
//! 5 degenerate lifting, 6 numeric failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use rph_core::mixed_cells::{cells_to_json, dual_cone_generators, log_subdivision, DEFAULT_SCALE};
use rph_core::{
    certify_patchwork_scaled, generate_binomials_scaled, mixed_volume_seeded, parse_system,
    rph_track_scaled, RphError, SparseSystem, TrackerOptions,
};

const EXIT_NOT_CERTIFIED: u8 = 3;
const EXIT_INPUT: u8 = 4;
const EXIT_DEGENERATE: u8 = 5;
const EXIT_NUMERIC: u8 = 6;

#[derive(Parser, Debug)]
#[command(name = "rph", version, about = "Real polyhedral homotopy solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the patchwork condition (prints 1 or 0).
    Certify {
        #[command(flatten)]
        common: Common,
        /// Also count the real start solutions when certified.
        #[arg(long)]
        count_real: bool,
    },
    /// Print the binomial start systems, one per mixed cell.
    Binomials {
        #[command(flatten)]
        common: Common,
    },
    /// Track all real start solutions to the target system.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Certify start points and endpoints; exits 3 when the flag is 0.
        #[arg(long)]
        certify: bool,
        #[arg(long, default_value_t = 1e-6)]
        t_start: f64,
        #[arg(long, default_value_t = 1e-10)]
        newton_tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_steps: usize,
    },
    /// Print the mixed volume (Bernstein bound).
    MixedVolume {
        input: PathBuf,
        #[arg(long)]
        json: bool,
        /// Seed for the random generic liftings.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct Common {
    input: PathBuf,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
    /// Integerization scale for the ln|c| lifting.
    #[arg(long, default_value_t = DEFAULT_SCALE)]
    scale: f64,
    /// Write the mixed cells and dual cone generators as JSON to this path.
    #[arg(long, value_name = "PATH")]
    dump_cells: Option<PathBuf>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<RphError> for Failure {
    fn from(e: RphError) -> Self {
        let code = match e {
            RphError::Parse(_)
            | RphError::Dimension { .. }
            | RphError::Invalid(_)
            | RphError::Degenerate { .. } => EXIT_INPUT,
            RphError::DegenerateLifting { .. } => EXIT_DEGENERATE,
            _ => EXIT_NUMERIC,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

fn load(path: &Path) -> Result<SparseSystem, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_system(&text)?)
}

fn warn_input(system: &SparseSystem) {
    for w in system.validation_warnings() {
        eprintln!("warning: {w}");
    }
}

fn check_scale(scale: f64) -> Result<(), Failure> {
    if scale.is_finite() && scale > 0.0 {
        Ok(())
    } else {
        Err(input_error(format!("--scale must be positive and finite, got {scale}")))
    }
}

fn dump_cells(system: &SparseSystem, scale: f64, path: &Path) -> Result<(), Failure> {
    let sub = log_subdivision(system, scale)?;
    let generators = dual_cone_generators(system, &sub.cells, &sub.integer_lifting)?;
    let text = serde_json::to_string_pretty(&cells_to_json(&sub.cells, &generators))
        .expect("JSON values serialize");
    std::fs::write(path, text + "\n")
        .map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

/// 17 significant digits, enough to round-trip an `f64`.
fn sig17(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.16e}")
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Certify { common, count_real } => {
            check_scale(common.scale)?;
            let system = load(&common.input)?;
            if let Some(p) = &common.dump_cells {
                dump_cells(&system, common.scale, p)?;
            }
            warn_input(&system);
            let cert = certify_patchwork_scaled(&system, count_real, common.scale)?;
            let flag = u8::from(cert.certified);
            if common.json {
                print_json(&cert.to_json());
            } else {
                match cert.real_root_count {
                    Some(k) => println!("({flag}, {k})"),
                    None => println!("{flag}"),
                }
            }
            Ok(if cert.certified { 0 } else { EXIT_NOT_CERTIFIED })
        }
        Command::Binomials { common } => {
            check_scale(common.scale)?;
            let system = load(&common.input)?;
            if let Some(p) = &common.dump_cells {
                dump_cells(&system, common.scale, p)?;
            }
            warn_input(&system);
            let binomials = generate_binomials_scaled(&system, common.scale)?;
            if common.json {
                print_json(&json!({
                    "binomials": binomials.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
                }));
            } else {
                for b in &binomials {
                    println!("[{}]", b.equations().join(", "));
                }
            }
            Ok(0)
        }
        Command::Solve {
            common,
            certify,
            t_start,
            newton_tol,
            max_steps,
        } => {
            check_scale(common.scale)?;
            let opts = TrackerOptions {
                t_start,
                newton_tol,
                max_steps,
                ..TrackerOptions::default()
            };
            opts.validate()?;
            let system = load(&common.input)?;
            if let Some(p) = &common.dump_cells {
                dump_cells(&system, common.scale, p)?;
            }
            let report = rph_track_scaled(&system, &opts, certify, common.scale)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            if common.json {
                print_json(&report.to_json());
            } else {
                for s in &report.solutions {
                    let coords: Vec<String> = s.iter().map(|&v| sig17(v)).collect();
                    println!("({})", coords.join(", "));
                }
                if let Some(flag) = report.certificate_flag() {
                    println!("{flag}");
                }
            }
            Ok(match report.certificate_flag() {
                Some(0) => EXIT_NOT_CERTIFIED,
                _ => 0,
            })
        }
        Command::MixedVolume { input, json, seed } => {
            let system = load(&input)?;
            warn_input(&system);
            let mv = mixed_volume_seeded(&system, seed)?;
            if json {
                print_json(&json!({ "mixed_volume": mv }));
            } else {
                println!("{mv}");
            }
            Ok(0)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("RPH_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| input_error(format!("RPH_THREADS must be a nonnegative integer, got {raw:?}")))?;
    // 0 lets rayon pick.
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure {
            code: EXIT_NUMERIC,
            message: e.to_string(),
        })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    match configure_threads().and_then(|_| run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
