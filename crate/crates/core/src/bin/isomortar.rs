use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use isomortar::geometry::DomainFile;
use isomortar::infsup::{self, BcMode, SweepConfig};
use isomortar::spaces::MultiplierVariant;
use isomortar::studies::{least_squares_slope, run_convergence, Case, ConvergenceReport};
use isomortar::{Error, Result};

/// Isogeometric mortar coupling: convergence studies and inf-sup bench.
#[derive(Parser)]
#[command(name = "isomortar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Refinement study of a JSON domain with a `problem` section.
    Solve {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, default_value = "equal-modified")]
        pairing: MultiplierVariant,
        /// Primal degree; the file geometry is elevated to it.
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fail with exit code 4 if `|B u|_inf / |u|_inf` exceeds this.
        #[arg(long, value_name = "TOL")]
        assert: Option<f64>,
    },
    /// Refinement study of a built-in benchmark.
    Convergence {
        #[arg(long)]
        case: String,
        /// Domain file for `--case file`.
        #[arg(long)]
        domain: Option<PathBuf>,
        #[arg(long, default_value = "equal-modified")]
        pairing: MultiplierVariant,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        degrees: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        levels: usize,
        /// Directory for one CSV per degree; stdout when absent.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Check the broken-V slope over the last three levels against the
        /// rate guaranteed for the pairing, or against `--expect`.
        #[arg(long)]
        assert: bool,
        /// Expected broken-V rate overriding the pairing default.
        #[arg(long)]
        expect: Option<f64>,
        #[arg(long, default_value_t = 0.15)]
        tol: f64,
    },
    /// Sup ratio of the oscillating `p - 1` multiplier mode.
    Checkerboard {
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 5)]
        levels: usize,
        /// Level of the first mesh (`h = 2^-first`); default `2^first >= 4p`.
        #[arg(long)]
        first: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fail with exit code 4 unless the fitted slope lies in [0.85, 1.15].
        #[arg(long)]
        assert: bool,
    },
    /// Inf-sup constants over degrees, multiplier variants and meshes.
    Infsup {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        degrees: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "equal-modified,pm1,pm2")]
        variants: Vec<MultiplierVariant>,
        #[arg(long, default_value_t = 5)]
        levels: usize,
        /// Spans of the coarsest mesh.
        #[arg(long, default_value_t = 4)]
        base: usize,
        #[arg(long, default_value = "free")]
        bc: BcMode,
        #[arg(long, value_enum, default_value_t = MeasureArg::Parametric)]
        measure: MeasureArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fail with exit code 4 if a stable pairing (equal-modified, pm2)
        /// varies by more than this fraction across levels.
        #[arg(long, value_name = "FRACTION")]
        assert: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Parametric,
    Physical,
}

enum Outcome {
    Done,
    ThresholdFailed(String),
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn slope_line(r: &ConvergenceReport) -> String {
    let fmt = |s: Option<f64>| s.map_or("-".into(), |v| format!("{v:.3}"));
    format!(
        "{} p={} {}: L2 slope {}, broken V slope {}",
        r.case,
        r.degree,
        r.variant,
        fmt(r.l2_slopes().asymptotic),
        fmt(r.broken_v_slopes().asymptotic)
    )
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Solve {
            domain,
            pairing,
            degree,
            levels,
            out,
            assert,
        } => {
            let case = Case::File(Box::new(DomainFile::load(&domain)?));
            let report = run_convergence(&case, pairing, degree, levels)?;
            report.write_csv(sink(out.as_deref())?)?;
            eprintln!("{}", slope_line(&report));
            let residual = report.max_constraint_residual();
            match assert {
                Some(tol) if residual > tol => Ok(Outcome::ThresholdFailed(format!(
                    "constraint residual {residual:e} exceeds {tol:e}"
                ))),
                _ => Ok(Outcome::Done),
            }
        }
        Command::Convergence {
            case,
            domain,
            pairing,
            degrees,
            levels,
            out_dir,
            assert,
            expect,
            tol,
        } => {
            let case = match (case.as_str(), domain) {
                ("file", Some(path)) => Case::File(Box::new(DomainFile::load(path)?)),
                ("file", None) => {
                    return Err(Error::Config("`--case file` needs `--domain`".into()))
                }
                (name, _) => Case::parse(name)?,
            };
            let mut failures = Vec::new();
            for &p in &degrees {
                let report = run_convergence(&case, pairing, p, levels)?;
                match &out_dir {
                    Some(dir) => {
                        let path = dir.join(format!("{}_p{p}_{pairing}.csv", report.case));
                        report.write_csv(File::create(path)?)?;
                    }
                    None => {
                        println!("# case={} degree={p} pairing={pairing}", report.case);
                        report.write_csv(io::stdout().lock())?;
                    }
                }
                eprintln!("{}", slope_line(&report));
                if assert {
                    let slope = report.broken_v_slopes().asymptotic;
                    match (expect.or(pairing.expected_rate(p)), slope) {
                        (Some(rate), Some(s)) if (s - rate).abs() > tol => failures.push(format!(
                            "p={p}: broken V slope {s:.3} not within {tol} of {rate}"
                        )),
                        (Some(_), Some(_)) => {}
                        (None, _) => {
                            eprintln!("p={p}: no guaranteed rate for {pairing}, not checked")
                        }
                        (Some(_), None) => {
                            failures.push(format!("p={p}: too few levels for a slope"))
                        }
                    }
                }
            }
            Ok(if failures.is_empty() {
                Outcome::Done
            } else {
                Outcome::ThresholdFailed(failures.join("; "))
            })
        }
        Command::Checkerboard {
            degree,
            levels,
            first,
            out,
            assert,
        } => {
            let first = first.unwrap_or_else(|| infsup::checkerboard_start(degree));
            let rows = infsup::checkerboard(degree, first, levels)?;
            let mut w = csv::Writer::from_writer(sink(out.as_deref())?);
            w.write_record(["level", "h", "sup_ratio"])?;
            for (j, (h, r)) in rows.iter().enumerate() {
                w.write_record([(first + j).to_string(), format!("{h:e}"), format!("{r:e}")])?;
            }
            w.flush()?;
            let hs: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let ratios: Vec<f64> = rows.iter().map(|r| r.1).collect();
            let slope = least_squares_slope(&ratios, &hs, rows.len());
            eprintln!(
                "p={degree}: sup ratio slope {}",
                slope.map_or("-".into(), |s| format!("{s:.3}"))
            );
            match slope {
                Some(s) if assert && !(0.85..=1.15).contains(&s) => Ok(Outcome::ThresholdFailed(
                    format!("slope {s:.3} outside [0.85, 1.15]"),
                )),
                None if assert => Ok(Outcome::ThresholdFailed(
                    "too few levels for a slope".into(),
                )),
                _ => Ok(Outcome::Done),
            }
        }
        Command::Infsup {
            degrees,
            variants,
            levels,
            base,
            bc,
            measure,
            out,
            assert,
        } => {
            let config = SweepConfig {
                degrees,
                variants,
                levels,
                base_elements: base,
                bc,
                physical: matches!(measure, MeasureArg::Physical),
            };
            let result = infsup::sweep(&config)?;
            result.write_csv(sink(out.as_deref())?)?;
            let Some(max) = assert else {
                return Ok(Outcome::Done);
            };
            let mut failures = Vec::new();
            for &p in &config.degrees {
                for &v in &config.variants {
                    if v.expected_rate(p).is_none() {
                        continue;
                    }
                    match result.variation(p, v) {
                        Some(var) if var <= max => {}
                        Some(var) => failures.push(format!("p={p} {v}: variation {var:.3}")),
                        None => failures.push(format!("p={p} {v}: constant vanishes")),
                    }
                }
            }
            Ok(if failures.is_empty() {
                Outcome::Done
            } else {
                Outcome::ThresholdFailed(failures.join("; "))
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::ThresholdFailed(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
