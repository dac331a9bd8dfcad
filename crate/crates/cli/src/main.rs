use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jetclass::centralizer::{centralizer, codim_table, BracketMode, StratumKind};
use jetclass::classify::classify_germ;
use jetclass::degeneracy::{
    bounds_report, char_poly, degeneracy_verdict, imag_resultant, multiplicity, DEFAULT_CUTOFF,
    TAU_DEG,
};
use jetclass::family::{scan, write_csv, GridSpec, ScanConfig};
use jetclass::io::{
    field_to_value, parse_family, parse_field, parse_matrix, AnyField, AnyMatrix, Report,
    RunConfig,
};
use jetclass::sampling::rng;
use jetclass::{Field, Tolerances};

/// Exit code for results dominated by unresolved labels.
const EXIT_UNRESOLVED: u8 = 2;

#[derive(Parser)]
#[command(name = "jetclass", version, about = "Classify singular points of planar vector fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolArgs {
    /// Values below this (relative to their scale) count as zero.
    #[arg(long, default_value_t = 1e-9)]
    tol_zero: f64,
    /// Values above this (relative to their scale) count as nonzero.
    #[arg(long, default_value_t = 1e-6)]
    tol_nonzero: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    #[value(name = "AH")]
    Ah,
    #[value(name = "SN")]
    Sn,
    #[value(name = "BT0")]
    Bt0,
    #[value(name = "BT1")]
    Bt1,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the germ at the origin of a field.
    Classify {
        #[arg(long)]
        input: PathBuf,
        /// Truncate or extend the jet to this order.
        #[arg(long)]
        order: Option<u32>,
        #[command(flatten)]
        tol: TolArgs,
        /// Convert coefficients before classifying (exact input only).
        #[arg(long, value_enum)]
        backend: Option<Backend>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Kernel of ad_v on the space of jets.
    Centralizer {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        order: Option<u32>,
        /// Only jets vanishing at the origin.
        #[arg(long)]
        restrict_vanishing: bool,
        /// Use the truncated jet bracket instead of the polynomial one.
        #[arg(long)]
        truncated: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Measured codimension of normal-form strata.
    Codim {
        #[arg(long, value_enum)]
        class: Class,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long)]
        order: Option<u32>,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Locate, classify and audit singular points over a parameter grid.
    Scan {
        #[arg(long)]
        family: PathBuf,
        /// Nodes per parameter axis, e.g. 101x101.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Newton seed cells per phase-box side.
        #[arg(long, default_value_t = 32)]
        cells: usize,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Resultant of the real and imaginary parts of det(iμ − A).
    Resultant {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Local multiplicity of the origin as a zero of the field.
    Multiplicity {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: u32,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Bounds on the multiplicity of singular points in k-parameter families.
    Bounds {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn tolerances(t: &TolArgs) -> Result<Tolerances> {
    Ok(Tolerances::new(t.tol_zero, t.tol_nonzero)?)
}

fn show(p: &Path) -> String {
    p.display().to_string()
}

fn emit(config: RunConfig, result: Value, dest: Option<&Path>) -> Result<()> {
    let text = Report::new(config, result).to_json();
    match dest {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load_field(path: &Path, order: Option<u32>) -> Result<AnyField> {
    let v = parse_field(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(match order {
        Some(m) => v.with_order(m)?,
        None => v,
    })
}

fn parse_grid(s: &str) -> Result<GridSpec> {
    let shape = s
        .split(['x', 'X'])
        .map(|n| n.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .with_context(|| format!("grid {s:?} must look like NxM"))?;
    Ok(GridSpec::new(shape)?)
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var("JETCLASS_THREADS") {
        Ok(s) => {
            let n: usize = s.trim().parse().context("JETCLASS_THREADS must be a positive integer")?;
            if n == 0 {
                bail!("JETCLASS_THREADS must be a positive integer");
            }
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

/// Runs a subcommand; `Ok(true)` means the result is dominated by
/// unresolved labels.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Classify {
            input,
            order,
            tol,
            backend,
            report,
        } => {
            let mut cfg = RunConfig::new("classify");
            cfg.inputs.push(show(&input));
            cfg.outputs.extend(report.as_deref().map(show));
            cfg.order = order;
            cfg.tolerances = tolerances(&tol)?;
            cfg.backend = backend.map(|b| match b {
                Backend::Exact => "exact".into(),
                Backend::Float => "float".into(),
            });
            cfg.validate()?;
            let v = load_field(&input, order)?;
            let v = match (backend, v) {
                (Some(Backend::Float), v) => AnyField::Float(v.to_float()),
                (Some(Backend::Exact), AnyField::Float(_)) => {
                    bail!("float coefficients cannot be classified in the exact backend")
                }
                (_, v) => v,
            };
            let (label, degeneracy) = match &v {
                AnyField::Exact(w) => (
                    classify_germ(w, &cfg.tolerances)?,
                    degeneracy_verdict(w, TAU_DEG),
                ),
                AnyField::Float(w) => (
                    classify_germ(w, &cfg.tolerances)?,
                    degeneracy_verdict(w, TAU_DEG),
                ),
            };
            let unresolved = label.kind.is_unresolved();
            let mut result = serde_json::to_value(&label)?;
            result["degeneracy"] = serde_json::to_value(&degeneracy)?;
            result["backend"] = json!(v.backend());
            emit(cfg, result, report.as_deref())?;
            Ok(unresolved)
        }
        Command::Centralizer {
            input,
            order,
            restrict_vanishing,
            truncated,
            report,
        } => {
            let mut cfg = RunConfig::new("centralizer");
            cfg.inputs.push(show(&input));
            cfg.outputs.extend(report.as_deref().map(show));
            cfg.order = order;
            cfg.backend = Some("exact".into());
            cfg.validate()?;
            let AnyField::Exact(v) = load_field(&input, order)? else {
                bail!("centralizer needs exact (rational) coefficients");
            };
            let mode = if truncated {
                BracketMode::Truncated
            } else {
                BracketMode::Full
            };
            let c = centralizer(&v, v.order(), restrict_vanishing, mode)?;
            let result = json!({
                "dim": c.dim,
                "basis": c.basis.iter().map(field_to_value).collect::<Vec<_>>(),
                "order": v.order(),
                "restrict_vanishing": restrict_vanishing,
                "bracket": if truncated { "truncated" } else { "full" },
            });
            emit(cfg, result, report.as_deref())?;
            Ok(false)
        }
        Command::Codim {
            class,
            k,
            order,
            samples,
            seed,
            report,
        } => {
            let kinds = match class {
                Class::Ah => vec![StratumKind::AH(k)],
                Class::Sn => vec![StratumKind::SN(k)],
                Class::Bt0 => vec![StratumKind::BT0],
                Class::Bt1 => vec![StratumKind::BT1NoB11, StratumKind::BT1NoB12],
            };
            let mut cfg = RunConfig::new("codim");
            cfg.outputs.extend(report.as_deref().map(show));
            cfg.order = Some(order.unwrap_or_else(|| kinds[0].min_order()));
            cfg.seed = Some(seed);
            cfg.backend = Some("exact".into());
            cfg.validate()?;
            let mut r = rng(seed);
            let rows = kinds
                .into_iter()
                .map(|kind| codim_table(kind, order.unwrap_or(kind.min_order()), samples, &mut r))
                .collect::<jetclass::Result<Vec<_>>>()?;
            emit(cfg, json!({ "rows": rows }), report.as_deref())?;
            Ok(false)
        }
        Command::Scan {
            family,
            grid,
            out,
            csv,
            cells,
            tol,
        } => {
            let mut cfg = RunConfig::new("scan");
            cfg.inputs.push(show(&family));
            cfg.outputs.extend(out.as_deref().map(show));
            cfg.outputs.extend(csv.as_deref().map(show));
            cfg.tolerances = tolerances(&tol)?;
            cfg.backend = Some("float".into());
            cfg.validate()?;
            if cells == 0 {
                bail!("--cells must be positive");
            }
            let spec = parse_family(&read(&family)?)
                .with_context(|| format!("parsing {}", family.display()))?;
            let grid = parse_grid(&grid)?;
            let scfg = ScanConfig {
                cells,
                tol: cfg.tolerances,
                threads: threads_from_env()?,
                ..ScanConfig::default()
            };
            let rep = scan(&spec, &grid, &scfg)?;
            if let Some(p) = &csv {
                let f = fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
                write_csv(&rep, std::io::BufWriter::new(f))?;
            }
            let s = &rep.summary;
            eprintln!(
                "{} nodes: case1 {}, case2 {}, case3 {}, inconclusive {}, violations {}; {} loci",
                rep.nodes.len(),
                s.case1,
                s.case2,
                s.case3,
                s.inconclusive,
                s.violations.len(),
                rep.loci.len()
            );
            let total = rep.records().count();
            let dominated = total > 0 && 2 * rep.unresolved() > total;
            emit(cfg, serde_json::to_value(&rep)?, out.as_deref())?;
            Ok(dominated)
        }
        Command::Resultant { matrix, report } => {
            let mut cfg = RunConfig::new("resultant");
            cfg.inputs.push(show(&matrix));
            cfg.outputs.extend(report.as_deref().map(show));
            let m = parse_matrix(&read(&matrix)?)
                .with_context(|| format!("parsing {}", matrix.display()))?;
            let result = match &m {
                AnyMatrix::Exact(a) => resultant_json(a)?,
                AnyMatrix::Float(a) => resultant_json(a)?,
            };
            cfg.backend = Some(result["backend"].as_str().unwrap_or_default().to_string());
            emit(cfg, result, report.as_deref())?;
            Ok(false)
        }
        Command::Multiplicity {
            input,
            cutoff,
            report,
        } => {
            let mut cfg = RunConfig::new("multiplicity");
            cfg.inputs.push(show(&input));
            cfg.outputs.extend(report.as_deref().map(show));
            let v = load_field(&input, None)?;
            cfg.backend = Some(v.backend().into());
            let r = match &v {
                AnyField::Exact(w) => multiplicity(w, cutoff)?,
                AnyField::Float(w) => multiplicity(w, cutoff)?,
            };
            let mut result = serde_json::to_value(&r)?;
            result["cutoff"] = json!(cutoff);
            emit(cfg, result, report.as_deref())?;
            Ok(false)
        }
        Command::Bounds { k, report } => {
            if k == 0 {
                bail!("k must be positive");
            }
            let mut cfg = RunConfig::new("bounds");
            cfg.outputs.extend(report.as_deref().map(show));
            emit(cfg, serde_json::to_value(bounds_report(k))?, report.as_deref())?;
            Ok(false)
        }
    }
}

fn resultant_json<S: Field>(a: &[Vec<S>]) -> Result<Value> {
    let r = imag_resultant(a)?;
    Ok(json!({
        "backend": S::BACKEND,
        "n": a.len(),
        "char_poly": char_poly(a).iter().map(|c| c.to_scalar()).collect::<Vec<_>>(),
        "resultant": r.to_scalar(),
        "zero": r.is_zero(),
    }))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // Usage errors are input errors; help and version are not.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(EXIT_UNRESOLVED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
