//! Command line front end. Every subcommand prints one JSON document (or a
//! CSV table) to stdout or to `--output`, written atomically.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a theorem check failed.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::counting::{dirichlet_coefficients, euler_product_square, multiplicity_table, Which};
use crate::csl::csl;
use crate::enumerate::{enumerate_auto, quaternion_rotation, EnumerationResult};
use crate::error::{Error, Result};
use crate::isometry::{den, Isometry, PointGroup};
use crate::lattice::{Lattice, Preset};
use crate::linalg::{parse_rational, RatMatrix};
use crate::ssl::{primitive_ssl, ssl_contrast, ssl_table};
use crate::theorems::{
    decompose_csl, open_question_entry, pi_decompose, sweep_on, sweep_pairs, theorem7_check, theorem8_check, theorem9_check,
    TheoremReport,
};

#[derive(Parser, Debug)]
#[command(name = "csl-lab", version, about = "Coincidence site lattices, their indices and counting functions")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for sampled sweeps.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Test this many randomly chosen pairs instead of all of them.
    #[arg(long, global = true)]
    sample: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coincidence index and CSL of one isometry.
    Sigma {
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        isometry: String,
    },
    /// All coincidence isometries up to an index, one per symmetry class.
    Enumerate {
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        max_sigma: u64,
    },
    /// Table of f_iso, f_rot and f.
    Count {
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        max_index: u64,
    },
    /// Dirichlet series coefficients, cross-checked against the Euler product on ℤ².
    Series {
        #[arg(long, default_value = "square")]
        lattice: String,
        #[arg(long)]
        terms: u64,
    },
    /// Finite-range check of one identity or theorem.
    Check {
        #[arg(value_enum)]
        which: CheckKind,
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        range: u64,
    },
    /// Prime power decomposition of a CSL, and of the isometry along `--pi`.
    Decompose {
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        isometry: String,
        #[arg(long, value_delimiter = ',')]
        pi: Option<Vec<u64>>,
    },
    /// Similar sublattices.
    Ssl {
        #[arg(value_enum)]
        action: SslAction,
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        max_index: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Lemma1,
    Thm2,
    Cor3,
    Tower,
    Lemma6,
    Thm7,
    Thm8,
    Thm9,
    Openq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SslAction {
    Count,
    Check,
}

enum Output {
    Json(Value),
    Csv(String),
}

/// Result of a subcommand: what to print and whether a check failed.
struct Outcome {
    output: Output,
    failed: bool,
}

impl Outcome {
    fn ok(v: Value) -> Outcome {
        Outcome { output: Output::Json(v), failed: false }
    }
}

fn to_value<T: Serialize>(t: &T) -> Result<Value> {
    serde_json::to_value(t).map_err(|e| Error::Internal(e.to_string()))
}

/// Preset name or path to a lattice JSON file.
pub fn resolve_lattice(spec: &str) -> Result<Lattice> {
    if let Some(p) = Preset::from_name(spec) {
        return Ok(p.lattice());
    }
    let path = Path::new(spec);
    if !path.exists() {
        let names: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
        return Err(Error::Parse(format!("unknown lattice '{spec}' (presets: {})", names.join(", "))));
    }
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{spec}: malformed lattice JSON: {e}")))
}

/// Named isometries accepted by `--isometry`.
pub const ISOMETRY_PRESETS: [&str; 9] = ["identity", "inversion", "rot90", "mirror", "r5", "r13", "r65", "q3", "q5"];

/// Preset name, inline rows `a,b;c,d` with rational entries, or a path to
/// an isometry JSON file.
pub fn resolve_isometry(spec: &str, dim: usize) -> Result<Isometry> {
    let plane = |r: Result<Isometry>| if dim == 2 { r } else { Err(Error::Parse(format!("isometry '{spec}' is planar"))) };
    let space = |r: Result<Isometry>| if dim == 3 { r } else { Err(Error::Parse(format!("isometry '{spec}' is three-dimensional"))) };
    match spec {
        "identity" => return Ok(Isometry::identity(dim)),
        "inversion" => return Ok(Isometry::inversion(dim)),
        "rot90" => return plane(Isometry::new(RatMatrix::from_i64(2, 2, &[0, -1, 1, 0]))),
        "mirror" => return plane(Isometry::new(RatMatrix::from_i64(2, 2, &[1, 0, 0, -1]))),
        "r5" => return plane(Isometry::plane_rotation(3, 4, 5)),
        "r13" => return plane(Isometry::plane_rotation(5, 12, 13)),
        "r65" => return plane(Isometry::plane_rotation(33, 56, 65)),
        "q3" => return space(quaternion_rotation(1, 1, 1, 0)),
        "q5" => return space(quaternion_rotation(1, 2, 0, 0)),
        _ => {}
    }
    if spec.contains(',') || spec.contains(';') {
        let rows: Vec<Vec<_>> = spec
            .split(';')
            .map(|row| row.split(',').map(|x| parse_rational(x.trim())).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse(format!("isometry '{spec}' is not square")));
        }
        let m = RatMatrix::new(n, n, rows.into_iter().flatten().collect());
        return Isometry::new(m);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Error::Parse(format!("unknown isometry '{spec}' (presets: {})", ISOMETRY_PRESETS.join(", "))));
    }
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{spec}: malformed isometry JSON: {e}")))
}

fn pool_for(l: &Lattice, n: u64) -> Result<(EnumerationResult, PointGroup)> {
    Ok((enumerate_auto(l, n)?, PointGroup::of(l)?))
}

fn report_outcome(report: &TheoremReport, extra: &[(&str, Value)]) -> Result<Outcome> {
    let mut v = to_value(report)?;
    for (k, x) in extra {
        v[*k] = x.clone();
    }
    Ok(Outcome { output: Output::Json(v), failed: !report.passed() })
}

fn check(kind: CheckKind, l: &Lattice, range: u64, common: &Common) -> Result<Outcome> {
    let (pool, p) = pool_for(l, range)?;
    match kind {
        CheckKind::Lemma1 | CheckKind::Thm2 | CheckKind::Cor3 | CheckKind::Tower | CheckKind::Lemma6 => {
            let mut pairs = sweep_pairs(&pool, &p, range)?;
            let mut extra = vec![];
            if let Some(k) = common.sample {
                if k < pairs.len() {
                    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
                    let mut picked = sample(&mut rng, pairs.len(), k).into_vec();
                    picked.sort_unstable();
                    pairs = picked.into_iter().map(|i| pairs[i].clone()).collect();
                }
                extra.push(("seed", json!(common.seed)));
                extra.push(("sample", json!(k)));
            }
            let rep = sweep_on(l, &pairs, range)?;
            let report = match kind {
                CheckKind::Lemma1 => &rep.lemma1,
                CheckKind::Thm2 => &rep.thm2,
                CheckKind::Cor3 => &rep.cor3,
                CheckKind::Tower => &rep.tower,
                _ => {
                    extra.push(("reading", to_value(&rep.reading)?));
                    extra.push(("second_m_failures", json!(rep.second_m_failures)));
                    extra.push(("second_n_failures", json!(rep.second_n_failures)));
                    &rep.lemma6
                }
            };
            report_outcome(report, &extra)
        }
        CheckKind::Thm7 => report_outcome(&theorem7_check(&pool, &p, range)?, &[]),
        CheckKind::Thm8 => report_outcome(&theorem8_check(&pool, &p, range)?, &[]),
        CheckKind::Thm9 => report_outcome(&theorem9_check(&multiplicity_table(&pool, &p)?)?, &[]),
        CheckKind::Openq => {
            let entry = open_question_entry(&multiplicity_table(&pool, &p)?)?;
            let mut v = to_value(&entry)?;
            v["note"] = json!(if entry.flag {
                "candidate counterexample: f multiplicative in range while f_iso is not"
            } else {
                "no flag in range; this says nothing beyond it"
            });
            Ok(Outcome::ok(v))
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let common = &cli.common;
    let csv_ok = matches!(cli.command, Command::Count { .. } | Command::Ssl { action: SslAction::Count, .. });
    if common.format == Format::Csv && !csv_ok {
        return Err(Error::Parse("--format csv is available for count and ssl count only".into()));
    }
    match &cli.command {
        Command::Sigma { lattice, isometry } => {
            let l = resolve_lattice(lattice)?;
            let r = resolve_isometry(isometry, l.dim())?;
            let rec = csl(&PointGroup::of(&l)?, &r)?;
            let mut v = to_value(&rec)?;
            v["den"] = json!(den(&l, &r)?);
            Ok(Outcome::ok(v))
        }
        Command::Enumerate { lattice, max_sigma } => {
            let l = resolve_lattice(lattice)?;
            Ok(Outcome::ok(to_value(&enumerate_auto(&l, *max_sigma)?)?))
        }
        Command::Count { lattice, max_index } => {
            let l = resolve_lattice(lattice)?;
            let (pool, p) = pool_for(&l, *max_index)?;
            let table = multiplicity_table(&pool, &p)?;
            Ok(Outcome {
                output: match common.format {
                    Format::Csv => Output::Csv(table.to_csv()?),
                    Format::Json => Output::Json(to_value(&table)?),
                },
                failed: false,
            })
        }
        Command::Series { lattice, terms } => {
            let l = resolve_lattice(lattice)?;
            let (pool, p) = pool_for(&l, *terms)?;
            let data = dirichlet_coefficients(&multiplicity_table(&pool, &p)?.series(Which::F)?);
            let mut v = json!({ "lattice": crate::theorems::lattice_label(&l), "dirichlet": to_value(&data)? });
            let mut failed = false;
            if Preset::identify(&l) == Some(Preset::Square) {
                let euler = euler_product_square(*terms);
                failed = euler.coefficients != data.coefficients;
                v["euler_product"] = to_value(&euler)?;
                v["agree"] = json!(!failed);
            }
            Ok(Outcome { output: Output::Json(v), failed })
        }
        Command::Check { which, lattice, range } => check(*which, &resolve_lattice(lattice)?, *range, common),
        Command::Decompose { lattice, isometry, pi } => {
            let l = resolve_lattice(lattice)?;
            let r = resolve_isometry(isometry, l.dim())?;
            let p = PointGroup::of(&l)?;
            let rec = csl(&p, &r)?;
            let pool = enumerate_auto(&l, rec.sigma)?;
            let mut v = json!({ "sigma": rec.sigma, "csl_decomposition": to_value(&decompose_csl(&rec, &pool)?)? });
            if let Some(pi) = pi {
                v["pi_decomposition"] = to_value(&pi_decompose(&r, pi, &pool, &p)?)?;
            }
            Ok(Outcome::ok(v))
        }
        Command::Ssl { action, lattice, max_index } => {
            let l = resolve_lattice(lattice)?;
            match action {
                SslAction::Count => {
                    let table = ssl_table(&l, *max_index)?;
                    Ok(Outcome {
                        output: match common.format {
                            Format::Csv => Output::Csv(table.to_csv()?),
                            Format::Json => Output::Json(to_value(&table)?),
                        },
                        failed: false,
                    })
                }
                SslAction::Check => ssl_check(&l, *max_index),
            }
        }
    }
}

fn ssl_check(l: &Lattice, n: u64) -> Result<Outcome> {
    let pool = enumerate_auto(l, n)?;
    let mut failures = vec![];
    for rec in &pool.records {
        match primitive_ssl(l, &rec.isometry) {
            Ok(_) => {}
            Err(Error::Internal(msg)) => failures.push(json!({ "isometry": to_value(&rec.isometry)?, "detail": msg })),
            Err(e) => return Err(e),
        }
    }
    let contrast = ssl_contrast(l, &[n])?;
    let failed = !failures.is_empty() || !contrast.g_supermultiplicative;
    let v = json!({
        "lattice": contrast.lattice,
        "range": n,
        "isometries_tested": pool.records.len(),
        "primitive_index_failures": failures,
        "g_supermultiplicative": contrast.g_supermultiplicative,
        "g_witnesses": to_value(&contrast.g_witnesses)?,
        "f_witnesses": to_value(&contrast.f_witnesses)?,
    });
    Ok(Outcome { output: Output::Json(v), failed })
}

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)
}

fn configure_threads() {
    if let Some(n) = std::env::var("CSL_LAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()).filter(|&n| n > 0) {
        // a global pool may already exist when embedded in tests
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    configure_threads();
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let text = match &outcome.output {
        Output::Json(v) => serde_json::to_string_pretty(v).expect("values serialize") + "\n",
        Output::Csv(s) => s.clone(),
    };
    match &cli.common.output {
        Some(path) => {
            if let Err(e) = write_atomic(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 1;
            }
        }
        None => print!("{text}"),
    }
    if outcome.failed {
        eprintln!("check failed");
        2
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isometry_specs() {
        assert_eq!(resolve_isometry("rot90", 2).unwrap(), resolve_isometry("0,-1;1,0", 2).unwrap());
        assert_eq!(resolve_isometry("r5", 2).unwrap(), resolve_isometry("3/5,-4/5;4/5,3/5", 2).unwrap());
        assert!(resolve_isometry("q3", 2).is_err());
        assert!(resolve_isometry("1,1;0,1", 2).is_err());
        assert!(resolve_isometry("nonsense", 2).is_err());
        assert_eq!(resolve_isometry("identity", 3).unwrap(), Isometry::identity(3));
        let r65 = resolve_isometry("r65", 2).unwrap();
        assert_eq!(crate::csl::sigma(&Lattice::integer(2), &r65).unwrap(), 65);
    }

    #[test]
    fn lattice_specs() {
        assert_eq!(resolve_lattice("2zx3z").unwrap(), Lattice::diagonal(&[2, 3]).unwrap());
        assert!(matches!(resolve_lattice("hexagonal"), Err(Error::Parse(_))));
    }
}
