//! Command-line front end: argument parsing and table/CSV/JSON rendering.
//!
//! Every subcommand produces either a single record or a list of rows; the
//! renderers are shared. Output is deterministic for fixed flags and seed.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::arakelov::{
    arakelov_volume, count_points_in_ball, log_unit_basis, radius_for_volume, ArakelovSampler, McEstimate,
};
use crate::cyclo_field::create_field;
use crate::epstein::{epstein_continued, functional_equation_residual, LatticeGram};
use crate::error::{Error, Result};
use crate::gamma::GammaRatioBoundConfig;
use crate::hecke::{error_term, hecke_lhs_mc, hecke_rhs, DEFAULT_SIGMA, DEFAULT_T};
use crate::packing::{certified_volume_bound, default_margin, primorial_table, stark_check};
use crate::zeta::{subconvexity_profile, DedekindZeta};

/// JSON schema version of every record.
pub const SCHEMA_VERSION: u64 = 1;
const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "ilz", version, about = "Average lattice-point counts of random ideal lattices of cyclotomic fields")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "table", global = true)]
    pub format: Format,
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: ILZ_THREADS, else all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for Monte Carlo sampling.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree, signature, discriminant and unit data of Q(ζ_n).
    FieldInfo { n: u64 },
    /// Dedekind zeta ζ_K(s) with its error estimate.
    Zeta {
        n: u64,
        /// RE or RE,IM
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Complex64,
    },
    /// Continued Epstein zeta of a lattice given by its Gram matrix.
    Epstein {
        #[arg(long)]
        gram: PathBuf,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Complex64,
    },
    /// Monte Carlo average of E(Λ, d s) against the closed form.
    HeckeCheck {
        n: u64,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Monte Carlo mean count in a ball of volume V against 1 + V + ε.
    MeanCount {
        n: u64,
        #[arg(long)]
        volume: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Contour-integral error term ε(V).
    ErrorTerm {
        n: u64,
        #[arg(long)]
        volume: f64,
        #[arg(long, default_value_t = DEFAULT_SIGMA)]
        sigma: f64,
        #[arg(long, default_value_t = DEFAULT_T)]
        tmax: f64,
    },
    /// Certified packing volume bound V*.
    PackingCertify {
        n: u64,
        /// Margin below n (default 0.01·n).
        #[arg(long)]
        margin: Option<f64>,
        /// Monte Carlo samples for the soundness check (0 skips it).
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Dimensions φ(n) for primorial conductors.
    PrimorialTable {
        #[arg(long, default_value_t = 10)]
        kmax: usize,
    },
    /// Fit of the constant in the gamma-ratio bound.
    GammaBound {
        #[arg(long, default_value_t = 64)]
        rmax: u32,
        #[arg(long, default_value_t = 100.0)]
        tmax: f64,
        #[arg(long, default_value_t = 0.1)]
        dt: f64,
    },
    /// |ζ_K(1/2 + it)| against the convexity-shaped curves.
    SubconvexityProfile {
        n: u64,
        #[arg(long, default_value_t = 50.0)]
        tmax: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
    },
}

fn parse_complex(text: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = text.split(',').collect();
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected RE or RE,IM, got '{text}'")),
    }
}

/// A rendered cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i128)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}
impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i128)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_significant(*v, 12),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => i64::try_from(*v).map_or_else(|_| Value::String(v.to_string()), Value::from),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Null => Value::Null,
        }
    }
}

/// Like C's `%.{digits}g`: fixed or scientific notation, trailing zeros trimmed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim(mantissa.to_string()), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(format!("{:.*}", decimals, x))
    }
}

/// Output of one subcommand.
#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Record { command: &'static str, fields: Vec<(&'static str, Cell)> },
    Rows { command: &'static str, columns: Vec<&'static str>, rows: Vec<Vec<Cell>> },
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.table(),
            Format::Csv => self.csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json()).expect("JSON values serialize");
                s.push('\n');
                s
            }
        }
    }

    fn json(&self) -> Value {
        let mut map = Map::new();
        map.insert("schema".into(), Value::from(SCHEMA_VERSION));
        match self {
            Report::Record { command, fields } => {
                map.insert("command".into(), Value::from(*command));
                for (k, v) in fields {
                    map.insert((*k).into(), v.json());
                }
            }
            Report::Rows { command, columns, rows } => {
                map.insert("command".into(), Value::from(*command));
                let rows = rows
                    .iter()
                    .map(|row| Value::Object(columns.iter().zip(row).map(|(k, v)| ((*k).into(), v.json())).collect()))
                    .collect();
                map.insert("rows".into(), Value::Array(rows));
            }
        }
        Value::Object(map)
    }

    fn grid(&self) -> (Vec<String>, Vec<Vec<String>>) {
        match self {
            Report::Record { fields, .. } => (
                fields.iter().map(|(k, _)| k.to_string()).collect(),
                vec![fields.iter().map(|(_, v)| v.text()).collect()],
            ),
            Report::Rows { columns, rows, .. } => (
                columns.iter().map(|c| c.to_string()).collect(),
                rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect(),
            ),
        }
    }

    fn csv(&self) -> String {
        let quote = |s: &str| {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        };
        let (head, rows) = self.grid();
        let mut out = String::new();
        for line in std::iter::once(&head).chain(&rows) {
            let cells: Vec<String> = line.iter().map(|c| quote(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn table(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Record { fields, .. } => {
                let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in fields {
                    let _ = writeln!(out, "{k:<width$}  {}", v.text());
                }
            }
            Report::Rows { .. } => {
                let (head, rows) = self.grid();
                let widths: Vec<usize> = (0..head.len())
                    .map(|j| rows.iter().map(|r| r[j].chars().count()).chain([head[j].len()]).max().unwrap_or(0))
                    .collect();
                let line = |cells: &[String]| {
                    let padded: Vec<String> =
                        cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                    padded.join("  ").trim_end().to_string()
                };
                let _ = writeln!(out, "{}", line(&head));
                let _ = writeln!(out, "{}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
                for r in &rows {
                    let _ = writeln!(out, "{}", line(r));
                }
            }
        }
        out
    }
}

/// Read a Gram matrix: first line d, then d lines of d floats.
pub fn read_gram_file(path: &std::path::Path) -> Result<LatticeGram> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let bad = |what: String| Error::InvalidArgument(format!("{}: {what}", path.display()));
    let d: usize = lines
        .next()
        .ok_or_else(|| bad("empty file".into()))?
        .parse()
        .map_err(|e| bad(format!("dimension line: {e}")))?;
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        let line = lines.next().ok_or_else(|| bad(format!("missing row {}", i + 1)))?;
        let row: Vec<f64> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|e| bad(format!("row {}: '{s}': {e}", i + 1))))
            .collect::<Result<_>>()?;
        if row.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: row.len() });
        }
        entries.extend(row);
    }
    LatticeGram::from_rows(d, &entries)
}

fn field_info(n: u64) -> Result<Report> {
    let k = create_field(n)?;
    let basis = log_unit_basis(&k).ok();
    let (residue, floor) = stark_check(&k);
    let conductor_product: num_bigint::BigUint = DedekindZeta::new(&k)?
        .characters()
        .iter()
        .map(|chi| num_bigint::BigUint::from(chi.conductor()))
        .product();
    Ok(Report::Record {
        command: "field-info",
        fields: vec![
            ("n", n.into()),
            ("d", k.degree().into()),
            ("r2", k.r2().into()),
            ("abs_disc", k.abs_disc().to_string().into()),
            ("log_abs_disc", k.log_abs_disc().into()),
            ("conductor_product", conductor_product.to_string().into()),
            ("torsion_order", k.torsion_order().into()),
            ("unit_rank", (k.r2() - 1).into()),
            ("regulator_like", basis.as_ref().map(|b| b.regulator_like).into()),
            ("arakelov_volume", basis.as_ref().map(|b| arakelov_volume(&k, b)).into()),
            ("residue_at_one", residue.into()),
            ("sqrt_disc_times_residue", ((0.5 * k.log_abs_disc()).exp() * residue).into()),
            ("stark_floor", floor.into()),
        ],
    })
}

fn zeta(n: u64, s: Complex64) -> Result<Report> {
    let k = create_field(n)?;
    let (value, err) = DedekindZeta::new(&k)?.eval_with_error(s)?;
    Ok(Report::Record {
        command: "zeta",
        fields: vec![
            ("n", n.into()),
            ("s_re", s.re.into()),
            ("s_im", s.im.into()),
            ("re", value.re.into()),
            ("im", value.im.into()),
            ("abs", value.norm().into()),
            ("est_error", err.into()),
        ],
    })
}

fn epstein(path: &std::path::Path, s: Complex64) -> Result<Report> {
    let lattice = read_gram_file(path)?;
    let value = epstein_continued(&lattice, s)?;
    let residual = match functional_equation_residual(&lattice, s) {
        Ok(r) => Some(r),
        Err(Error::NotUnitCovolume(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(Report::Record {
        command: "epstein",
        fields: vec![
            ("d", lattice.dim().into()),
            ("covolume", lattice.covolume().into()),
            ("s_re", s.re.into()),
            ("s_im", s.im.into()),
            ("re", value.re.into()),
            ("im", value.im.into()),
            ("fe_residual", residual.into()),
        ],
    })
}

fn hecke_check(n: u64, s: f64, samples: usize, seed: u64) -> Result<Report> {
    let k = create_field(n)?;
    let rhs = hecke_rhs(&k, s)?;
    let lhs = hecke_lhs_mc(&k, s, samples, seed)?;
    // rank-0 fields have a single lattice up to rotation: the spread is pure rounding
    let z = (lhs.mean - rhs) / lhs.stderr.max(1e-12 * rhs.abs());
    Ok(Report::Record {
        command: "hecke-check",
        fields: vec![
            ("n", n.into()),
            ("d", k.degree().into()),
            ("s", s.into()),
            ("samples", samples.into()),
            ("seed", seed.into()),
            ("lhs_mean", lhs.mean.into()),
            ("lhs_stderr", lhs.stderr.into()),
            ("rhs", rhs.into()),
            ("z_score", z.into()),
        ],
    })
}

fn mean_count(n: u64, volume: f64, samples: usize, seed: u64) -> Result<Report> {
    let k = create_field(n)?;
    if !(volume >= 0.0) {
        return Err(Error::InvalidArgument(format!("volume {volume} must be non-negative")));
    }
    let sampler = ArakelovSampler::new(&k)?;
    let radius = radius_for_volume(k.degree(), volume);
    let counts = sampler.map(samples, seed, |l| count_points_in_ball(l, radius));
    let w = k.torsion_order();
    let residues_ok = counts.iter().all(|c| (c - 1) % w == 0);
    let mc = McEstimate::from_values(&counts.iter().map(|&c| c as f64).collect::<Vec<_>>());
    let et = match error_term(&k, volume, DEFAULT_SIGMA, DEFAULT_T) {
        Ok(r) => Some(r),
        Err(Error::InsufficientDecay(_)) => None,
        Err(e) => return Err(e),
    };
    let prediction = et.map(|r| 1.0 + volume + r.epsilon);
    let allowance = et.map(|r| 3.0 * mc.stderr + r.quad_error_est + r.tail_bound);
    Ok(Report::Record {
        command: "mean-count",
        fields: vec![
            ("n", n.into()),
            ("volume", volume.into()),
            ("radius", radius.into()),
            ("samples", samples.into()),
            ("seed", seed.into()),
            ("mc_mean", mc.mean.into()),
            ("mc_stderr", mc.stderr.into()),
            ("prediction", prediction.into()),
            ("epsilon", et.map(|r| r.epsilon).into()),
            ("quad_error_est", et.map(|r| r.quad_error_est).into()),
            ("tail_bound", et.map(|r| r.tail_bound).into()),
            ("allowed_deviation", allowance.into()),
            ("within_allowance", prediction.zip(allowance).map(|(p, a)| (mc.mean - p).abs() < a).into()),
            ("torsion_order", w.into()),
            ("counts_in_1_plus_wZ", residues_ok.into()),
        ],
    })
}

fn error_term_report(n: u64, volume: f64, sigma: f64, tmax: f64) -> Result<Report> {
    let k = create_field(n)?;
    let r = error_term(&k, volume, sigma, tmax)?;
    Ok(Report::Record {
        command: "error-term",
        fields: vec![
            ("n", n.into()),
            ("volume", volume.into()),
            ("epsilon", r.epsilon.into()),
            ("sigma", r.sigma.into()),
            ("T", r.t_max.into()),
            ("quad_error_est", r.quad_error_est.into()),
            ("tail_bound", r.tail_bound.into()),
            ("tail_is_heuristic", r.tail_is_heuristic.into()),
            ("n_nodes", r.n_nodes.into()),
            ("imag_part", r.imag_part.into()),
            ("mean_count_prediction", (1.0 + volume + r.epsilon).into()),
        ],
    })
}

fn packing_certify(n: u64, margin: Option<f64>, samples: usize, seed: u64) -> Result<Report> {
    let k = create_field(n)?;
    let margin = margin.unwrap_or_else(|| default_margin(&k));
    let cert = certified_volume_bound(&k, margin)?;
    let mut fields = vec![
        ("n", n.into()),
        ("d", cert.degree.into()),
        ("margin", cert.margin.into()),
        ("v_star", cert.v_star.into()),
        ("epsilon", cert.epsilon.into()),
        ("quad_error_est", cert.quad_error_est.into()),
        ("tail_bound", cert.tail_bound.into()),
        ("sigma", cert.sigma.into()),
        ("T", cert.t_max.into()),
        ("slack", cert.slack.into()),
        ("holds", cert.holds().into()),
        ("kind", cert.kind.into()),
    ];
    if samples > 0 {
        let mc = crate::arakelov::mean_count_mc(&k, cert.v_star, samples, seed)?;
        let gap = 1.0 + n as f64 - margin / 2.0;
        fields.extend([
            ("mc_samples", samples.into()),
            ("mc_mean", mc.mean.into()),
            ("mc_stderr", mc.stderr.into()),
            ("mc_below_gap", (mc.mean - 3.0 * mc.stderr < gap).into()),
        ]);
    }
    Ok(Report::Record { command: "packing-certify", fields })
}

fn primorials(kmax: usize) -> Result<Report> {
    let rows = primorial_table(kmax)?
        .into_iter()
        .map(|r| vec![r.k.into(), r.n.into(), r.phi.into(), r.n_over_phi.into(), r.phi_log_log_phi.into()])
        .collect();
    Ok(Report::Rows { command: "primorial-table", columns: vec!["k", "n", "phi", "n_over_phi", "phi_log_log_phi"], rows })
}

fn gamma_bound(rmax: u32, tmax: f64, dt: f64) -> Result<Report> {
    if rmax == 0 || !(tmax >= 0.0) || !(dt > 0.0) {
        return Err(Error::InvalidArgument("need rmax ≥ 1, tmax ≥ 0, dt > 0".into()));
    }
    let cfg = GammaRatioBoundConfig::fit(rmax, tmax, dt);
    Ok(Report::Record {
        command: "gamma-bound",
        fields: vec![
            ("C", cfg.c.into()),
            ("raw_max", cfg.raw_max.into()),
            ("argmax_r", cfg.argmax.0.into()),
            ("argmax_t", cfg.argmax.1.into()),
            ("fitted_over", cfg.fitted_over.clone().into()),
            ("worst_excess", cfg.worst_excess(rmax, tmax, dt).into()),
        ],
    })
}

fn subconvexity(n: u64, tmax: f64, step: f64) -> Result<Report> {
    if !(step > 0.0) || !(tmax >= 0.0) {
        return Err(Error::InvalidArgument("need tmax ≥ 0 and step > 0".into()));
    }
    let k = create_field(n)?;
    let count = (tmax / step + 1e-9).floor() as usize;
    let grid: Vec<f64> = (0..=count).map(|i| i as f64 * step).collect();
    let rows = subconvexity_profile(&k, &grid)?
        .into_iter()
        .map(|r| vec![r.t.into(), r.zeta_abs.into(), r.convexity_curve.into(), r.py_curve.into()])
        .collect();
    Ok(Report::Rows {
        command: "subconvexity-profile",
        columns: vec!["t", "zeta_abs", "convexity_curve", "py_curve"],
        rows,
    })
}

/// Evaluate a parsed command.
pub fn execute(cli: &Cli) -> Result<Report> {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    match &cli.command {
        Command::FieldInfo { n } => field_info(*n),
        Command::Zeta { n, s } => zeta(*n, *s),
        Command::Epstein { gram, s } => epstein(gram, *s),
        Command::HeckeCheck { n, s, samples } => hecke_check(*n, *s, *samples, seed),
        Command::MeanCount { n, volume, samples } => mean_count(*n, *volume, *samples, seed),
        Command::ErrorTerm { n, volume, sigma, tmax } => error_term_report(*n, *volume, *sigma, *tmax),
        Command::PackingCertify { n, margin, samples } => packing_certify(*n, *margin, *samples, seed),
        Command::PrimorialTable { kmax } => primorials(*kmax),
        Command::GammaBound { rmax, tmax, dt } => gamma_bound(*rmax, *tmax, *dt),
        Command::SubconvexityProfile { n, tmax, step } => subconvexity(*n, *tmax, *step),
    }
}

fn configure_threads(requested: Option<usize>) -> std::result::Result<(), String> {
    let threads = match requested {
        Some(t) => Some(t),
        None => match std::env::var("ILZ_THREADS") {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|e| format!("ILZ_THREADS='{v}': {e}"))?),
            Err(_) => None,
        },
    };
    if let Some(t) = threads {
        if t == 0 {
            return Err("thread count must be at least 1".into());
        }
        // a pool may already exist when called repeatedly in-process; its size then stands
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    Ok(())
}

/// Run the CLI on `argv` (including the program name) and return the exit code:
/// 0 on success, 1 on a computation error, 2 on a usage error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Err(msg) = configure_threads(cli.threads) {
        eprintln!("error: {msg}");
        return 2;
    }
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            return 1;
        }
    };
    let text = report.render(cli.format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                let e = Error::from(e);
                eprintln!("error: {}: {e}", e.name());
                return 1;
            }
        }
        None => print!("{text}"),
    }
    0
}
