//! Command-line front end.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::asymptotics::{beta, double_scaling, shifted_critical, AsymptoticsError};
use crate::dipole::{audit_dipoles, iterative_reduction_stats};
use crate::enumerate::{
    budget_from_env, count_rooted_with_budget, enumerate_rooted, scheme_catalog_with, EnumError, DEFAULT_D3_CAP,
};
use crate::graph::{ColoredGraph, GraphRecord};
use crate::reduction::{core, core_graph_with, find_melons, is_melonic};
use crate::scheme::scheme_of;
use crate::series::{assemble_degree_series, closed_form_f_dminus2, fraction};

pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "melonforge", version, about = "Rooted colored graphs by degree: counts, cores, schemes, series")]
pub struct Cli {
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Maximum number of search states before refusing.
    #[arg(long, global = true)]
    pub budget: Option<u128>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Brute-force count of rooted connected graphs.
    Count {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        by_degree: bool,
    },
    /// Melon-free core of a graph read as JSON.
    Reduce {
        #[arg(long)]
        input: PathBuf,
        /// Writes the core as JSON.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Catalog of schemes of one degree.
    Schemes {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
    },
    /// Degree generating function assembled from the scheme catalog.
    Series {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        k_max: Option<usize>,
        /// Also prints the closed form for degree D−2.
        #[arg(long)]
        closed_form: bool,
    },
    /// Dominant-scheme linear program.
    Lp {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        degree: usize,
    },
    /// Double-scaling resummation at one point.
    DoubleScaling {
        #[arg(long)]
        dim: usize,
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        z: f64,
    },
    /// Invariant suite over every rooted graph up to `k_max`.
    Check {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
    },
}

/// Failure of a subcommand with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<EnumError> for Failure {
    fn from(e: EnumError) -> Self {
        let code = if matches!(e, EnumError::SearchTooLarge { .. }) { EXIT_BUDGET } else { EXIT_USAGE };
        Failure { code, message: e.to_string() }
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure { code: EXIT_USAGE, message: e.to_string() }
}

impl From<AsymptoticsError> for Failure {
    fn from(e: AsymptoticsError) -> Self {
        usage(e)
    }
}

struct Report {
    format: Format,
    out: String,
}

impl Report {
    fn line(&mut self, text: impl AsRef<str>, record: serde_json::Value) {
        match self.format {
            Format::Text => writeln!(self.out, "{}", text.as_ref()),
            Format::Json => writeln!(self.out, "{record}"),
        }
        .expect("writing to a String");
    }
}

/// Runs a parsed command, returning the report or a failure.
pub fn run(cli: &Cli) -> Result<String, Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers.unwrap_or(0))
        .build()
        .map_err(usage)?;
    pool.install(|| dispatch(cli))
}

/// Parses `args` (without the program name), runs, and returns `(exit code, stdout, stderr)`.
pub fn run_args<I, S>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once("melonforge".into()).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            return if code == 0 { (0, e.to_string(), String::new()) } else { (code, String::new(), e.to_string()) };
        }
    };
    match run(&cli) {
        Ok(out) => (0, out, String::new()),
        Err(f) => (f.code, String::new(), format!("error: {}\n", f.message)),
    }
}

fn dispatch(cli: &Cli) -> Result<String, Failure> {
    let budget = cli.budget.unwrap_or_else(budget_from_env);
    let mut r = Report { format: cli.format, out: String::new() };
    match &cli.command {
        &Command::Count { dim, k, by_degree } => {
            let t = count_rooted_with_budget(dim, k, budget)?;
            if by_degree {
                for (d, n) in &t.counts {
                    r.line(format!("{d}: {n}"), json!({"kind": "count", "dim": dim, "k": k, "degree": d, "count": n.to_string()}));
                }
            }
            r.line(format!("total: {}", t.total()), json!({"kind": "total", "dim": dim, "k": k, "count": t.total().to_string()}));
        }
        Command::Reduce { input, output } => {
            let text = std::fs::read_to_string(input).map_err(usage)?;
            let g = serde_json::from_str::<GraphRecord>(&text).map_err(usage)?.validate().map_err(usage)?;
            let dec = core(&g).map_err(usage)?;
            let melons = find_melons(&g).len();
            let (k, enc) = match &dec.core {
                Some(c) => (c.k(), hex(&c.canonical_encoding().map_err(usage)?)),
                None => (0, String::new()),
            };
            r.line(format!("degree: {}", g.degree()), json!({"kind": "degree", "degree": g.degree()}));
            r.line(format!("melons: {melons}"), json!({"kind": "melons", "count": melons}));
            r.line(format!("melonic: {}", is_melonic(&g)), json!({"kind": "melonic", "value": is_melonic(&g)}));
            r.line(format!("core k: {k}"), json!({"kind": "core", "k": k, "encoding": enc}));
            if !enc.is_empty() {
                r.line(format!("core encoding: {enc}"), json!({"kind": "core_encoding", "hex": enc}));
            }
            if let (Some(path), Some(c)) = (output, &dec.core) {
                let rec = GraphRecord::from(c);
                std::fs::write(path, serde_json::to_string_pretty(&rec).map_err(usage)?).map_err(usage)?;
            }
        }
        &Command::Schemes { dim, degree, k_max } => {
            let cat = scheme_catalog_with(dim, degree, k_max, budget, DEFAULT_D3_CAP)?;
            r.line(
                format!("schemes: {} (k <= {}, {:?})", cat.schemes.len(), cat.k_max, cat.completeness),
                json!({"kind": "catalog", "dim": dim, "degree": degree, "k_max": cat.k_max, "count": cat.schemes.len(), "completeness": cat.completeness}),
            );
            for (sig, n) in cat.signatures() {
                r.line(
                    format!(
                        "p={} b_eq={} b_ne={} c_eq={} c_ne={}: {n}",
                        sig.p, sig.broken_equal, sig.broken_distinct, sig.unbroken_equal, sig.unbroken_distinct
                    ),
                    json!({"kind": "signature", "signature": sig, "count": n}),
                );
            }
            if cli.format == Format::Json {
                for s in cat.schemes.values() {
                    r.line("", json!({"kind": "scheme", "record": s.to_record()}));
                }
            }
        }
        &Command::Series { dim, degree, order, k_max, closed_form } => {
            let k_max = k_max.unwrap_or(order.max(2));
            let cat = scheme_catalog_with(dim, degree, k_max, budget, DEFAULT_D3_CAP)?;
            let s = assemble_degree_series(dim, &cat.schemes(), order).map_err(usage)?;
            let coeffs: Vec<String> = s.coeffs().iter().map(fraction).collect();
            r.line(format!("{s}"), json!({"kind": "series", "dim": dim, "degree": degree, "order": order, "coefficients": coeffs}));
            if closed_form {
                if degree + 2 != dim {
                    return Err(usage(format!("the closed form covers degree D-2 = {} only", dim - 2)));
                }
                let c = closed_form_f_dminus2(dim, order);
                let cc: Vec<String> = c.coeffs().iter().map(fraction).collect();
                r.line(format!("closed form: {c}"), json!({"kind": "closed_form", "coefficients": cc}));
                let diff: Vec<usize> = (0..=order).filter(|&n| s.coeff(n) != c.coeff(n)).collect();
                r.line(
                    format!("differs at: {diff:?}"),
                    json!({"kind": "comparison", "differs_at": diff}),
                );
            }
        }
        &Command::Lp { dim, degree } => {
            if dim < 3 {
                return Err(usage("D must be at least 3"));
            }
            let lp = beta(dim, degree);
            match lp.beta {
                Some(b) => {
                    r.line(format!("beta = {b}"), json!({"kind": "beta", "dim": dim, "degree": degree, "beta": b}));
                    for (x, y) in &lp.optimal {
                        r.line(format!("(x, y) = ({x}, {y})"), json!({"kind": "optimal", "x": x, "y": y}));
                    }
                }
                None => r.line("infeasible", json!({"kind": "beta", "dim": dim, "degree": degree, "beta": null})),
            }
        }
        &Command::DoubleScaling { dim, n, z } => {
            let ds = double_scaling(dim, n as f64, z)?;
            let z1 = shifted_critical(dim, n);
            r.line(format!("value: {:.12}", ds.value), json!({"kind": "double_scaling", "value": ds.value, "T": ds.t, "u": ds.u}));
            r.line(format!("z1: {} ({:.12})", fraction(&z1), ds.z1), json!({"kind": "z1", "exact": fraction(&z1), "value": ds.z1}));
            r.line(format!("1 - 4y: {:.12}", ds.discriminant), json!({"kind": "distance", "value": ds.discriminant}));
        }
        &Command::Check { dim, k_max } => {
            let mut failed = false;
            let mut tallies = [("degree", 0usize, 0usize), ("faces", 0, 0), ("core", 0, 0), ("dipoles", 0, 0), ("bound", 0, 0)];
            for k in 1..=k_max {
                for g in enumerate_rooted(dim, k, budget, |_| true)? {
                    for (i, ok) in check_graph(&g).into_iter().enumerate() {
                        if let Some(ok) = ok {
                            tallies[i].1 += 1;
                            if !ok {
                                tallies[i].2 += 1;
                            }
                        }
                    }
                }
            }
            for (name, n, bad) in tallies {
                failed |= bad > 0;
                r.line(format!("{name}: {n} checked, {bad} violations"), json!({"kind": "check", "name": name, "checked": n, "violations": bad}));
            }
            if failed {
                return Err(Failure { code: EXIT_VIOLATION, message: format!("invariant violations\n{}", r.out) });
            }
        }
    }
    Ok(r.out)
}

/// Degree, face identities, core order-independence, dipole audit and the size bound.
fn check_graph(g: &ColoredGraph) -> [Option<bool>; 5] {
    let degree = Some(g.checked_degree().ok() == g.degree_via_jackets().ok());
    let faces = Some(g.face_identities().all());
    let a = core_graph_with(g, |_| 0).map(|c| c.canonical_encoding().expect("rooted"));
    let b = core_graph_with(g, |m| m.len() - 1).map(|c| c.canonical_encoding().expect("rooted"));
    let core = Some(a == b);
    let dipoles = Some(audit_dipoles(g).iter().all(|(_, r)| r.consistent()));
    let bound = scheme_of(g).ok().map(|s| iterative_reduction_stats(&s).is_ok_and(|st| st.violations().is_empty()));
    [degree, faces, core, dipoles, bound]
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
