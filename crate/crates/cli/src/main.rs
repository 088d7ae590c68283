//! `fplkit`: batch front end for the verification reports.
//!
//! Exit codes: 0 when every theorem-backed check passes, 1 when one fails,
//! 2 on usage errors (bad flags, sizes over the limits).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fpl_core::det::{r_func, RFuncSpec};
use fpl_core::formula::{self, FormulaResult, OracleLimits, Which};
use fpl_core::fpl::{count_by_coupling, count_ht_by_coupling, EnumOptions, Symmetry};
use fpl_core::rational::{fmt_rational, parse_rational, BigRational};
use fpl_core::report::ReconciliationReport;
use fpl_core::stationary::{verify_dg, verify_refined, verify_rs};
use fpl_core::tiling::{ciucu_factorize_check, count_matchings, cspp_bijection, region_rl};
use fpl_core::Error;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "fplkit", version, about = "Exact FPL enumeration and verification reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads; output does not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    workers: Option<u32>,

    /// Largest FPL grid size to enumerate.
    #[arg(long, default_value_t = 7, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    limit: u32,

    /// Largest region (in triangles) handed to the tiling oracle.
    #[arg(long, default_value_t = 64, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    limit_vertices: u32,

    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tallies of FPLs by coupling.
    Enumerate {
        #[arg(short = 'n', long)]
        size: usize,
        /// Half-turn symmetric FPLs only.
        #[arg(long)]
        ht: bool,
    },
    /// Runs one verification and prints its report.
    Verify {
        #[command(subcommand)]
        identity: Identity,
    },
    /// Determinant grid with tiling-oracle columns.
    Tables {
        /// Largest `n` in the grid.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Restrict to one weight pair (both `--x` and `--y`).
        #[arg(long, value_parser = rational, requires = "y")]
        x: Option<BigRational>,
        #[arg(long, value_parser = rational, requires = "x")]
        y: Option<BigRational>,
    },
    /// Printed product formulas against their oracles.
    Formulas {
        /// Largest argument index.
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Identity {
    /// Plain chain stationary vector against FPL tallies.
    Rs {
        #[arg(short = 'n', long)]
        size: usize,
    },
    /// Half-turn chain stationary vector against symmetric FPL tallies.
    Dg {
        #[arg(short = 'n', long)]
        size: usize,
    },
    /// Cross-multiplied refined identity at plain size `n`.
    Refined {
        #[arg(long)]
        n: usize,
    },
    /// Glued region, factorised formula and constrained enumeration.
    Ciucu {
        #[arg(short = 'n', long)]
        size: usize,
    },
    /// FPL to plane partition bijection at grid size `2n`.
    Bijection {
        #[arg(long)]
        n: usize,
    },
    /// One identity of the proposition, for `n = 1..=n`.
    Proposition {
        #[arg(long, value_parser = which)]
        which: Which,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// The remark's identity, for `n = 1..=n`.
    Remark {
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn which(s: &str) -> Result<Which, String> {
    Which::parse(s).ok_or_else(|| format!("expected one of eq1..eq5, remark; got {s:?}"))
}

/// A rendered result and whether a theorem-backed check failed.
struct Output {
    text: String,
    blocking: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        builder = builder.num_threads(w as usize);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start workers: {e}");
            return ExitCode::from(2);
        }
    };
    let result = pool.install(|| run(&cli));
    match result {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.text).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if out.blocking { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            let usage = matches!(e, Error::LimitExceeded { .. } | Error::Parse(_) | Error::EvenSlit(_) | Error::OddPuncture(_) | Error::InvalidGrid(_));
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}

fn run(cli: &Cli) -> fpl_core::Result<Output> {
    let limit = cli.limit as usize;
    let opts = EnumOptions::default().with_limit(limit);
    match &cli.command {
        Command::Enumerate { size, ht } => enumerate(*size, *ht, &opts, cli.format),
        Command::Verify { identity } => {
            let limits = OracleLimits { plain: limit, symmetric: limit.max(OracleLimits::default().symmetric) };
            let report = match identity {
                Identity::Rs { size } => verify_rs(*size, &opts)?,
                Identity::Dg { size } => verify_dg(*size, &opts)?,
                Identity::Refined { n } => {
                    check_size(2 * n, limit)?;
                    verify_refined(*n, &opts)?.0
                }
                Identity::Ciucu { size } => ciucu_factorize_check(*size, limit)?,
                Identity::Bijection { n } => {
                    check_size(2 * n, limit)?;
                    cspp_bijection(*n, limit)?.report()
                }
                Identity::Proposition { which, n } => formula::proposition_check(*which, *n, limits)?.report,
                Identity::Remark { n } => formula::proposition_check(Which::Remark, *n, limits)?.report,
            };
            Ok(Output { text: render_report(&report, cli.format), blocking: report.is_blocking_failure() })
        }
        Command::Tables { n, x, y } => {
            let pairs = match (x, y) {
                (Some(x), Some(y)) => vec![(x.clone(), y.clone())],
                _ => default_weight_pairs(),
            };
            Ok(Output { text: tables(*n, &pairs, cli.limit_vertices as usize, cli.format), blocking: false })
        }
        Command::Formulas { n } => {
            let limits = OracleLimits { plain: limit, symmetric: limit.max(OracleLimits::default().symmetric) };
            let results = formula_bank(*n, limits)?;
            Ok(Output { text: render_formulas(&results, cli.format), blocking: false })
        }
    }
}

fn check_size(size: usize, limit: usize) -> fpl_core::Result<()> {
    if size > limit {
        return Err(Error::LimitExceeded { size, limit });
    }
    Ok(())
}

fn enumerate(size: usize, ht: bool, opts: &EnumOptions, format: Format) -> fpl_core::Result<Output> {
    let rows: Vec<(String, String)> = if ht {
        count_ht_by_coupling(size, &EnumOptions { symmetry: Symmetry::HalfTurn, ..opts.clone() })?
            .into_iter()
            .map(|(c, k)| (c.label(), k.to_string()))
            .collect()
    } else {
        count_by_coupling(size, opts)?.into_iter().map(|(c, k)| (c.to_string(), k.to_string())).collect()
    };
    let total: u128 = rows.iter().map(|(_, k)| k.parse::<u128>().expect("tallies fit")).sum();
    let text = match format {
        Format::Json => {
            let rows: Vec<_> = rows.iter().map(|(c, k)| json!({ "coupling": c, "count": k })).collect();
            let v = json!({ "size": size, "half_turn": ht, "rows": rows, "total": total.to_string() });
            serde_json::to_string_pretty(&v).expect("plain json") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("coupling,count\n");
            for (c, k) in &rows {
                writeln!(s, "\"{c}\",{k}").unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (c, k) in &rows {
                writeln!(s, "{c} {k}").unwrap();
            }
            writeln!(s, "total {total}").unwrap();
            s
        }
    };
    Ok(Output { text, blocking: false })
}

fn render_report(r: &ReconciliationReport, format: Format) -> String {
    match format {
        Format::Json => r.to_json() + "\n",
        Format::Text => r.to_text(),
        Format::Csv => {
            let mut s = String::from("identity,size,label,lhs,rhs,equal,factor\n");
            for st in &r.states {
                writeln!(
                    s,
                    "{},{},\"{}\",{},{},{},{}",
                    r.identity,
                    r.size,
                    st.coupling,
                    st.lhs,
                    st.rhs,
                    st.equal,
                    st.factor.as_deref().unwrap_or("")
                )
                .unwrap();
            }
            s
        }
    }
}

fn default_weight_pairs() -> Vec<(BigRational, BigRational)> {
    let (h, one) = (BigRational::new(1.into(), 2.into()), BigRational::from_integer(1.into()));
    vec![(h.clone(), h.clone()), (h.clone(), one.clone()), (one.clone(), h), (one.clone(), one)]
}

struct TableRow {
    l: usize,
    n: usize,
    x: BigRational,
    y: BigRational,
    det: BigRational,
    tilings: Option<BigRational>,
}

fn tables(n_max: usize, pairs: &[(BigRational, BigRational)], limit_vertices: usize, format: Format) -> String {
    let mut rows = Vec::new();
    for l in 0..3 {
        for n in 0..=n_max {
            for (x, y) in pairs {
                let det = r_func(&RFuncSpec::new(l, n, x.clone(), y.clone()));
                let region = region_rl(n, l, x, y);
                let tilings = (region.vertex_count() <= limit_vertices).then(|| count_matchings(&region));
                rows.push(TableRow { l, n, x: x.clone(), y: y.clone(), det, tilings });
            }
        }
    }
    let ratio = |r: &TableRow| match &r.tilings {
        Some(t) if !r.det.is_zero_value() => Some(fmt_rational(&(t / &r.det))),
        _ => None,
    };
    match format {
        Format::Csv => {
            let mut s = String::from("l,n,x,y,det,tilings,ratio\n");
            for r in &rows {
                writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.l,
                    r.n,
                    fmt_rational(&r.x),
                    fmt_rational(&r.y),
                    fmt_rational(&r.det),
                    r.tilings.as_ref().map(fmt_rational).unwrap_or_default(),
                    ratio(r).unwrap_or_default()
                )
                .unwrap();
            }
            s
        }
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "l": r.l, "n": r.n, "x": fmt_rational(&r.x), "y": fmt_rational(&r.y),
                        "det": fmt_rational(&r.det),
                        "tilings": r.tilings.as_ref().map(fmt_rational),
                        "ratio": ratio(r),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&v).expect("plain json") + "\n"
        }
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                writeln!(
                    s,
                    "R_{}({};{},{}) = {}  tilings {}",
                    r.l,
                    r.n,
                    fmt_rational(&r.x),
                    fmt_rational(&r.y),
                    fmt_rational(&r.det),
                    r.tilings.as_ref().map(fmt_rational).unwrap_or_else(|| "-".into())
                )
                .unwrap();
            }
            s
        }
    }
}

trait IsZeroValue {
    fn is_zero_value(&self) -> bool;
}

impl IsZeroValue for BigRational {
    fn is_zero_value(&self) -> bool {
        *self.numer() == 0.into()
    }
}

fn formula_bank(n_max: usize, limits: OracleLimits) -> fpl_core::Result<Vec<FormulaResult>> {
    let mut out = Vec::new();
    for size in 1..=2 * n_max + 1 {
        out.push(formula::a_ht(size, limits)?);
    }
    for n in 0..=n_max {
        out.push(formula::a_v(n, limits)?);
        out.push(formula::a_v_signed(n, limits)?);
    }
    for n in 0..=n_max {
        out.push(formula::p_cstc(n));
        out.push(formula::r1_product(n));
        out.push(formula::a_v_term(n));
        out.push(formula::p_cssc(n));
        out.push(formula::p_qcssc(n));
    }
    for l in 0..3 {
        for n in 1..=n_max.min(3) {
            out.push(formula::kratt(l, n));
        }
    }
    Ok(out)
}

fn render_formulas(results: &[FormulaResult], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(results).expect("plain json") + "\n",
        Format::Csv => {
            let mut s = String::from("name,args,printed,oracle,status,factor\n");
            for r in results {
                let status = serde_json::to_value(&r.status).expect("plain json");
                writeln!(
                    s,
                    "\"{}\",\"{}\",{},{},{},{}",
                    r.name,
                    r.args,
                    r.printed,
                    r.oracle.as_deref().unwrap_or(""),
                    status.as_str().unwrap_or(""),
                    r.factor.as_deref().unwrap_or("")
                )
                .unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in results {
                let status = serde_json::to_value(&r.status).expect("plain json");
                write!(s, "{} [{}]: printed {}", r.name, r.args, r.printed).unwrap();
                if let Some(o) = &r.oracle {
                    write!(s, ", oracle {o}").unwrap();
                }
                write!(s, ", {}", status.as_str().unwrap_or("")).unwrap();
                if let Some(f) = &r.factor {
                    write!(s, " (factor {f})").unwrap();
                }
                s.push('\n');
            }
            s
        }
    }
}
