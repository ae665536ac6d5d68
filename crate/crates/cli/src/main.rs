use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use hsp_core::alga::NoiseMode;
use hsp_core::exact::factor::factor;
use hsp_core::exact::rational::{format_rat, parse_int, parse_rat};
use hsp_core::exact::{partial_fractions, snf, IntMatrix, RatMatrix};
use hsp_core::experiment::{
    matrix_json, run_hsp, run_shift, ExperimentReport, HspDescriptor, RunOptions, ShiftDescriptor,
};
use hsp_core::lattice::{default_delta, lll, Lattice};
use hsp_core::oracle::{
    check_hiding, integer_box, BrickOracle, HidingOracle, Predicate, RationalOracle, ShiftPairOracle,
    SparseSimonOracle, SparseVec,
};
use hsp_core::sieve::SieveNoise;

#[derive(Parser)]
#[command(name = "hsp", version, about = "Exact lattice tools and planted hidden-subgroup experiments")]
struct Cli {
    /// Emit JSON on standard output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normal forms and reductions of a matrix file ("-" reads stdin).
    Lattice {
        #[arg(value_enum)]
        op: LatticeOp,
        file: PathBuf,
    },
    /// Partial-fraction decomposition of a rational.
    Pf {
        #[arg(allow_hyphen_values = true)]
        value: String,
        /// Print the abbreviated form (one term per prime).
        #[arg(long, conflicts_with = "both")]
        abbrev: bool,
        /// Print both forms.
        #[arg(long)]
        both: bool,
    },
    /// Planted hidden-subgroup experiment.
    HspRecover {
        descriptor: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Attach the last recovery trace to each trial.
        #[arg(long)]
        debug_trace: bool,
    },
    /// Planted hidden-shift experiment through the sieve.
    ShiftRecover {
        descriptor: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Override the stage exponent.
        #[arg(long)]
        m: Option<u64>,
    },
    /// Evaluate a hiding oracle on one element.
    Oracle {
        #[command(subcommand)]
        kind: OracleKind,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, value_enum)]
    noise: Option<NoiseFlag>,
    /// Record wall-clock times (reports are then no longer reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeOp {
    Hnf,
    Snf,
    Lll,
    Reciprocal,
    Saturate,
}

#[derive(Clone, Copy, ValueEnum)]
enum NoiseFlag {
    Exact,
    Gaussian,
}

#[derive(Args)]
struct CheckArgs {
    /// Exhaustively verify the hiding property on a small box.
    #[arg(long)]
    check: bool,
    /// Half-width of the box used by --check.
    #[arg(long, default_value_t = 3)]
    radius: i64,
}

#[derive(Subcommand)]
enum OracleKind {
    /// x ↦ canonical representative of x + L.
    Brick {
        /// Matrix file whose columns generate L.
        #[arg(long)]
        lattice: PathBuf,
        /// Whitespace- or comma-separated integer vector.
        #[arg(allow_hyphen_values = true)]
        element: String,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Rationals modulo the denominators of the accepted primes.
    Rational {
        /// even, odd, all, none, or a comma-separated list of primes.
        #[arg(long)]
        accept: String,
        #[arg(allow_hyphen_values = true)]
        element: String,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Sparse vectors over ℤ modulo 2 and the accepted coordinates.
    SparseSimon {
        #[arg(long)]
        accept: String,
        /// For example "e2+e5" or "3e2-e7".
        #[arg(allow_hyphen_values = true)]
        element: String,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// f(x, a) = brick(x − a·s).
    Shift {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        shift: String,
        /// Selector a ∈ {0, 1}.
        #[arg(long, default_value_t = 0)]
        side: u8,
        #[arg(allow_hyphen_values = true)]
        element: String,
        #[command(flatten)]
        check: CheckArgs,
    },
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn parse_vector(s: &str) -> Result<Vec<BigInt>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| parse_int(t).map_err(Into::into))
        .collect()
}

fn read_lattice(path: &Path) -> Result<Lattice> {
    Ok(Lattice::from_generators(&IntMatrix::parse_text(&read_input(path)?)?))
}

fn cmd_lattice(op: LatticeOp, file: &Path, as_json: bool) -> Result<()> {
    let text = read_input(file)?;
    let (name, out, extra) = match op {
        LatticeOp::Hnf => ("hnf", Out::Int(Lattice::from_generators(&IntMatrix::parse_text(&text)?).basis().clone()), None),
        LatticeOp::Snf => {
            let (d, v, w) = snf(&IntMatrix::parse_text(&text)?);
            ("snf", Out::Int(d), Some(json!({ "v": matrix_json(&v), "w": matrix_json(&w) })))
        }
        LatticeOp::Lll => ("lll", Out::Rat(lll(&RatMatrix::parse_text(&text)?, &default_delta())?), None),
        LatticeOp::Reciprocal => {
            let l = Lattice::from_generators(&IntMatrix::parse_text(&text)?);
            ("reciprocal", Out::Rat(l.reciprocal_basis()?), None)
        }
        LatticeOp::Saturate => {
            let l = Lattice::from_generators(&IntMatrix::parse_text(&text)?);
            ("saturate", Out::Int(l.saturation().basis().clone()), None)
        }
    };
    if as_json {
        let mut v = json!({ "op": name, "matrix": out.json() });
        if let Some(extra) = extra {
            v["transforms"] = extra;
        }
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        print!("{}", out.text());
    }
    Ok(())
}

enum Out {
    Int(IntMatrix),
    Rat(RatMatrix),
}

impl Out {
    fn text(&self) -> String {
        match self {
            Out::Int(m) => m.to_text(),
            Out::Rat(m) => m.to_text(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Out::Int(m) => matrix_json(m),
            Out::Rat(m) => matrix_json(m),
        }
    }
}

fn cmd_pf(value: &str, abbrev: bool, both: bool, as_json: bool) -> Result<()> {
    let x = parse_rat(value)?;
    let full = partial_fractions(&x)?;
    let short = full.abbreviated();
    if as_json {
        let v = json!({ "value": format_rat(&x), "per_pair": full.to_string(), "abbreviated": short.to_string() });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else if both {
        println!("per-pair:    {full}");
        println!("abbreviated: {short}");
    } else if abbrev {
        println!("{short}");
    } else {
        println!("{full}");
    }
    Ok(())
}

fn emit_report(report: &ExperimentReport, as_json: bool) {
    if as_json {
        println!("{}", report.to_json());
        return;
    }
    println!("{} (seed {}, {} trials)", report.command, report.seed, report.trials.len());
    println!("{:>6}  {:<7}  {}", "trial", "result", "note");
    for t in &report.trials {
        let note = t.error.clone().unwrap_or_default();
        println!("{:>6}  {:<7}  {}", t.trial, if t.success { "ok" } else { "FAIL" }, note);
    }
    println!("success rate: {:.3}", report.success_rate);
    println!("summary: {}", report.summary);
    if let Some(ms) = report.wall_ms {
        println!("wall time: {ms:.1} ms");
    }
}

fn cmd_hsp(path: &Path, run: &RunArgs, debug_trace: bool, as_json: bool) -> Result<()> {
    let mut desc: HspDescriptor = serde_json::from_str(&read_input(path)?).context("parsing descriptor")?;
    if let Some(s) = run.seed {
        desc.seed = s;
    }
    if let Some(t) = run.trials {
        desc.trials = t;
    }
    match run.noise {
        Some(NoiseFlag::Exact) => desc.noise = NoiseMode::None,
        Some(NoiseFlag::Gaussian) => desc.noise = NoiseMode::Gaussian,
        None => {}
    }
    let report = run_hsp(&desc, RunOptions { timing: run.timing, debug_trace })?;
    emit_report(&report, as_json);
    Ok(())
}

fn cmd_shift(path: &Path, run: &RunArgs, m: Option<u64>, as_json: bool) -> Result<()> {
    let mut desc: ShiftDescriptor = serde_json::from_str(&read_input(path)?).context("parsing descriptor")?;
    if let Some(s) = run.seed {
        desc.seed = s;
    }
    if let Some(t) = run.trials {
        desc.trials = t;
    }
    if m.is_some() {
        desc.m = m;
    }
    match run.noise {
        Some(NoiseFlag::Exact) => desc.noise = SieveNoise::Exact,
        Some(NoiseFlag::Gaussian) => desc.noise = SieveNoise::Gaussian,
        None => {}
    }
    let report = run_shift(&desc, RunOptions { timing: run.timing, debug_trace: false })?;
    emit_report(&report, as_json);
    Ok(())
}

/// x − y lies in the subgroup of ℚ generated by 1 and 1/p for accepted p,
/// i.e. its denominator is squarefree with accepted prime factors.
fn rational_same_coset(pred: &Predicate, x: &hsp_core::exact::Rat, y: &hsp_core::exact::Rat) -> Result<bool> {
    let d = (x - y).denom().clone();
    Ok(factor(&d)?.iter().all(|(p, e)| *e == 1 && pred.accepts(p)))
}

fn report_check(result: Option<(usize, usize)>, points: usize, as_json: bool) -> Result<()> {
    if as_json {
        println!("{}", json!({ "points": points, "hiding": result.is_none() }));
    } else {
        match result {
            None => println!("hiding property holds on {points} points"),
            Some((i, j)) => println!("hiding property FAILS at points {i} and {j}"),
        }
    }
    if result.is_some() {
        bail!("hiding check failed");
    }
    Ok(())
}

fn print_token(token: impl std::fmt::Display, as_json: bool) {
    if as_json {
        println!("{}", json!({ "token": token.to_string() }));
    } else {
        println!("{token}");
    }
}

fn cmd_oracle(kind: &OracleKind, as_json: bool) -> Result<()> {
    match kind {
        OracleKind::Brick { lattice, element, check } => {
            let l = read_lattice(lattice)?;
            let o = BrickOracle::new(l.clone());
            print_token(o.eval(&parse_vector(element)?)?, as_json);
            if check.check {
                let pts = integer_box(l.k(), -check.radius, check.radius);
                let res = check_hiding(&o, &pts, |a: &Vec<BigInt>, b: &Vec<BigInt>| {
                    l.contains(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
                })?;
                report_check(res, pts.len(), as_json)?;
            }
        }
        OracleKind::Rational { accept, element, check } => {
            let pred = Predicate::parse(accept)?;
            let o = RationalOracle::new(pred.clone());
            print_token(o.eval(&parse_rat(element)?)?, as_json);
            if check.check {
                let r = check.radius.max(1);
                let mut pts = Vec::new();
                for d in 1..=4 * r {
                    for n in -r..=r {
                        pts.push(hsp_core::exact::Rat::new(n.into(), d.into()));
                    }
                }
                pts.sort();
                pts.dedup();
                let err = std::cell::RefCell::new(None);
                let res = check_hiding(&o, &pts, |a, b| {
                    rational_same_coset(&pred, a, b).unwrap_or_else(|e| {
                        err.borrow_mut().get_or_insert(e);
                        false
                    })
                });
                if let Some(e) = err.into_inner() {
                    return Err(e);
                }
                report_check(res?, pts.len(), as_json)?;
            }
        }
        OracleKind::SparseSimon { accept, element, check } => {
            let pred = Predicate::parse(accept)?;
            let o = SparseSimonOracle::new(pred.clone());
            let v = SparseVec::parse(element)?;
            print_token(o.eval(&v)?, as_json);
            if check.check {
                // Coordinates 0..=r with entries in {−1, 0, 1, 2}.
                let dims = (check.radius.max(1) + 1) as usize;
                let pts: Vec<SparseVec> = integer_box(dims, -1, 2)
                    .into_iter()
                    .map(|c| SparseVec::new(c.into_iter().enumerate().map(|(i, x)| (i as u64, x))))
                    .collect();
                let res = check_hiding(&o, &pts, |a, b| {
                    let neg = SparseVec::new(b.terms().iter().map(|(i, x)| (*i, -x)));
                    a.add(&neg).mod2().terms().iter().all(|(i, _)| pred.accepts(&BigInt::from(*i)))
                })?;
                report_check(res, pts.len(), as_json)?;
            }
        }
        OracleKind::Shift { lattice, shift, side, element, check } => {
            let l = read_lattice(lattice)?;
            let s = parse_vector(shift)?;
            if s.len() != l.k() {
                bail!("shift has {} coordinates, lattice dimension is {}", s.len(), l.k());
            }
            let o = ShiftPairOracle::new(BrickOracle::new(l.clone()), s.clone());
            print_token(o.eval(&(parse_vector(element)?, *side))?, as_json);
            if check.check {
                let pts: Vec<(Vec<BigInt>, u8)> = integer_box(l.k(), -check.radius, check.radius)
                    .into_iter()
                    .flat_map(|x| [(x.clone(), 0u8), (x, 1u8)])
                    .collect();
                let shifted = |(x, a): &(Vec<BigInt>, u8)| -> Vec<BigInt> {
                    x.iter().zip(&s).map(|(xi, si)| xi - BigInt::from(*a) * si).collect()
                };
                let res = check_hiding(&o, &pts, |p, q| {
                    let (u, v) = (shifted(p), shifted(q));
                    l.contains(&u.iter().zip(&v).map(|(x, y)| x - y).collect::<Vec<_>>())
                })?;
                report_check(res, pts.len(), as_json)?;
            }
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Lattice { op, file } => cmd_lattice(*op, file, cli.json),
        Command::Pf { value, abbrev, both } => cmd_pf(value, *abbrev, *both, cli.json),
        Command::HspRecover { descriptor, run, debug_trace } => cmd_hsp(descriptor, run, *debug_trace, cli.json),
        Command::ShiftRecover { descriptor, run, m } => cmd_shift(descriptor, run, *m, cli.json),
        Command::Oracle { kind } => cmd_oracle(kind, cli.json),
    }
}

