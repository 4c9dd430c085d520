//! `exop generate`: polynomials, Wronskian/Casorati determinants and
//! operators as JSON, or exact grid evaluations as CSV.

use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use exop::certified::format_sci;
use exop::exceptional::{CharlierSystem, HermiteSystem};
use exop::fsets::FiniteSet;
use exop::measures::christoffel_q;
use exop::operators::{build_charlier_op, build_hermite_op, CharlierOps, DiffeOp};
use exop::polycore::{format_rational, Poly, Rational};
use exop::QPoly;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::config::{config, parse_degrees, parse_grid, parse_rat, parse_set, sink, CliResult};
use crate::FamilyName;

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    /// Finite set F, e.g. `1,2`; empty for the classical family.
    #[arg(long, default_value = "")]
    pub set: String,
    /// Charlier parameter, as `p/q` or a decimal.
    #[arg(long, default_value = "1")]
    pub a: String,
    /// Degrees, e.g. `0,3,4` or `2-6`.
    #[arg(long, conflicts_with = "nmax")]
    pub n: Option<String>,
    /// All degrees `0..=nmax`.
    #[arg(long)]
    pub nmax: Option<u64>,
    /// Include Ω_F.
    #[arg(long)]
    pub omega: bool,
    /// Include Λ_F (Charlier).
    #[arg(long)]
    pub lambda: bool,
    /// Include the Christoffel-transformed polynomials q_n^F (Charlier).
    #[arg(long)]
    pub christoffel: bool,
    /// Include the second-order operator D_F.
    #[arg(long)]
    pub operator: bool,
    /// Evaluation grid `lo:hi:step` (requires --csv).
    #[arg(long, requires = "csv", allow_hyphen_values = true)]
    pub eval_grid: Option<String>,
    /// Write grid evaluations as CSV instead of JSON.
    #[arg(long, requires = "eval_grid")]
    pub csv: bool,
}

#[derive(Serialize)]
struct Indexed {
    n: u64,
    in_sigma: bool,
    poly: QPoly,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Operator {
    Charlier(CharlierOps),
    Hermite(DiffeOp),
}

#[derive(Serialize)]
struct Output {
    family: &'static str,
    set: FiniteSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    polynomials: Vec<Indexed>,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega: Option<QPoly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<QPoly>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    christoffel: Vec<Indexed>,
    #[serde(skip_serializing_if = "Option::is_none")]
    operator: Option<Operator>,
}

enum System {
    Charlier(CharlierSystem, Rational),
    Hermite(HermiteSystem),
}

impl System {
    fn poly(&self, n: u64) -> Poly<Rational> {
        match self {
            Self::Charlier(s, _) => s.poly(n),
            Self::Hermite(s) => s.poly(n),
        }
    }
}

pub fn run(args: &GenerateArgs, out: &Option<PathBuf>) -> CliResult<()> {
    let set = parse_set(&args.set)?;
    let system = match args.family {
        FamilyName::Charlier => {
            let a = parse_rat("--a", &args.a)?;
            System::Charlier(CharlierSystem::new(&set, a.clone())?, a)
        }
        FamilyName::Hermite => {
            if args.lambda || args.christoffel {
                return Err(config("--lambda and --christoffel apply to the Charlier family only"));
            }
            System::Hermite(HermiteSystem::new(&set))
        }
    };
    let extras = args.omega || args.lambda || args.christoffel || args.operator;
    let degrees = match (&args.n, args.nmax) {
        (Some(list), _) => parse_degrees(list)?,
        (None, Some(m)) => (0..=m).collect(),
        (None, None) if extras => Vec::new(),
        (None, None) => set.sigma().take(4).collect(),
    };

    if let Some(grid) = &args.eval_grid {
        if degrees.is_empty() {
            return Err(config("--eval-grid needs --n or --nmax"));
        }
        return write_csv(&system, &degrees, &parse_grid(grid)?, out);
    }

    let indexed = |n: u64, poly: QPoly| Indexed {
        n,
        in_sigma: set.in_sigma(n),
        poly,
    };
    let polynomials = degrees.iter().map(|&n| indexed(n, system.poly(n))).collect();
    let mut output = Output {
        family: args.family.name(),
        set: set.clone(),
        a: None,
        polynomials,
        omega: None,
        lambda: None,
        christoffel: Vec::new(),
        operator: None,
    };
    match &system {
        System::Charlier(sys, a) => {
            output.a = Some(format_rational(a));
            output.omega = args.omega.then(|| sys.omega());
            output.lambda = args.lambda.then(|| sys.lambda());
            if args.christoffel {
                output.christoffel = degrees
                    .iter()
                    .map(|&n| Ok(Indexed { n, in_sigma: true, poly: christoffel_q(n, &set, a)? }))
                    .collect::<CliResult<_>>()?;
            }
            if args.operator {
                output.operator = Some(Operator::Charlier(build_charlier_op(&set, a)?));
            }
        }
        System::Hermite(sys) => {
            output.omega = args.omega.then(|| sys.omega());
            if args.operator {
                output.operator = Some(Operator::Hermite(build_hermite_op(&set)?));
            }
        }
    }
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, &output)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn write_csv(system: &System, degrees: &[u64], grid: &[Rational], out: &Option<PathBuf>) -> CliResult<()> {
    let polys: Vec<Poly<Rational>> = degrees.iter().map(|&n| system.poly(n)).collect();
    let mut w = csv::Writer::from_writer(sink(out)?);
    let header: Vec<String> = std::iter::once("x".to_string())
        .chain(degrees.iter().map(|n| format!("p_{n}")))
        .collect();
    w.write_record(&header)?;
    for x in grid {
        let mut row = vec![fmt_float(x)];
        row.extend(polys.iter().map(|p| format_sci(&p.eval(x), 20)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Exact decimal when the denominator divides a power of ten, `p/q` otherwise.
fn fmt_float(x: &Rational) -> String {
    let ten = BigInt::from(10);
    let mut scale = BigInt::one();
    for places in 0..=30usize {
        if (&scale % x.denom()).is_zero() {
            let digits = (x.numer() * (&scale / x.denom())).abs().to_string();
            let digits = format!("{digits:0>width$}", width = places + 1);
            let (int, frac) = digits.split_at(digits.len() - places);
            let sign = if x.is_negative() { "-" } else { "" };
            return if frac.is_empty() { format!("{sign}{int}") } else { format!("{sign}{int}.{frac}") };
        }
        scale *= &ten;
    }
    format_rational(x)
}
