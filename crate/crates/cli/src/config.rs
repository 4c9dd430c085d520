//! Argument parsing shared by the subcommands, and the error type that maps
//! onto exit codes.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use exop::fsets::FiniteSet;
use exop::polycore::{parse_rational, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] exop::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use exop::Error as E;
        match self {
            Self::Config(_) => 2,
            Self::Core(E::Parse(_) | E::InvalidSet(_) | E::InvalidParameter(_) | E::InvalidFamily(_)) => 2,
            Self::Core(_) | Self::Json(_) | Self::Csv(_) => 3,
            Self::Io(_) => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn parse_set(s: &str) -> CliResult<FiniteSet> {
    s.parse().map_err(|e: exop::Error| config(format!("--set {s:?}: {e}")))
}

pub fn parse_rat(flag: &str, s: &str) -> CliResult<Rational> {
    parse_rational(s).map_err(|e| config(format!("{flag} {s:?}: {e}")))
}

pub fn parse_rat_list(flag: &str, s: &str) -> CliResult<Vec<Rational>> {
    s.split(',').map(|t| parse_rat(flag, t)).collect()
}

/// `"1e-20"`, `"0.5"` or `"1/3"`; must be positive.
pub fn parse_tolerance(s: &str) -> CliResult<Rational> {
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| config(format!("--tol {s:?}: bad exponent")))?),
        None => (s, 0),
    };
    let m = parse_rat("--tol", mantissa)?;
    let ten = Rational::from_integer(BigInt::from(10));
    let scale = if exp >= 0 {
        num_traits::pow(ten, exp as usize)
    } else {
        Rational::one() / num_traits::pow(ten, exp.unsigned_abs() as usize)
    };
    let tol = m * scale;
    if tol <= Rational::zero() {
        return Err(config("--tol must be positive"));
    }
    Ok(tol)
}

/// Comma-separated degrees; `lo-hi` items expand to inclusive ranges.
pub fn parse_degrees(s: &str) -> CliResult<Vec<u64>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let bad = || config(format!("--n item {item:?} is not a degree or range"));
        match item.split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi): (u64, u64) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
                if lo > hi {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(item.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(config("--n lists no degrees"));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `lo:hi:step` with rational or decimal entries; points `lo + i·step ≤ hi`.
pub fn parse_grid(s: &str) -> CliResult<Vec<Rational>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, step] = parts[..] else {
        return Err(config(format!("--eval-grid {s:?}: expected lo:hi:step")));
    };
    let (lo, hi, step) = (parse_rat("--eval-grid", lo)?, parse_rat("--eval-grid", hi)?, parse_rat("--eval-grid", step)?);
    if step <= Rational::zero() || hi < lo {
        return Err(config("--eval-grid needs lo ≤ hi and a positive step"));
    }
    let count = ((&hi - &lo) / &step).floor().to_integer();
    if count > BigInt::from(1_000_000) {
        return Err(config("--eval-grid has more than a million points"));
    }
    let count: u64 = count.try_into().expect("bounded above");
    Ok((0..=count)
        .map(|i| &lo + &step * Rational::from_integer(BigInt::from(i)))
        .collect())
}

/// Writes to `--out` when given, else to stdout.
pub fn sink(out: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_and_ranges() {
        assert_eq!(parse_degrees("0,3,4").unwrap(), vec![0, 3, 4]);
        assert_eq!(parse_degrees("5,1-3").unwrap(), vec![1, 2, 3, 5]);
        assert!(parse_degrees("3-1").is_err());
        assert!(parse_degrees("x").is_err());
    }

    #[test]
    fn tolerances() {
        let t = parse_tolerance("1e-20").unwrap();
        assert_eq!(t, Rational::new(1.into(), num_traits::pow(BigInt::from(10), 20)));
        assert_eq!(parse_tolerance("2.5E1").unwrap(), Rational::from_integer(25.into()));
        assert!(parse_tolerance("-1").is_err());
        assert!(parse_tolerance("1e").is_err());
    }

    #[test]
    fn grid_points() {
        let g = parse_grid("-3:3:0.1").unwrap();
        assert_eq!(g.len(), 61);
        assert_eq!(g[60], Rational::from_integer(3.into()));
        assert!(parse_grid("1:0:1").is_err());
        assert!(parse_grid("0:1").is_err());
    }
}
