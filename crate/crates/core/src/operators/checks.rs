//! Verification routines shared by both families.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::charlier::{charlier_symmetry, require_nonvanishing};
use super::hermite::hermite_pearson;
use super::{
    build_hermite_op, charlier_darboux_down, charlier_darboux_split, charlier_operator, hermite_darboux_down,
    hermite_darboux_split, DiffOp, DiffeOp, LinearOp,
};
use crate::error::{Error, Result};
use crate::exceptional::{CharlierSystem, HermiteSystem};
use crate::families::Family;
use crate::fsets::FiniteSet;
use crate::polycore::{format_rational, Poly, Rational, Ring};
use crate::report::VerificationReport;

/// Operators closed under subtraction and scalar shifts.
pub trait OpAlgebra: LinearOp + Clone + PartialEq + fmt::Display {
    fn sub(&self, other: &Self) -> Self;
    fn add_scalar(&self, c: &Rational) -> Self;
}

impl OpAlgebra for DiffOp {
    fn sub(&self, other: &Self) -> Self {
        DiffOp::sub(self, other)
    }
    fn add_scalar(&self, c: &Rational) -> Self {
        DiffOp::add_scalar(self, c)
    }
}

impl OpAlgebra for DiffeOp {
    fn sub(&self, other: &Self) -> Self {
        DiffeOp::sub(self, other)
    }
    fn add_scalar(&self, c: &Rational) -> Self {
        DiffeOp::add_scalar(self, c)
    }
}

/// Shift constant resolved for one factorization `D = P + c·Id`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedShift {
    pub factorization: String,
    /// `+1` or `−1` relative to the stated magnitude.
    pub sign: i8,
    #[serde(with = "crate::polycore::rational_serde")]
    pub constant: Rational,
}

/// First-order factors of a Darboux step and the report verifying them.
#[derive(Debug, Clone, Serialize)]
pub struct DarbouxFactors<O> {
    /// `A_F` (split) or `C_F` (down).
    pub first: O,
    /// `B_F` (split) or `E_F` (down).
    pub second: O,
    pub shifts: Vec<ResolvedShift>,
    pub report: VerificationReport,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Factors {
    Charlier(DarbouxFactors<DiffOp>),
    Hermite(DarbouxFactors<DiffeOp>),
}

impl Factors {
    pub fn report(&self) -> &VerificationReport {
        match self {
            Self::Charlier(f) => &f.report,
            Self::Hermite(f) => &f.report,
        }
    }

    pub fn shifts(&self) -> &[ResolvedShift] {
        match self {
            Self::Charlier(f) => &f.shifts,
            Self::Hermite(f) => &f.shifts,
        }
    }
}

/// Checks `d − product = ±magnitude·Id`, trying both signs, and returns the
/// constant that makes the residual vanish.
pub(crate) fn check_factorization<O: OpAlgebra>(
    report: &mut VerificationReport,
    label: &str,
    d: &O,
    product: &O,
    magnitude: &Rational,
    shifts: &mut Vec<ResolvedShift>,
) -> Option<Rational> {
    let residual = d.sub(product);
    let found = residual.as_scalar();
    let sign = [1i8, -1].into_iter().find(|&s| {
        let c = if s > 0 { magnitude.clone() } else { -magnitude.clone() };
        found.as_ref() == Some(&c)
    });
    match sign {
        Some(s) => {
            let constant = found.expect("scalar residual");
            report.record(label, true, || ("", ""));
            report.note(format!(
                "{label}: c = {} (sign {s:+} on the stated {})",
                format_rational(&constant),
                format_rational(magnitude)
            ));
            shifts.push(ResolvedShift {
                factorization: label.to_string(),
                sign: s,
                constant: constant.clone(),
            });
            Some(constant)
        }
        None => {
            report.fail(label, || {
                let plus = residual.add_scalar(&-magnitude.clone());
                let minus = residual.add_scalar(magnitude);
                (format!("residual with +c: {plus}"), format!("residual with −c: {minus}"))
            });
            None
        }
    }
}

/// Checks `image = factor·expected`, reporting the actual ratio when the two
/// are proportional with a different constant.
pub(crate) fn check_intertwining(
    report: &mut VerificationReport,
    n: u64,
    image: Result<Poly<Rational>>,
    expected: &Poly<Rational>,
    factor: &Rational,
) {
    let case = format!("n={n}");
    match image {
        Err(e) => report.fail(case, || (e.to_string(), expected.scale(factor))),
        Ok(p) => {
            let want = expected.scale(factor);
            if p == want && p.is_zero() {
                report.record_vacuous();
            } else {
                report.record(case, p == want, || {
                    let ratio = match (p.leading(), expected.leading()) {
                        (Some(a), Some(b)) if p == expected.scale(&(a / b)) => format!("ratio {}", format_rational(&(a / b))),
                        _ => "not proportional".to_string(),
                    };
                    (format!("{p} [{ratio}]"), want)
                });
            }
        }
    }
}

/// `D_F p_n = λ_n p_n` for `n` in `ns`, with `λ_n = n` (Charlier) or `2n`
/// (Hermite). Indices outside `σ_F` count as vacuous.
pub fn verify_eigen(set: &FiniteSet, family: &Family, ns: &[u64]) -> Result<VerificationReport> {
    let mut report = VerificationReport::asserted("eigen")
        .with_input("family", family.name())
        .with_input("set", set);
    type Outcome = (u64, Option<(Result<Poly<Rational>>, Poly<Rational>)>);
    let outcomes: Vec<Outcome> = match family {
        Family::Charlier(a) => {
            report = report.with_input("a", a);
            let op = charlier_operator(set, a)?;
            let sys = CharlierSystem::new(set, a.clone())?;
            ns.par_iter()
                .map(|&n| {
                    if !set.in_sigma(n) {
                        return (n, None);
                    }
                    let p = sys.poly(n);
                    (n, Some((op.apply(&p), p.scale(&Rational::from_int(n as i64)))))
                })
                .collect()
        }
        Family::Hermite => {
            let op = build_hermite_op(set)?;
            let sys = HermiteSystem::new(set);
            ns.par_iter()
                .map(|&n| {
                    if !set.in_sigma(n) {
                        return (n, None);
                    }
                    let p = sys.poly(n);
                    (n, Some((op.apply(&p), p.scale(&Rational::from_int(2 * n as i64)))))
                })
                .collect()
        }
    };
    for (n, outcome) in outcomes {
        match outcome {
            None => report.record_vacuous(),
            Some((Ok(image), want)) => {
                report.record(format!("n={n}"), image == want, || {
                    let diff = &image - &want;
                    (format!("D p_n − λ_n p_n = {diff}"), "0")
                })
            }
            Some((Err(e), _)) => report.fail(format!("n={n}"), || (e.to_string(), "polynomial image")),
        }
    }
    Ok(report.finish())
}

/// Darboux step `F_k → F` (removing the largest element).
pub fn darboux_split(set: &FiniteSet, family: &Family, extra: u64) -> Result<Factors> {
    Ok(match family {
        Family::Charlier(a) => Factors::Charlier(charlier_darboux_split(set, a, extra)?),
        Family::Hermite => Factors::Hermite(hermite_darboux_split(set, extra)?),
    })
}

/// Darboux step `F↓ → F` built from the involuted determinants; returns the
/// factors and the evidence report for `n < v_F`.
pub fn darboux_down(set: &FiniteSet, family: &Family, extra: u64) -> Result<(Factors, VerificationReport)> {
    Ok(match family {
        Family::Charlier(a) => {
            let (f, e) = charlier_darboux_down(set, a, extra)?;
            (Factors::Charlier(f), e)
        }
        Family::Hermite => {
            let (f, e) = hermite_darboux_down(set, extra)?;
            (Factors::Hermite(f), e)
        }
    })
}

/// Symmetry difference equation (Charlier) or Pearson equation (Hermite)
/// for the weight attached to `F`, as an exact rational-function identity.
pub fn symmetry_pearson_check(set: &FiniteSet, family: &Family) -> Result<VerificationReport> {
    match family {
        Family::Charlier(a) => {
            if a.is_zero() {
                return Err(Error::InvalidParameter("the Charlier parameter must be nonzero".into()));
            }
            let mut r = charlier_symmetry(set, a)?;
            if let Err(e) = require_nonvanishing(set, a) {
                r.note(format!("weight has poles on the support: {e}"));
            }
            Ok(r)
        }
        Family::Hermite => hermite_pearson(set),
    }
}
