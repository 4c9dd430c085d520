//! Norm formulas, orthogonality, positivity and Bessel-inequality checks for
//! the exceptional measures.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::christoffel::{christoffel_q, phi};
use super::inner::{continuous_inner, discrete_inner, ContinuousWeight, DiscreteMeasure, InnerProductResult, Tolerance};
use crate::certified::{exp_rational, format_sci, sqrt_pi, Interval};
use crate::error::{Error, Result};
use crate::exceptional::{CharlierSystem, HermiteSystem};
use crate::families::Family;
use crate::fsets::FiniteSet;
use crate::polycore::{factorial_q, pow, sign_constant_on_naturals, NaturalSign, Poly, Rational, Ring};
use crate::report::VerificationReport;

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

fn powi(a: &Rational, e: i64) -> Rational {
    if e >= 0 {
        pow(a, e as u64)
    } else {
        pow(a, (-e) as u64).recip()
    }
}

fn gaps(set: &FiniteSet, n: u64) -> Rational {
    let u = set.u() as i64;
    set.elements().iter().map(|&f| q(n as i64 - f as i64 - u)).product()
}

/// `a^{n−u−k} e^a ∏(n−f−u) / (n−u)!`, the squared norm of `c_n^{a;F}`.
pub fn charlier_norm_target(set: &FiniteSet, a: &Rational, n: u64, prec: u32) -> Result<Interval> {
    let (u, k) = (set.u(), set.k() as i64);
    if n < u {
        return Err(Error::Precondition(format!("norm formula needs n ≥ u_F = {u}")));
    }
    let r = powi(a, n as i64 - u as i64 - k) * gaps(set, n) / factorial_q(n - u);
    Ok(exp_rational(a, prec).scale(&r))
}

/// `√π 2^{n−u+k} (n−u)! ∏(n−f−u)`, the squared norm of `H_n^F`.
pub fn hermite_norm_target(set: &FiniteSet, n: u64, prec: u32) -> Result<Interval> {
    let (u, k) = (set.u(), set.k() as u64);
    if n < u {
        return Err(Error::Precondition(format!("norm formula needs n ≥ u_F = {u}")));
    }
    let r = pow(&q(2), n - u + k) * factorial_q(n - u) * gaps(set, n);
    Ok(sqrt_pi(prec).scale(&r))
}

/// One certified inner product against its expected value.
#[derive(Debug, Clone, Serialize)]
pub struct NormCheck {
    pub n: u64,
    pub m: u64,
    #[serde(flatten)]
    pub result: InnerProductResult,
    /// Expected value (midpoint); `"0"` for orthogonality.
    pub target: String,
    pub pass: bool,
}

/// Evaluates `⟨p_n, p_m⟩` in the measure attached to the family.
struct Setting {
    family: Family,
    set: FiniteSet,
    polys: Vec<(u64, Poly<Rational>)>,
    discrete: Option<DiscreteMeasure>,
    continuous: Option<ContinuousWeight>,
}

impl Setting {
    fn new(set: &FiniteSet, family: &Family, ns: &[u64]) -> Result<Self> {
        let ns: Vec<u64> = ns.iter().copied().filter(|&n| set.in_sigma(n)).collect();
        Ok(match family {
            Family::Charlier(a) => {
                let sys = CharlierSystem::new(set, a.clone())?;
                Self {
                    family: family.clone(),
                    set: set.clone(),
                    polys: ns.iter().map(|&n| (n, sys.poly(n))).collect(),
                    discrete: Some(DiscreteMeasure::exceptional(set, a)?),
                    continuous: None,
                }
            }
            Family::Hermite => {
                let sys = HermiteSystem::new(set);
                Self {
                    family: family.clone(),
                    set: set.clone(),
                    polys: ns.iter().map(|&n| (n, sys.poly(n))).collect(),
                    discrete: None,
                    continuous: Some(ContinuousWeight::exceptional(set)?),
                }
            }
        })
    }

    fn inner(&self, p: &Poly<Rational>, r: &Poly<Rational>, prec: u32, tol: &Tolerance) -> Result<InnerProductResult> {
        match (&self.discrete, &self.continuous) {
            (Some(mu), _) => discrete_inner(p, r, mu, prec, tol),
            (_, Some(w)) => continuous_inner(p, r, w, prec, tol),
            _ => unreachable!("one measure is always set"),
        }
    }

    fn target(&self, n: u64, prec: u32) -> Result<Interval> {
        match &self.family {
            Family::Charlier(a) => charlier_norm_target(&self.set, a, n, prec),
            Family::Hermite => hermite_norm_target(&self.set, n, prec),
        }
    }

    fn report(&self, check: &str) -> VerificationReport {
        let r = VerificationReport::asserted(check)
            .with_input("family", self.family.name())
            .with_input("set", &self.set);
        match &self.family {
            Family::Charlier(a) => r.with_input("a", a),
            Family::Hermite => r,
        }
    }
}

/// `⟨p_n, p_n⟩` against the closed-form norm, within relative error `tol`,
/// for `n ∈ ns ∩ σ_F`.
pub fn norm_check(
    set: &FiniteSet,
    family: &Family,
    ns: &[u64],
    prec: u32,
    tol: &Rational,
) -> Result<(VerificationReport, Vec<NormCheck>)> {
    let setting = Setting::new(set, family, ns)?;
    let mut report = setting.report("norm").with_input("tol", format_sci(tol, 3));
    let inner_tol = Tolerance::Relative(tol / q(8));
    let outcomes: Vec<Result<NormCheck>> = setting
        .polys
        .par_iter()
        .map(|(n, p)| {
            let result = setting.inner(p, p, prec, &inner_tol)?;
            let target = setting.target(*n, prec)?;
            let diff = &result.enclosure() - &target;
            let pass = diff.mag() <= tol * target.mig();
            Ok(NormCheck {
                n: *n,
                m: *n,
                target: target.to_decimal(40),
                result,
                pass,
            })
        })
        .collect();
    let mut checks = Vec::new();
    for c in outcomes {
        let c = c?;
        report.record(format!("n={}", c.n), c.pass, || {
            (format_sci(&c.result.value, 30), c.target.clone())
        });
        checks.push(c);
    }
    Ok((report.finish(), checks))
}

/// `⟨p_n, p_m⟩ = 0` for `n < m` in `ns ∩ σ_F`: the certified enclosure must
/// contain zero, with radius at most `tol·√(‖p_n‖²‖p_m‖²)`.
pub fn orthogonality_check(
    set: &FiniteSet,
    family: &Family,
    ns: &[u64],
    prec: u32,
    tol: &Rational,
) -> Result<(VerificationReport, Vec<NormCheck>)> {
    let setting = Setting::new(set, family, ns)?;
    let mut report = setting.report("orthogonality");
    let pairs: Vec<(usize, usize)> = (0..setting.polys.len())
        .flat_map(|i| (i + 1..setting.polys.len()).map(move |j| (i, j)))
        .collect();
    let outcomes: Vec<Result<NormCheck>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let ((n, p), (m, r)) = (&setting.polys[i], &setting.polys[j]);
            let scale = (&setting.target(*n, 64)? * &setting.target(*m, 64)?).abs().sqrt()?.mig();
            let result = setting.inner(p, r, prec, &Tolerance::Absolute(tol * scale))?;
            let pass = result.enclosure().contains_zero();
            Ok(NormCheck {
                n: *n,
                m: *m,
                result,
                target: "0".into(),
                pass,
            })
        })
        .collect();
    let mut checks = Vec::new();
    for c in outcomes {
        let c = c?;
        report.record(format!("n={}, m={}", c.n, c.m), c.pass, || {
            (format_sci(&c.result.value, 10), format!("0 ± {}", format_sci(&c.result.error_bound, 3)))
        });
        checks.push(c);
    }
    Ok((report.finish(), checks))
}

/// `⟨q_n, q_n⟩_{ρ_a^F} = (−1)^k a^n e^a Φ_n Φ_{n+1} / (n+k)!`, checked to
/// relative error `tol` for `n ∈ ns`.
pub fn christoffel_norm_check(
    set: &FiniteSet,
    a: &Rational,
    ns: &[u64],
    prec: u32,
    tol: &Rational,
) -> Result<(VerificationReport, Vec<NormCheck>)> {
    let mut report = VerificationReport::asserted("christoffel_norm")
        .with_input("set", set)
        .with_input("a", a);
    let mu = DiscreteMeasure::christoffel(set, a);
    let k = set.k() as u64;
    let inner_tol = Tolerance::Relative(tol / q(8));
    let outcomes: Vec<Result<NormCheck>> = ns
        .par_iter()
        .map(|&n| {
            let qn = christoffel_q(n, set, a)?;
            let result = discrete_inner(&qn, &qn, &mu, prec, &inner_tol)?;
            let sign = if k.is_multiple_of(2) { q(1) } else { q(-1) };
            let r = sign * pow(a, n) * phi(n, set, a) * phi(n + 1, set, a) / factorial_q(n + k);
            let target = exp_rational(a, prec).scale(&r);
            let pass = (&result.enclosure() - &target).mag() <= tol * target.mig();
            Ok(NormCheck {
                n,
                m: n,
                target: target.to_decimal(40),
                result,
                pass,
            })
        })
        .collect();
    let mut checks = Vec::new();
    for c in outcomes {
        let c = c?;
        report.record(format!("n={}", c.n), c.pass, || (format_sci(&c.result.value, 30), c.target.clone()));
        checks.push(c);
    }
    Ok((report.finish(), checks))
}

/// The three conditions of the positivity equivalence for one `(F, a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PositivityVerdict {
    pub admissible: bool,
    /// Every mass of `ρ_a^F` is nonnegative.
    pub rho_positive: bool,
    /// `Ω_F^a(n) Ω_F^a(n+1) > 0` for every natural `n`.
    pub omega_sign_constant: bool,
}

impl PositivityVerdict {
    pub fn consistent(&self) -> bool {
        self.admissible == self.rho_positive && self.rho_positive == self.omega_sign_constant
    }
}

/// Decides the three conditions independently, for `a > 0`.
pub fn positivity_scan(set: &FiniteSet, a: &Rational) -> Result<PositivityVerdict> {
    if !a.is_positive() {
        return Err(Error::InvalidParameter("positivity needs a > 0".into()));
    }
    let top = set.largest().unwrap_or(0) as i64;
    // Beyond the largest element every factor is positive.
    let rho_positive = (0..=top).all(|y| {
        let p: Rational = set.elements().iter().map(|&f| q(y - f as i64)).product();
        !p.is_negative()
    });
    let om = CharlierSystem::new(set, a.clone())?.omega();
    let omega_sign_constant = matches!(
        sign_constant_on_naturals(&om)?,
        NaturalSign::AlwaysPositive | NaturalSign::AlwaysNegative
    );
    Ok(PositivityVerdict {
        admissible: set.is_admissible(),
        rho_positive,
        omega_sign_constant,
    })
}

/// The equivalence over every nonempty set with maximum at most `max_fk`.
pub fn positivity_equivalence_check(max_fk: u32, a: &Rational) -> Result<VerificationReport> {
    let mut report = VerificationReport::asserted("positivity_equivalence")
        .with_input("max_fk", max_fk)
        .with_input("a", a);
    let sets = FiniteSet::all_with_max(max_fk);
    let verdicts: Vec<Result<(FiniteSet, PositivityVerdict)>> = sets
        .into_par_iter()
        .map(|s| positivity_scan(&s, a).map(|v| (s, v)))
        .collect();
    let mut admissible = 0usize;
    for v in verdicts {
        let (s, v) = v?;
        admissible += usize::from(v.admissible);
        report.record(format!("F={s}"), v.consistent(), || {
            (
                format!("admissible={} rho_positive={}", v.admissible, v.rho_positive),
                format!("omega_sign_constant={}", v.omega_sign_constant),
            )
        });
    }
    report.note(format!("{admissible} admissible sets"));
    Ok(report.finish())
}

/// Bessel inequality in `L²(ω_{a;F})` for indicator vectors: for each support
/// in `supports`, the partial sums of `⟨f, c_n⟩²/‖c_n‖²` over the first
/// `count` indices of `σ_F` are nondecreasing and stay below `‖f‖²`.
pub fn parseval_check(
    set: &FiniteSet,
    a: &Rational,
    supports: &[Vec<u64>],
    count: usize,
    prec: u32,
) -> Result<VerificationReport> {
    if !set.is_admissible() || !a.is_positive() {
        return Err(Error::Precondition("needs an admissible set and a > 0".into()));
    }
    let mut report = VerificationReport::asserted("parseval_partial")
        .with_input("set", set)
        .with_input("a", a)
        .with_input("count", count);
    let mu = DiscreteMeasure::exceptional(set, a)?;
    let sys = CharlierSystem::new(set, a.clone())?;
    let ns: Vec<u64> = set.sigma().take(count).collect();
    let polys: Vec<Poly<Rational>> = ns.par_iter().map(|&n| sys.poly(n)).collect();
    let targets: Vec<Interval> = ns
        .iter()
        .map(|&n| charlier_norm_target(set, a, n, prec))
        .collect::<Result<_>>()?;
    for support in supports {
        let norm: Rational = support.iter().map(|&x| mu.mass(x)).sum();
        let mut partial = Interval::zero(prec);
        let mut monotone = true;
        for (p, t) in polys.iter().zip(&targets) {
            let coeff: Rational = support.iter().map(|&x| mu.mass(x) * p.eval(&q(x as i64))).sum();
            let term = t.recip()?.scale(&(&coeff * &coeff));
            monotone &= !term.lo().is_negative();
            partial = &partial + &term;
        }
        let below = partial.lo() <= norm;
        let label = format!("support={support:?}");
        report.record(&label, monotone && below, || {
            (format!("partial sum {}", partial.to_decimal(20)), format!("‖f‖² = {}", format_sci(&norm, 20)))
        });
        if !norm.is_zero() {
            let ratio = partial.scale(&norm.recip());
            report.note(format!("{label}: captured fraction {}", ratio.to_decimal(12)));
        }
    }
    Ok(report.finish())
}

/// Default relative tolerances for the discrete and continuous norm checks.
pub fn default_tolerances() -> (Rational, Rational) {
    let ten = BigInt::from(10);
    (
        Rational::new(BigInt::one(), num_traits::pow(ten.clone(), 20)),
        Rational::new(BigInt::one(), num_traits::pow(ten, 12)),
    )
}
