//! Certified inner products against the discrete Charlier-type measures and
//! the continuous Hermite-type weights.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::certified::{exp_rational, format_sci, round_dyadic, Interval};
use crate::error::{Error, Result};
use crate::exceptional::{hermite_omega, CharlierSystem};
use crate::fsets::FiniteSet;
use crate::polycore::{natural_zeros, root_bound, real_root_count, Poly, Rational, RationalFunction, RootInterval, Ring};

type QFn = RationalFunction<Rational>;

/// Error target for a certified evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Tolerance {
    /// Total error bound at most this value.
    Absolute(Rational),
    /// Total error bound at most this fraction of the computed value.
    Relative(Rational),
}

impl Tolerance {
    /// Largest admissible total error for a value whose midpoint is `mid`
    /// and whose current total error is `err`.
    fn budget(&self, mid: &Rational, err: &Rational) -> Rational {
        match self {
            Self::Absolute(eps) => eps.clone(),
            Self::Relative(eps) => (eps * (mid.abs() - err)).max(Rational::zero()),
        }
    }

    /// Rejects relative targets finer than the working precision can reach.
    fn check_attainable(&self, prec: u32) -> Result<()> {
        if let Self::Relative(eps) = self {
            let floor = Rational::new(BigInt::one(), BigInt::one() << prec.saturating_sub(16));
            if *eps < floor {
                return Err(Error::ToleranceUnreachable(format!(
                    "{} is below the resolution of {prec}-bit arithmetic",
                    self.describe()
                )));
            }
        }
        Ok(())
    }

    fn describe(&self) -> String {
        match self {
            Self::Absolute(e) => format!("absolute {}", format_sci(e, 3)),
            Self::Relative(e) => format!("relative {}", format_sci(e, 3)),
        }
    }
}

/// A certified value: `|true − value| ≤ error_bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerProductResult {
    pub value: Rational,
    pub error_bound: Rational,
    /// Summed terms (discrete) or quadrature panels (continuous).
    pub evaluations: usize,
    pub precision: u32,
}

impl InnerProductResult {
    pub fn enclosure(&self) -> Interval {
        Interval::ball(&self.value, &self.error_bound, self.precision)
    }
}

impl Serialize for InnerProductResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("InnerProductResult", 4)?;
        st.serialize_field("value", &format_sci(&self.value, 40))?;
        st.serialize_field("error_bound", &format_sci(&self.error_bound, 6))?;
        st.serialize_field("evaluations", &self.evaluations)?;
        st.serialize_field("precision_bits", &self.precision)?;
        st.end()
    }
}

/// `Σ_{y≥0} r(y) a^y / y! δ_{offset+y}` with a rational function `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    offset: u64,
    weight: QFn,
    a: Rational,
}

impl DiscreteMeasure {
    pub fn new(offset: u64, weight: QFn, a: Rational) -> Result<Self> {
        if let Some(&z) = natural_zeros(weight.den())?.first() {
            return Err(Error::Precondition(format!("the mass has a pole at the support point {}", offset + z)));
        }
        Ok(Self { offset, weight, a })
    }

    /// `ρ_a = Σ a^x/x! δ_x`.
    pub fn charlier(a: &Rational) -> Self {
        Self::new(0, QFn::constant(Rational::one()), a.clone()).expect("no poles")
    }

    /// `ρ_a^F = Σ_{x≥u_F} ∏(x−f−u_F) a^{x−u_F}/(x−u_F)! δ_x`.
    pub fn christoffel(set: &FiniteSet, a: &Rational) -> Self {
        let ann = set
            .elements()
            .iter()
            .fold(Poly::one(), |acc, &f| &acc * &Poly::linear(Rational::one(), -Rational::from_int(f as i64)));
        Self::new(set.u(), QFn::from_poly(ann), a.clone()).expect("no poles")
    }

    /// `ω_{a;F} = Σ a^x/(x! Ω(x) Ω(x+1)) δ_x`; needs `Ω_F^a` free of natural zeros.
    pub fn exceptional(set: &FiniteSet, a: &Rational) -> Result<Self> {
        let om = CharlierSystem::new(set, a.clone())?.omega();
        let den = &om * &om.shift(&Rational::one());
        Self::new(0, QFn::new(Poly::one(), den)?, a.clone())
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    /// Exact mass at the support point `x`.
    pub fn mass(&self, x: u64) -> Rational {
        if x < self.offset {
            return Rational::zero();
        }
        let y = x - self.offset;
        let w = self.weight.eval(&Rational::from_int(y as i64)).expect("no poles on the support");
        w * crate::polycore::pow(&self.a, y) / crate::polycore::factorial_q(y)
    }
}

/// `e^{−x²}/Ω(x)²` with `Ω` free of real zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousWeight {
    omega: Poly<Rational>,
}

impl ContinuousWeight {
    pub fn new(omega: Poly<Rational>) -> Result<Self> {
        if omega.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let roots = real_root_count(&omega, &RootInterval::Whole)?;
        if roots > 0 {
            return Err(Error::Precondition(format!("the weight denominator has {roots} real zeros")));
        }
        Ok(Self { omega })
    }

    /// `e^{−x²}`.
    pub fn hermite() -> Self {
        Self { omega: Poly::one() }
    }

    /// `ω_F = e^{−x²}/Ω_F²`.
    pub fn exceptional(set: &FiniteSet) -> Result<Self> {
        Self::new(hermite_omega(set))
    }

    pub fn omega(&self) -> &Poly<Rational> {
        &self.omega
    }
}

/// Upper bound on the moduli of all complex roots (zero for constants).
fn root_radius(p: &Poly<Rational>) -> Result<Rational> {
    match p.degree() {
        None | Some(0) => Ok(Rational::zero()),
        Some(_) => root_bound(p),
    }
}

fn ceil_u64(q: &Rational) -> u64 {
    let c: BigInt = q.numer().div_ceil(q.denom());
    c.to_u64().unwrap_or(u64::MAX)
}

/// `Σ_x p(x) q(x) dμ(x)`, summing exactly-evaluated terms into an interval
/// until a certified tail bound meets the target.
///
/// With `r = N/D` the rational part of the term, every root of `N` and `D`
/// lies in the disk of radius `B`, so for `y ≥ B + deg N + deg D + 1` the
/// ratio `|r(y+1)/r(y)|` is below `e`. Once also `y + 1 ≥ 6|a|`, consecutive
/// terms shrink by at least half and the tail is at most twice the first
/// omitted term.
pub fn discrete_inner(
    p: &Poly<Rational>,
    q: &Poly<Rational>,
    measure: &DiscreteMeasure,
    prec: u32,
    tol: &Tolerance,
) -> Result<InnerProductResult> {
    tol.check_attainable(prec)?;
    let off = Rational::from_int(measure.offset as i64);
    let num = &(&p.shift(&off) * &q.shift(&off)) * measure.weight.num();
    let den = measure.weight.den().clone();
    let degs = num.degree().unwrap_or(0) + den.degree().unwrap_or(0);
    let b = root_radius(&num)?.max(root_radius(&den)?);
    let start = (ceil_u64(&b) + degs as u64 + 1).max(ceil_u64(&(measure.a.abs() * Rational::from_int(6))));
    let limit = start + 8 * prec as u64 + 64;

    let mut sum = Interval::zero(prec);
    let mut w = Rational::one();
    let mut y = 0u64;
    loop {
        let yq = Rational::from_int(y as i64);
        let t = num.eval(&yq) / den.eval(&yq) * &w;
        if y >= start {
            let err = sum.radius() + t.abs() * Rational::from_int(2);
            let mid = sum.mid();
            if err <= tol.budget(&mid, &err) {
                return Ok(InnerProductResult {
                    value: mid,
                    error_bound: err,
                    evaluations: y as usize,
                    precision: prec,
                });
            }
            if matches!(tol, Tolerance::Absolute(eps) if sum.radius() > *eps) || y > limit {
                return Err(Error::ToleranceUnreachable(format!(
                    "{} not reached after {y} terms at {prec} bits",
                    tol.describe()
                )));
            }
        }
        sum = &sum + &Interval::point(&t, prec);
        w = w * &measure.a / Rational::from_int(y as i64 + 1);
        y += 1;
    }
}

/// Quadrature panel `[c−h, c+h]` with its enclosure and remainder bound
/// (`None` when the Cauchy estimate is unavailable).
#[derive(Debug, Clone)]
struct Panel {
    c: Rational,
    h: Rational,
    value: Interval,
    err: Option<Rational>,
}

/// Taylor-model integral of `num/den · e^{−x²}` over one panel.
///
/// The Taylor series of the integrand at `c` is built in interval arithmetic
/// up to order `order`; on the disk of radius `ρ = 4h` the integrand is bounded
/// by `M = e^{−c²+2|c|ρ+ρ²} max|num| / min|Ω|²`, both extremes taken from
/// the exact Taylor coefficients of the polynomials. The truncated part then
/// integrates to at most `2h M (1/4)^order (4/3)`.
fn panel(num: &Poly<Rational>, omega: &Poly<Rational>, den: &Poly<Rational>, c: Rational, h: Rational, order: usize, prec: u32) -> Panel {
    let nt = num.taylor_at(&c);
    let dt = den.taylor_at(&c);
    let rho = &h * Rational::from_int(4);
    let disk_sum = |coeffs: &[Rational], skip: usize| {
        let mut rho_j = Rational::one();
        let mut acc = Rational::zero();
        for (j, v) in coeffs.iter().enumerate() {
            if j >= skip {
                acc += v.abs() * &rho_j;
            }
            rho_j *= &rho;
        }
        acc
    };
    let num_max = disk_sum(&nt, 0);
    let ot = omega.taylor_at(&c);
    let omega_min = ot[0].abs() - disk_sum(&ot, 1);

    let gauss = exp_rational(&-(&c * &c), prec);
    let err = (omega_min > Rational::zero()).then(|| {
        let growth = exp_rational(&(Rational::from_int(2) * c.abs() * &rho + &rho * &rho), 64);
        let m = round_dyadic(&gauss.hi(), 64, true) * growth.hi() * &num_max / (&omega_min * &omega_min);
        let quarter = Rational::new(BigInt::one(), BigInt::from(4)).pow(order as i32);
        let bound = Rational::from_int(2) * &h * m * quarter * Rational::new(BigInt::from(4), BigInt::from(3));
        round_dyadic(&bound, 64, true)
    });

    let iv = |r: &Rational| Interval::point(r, prec);
    let d0 = iv(&dt[0]);
    let mut g: Vec<Interval> = Vec::with_capacity(order);
    for j in 0..order {
        let mut acc = nt.get(j).map_or_else(|| Interval::zero(prec), iv);
        for i in 1..=j.min(dt.len() - 1) {
            acc = &acc - &(&iv(&dt[i]) * &g[j - i]);
        }
        g.push(acc.div(&d0).expect("den(c) ≠ 0"));
    }
    // e^{−2cw−w²}: (j+1) e_{j+1} = −2c e_j − 2 e_{j−1}.
    let mut e: Vec<Interval> = Vec::with_capacity(order);
    e.push(Interval::from_int(1, prec));
    let two_c = &c * Rational::from_int(-2);
    for j in 0..order.saturating_sub(1) {
        let mut next = e[j].scale(&two_c);
        if j >= 1 {
            next = &next - &e[j - 1].scale(&Rational::from_int(2));
        }
        e.push(next.scale(&Rational::new(BigInt::one(), BigInt::from(j as i64 + 1))));
    }
    let mut total = Interval::zero(prec);
    let mut h_pow = h.clone();
    for j in (0..order).step_by(2) {
        let s = (0..=j).fold(Interval::zero(prec), |acc, i| &acc + &(&e[i] * &g[j - i]));
        total = &total + &s.scale(&(Rational::from_int(2) * &h_pow / Rational::from_int(j as i64 + 1)));
        h_pow = &h_pow * &h * &h;
    }
    Panel {
        value: &total * &gauss,
        c,
        h,
        err,
    }
}

/// `2 ∫_R^∞ C x^{d} e^{−x²} dx ≤ 2 C R^{d−1} e^{−R²}` bounding both tails,
/// where `|num/den| ≤ C |x|^d` for `|x| ≥ R`; `None` when `R` is too small
/// for the estimate.
fn tail_bound(num: &Poly<Rational>, den: &Poly<Rational>, r: u64, prec: u32) -> Option<Rational> {
    let rq = Rational::from_int(r as i64);
    let l = den.degree().unwrap_or(0);
    let lead = den.leading()?.abs();
    let mut slack = lead;
    for (j, c) in den.coeffs()[..l].iter().enumerate() {
        slack -= c.abs() / rq.pow((l - j) as i32);
    }
    if slack <= Rational::zero() {
        return None;
    }
    let sum: Rational = num.coeffs().iter().map(|c| c.abs()).sum();
    let d = (num.degree().unwrap_or(0) as i64 - l as i64).max(0);
    if ((r * r) as i64) < d - 1 {
        return None;
    }
    let power = rq.pow((d - 1) as i32);
    let gauss = exp_rational(&-(&rq * &rq), prec).hi();
    Some(Rational::from_int(2) * sum / slack * power * gauss)
}

const MAX_PANELS: usize = 20_000;

/// `∫ p q e^{−x²}/Ω² dx` by adaptive Taylor-model quadrature over `[−R, R]`
/// with an analytic tail bound beyond.
pub fn continuous_inner(
    p: &Poly<Rational>,
    q: &Poly<Rational>,
    weight: &ContinuousWeight,
    prec: u32,
    tol: &Tolerance,
) -> Result<InnerProductResult> {
    tol.check_attainable(prec)?;
    let num = p * q;
    let den = &weight.omega * &weight.omega;
    if num.is_zero() {
        return Ok(InnerProductResult {
            value: Rational::zero(),
            error_bound: Rational::zero(),
            evaluations: 0,
            precision: prec,
        });
    }
    let order = (prec as usize / 8).max(24);
    let half = Rational::new(BigInt::one(), BigInt::from(4));
    let mut r: u64 = 2;
    let mut pending: Vec<(Rational, Rational)> = unit_panels(-(r as i64), r as i64, &half);
    let mut done: Vec<Panel> = Vec::new();
    loop {
        let fresh: Vec<Panel> = pending
            .par_iter()
            .map(|(c, h)| panel(&num, &weight.omega, &den, c.clone(), h.clone(), order, prec))
            .collect();
        done.extend(fresh);
        pending.clear();

        let sum = done.iter().fold(Interval::zero(prec), |acc, p| &acc + &p.value);
        let tail = tail_bound(&num, &den, r, prec);
        let quad: Option<Rational> = done.iter().map(|p| p.err.clone()).sum();
        let total = match (&quad, &tail) {
            (Some(qe), Some(te)) => Some(sum.radius() + qe + te),
            _ => None,
        };
        let mid = sum.mid();
        if let Some(err) = &total {
            if *err <= tol.budget(&mid, err) {
                return Ok(InnerProductResult {
                    value: mid,
                    error_bound: err.clone(),
                    evaluations: done.len(),
                    precision: prec,
                });
            }
        }
        if done.len() > MAX_PANELS || matches!(tol, Tolerance::Absolute(eps) if sum.radius() > *eps) {
            return Err(Error::ToleranceUnreachable(format!(
                "{} not reached with {} panels at {prec} bits",
                tol.describe(),
                done.len()
            )));
        }
        let budget = total.as_ref().map_or(Rational::zero(), |t| tol.budget(&mid, t));
        let largest = done.iter().filter_map(|p| p.err.clone()).max().unwrap_or_else(Rational::zero);
        let n = Rational::from_int(done.len() as i64);
        let widen = match &tail {
            None => true,
            Some(t) => t * Rational::from_int(4) > budget && *t >= largest,
        };
        if widen {
            let (lo, hi) = (r as i64, r as i64 + 1);
            pending.extend(unit_panels(lo, hi, &half));
            pending.extend(unit_panels(-hi, -lo, &half));
            r += 1;
        }
        let threshold = if budget.is_zero() { &largest / Rational::from_int(8) } else { &budget / (n * Rational::from_int(4)) };
        let (split, keep): (Vec<Panel>, Vec<Panel>) = std::mem::take(&mut done)
            .into_iter()
            .partition(|p| p.err.as_ref().is_none_or(|e| *e > threshold));
        done = keep;
        for p in split {
            let h2 = &p.h / Rational::from_int(2);
            pending.push((&p.c - &h2, h2.clone()));
            pending.push((&p.c + &h2, h2));
        }
    }
}

/// Panels of half-width `h` covering `[lo, hi]`.
fn unit_panels(lo: i64, hi: i64, h: &Rational) -> Vec<(Rational, Rational)> {
    let width = h * Rational::from_int(2);
    let count = (Rational::from_int(hi - lo) / &width).to_integer().to_usize().unwrap_or(0);
    (0..count)
        .map(|i| (Rational::from_int(lo) + &width * Rational::from_int(i as i64) + h, h.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certified::sqrt_pi;
    use crate::families::{charlier, hermite};

    fn rel(eps: &str) -> Tolerance {
        Tolerance::Relative(crate::polycore::parse_rational(eps).unwrap())
    }

    #[test]
    fn charlier_norms() {
        let a = Rational::one();
        let mu = DiscreteMeasure::charlier(&a);
        let e = exp_rational(&a, 256);
        for n in 0..=6 {
            let c = charlier(n, &a);
            let r = discrete_inner(&c, &c, &mu, 256, &rel("1/100000000000000000000000")).unwrap();
            let target = e.scale(&(Rational::one() / crate::polycore::factorial_q(n as u64)));
            let diff = &r.enclosure() - &target;
            assert!(diff.mag() <= target.mig() * Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 20)));
        }
        let (c2, c4) = (charlier(2, &a), charlier(4, &a));
        let r = discrete_inner(&c2, &c4, &mu, 256, &Tolerance::Absolute(Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 30)))).unwrap();
        assert!(r.enclosure().contains_zero());
    }

    #[test]
    fn hermite_norms() {
        let w = ContinuousWeight::hermite();
        for n in 0..=3 {
            let h = hermite::<Rational>(n);
            let r = continuous_inner(&h, &h, &w, 192, &rel("1/1000000000000")).unwrap();
            let target = sqrt_pi(192).scale(&(Rational::from_int(1 << n) * crate::polycore::factorial_q(n as u64)));
            let diff = &r.enclosure() - &target;
            assert!(diff.mag() <= target.mig() * Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 12)), "n={n}: {r:?}");
        }
    }

    #[test]
    fn rejects_real_zeros() {
        assert!(ContinuousWeight::new(Poly::from_ints(&[-1, 0, 1])).is_err());
        assert!(DiscreteMeasure::exceptional(&"1".parse().unwrap(), &Rational::one()).is_err());
    }

    #[test]
    fn rejects_tolerance_below_precision() {
        let tiny = Tolerance::Relative(Rational::new(BigInt::one(), BigInt::one() << 100));
        let one = Poly::one();
        let err = continuous_inner(&one, &one, &ContinuousWeight::hermite(), 64, &tiny);
        assert!(matches!(err, Err(Error::ToleranceUnreachable(_))));
        let err = discrete_inner(&one, &one, &DiscreteMeasure::charlier(&Rational::one()), 64, &tiny);
        assert!(matches!(err, Err(Error::ToleranceUnreachable(_))));
    }
}
