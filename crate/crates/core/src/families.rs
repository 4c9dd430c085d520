//! Classical Charlier and Hermite polynomials, their structure relations and
//! the scaling limit that carries the first family onto the second.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::certified::Interval;
use crate::error::{Error, Result};
use crate::exceptional::{charlier_exceptional, hermite_exceptional, nu};
use crate::fsets::FiniteSet;
use crate::polycore::{binomial, factorial, factorial_q, pow, DualRational, Field, Poly, Rational, Ring};
use crate::report::VerificationReport;

/// Which classical family a construction starts from.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Charlier(Rational),
    Hermite,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Charlier(_) => "charlier",
            Self::Hermite => "hermite",
        }
    }
}

/// Charlier polynomials `c_n^a` for a fixed nonzero parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct CharlierFamily<T = Rational> {
    a: T,
}

impl<T: Field> CharlierFamily<T> {
    pub fn new(a: T) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidParameter("the Charlier parameter must be nonzero".into()));
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> &T {
        &self.a
    }

    pub fn poly(&self, n: i64) -> Poly<T> {
        charlier(n, &self.a)
    }
}

/// Hermite polynomials `H_n` (physicists' normalization).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HermiteFamily;

impl HermiteFamily {
    pub fn poly<T: Ring>(&self, n: i64) -> Poly<T> {
        hermite(n)
    }
}

/// `c_n^a(x) = (1/n!) Σ_j (−a)^{n−j} C(n,j) x(x−1)⋯(x−j+1)`; zero for `n < 0`.
pub fn charlier<T: Field>(n: i64, a: &T) -> Poly<T> {
    if n < 0 {
        return Poly::zero();
    }
    let n = n as u64;
    let minus_a = -a.clone();
    let mut acc = Poly::zero();
    let mut ff = Poly::one();
    for j in 0..=n {
        let c = T::from_bigint(&binomial(n, j)) * pow(&minus_a, n - j);
        acc = &acc + &ff.scale(&c);
        ff = &ff * &Poly::linear(T::one(), -T::from_int(j as i64));
    }
    let inv = T::from_bigint(&factorial(n)).try_inv().expect("n! is invertible");
    acc.scale(&inv)
}

/// `H_n(x) = n! Σ_j (−1)^j (2x)^{n−2j} / (j!(n−2j)!)`; zero for `n < 0`.
pub fn hermite<T: Ring>(n: i64) -> Poly<T> {
    if n < 0 {
        return Poly::zero();
    }
    let n = n as u64;
    let mut coeffs = vec![T::zero(); n as usize + 1];
    for j in 0..=n / 2 {
        // n!/(j!(n−2j)!) · 2^{n−2j}
        let c = factorial(n) / (factorial(j) * factorial(n - 2 * j)) * (BigInt::one() << (n - 2 * j));
        let c = if j % 2 == 0 { c } else { -c };
        coeffs[(n - 2 * j) as usize] = T::from_bigint(&c);
    }
    Poly::new(coeffs)
}

/// Recurrence, eigen-equation, difference ladder and parameter ladder of the
/// Charlier family for `0 ≤ n ≤ nmax`.
pub fn verify_charlier_relations(fam: &CharlierFamily, nmax: u32) -> Result<VerificationReport> {
    if nmax < 1 {
        return Err(Error::InvalidParameter("nmax must be at least 1".into()));
    }
    let a = fam.a();
    let mut report = VerificationReport::asserted("charlier_relations")
        .with_input("a", a)
        .with_input("nmax", nmax);
    let c: Vec<Poly<Rational>> = (-1..=nmax as i64 + 1).map(|n| fam.poly(n)).collect();
    let at = |n: i64| &c[(n + 1) as usize];
    let x = Poly::<Rational>::x();
    let one = Rational::one();
    let dual_a = DualRational::variable(a.clone());
    for n in 0..=nmax as i64 {
        let nq = Rational::from(BigInt::from(n));
        let lhs = &x * at(n);
        let rhs = &(&at(n + 1).scale(&(&nq + &one)) + &at(n).scale(&(&nq + a))) + &at(n - 1).scale(a);
        report.record(format!("recurrence n={n}"), lhs == rhs, || (&lhs, &rhs));

        let p = at(n);
        let image = &(&(&x * &p.shift(&-&one)).scale(&-&one) + &(&(&x + &Poly::constant(a.clone())) * p))
            - &p.shift(&one).scale(a);
        let expect = p.scale(&nq);
        report.record(format!("eigen n={n}"), image == expect, || (&image, &expect));

        let diff = &p.shift(&one) - p;
        report.record(format!("difference n={n}"), &diff == at(n - 1), || (&diff, at(n - 1)));

        let dual = charlier(n, &dual_a);
        let d_da = dual.map(|c| c.derivative.clone());
        let expect = -at(n - 1);
        report.record(format!("parameter n={n}"), d_da == expect, || (&d_da, &expect));
    }
    Ok(report.finish())
}

/// `(−1)^m a^m n! c_n(m) = (−1)^n a^n m! c_m(n)` on `[0, nmax] × [0, mmax]`.
pub fn charlier_duality_check(fam: &CharlierFamily, nmax: u32, mmax: u32) -> Result<VerificationReport> {
    let a = fam.a();
    let mut report = VerificationReport::asserted("charlier_duality")
        .with_input("a", a)
        .with_input("nmax", nmax)
        .with_input("mmax", mmax);
    let top = nmax.max(mmax) as i64;
    let polys: Vec<Poly<Rational>> = (0..=top).map(|n| fam.poly(n)).collect();
    let side = |n: u32, m: u32| -> Rational {
        let sign = if m.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        sign * pow(a, m as u64) * factorial_q(n as u64) * polys[n as usize].eval(&Rational::from(BigInt::from(m)))
    };
    for n in 0..=nmax {
        for m in 0..=mmax {
            let (lhs, rhs) = (side(n, m), side(m, n));
            report.record(format!("n={n} m={m}"), lhs == rhs, || (&lhs, &rhs));
        }
    }
    Ok(report.finish())
}

/// Degree, leading coefficient, derivative ladder, parity, recurrence and the
/// eigen-equation `H'' − 2xH' = −2nH` for `0 ≤ n ≤ nmax`.
pub fn verify_hermite_relations(nmax: u32) -> VerificationReport {
    let mut report = VerificationReport::asserted("hermite_relations").with_input("nmax", nmax);
    let h: Vec<Poly<Rational>> = (-1..=nmax as i64 + 1).map(hermite).collect();
    let at = |n: i64| &h[(n + 1) as usize];
    let x = Poly::<Rational>::x();
    let two = Rational::from(BigInt::from(2));
    for n in 0..=nmax as i64 {
        let p = at(n);
        let nq = Rational::from(BigInt::from(n));
        let lead_ok = p.degree() == Some(n as usize) && p.leading() == Some(&Rational::from(BigInt::one() << n));
        report.record(format!("leading n={n}"), lead_ok, || (format!("{p}"), format!("2^{n} x^{n}")));

        let d = p.derivative();
        let expect = at(n - 1).scale(&(&two * &nq));
        report.record(format!("derivative n={n}"), d == expect, || (&d, &expect));

        let reflected = p.compose_linear(&-Rational::one(), &Rational::zero());
        let expect = if n % 2 == 0 { p.clone() } else { -p };
        report.record(format!("parity n={n}"), reflected == expect, || (&reflected, &expect));

        let next = &(&x * p).scale(&two) - &at(n - 1).scale(&(&two * &nq));
        report.record(format!("recurrence n={n}"), &next == at(n + 1), || (&next, at(n + 1)));

        let image = &p.nth_derivative(2) - &(&x * &d).scale(&two);
        let expect = p.scale(&(-&two * &nq));
        report.record(format!("eigen n={n}"), image == expect, || (&image, &expect));
    }
    report.finish()
}

/// Element `p + q·s` of `ℚ(s)`, `s² = d`.
#[derive(Clone, Debug, PartialEq)]
struct Quadratic {
    p: Rational,
    q: Rational,
}

impl Quadratic {
    fn mul(&self, other: &Self, d: &Rational) -> Self {
        Self {
            p: &self.p * &other.p + &self.q * &other.q * d,
            q: &self.p * &other.q + &self.q * &other.p,
        }
    }
}

/// Scaled Charlier value `(2/a)^{n/2} c(√(2a)·x + a)` in `ℚ(√(2a))`.
fn scaled_value(c: &Poly<Rational>, n: u64, a: &Rational, x: &Rational) -> Quadratic {
    let d = a * Rational::from(BigInt::from(2));
    let arg = Quadratic { p: a.clone(), q: x.clone() };
    let mut acc = Quadratic {
        p: Rational::zero(),
        q: Rational::zero(),
    };
    for coef in c.coeffs().iter().rev() {
        acc = acc.mul(&arg, &d);
        acc.p += coef;
    }
    // (2/a)^{n/2} = 2^n / s^n with s = √d.
    let two_n = Rational::from(BigInt::one() << n);
    let dk = pow(&d, n / 2);
    let even = Quadratic {
        p: acc.p * &two_n / &dk,
        q: acc.q * &two_n / &dk,
    };
    if n.is_multiple_of(2) {
        even
    } else {
        // (p + q s)/s = q + (p/d) s
        Quadratic {
            p: even.q,
            q: even.p / &d,
        }
    }
}

/// Target of the scaling limit: the classical (`F = ∅`) or exceptional sequence at degree `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitTarget {
    pub set: FiniteSet,
    pub n: u64,
}

/// Maximum deviation of the scaled Charlier polynomial from its Hermite
/// limit, for each `a`, enclosed in intervals; passes when the deviations are
/// certifiably strictly decreasing along `a_sequence`, or identically zero.
pub fn hermite_limit_check(
    target: &LimitTarget,
    a_sequence: &[Rational],
    at_points: &[Rational],
    precision: u32,
) -> Result<VerificationReport> {
    let LimitTarget { set, n } = target;
    if a_sequence.is_empty() || at_points.is_empty() {
        return Err(Error::InvalidParameter("need at least one parameter and one point".into()));
    }
    if a_sequence.iter().any(|a| !a.is_positive()) || a_sequence.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("parameters must be positive and strictly increasing".into()));
    }
    if !set.in_sigma(*n) {
        return Err(Error::InvalidParameter(format!("{n} is not in the degree set of {set}")));
    }
    let u = set.u();
    let scale = factorial_q(n - u) * nu(set);
    let h = hermite_exceptional(*n, set);
    let targets: Vec<Rational> = at_points.iter().map(|x| h.eval(x) / &scale).collect();

    let mut report = VerificationReport::asserted("hermite_limit")
        .with_input("set", set)
        .with_input("n", n)
        .with_input("precision", precision);
    let mut deviations: Vec<(Rational, Interval, bool)> = Vec::new();
    for a in a_sequence {
        let c = charlier_exceptional(*n, set, a)?;
        let s = Interval::point(&(a * Rational::from(BigInt::from(2))), precision + 16).sqrt()?;
        let mut worst: Option<Interval> = None;
        let mut exact = true;
        for (x, t) in at_points.iter().zip(&targets) {
            let v = scaled_value(&c, *n, a, x);
            exact &= v.q.is_zero() && &v.p == t;
            let dev = s.scale(&v.q).add_rational(&(&v.p - t)).abs();
            worst = Some(match worst {
                None => dev,
                Some(w) => Interval::new(w.lo().max(dev.lo()), w.hi().max(dev.hi()), precision),
            });
        }
        let worst = worst.expect("at least one point").with_prec(precision);
        report.note(format!("a={a} deviation={}", worst.to_decimal(12)));
        deviations.push((a.clone(), worst, exact));
    }
    if deviations.iter().all(|d| d.2) {
        report.note("scaled values equal the limit exactly for every parameter");
        for _ in 1..deviations.len() {
            report.record_vacuous();
        }
    } else {
        for w in deviations.windows(2) {
            let ok = w[1].1.certainly_lt(&w[0].1);
            report.record(format!("a={} -> a={}", w[0].0, w[1].0), ok, || {
                (w[1].1.to_decimal(12), w[0].1.to_decimal(12))
            });
        }
    }
    Ok(report.finish())
}

/// `10^2, 10^4, 10^6`.
pub fn default_limit_parameters() -> Vec<Rational> {
    [100i64, 10_000, 1_000_000].iter().map(|&a| Rational::from(BigInt::from(a))).collect()
}

/// `0, 1/2, 1`.
pub fn default_limit_points() -> Vec<Rational> {
    vec![
        Rational::zero(),
        Rational::new(BigInt::one(), BigInt::from(2)),
        Rational::one(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{int, rat};

    #[test]
    fn charlier_examples() {
        let a = int(1);
        assert_eq!(charlier(0, &a), Poly::one());
        assert_eq!(charlier(1, &rat(3, 2)), Poly::new(vec![rat(-3, 2), int(1)]));
        assert_eq!(charlier(-3, &a), Poly::zero());
        let c5 = charlier(5, &rat(2, 7));
        assert_eq!(c5.degree(), Some(5));
        assert_eq!(c5.leading(), Some(&rat(1, 120)));
        // c_2^a = (x² − (2a+1)x + a²)/2
        assert_eq!(charlier(2, &int(3)), Poly::new(vec![rat(9, 2), rat(-7, 2), rat(1, 2)]));
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite::<Rational>(0), Poly::one());
        assert_eq!(hermite::<Rational>(2), Poly::from_ints(&[-2, 0, 4]));
        assert_eq!(hermite::<Rational>(3), Poly::from_ints(&[0, -12, 0, 8]));
        assert_eq!(hermite::<Rational>(-1), Poly::zero());
        assert!(verify_hermite_relations(20).passed);
    }

    #[test]
    fn charlier_relations_hold() {
        for a in [int(1), rat(1, 2)] {
            let r = verify_charlier_relations(&CharlierFamily::new(a).unwrap(), 10).unwrap();
            assert!(r.passed, "{r}");
        }
        assert!(CharlierFamily::new(int(0)).is_err());
    }

    #[test]
    fn duality_grid() {
        let r = charlier_duality_check(&CharlierFamily::new(int(3)).unwrap(), 12, 12).unwrap();
        assert!(r.passed, "{r}");
        assert_eq!(r.cases, 169);
    }

    #[test]
    fn limit_classical() {
        let a = default_limit_parameters();
        let x = default_limit_points();
        for n in 0..4 {
            let t = LimitTarget { set: FiniteSet::empty(), n };
            let r = hermite_limit_check(&t, &a, &x, 256).unwrap();
            assert!(r.passed, "{r} {:?}", r.notes);
            assert_eq!(r.vacuous > 0, n < 2, "n={n}");
        }
    }

    #[test]
    fn limit_rejects_bad_ladder() {
        let t = LimitTarget { set: FiniteSet::empty(), n: 2 };
        assert!(hermite_limit_check(&t, &[int(10), int(5)], &[int(0)], 64).is_err());
    }
}
