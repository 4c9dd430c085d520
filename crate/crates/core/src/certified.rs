//! Rigorous interval arithmetic with dyadic endpoints.
//!
//! Endpoints are rounded outward to `prec` significant bits after every
//! operation, so an [`Interval`] behaves like a pair of directed-rounding big
//! floats: the true value is always contained in `[lo, hi]`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::polycore::{factorial, Rational};

pub const DEFAULT_PRECISION: u32 = 256;

fn bit_len(n: &BigInt) -> i64 {
    n.bits() as i64
}

fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

/// `q` rounded toward `-inf` (or `+inf` when `up`) to `prec` significant bits.
pub fn round_dyadic(q: &Rational, prec: u32, up: bool) -> Rational {
    if q.is_zero() {
        return Rational::zero();
    }
    let exponent = bit_len(q.numer()) - bit_len(q.denom());
    let shift = prec as i64 - exponent;
    let (num, den) = if shift >= 0 {
        (q.numer() << (shift as u64), q.denom().clone())
    } else {
        (q.numer().clone(), q.denom() << ((-shift) as u64))
    };
    let m = if up { num.div_ceil(&den) } else { num.div_floor(&den) };
    if shift >= 0 {
        Rational::new(m, pow2(shift as u64))
    } else {
        Rational::from_integer(m << ((-shift) as u64))
    }
}

/// `m · 2^e`, kept with an odd mantissa (or `0 · 2^0`) so equality is structural.
#[derive(Clone, PartialEq, Eq)]
struct Dyadic {
    m: BigInt,
    e: i64,
}

impl Dyadic {
    fn zero() -> Self {
        Self { m: BigInt::zero(), e: 0 }
    }

    fn normalized(m: BigInt, e: i64) -> Self {
        match m.trailing_zeros() {
            None => Self::zero(),
            Some(0) => Self { m, e },
            Some(t) => Self { m: m >> t, e: e + t as i64 },
        }
    }

    /// Exact `m · 2^e` rounded to `prec` significant bits.
    fn rounded(m: BigInt, e: i64, prec: u32, up: bool) -> Self {
        let excess = bit_len(&m) - prec as i64;
        if excess <= 0 {
            return Self::normalized(m, e);
        }
        let s = excess as u64;
        // `>>` on BigInt floors.
        let r = if up { -((-m) >> s) } else { m >> s };
        Self::normalized(r, e + excess)
    }

    fn from_rational(q: &Rational, prec: u32, up: bool) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        if q.denom().is_one() {
            return Self::rounded(q.numer().clone(), 0, prec, up);
        }
        let exponent = bit_len(q.numer()) - bit_len(q.denom());
        let shift = prec as i64 + 1 - exponent;
        let (num, den) = if shift >= 0 {
            (q.numer() << (shift as u64), q.denom().clone())
        } else {
            (q.numer().clone(), q.denom() << ((-shift) as u64))
        };
        let m = if up { num.div_ceil(&den) } else { num.div_floor(&den) };
        Self::rounded(m, -shift, prec, up)
    }

    fn to_rational(&self) -> Rational {
        if self.e >= 0 {
            Rational::from_integer(&self.m << (self.e as u64))
        } else {
            Rational::new(self.m.clone(), pow2((-self.e) as u64))
        }
    }

    fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    fn neg(&self) -> Self {
        Self { m: -&self.m, e: self.e }
    }

    fn add_rounded(&self, other: &Self, prec: u32, up: bool) -> Self {
        if self.m.is_zero() {
            return Self::rounded(other.m.clone(), other.e, prec, up);
        }
        if other.m.is_zero() {
            return Self::rounded(self.m.clone(), self.e, prec, up);
        }
        let e = self.e.min(other.e);
        let m = (&self.m << ((self.e - e) as u64)) + (&other.m << ((other.e - e) as u64));
        Self::rounded(m, e, prec, up)
    }

    fn mul_exact(&self, other: &Self) -> (BigInt, i64) {
        (&self.m * &other.m, self.e + other.e)
    }

    /// `self / other` rounded to `prec` bits.
    fn div_rounded(&self, other: &Self, prec: u32, up: bool) -> Self {
        let s = (prec as i64 + 2 + bit_len(&other.m) - bit_len(&self.m)).max(0) as u64;
        let num = &self.m << s;
        let q = if up { num.div_ceil(&other.m) } else { num.div_floor(&other.m) };
        Self::rounded(q, self.e - other.e - s as i64, prec, up)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.e.min(other.e);
        (&self.m << ((self.e - e) as u64)).cmp(&(&other.m << ((other.e - e) as u64)))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational, prec: u32) -> Self {
        debug_assert!(lo <= hi, "empty interval");
        Self {
            lo: Dyadic::from_rational(&lo, prec, false),
            hi: Dyadic::from_rational(&hi, prec, true),
            prec,
        }
    }

    /// Smallest representable interval containing `q`.
    pub fn point(q: &Rational, prec: u32) -> Self {
        Self {
            lo: Dyadic::from_rational(q, prec, false),
            hi: Dyadic::from_rational(q, prec, true),
            prec,
        }
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        Self::point(&Rational::from_integer(BigInt::from(n)), prec)
    }

    pub fn zero(prec: u32) -> Self {
        Self {
            lo: Dyadic::zero(),
            hi: Dyadic::zero(),
            prec,
        }
    }

    /// `mid ± radius`.
    pub fn ball(mid: &Rational, radius: &Rational, prec: u32) -> Self {
        let r = radius.abs();
        Self::new(mid - &r, mid + &r, prec)
    }

    pub fn lo(&self) -> Rational {
        self.lo.to_rational()
    }

    pub fn hi(&self) -> Rational {
        self.hi.to_rational()
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid(&self) -> Rational {
        (self.lo() + self.hi()) / Rational::from_integer(BigInt::from(2))
    }

    pub fn radius(&self) -> Rational {
        (self.hi() - self.lo()) / Rational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo() <= q && q <= &self.hi()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.m.is_positive() && !self.hi.m.is_negative()
    }

    /// Upper bound on `|x|` over the interval.
    pub fn mag(&self) -> Rational {
        self.lo.neg().max(self.hi.clone()).to_rational()
    }

    /// Lower bound on `|x|` over the interval.
    pub fn mig(&self) -> Rational {
        if self.contains_zero() {
            Rational::zero()
        } else if self.lo.is_negative() {
            self.hi.neg().to_rational()
        } else {
            self.lo.to_rational()
        }
    }

    pub fn abs(&self) -> Self {
        if self.contains_zero() {
            let hi = self.lo.neg().max(self.hi.clone());
            Self { lo: Dyadic::zero(), hi, prec: self.prec }
        } else if self.lo.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Whether every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Self) -> bool {
        self.hi < other.lo
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self {
            lo: Dyadic::rounded(self.lo.m.clone(), self.lo.e, prec, false),
            hi: Dyadic::rounded(self.hi.m.clone(), self.hi.e, prec, true),
            prec,
        }
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.denom().is_one() {
            let d = Dyadic::normalized(q.numer().clone(), 0);
            return self * &Self { lo: d.clone(), hi: d, prec: self.prec };
        }
        self * &Self::point(q, self.prec + 2)
    }

    pub fn add_rational(&self, q: &Rational) -> Self {
        self + &Self::point(q, self.prec + 2)
    }

    pub fn sqr(&self) -> Self {
        let a = self.abs();
        let (lm, le) = a.lo.mul_exact(&a.lo);
        let (hm, he) = a.hi.mul_exact(&a.hi);
        Self {
            lo: Dyadic::rounded(lm, le, self.prec, false),
            hi: Dyadic::rounded(hm, he, self.prec, true),
            prec: self.prec,
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let one = Dyadic::normalized(BigInt::one(), 0);
        Ok(Self {
            lo: one.div_rounded(&self.hi, self.prec, false),
            hi: one.div_rounded(&self.lo, self.prec, true),
            prec: self.prec,
        })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn powu(&self, n: u32) -> Self {
        if n == 0 {
            return Self::from_int(1, self.prec);
        }
        if n.is_multiple_of(2) {
            return self.sqr().powu(n / 2);
        }
        self * &self.powu(n - 1)
    }

    /// `e^x`, rigorously enclosed.
    pub fn exp(&self) -> Self {
        let lo = exp_rational(&self.lo(), self.prec);
        let hi = exp_rational(&self.hi(), self.prec);
        Self {
            lo: lo.lo,
            hi: hi.hi,
            prec: self.prec,
        }
    }

    /// Square root of a nonnegative interval.
    pub fn sqrt(&self) -> Result<Self> {
        if self.lo.is_negative() {
            return Err(Error::InvalidParameter("square root of a negative interval".into()));
        }
        Ok(Self::new(
            sqrt_bound(&self.lo(), self.prec, false),
            sqrt_bound(&self.hi(), self.prec, true),
            self.prec,
        ))
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    /// Midpoint in scientific notation with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        format_sci(&self.mid(), digits)
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        let prec = self.prec.max(rhs.prec);
        Interval {
            lo: self.lo.add_rounded(&rhs.lo, prec, false),
            hi: self.hi.add_rounded(&rhs.hi, prec, true),
            prec,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        self + &-rhs
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let prec = self.prec.max(rhs.prec);
        let c = [
            self.lo.mul_exact(&rhs.lo),
            self.lo.mul_exact(&rhs.hi),
            self.hi.mul_exact(&rhs.lo),
            self.hi.mul_exact(&rhs.hi),
        ];
        let as_dy = |(m, e): &(BigInt, i64)| Dyadic { m: m.clone(), e: *e };
        let lo = c.iter().map(as_dy).min().expect("four products");
        let hi = c.iter().map(as_dy).max().expect("four products");
        Interval {
            lo: Dyadic::rounded(lo.m, lo.e, prec, false),
            hi: Dyadic::rounded(hi.m, hi.e, prec, true),
            prec,
        }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

macro_rules! owned_interval_op {
    ($tr:ident, $m:ident) => {
        impl $tr for Interval {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                (&self).$m(&rhs)
            }
        }
    };
}

owned_interval_op!(Add, add);
owned_interval_op!(Sub, sub);
owned_interval_op!(Mul, mul);

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} ± {}]", format_sci(&self.mid(), 12), format_sci(&self.radius(), 3))
    }
}

/// Enclosure of `e^q` for a rational `q`.
pub fn exp_rational(q: &Rational, prec: u32) -> Interval {
    if q.is_zero() {
        return Interval::from_int(1, prec);
    }
    if q < &Rational::zero() {
        let pos = exp_rational(&-q, prec + 4);
        return pos.recip().expect("exp is positive").with_prec(prec);
    }
    // Halve until q / 2^r <= 1/2, sum the series there, square back up.
    let mut r = 0u32;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut y = q.clone();
    while y > half {
        y /= Rational::from_integer(BigInt::from(2));
        r += 1;
    }
    let work = prec + r + 16;
    let yi = Interval::point(&y, work);
    let mut sum = Interval::from_int(1, work);
    let mut term = Interval::from_int(1, work);
    let mut j = 1u64;
    let target = Rational::new(BigInt::one(), pow2(work as u64 + 2));
    loop {
        term = (&term * &yi).scale(&Rational::new(BigInt::one(), BigInt::from(j)));
        sum = &sum + &term;
        j += 1;
        // Remaining tail is at most 2·|next term| because y/(j+1) <= 1/2.
        let next = term.mag() * &y / Rational::from_integer(BigInt::from(j));
        if next < target {
            let bound = next * Rational::from_integer(BigInt::from(2));
            sum = Interval::new(sum.lo(), sum.hi() + &bound, work);
            break;
        }
    }
    for _ in 0..r {
        sum = sum.sqr();
    }
    sum.with_prec(prec)
}

fn sqrt_bound(q: &Rational, prec: u32, up: bool) -> Rational {
    if q.is_zero() {
        return Rational::zero();
    }
    let exponent = bit_len(q.numer()) - bit_len(q.denom());
    let s = (prec as i64 + 2 - exponent / 2).max(0) as u64;
    // floor(q · 4^s) then integer square root.
    let scaled = (q.numer() << (2 * s)).div_floor(q.denom());
    let root = scaled.sqrt();
    let exact = &root * &root == scaled && Rational::new(scaled.clone(), pow2(2 * s)) == *q;
    let root = if up && !exact { root + 1 } else { root };
    Rational::new(root, pow2(s))
}

fn atan_inv(m: u64, prec: u32) -> Interval {
    // arctan(1/m) = Σ (-1)^j / ((2j+1) m^(2j+1)); alternating, decreasing.
    let work = prec + 16;
    let m2 = BigInt::from(m) * BigInt::from(m);
    let mut power = BigInt::from(m);
    let mut sum = Interval::zero(work);
    let target = Rational::new(BigInt::one(), pow2(work as u64 + 2));
    let mut j = 0u64;
    loop {
        let term = Rational::new(BigInt::one(), BigInt::from(2 * j + 1) * &power);
        if term < target {
            return Interval::new(sum.lo() - &term, sum.hi() + &term, work);
        }
        let t = Interval::point(&term, work);
        sum = if j.is_multiple_of(2) { &sum + &t } else { &sum - &t };
        power *= &m2;
        j += 1;
    }
}

/// Enclosure of π (Machin's formula).
pub fn pi(prec: u32) -> Interval {
    let a = atan_inv(5, prec).scale(&Rational::from_integer(BigInt::from(16)));
    let b = atan_inv(239, prec).scale(&Rational::from_integer(BigInt::from(4)));
    (&a - &b).with_prec(prec)
}

pub fn sqrt_pi(prec: u32) -> Interval {
    pi(prec + 8).sqrt().expect("pi is positive").with_prec(prec)
}

/// Enclosure of `n!` (exact when representable).
pub fn factorial_interval(n: u64, prec: u32) -> Interval {
    Interval::point(&Rational::from_integer(factorial(n)), prec)
}

/// Scientific-notation rendering of a rational with `digits` significant digits.
pub fn format_sci(q: &Rational, digits: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let negative = q < &Rational::zero();
    let a = q.abs();
    // Estimate the decimal exponent, then correct it.
    let est = ((bit_len(a.numer()) - bit_len(a.denom())) as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let pow10 = |e: i64| -> Rational {
        let p = Rational::from_integer(num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize));
        if e >= 0 {
            p
        } else {
            p.recip()
        }
    };
    let mut e = est;
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    let scaled = &a * pow10(digits as i64 - 1 - e);
    let mut mant = scaled.round().to_integer();
    if Rational::from_integer(mant.clone()) >= pow10(digits as i64) {
        mant /= 10;
        e += 1;
    }
    let s = mant.to_string();
    let (head, tail) = s.split_at(1);
    let sign = if negative { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

impl PartialOrd for Interval {
    /// Ordered only when the intervals are disjoint or identical points.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if other.hi < self.lo {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && self == other {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{int, rat};

    #[test]
    fn rounding_is_outward() {
        let third = rat(1, 3);
        let lo = round_dyadic(&third, 10, false);
        let hi = round_dyadic(&third, 10, true);
        assert!(lo < third && third < hi);
        assert!(&hi - &lo <= rat(1, 1 << 10));
        assert_eq!(round_dyadic(&rat(3, 4), 10, true), rat(3, 4));
        let big = Rational::from_integer(BigInt::from(1_000_003));
        assert!(round_dyadic(&big, 4, false) <= big && big <= round_dyadic(&big, 4, true));
    }

    #[test]
    fn e_and_pi_known_digits() {
        let e = exp_rational(&int(1), 128);
        assert!(agrees(&e, "2.71828182845904523536028747135266249775"));
        assert!(e.radius() < rat(1, 1) * Rational::new(BigInt::one(), pow2(120)));
        let p = pi(128);
        assert!(agrees(&p, "3.14159265358979323846264338327950288419"));
        let em = exp_rational(&int(-2), 128);
        assert!(agrees(&em, "0.13533528323661269189399949497248440340"));
        let sp = sqrt_pi(128);
        assert!(agrees(&sp, "1.77245385090551602729816748334114518279"));
    }

    /// Whether the enclosure meets `[q, q + ulp]` for the truncated decimal `s`.
    fn agrees(iv: &Interval, s: &str) -> bool {
        let q = crate::polycore::parse_rational(s).unwrap();
        let digits = s.split('.').nth(1).map_or(0, |f| f.len());
        let ulp = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits));
        iv.lo() <= &q + &ulp && q <= iv.hi()
    }

    #[test]
    fn sqrt_encloses() {
        let two = Interval::from_int(2, 200);
        let r = two.sqrt().unwrap();
        assert!(r.lo() * r.lo() <= int(2) && int(2) <= r.hi() * r.hi());
        assert_eq!(Interval::from_int(9, 64).sqrt().unwrap(), Interval::from_int(3, 64));
    }

    #[test]
    fn arithmetic_contains_true_values() {
        let a = Interval::ball(&rat(1, 3), &rat(1, 1000), 64);
        let b = Interval::ball(&rat(-2, 7), &rat(1, 1000), 64);
        let p = &a * &b;
        assert!(p.contains(&(rat(1, 3) * rat(-2, 7))));
        assert!((&a - &a).contains_zero());
        assert!(b.recip().unwrap().contains(&rat(-7, 2)));
        assert!(Interval::ball(&int(0), &int(1), 64).recip().is_err());
    }

    #[test]
    fn sci_format() {
        assert_eq!(format_sci(&rat(1, 3), 5), "3.3333e-1");
        assert_eq!(format_sci(&int(-120), 2), "-1.2e2");
        assert_eq!(format_sci(&rat(999, 1000), 2), "1.0e0");
        assert_eq!(format_sci(&int(7), 1), "7e0");
    }
}
