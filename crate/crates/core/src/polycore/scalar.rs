//! Scalar rings used as polynomial coefficients.
//!
//! Everything in the crate is generic over [`Ring`] / [`Field`]. The exact
//! instances are big rationals, Gaussian rationals `a + b i` and dual
//! rationals `p + q ε` with `ε² = 0`; `f32`/`f64` are provided for plotting
//! and quick numerics.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type GaussRational = Complex<Rational>;

/// Commutative ring with unit, as far as polynomial arithmetic needs it.
pub trait Ring:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Image of an integer under the canonical map `Z -> R`.
    fn from_int(n: i64) -> Self;

    fn from_bigint(n: &BigInt) -> Self;
}

pub trait Field: Ring + Div<Output = Self> {
    fn try_inv(&self) -> Option<Self>;

    fn try_div(&self, rhs: &Self) -> Result<Self> {
        rhs.try_inv()
            .map(|inv| self.clone() * inv)
            .ok_or(Error::DivisionByZero)
    }
}

/// Marker for rings where `==` decides equality exactly.
pub trait Exact: Field {}

/// Canonical embedding of one coefficient ring into another.
pub trait Embed<T>: Sized {
    fn embed(value: &T) -> Self;
}

impl<T: Clone> Embed<T> for T {
    fn embed(value: &T) -> Self {
        value.clone()
    }
}

impl Ring for Rational {
    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_bigint(n: &BigInt) -> Self {
        Rational::from_integer(n.clone())
    }
}

impl Field for Rational {
    fn try_inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

impl Exact for Rational {}

impl Ring for GaussRational {
    fn from_int(n: i64) -> Self {
        Complex::new(Rational::from_int(n), Rational::zero())
    }

    fn from_bigint(n: &BigInt) -> Self {
        Complex::new(Rational::from_bigint(n), Rational::zero())
    }
}

impl Field for GaussRational {
    fn try_inv(&self) -> Option<Self> {
        let norm = self.norm_sqr();
        if norm.is_zero() {
            return None;
        }
        Some(Complex::new(&self.re / &norm, -&self.im / &norm))
    }
}

impl Exact for GaussRational {}

impl Embed<Rational> for GaussRational {
    fn embed(value: &Rational) -> Self {
        Complex::new(value.clone(), Rational::zero())
    }
}

/// The imaginary unit as a Gaussian rational.
pub fn imag_unit() -> GaussRational {
    Complex::new(Rational::zero(), Rational::one())
}

/// `i^n` for any integer `n`.
pub fn imag_pow(n: i64) -> GaussRational {
    match n.rem_euclid(4) {
        0 => GaussRational::from_int(1),
        1 => imag_unit(),
        2 => GaussRational::from_int(-1),
        _ => -imag_unit(),
    }
}

/// First-order dual number `value + derivative·ε`, `ε² = 0`.
///
/// Evaluating a rational polynomial at `a + ε` yields `p(a) + p'(a) ε`, which is
/// how derivatives with respect to the Charlier parameter are taken.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DualRational {
    pub value: Rational,
    pub derivative: Rational,
}

impl DualRational {
    pub fn new(value: Rational, derivative: Rational) -> Self {
        Self { value, derivative }
    }

    pub fn constant(value: Rational) -> Self {
        Self::new(value, Rational::zero())
    }

    /// The independent variable `value + 1·ε`.
    pub fn variable(value: Rational) -> Self {
        Self::new(value, Rational::one())
    }
}

impl fmt::Debug for DualRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ε", self.value, self.derivative)
    }
}

impl fmt::Display for DualRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for DualRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.value + rhs.value, self.derivative + rhs.derivative)
    }
}

impl Sub for DualRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.value - rhs.value, self.derivative - rhs.derivative)
    }
}

impl Mul for DualRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let derivative = &self.value * &rhs.derivative + &self.derivative * &rhs.value;
        Self::new(self.value * rhs.value, derivative)
    }
}

impl Neg for DualRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, -self.derivative)
    }
}

impl Div for DualRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self.try_div(&rhs).expect("dual division by a zero value part")
    }
}

impl Zero for DualRational {
    fn zero() -> Self {
        Self::constant(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.derivative.is_zero()
    }
}

impl One for DualRational {
    fn one() -> Self {
        Self::constant(Rational::one())
    }
}

impl Ring for DualRational {
    fn from_int(n: i64) -> Self {
        Self::constant(Rational::from_int(n))
    }

    fn from_bigint(n: &BigInt) -> Self {
        Self::constant(Rational::from_bigint(n))
    }
}

impl Field for DualRational {
    /// Units are exactly the elements with nonzero value part.
    fn try_inv(&self) -> Option<Self> {
        let inv = self.value.try_inv()?;
        let derivative = -(&self.derivative * &inv * &inv);
        Some(Self::new(inv, derivative))
    }
}

impl Exact for DualRational {}

impl Embed<Rational> for DualRational {
    fn embed(value: &Rational) -> Self {
        Self::constant(value.clone())
    }
}

macro_rules! impl_float_ring {
    ($t:ty) => {
        impl Ring for $t {
            fn from_int(n: i64) -> Self {
                n as $t
            }

            fn from_bigint(n: &BigInt) -> Self {
                num_traits::ToPrimitive::to_f64(n).unwrap_or(f64::NAN) as $t
            }
        }

        impl Field for $t {
            fn try_inv(&self) -> Option<Self> {
                (*self != 0.0).then(|| 1.0 / *self)
            }
        }

        impl Embed<Rational> for $t {
            fn embed(value: &Rational) -> Self {
                num_traits::ToPrimitive::to_f64(value).unwrap_or(f64::NAN) as $t
            }
        }
    };
}

impl_float_ring!(f32);
impl_float_ring!(f64);

/// `n / d` as a reduced rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let whole = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(whole).map_err(|_| bad())?
        };
        let frac_int = BigInt::from_str(frac).map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = Rational::new(whole.abs() * &scale + frac_int, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    BigInt::from_str(s)
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

/// Canonical text form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Serde adapter writing rationals as strings.
pub mod rational_serde {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
            match q {
                Some(q) => s.serialize_some(&format_rational(q)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
                .transpose()
        }
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(qs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            s.collect_seq(qs.iter().map(format_rational))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn factorial_q(n: u64) -> Rational {
    Rational::from_integer(factorial(n))
}

/// Binomial coefficient `C(n, k)` for nonnegative integers.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `x^n` for any integer exponent in a field.
pub fn powi<T: Field>(x: &T, n: i64) -> Result<T> {
    let base = if n < 0 {
        x.try_inv().ok_or(Error::DivisionByZero)?
    } else {
        x.clone()
    };
    Ok(pow(&base, n.unsigned_abs()))
}

pub fn pow<T: Ring>(x: &T, mut n: u64) -> T {
    let mut acc = T::one();
    let mut base = x.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * base.clone();
        }
        n >>= 1;
        if n > 0 {
            base = base.clone() * base;
        }
    }
    acc
}

/// `(-1)^n`.
pub fn sign_pow<T: Ring>(n: i64) -> T {
    if n.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_is_reduced() {
        let q = rat(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(format_rational(&int(0)), "0");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("1.5").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("1/0"), Err(Error::DivisionByZero));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn gauss_division_by_zero_is_an_error() {
        let z = GaussRational::zero();
        assert_eq!(GaussRational::one().try_div(&z), Err(Error::DivisionByZero));
        let w = GaussRational::new(int(1), int(2));
        let inv = w.try_inv().unwrap();
        assert_eq!(w * inv, GaussRational::one());
    }

    #[test]
    fn conjugation_is_an_involution() {
        let w = GaussRational::new(rat(3, 7), rat(-2, 5));
        assert_eq!(w.conj().conj(), w);
        assert_eq!(imag_unit() * imag_unit(), GaussRational::from_int(-1));
        assert_eq!(imag_pow(-1), -imag_unit());
        assert_eq!(imag_pow(6), GaussRational::from_int(-1));
    }

    #[test]
    fn dual_product_rule() {
        let x = DualRational::new(int(2), int(3));
        let y = DualRational::new(int(5), int(7));
        let p = x.clone() * y.clone();
        assert_eq!(p, DualRational::new(int(10), int(2 * 7 + 3 * 5)));
        let q = p.try_div(&y).unwrap();
        assert_eq!(q, x);
        assert!(DualRational::new(int(0), int(1)).try_inv().is_none());
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(2, 6), BigInt::zero());
        assert_eq!(powi(&rat(2, 3), -2).unwrap(), rat(9, 4));
        assert_eq!(sign_pow::<Rational>(-3), int(-1));
    }
}
