use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::{binomial, format_rational, parse_rational, Embed, Field, Rational, Ring};
use crate::error::{Error, Result};

/// Dense univariate polynomial; `coeffs[i]` multiplies `x^i`.
///
/// The highest stored coefficient is never zero, so the zero polynomial has no
/// coefficients and [`Poly::degree`] returns `None` for it.
#[derive(Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// `c·x^d`.
    pub fn monomial(c: T, d: usize) -> Self {
        let mut coeffs = vec![T::zero(); d + 1];
        coeffs[d] = c;
        Self::new(coeffs)
    }

    /// `alpha·x + beta`.
    pub fn linear(alpha: T, beta: T) -> Self {
        Self::new(vec![beta, alpha])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Horner evaluation at a point of a ring the coefficients embed into.
    pub fn eval_in<S: Ring + Embed<T>>(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + S::embed(c))
    }

    pub fn map<S: Ring>(&self, f: impl FnMut(&T) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn embed<S: Ring + Embed<T>>(&self) -> Poly<S> {
        self.map(S::embed)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_int(i as i64))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// `p(x + c)`, by repeated synthetic division.
    pub fn shift(&self, c: &T) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = a[j + 1].clone() * c.clone();
                a[j] = a[j].clone() + t;
            }
        }
        Self::new(a)
    }

    /// `p(alpha·x + beta)`.
    pub fn compose_linear(&self, alpha: &T, beta: &T) -> Self {
        let shifted = self.shift(beta);
        let mut power = T::one();
        let coeffs = shifted
            .coeffs
            .into_iter()
            .map(|c| {
                let out = c * power.clone();
                power = power.clone() * alpha.clone();
                out
            })
            .collect();
        Self::new(coeffs)
    }

    /// `p(q(x))`.
    pub fn compose(&self, q: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * q) + &Self::constant(c.clone()))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Taylor coefficients `p^(j)(x)/j!` at `x`, for `j = 0..=deg`.
    pub fn taylor_at(&self, x: &T) -> Vec<T> {
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        (0..=deg)
            .map(|j| {
                let mut acc = T::zero();
                for i in (j..=deg).rev() {
                    let b = T::from_bigint(&binomial(i as u64, j as u64));
                    acc = acc * x.clone() + self.coeffs[i].clone() * b;
                }
                acc
            })
            .collect()
    }
}

impl<T: Field> Poly<T> {
    /// Euclidean division `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].try_inv().ok_or(Error::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone() * lead_inv.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] = rem[i + j].clone() - c.clone() * dc.clone();
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    /// Quotient of a division that must leave no remainder.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision {
                remainder: format!("{r:?}"),
            })
        }
    }

    /// Scales to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => {
                let inv = lc.try_inv().expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    /// `p / gcd(p, p')`: same roots, all simple.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides")
    }
}

impl<T: Ring> Zero for Poly<T> {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Ring> One for Poly<T> {
    fn one() -> Self {
        Self::constant(T::one())
    }
}

impl<'a, T: Ring> Add<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a, T: Ring> Sub<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a, T: Ring> Mul<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Ring> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        self.map(|c| -c.clone())
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl<T: Ring> $tr for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<T: Ring> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -&self
    }
}

impl<T: Ring> Ring for Poly<T> {
    fn from_int(n: i64) -> Self {
        Self::constant(T::from_int(n))
    }

    fn from_bigint(n: &BigInt) -> Self {
        Self::constant(T::from_bigint(n))
    }
}

impl<T: Ring> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c:?})")?,
                1 => write!(f, "({c:?})x")?,
                _ => write!(f, "({c:?})x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c < &Rational::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                _ => {}
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    coeffs: Vec<String>,
}

/// `{"coeffs": ["p/q", ...]}`, ascending degree.
impl Serialize for Poly<Rational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly<Rational> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(Poly::new(coeffs))
    }
}

/// Falling factorial `x(x-1)...(x-m+1)` as a polynomial.
pub fn falling_factorial<T: Ring>(m: usize) -> Poly<T> {
    (0..m).fold(Poly::one(), |acc, i| {
        &acc * &Poly::linear(T::one(), -T::from_int(i as i64))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::scalar::{int, rat, DualRational};

    fn q(c: &[i64]) -> Poly<Rational> {
        Poly::from_ints(c)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(q(&[-1, 0, 1]).eval(&int(2)), int(3));
        assert_eq!(Poly::<Rational>::zero().eval(&rat(7, 3)), int(0));
        assert_eq!(q(&[4, 0, 8]).eval(&int(1)), int(12));
    }

    #[test]
    fn zero_has_no_degree() {
        assert_eq!(Poly::<Rational>::zero().degree(), None);
        assert_eq!(q(&[0, 0, 0]).degree(), None);
        assert_eq!(q(&[1, 2, 0]).degree(), Some(1));
    }

    #[test]
    fn division_and_gcd() {
        let a = q(&[-1, 0, 1]); // (x-1)(x+1)
        let b = q(&[-1, 1]);
        let (quot, r) = a.div_rem(&b).unwrap();
        assert_eq!(quot, q(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&q(&[1, 2, 1])), q(&[1, 1]));
        assert!(q(&[1, 0, 1]).exact_div(&b).is_err());
        assert_eq!(a.div_rem(&Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn squarefree() {
        let p = &q(&[-1, 1]).pow(3) * &q(&[2, 1]);
        assert_eq!(p.squarefree_part().monic(), (&q(&[-1, 1]) * &q(&[2, 1])).monic());
    }

    #[test]
    fn shifts_and_composition() {
        let p = q(&[0, 0, 1]);
        assert_eq!(p.shift(&int(1)), q(&[1, 2, 1]));
        assert_eq!(p.compose_linear(&int(-1), &int(3)), q(&[9, -6, 1]));
        let t = q(&[1, 2, 3]).taylor_at(&int(2));
        assert_eq!(t, vec![int(17), int(14), int(3)]);
    }

    #[test]
    fn falling() {
        assert_eq!(falling_factorial::<Rational>(3), q(&[0, 2, -3, 1]));
        assert_eq!(falling_factorial::<Rational>(0), Poly::one());
    }

    #[test]
    fn dual_evaluation_is_derivative() {
        let p = q(&[1, -3, 0, 2]);
        let v = p.eval_in(&DualRational::variable(rat(1, 2)));
        assert_eq!(v.value, p.eval(&rat(1, 2)));
        assert_eq!(v.derivative, p.derivative().eval(&rat(1, 2)));
    }

    #[test]
    fn json_shape() {
        let p = Poly::new(vec![int(4), int(0), rat(1, 2)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"coeffs":["4","0","1/2"]}"#);
        let back: Poly<Rational> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert_eq!(p.to_string(), "1/2x^2 + 4");
    }
}
