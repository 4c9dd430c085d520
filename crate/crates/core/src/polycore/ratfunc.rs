use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use super::poly::Poly;
use super::scalar::{Field, Rational};
use crate::error::{Error, Result};

/// Reduced quotient `num / den` of polynomials: `gcd(num, den) = 1`, `den` monic.
#[derive(Clone, PartialEq)]
pub struct RationalFunction<T> {
    num: Poly<T>,
    den: Poly<T>,
}

impl<T: Field> RationalFunction<T> {
    pub fn new(num: Poly<T>, den: Poly<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Poly<T>, den: Poly<T>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let lc_inv = den.leading().and_then(|c| c.try_inv()).expect("nonzero denominator");
        if !lc_inv.is_one() {
            num = num.scale(&lc_inv);
            den = den.scale(&lc_inv);
        }
        Self { num, den }
    }

    pub fn zero() -> Self {
        Self {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly<T>) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: T) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly<T> {
        &self.num
    }

    pub fn den(&self) -> &Poly<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this function equals, if its denominator is constant.
    pub fn as_poly(&self) -> Option<Poly<T>> {
        (self.den.degree() == Some(0)).then(|| self.num.clone())
    }

    pub fn eval(&self, x: &T) -> Result<T> {
        self.num.eval(x).try_div(&self.den.eval(x))
    }

    /// `f(x + c)`.
    pub fn shift(&self, c: &T) -> Self {
        Self::reduced(self.num.shift(c), self.den.shift(c))
    }

    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduced(num, &self.den * &self.den)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::reduced(self.num.scale(c), self.den.clone())
    }

    pub fn mul_poly(&self, p: &Poly<T>) -> Self {
        Self::reduced(&self.num * p, self.den.clone())
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::from_poly(Poly::one()).try_div(self)
    }
}

impl<'a, T: Field> Add<&'a RationalFunction<T>> for &'a RationalFunction<T> {
    type Output = RationalFunction<T>;
    fn add(self, rhs: &RationalFunction<T>) -> RationalFunction<T> {
        if self.den == rhs.den {
            return RationalFunction::reduced(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::reduced(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a, T: Field> Sub<&'a RationalFunction<T>> for &'a RationalFunction<T> {
    type Output = RationalFunction<T>;
    fn sub(self, rhs: &RationalFunction<T>) -> RationalFunction<T> {
        self + &(-rhs)
    }
}

impl<'a, T: Field> Mul<&'a RationalFunction<T>> for &'a RationalFunction<T> {
    type Output = RationalFunction<T>;
    fn mul(self, rhs: &RationalFunction<T>) -> RationalFunction<T> {
        RationalFunction::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<T: Field> Neg for &RationalFunction<T> {
    type Output = RationalFunction<T>;
    fn neg(self) -> RationalFunction<T> {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<T: Field> fmt::Debug for RationalFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

impl fmt::Display for RationalFunction<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[derive(Serialize)]
struct RationalFunctionJson<'a> {
    num: &'a Poly<Rational>,
    den: &'a Poly<Rational>,
}

impl Serialize for RationalFunction<Rational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalFunctionJson {
            num: &self.num,
            den: &self.den,
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::scalar::{int, rat};

    fn q(c: &[i64]) -> Poly<Rational> {
        Poly::from_ints(c)
    }

    #[test]
    fn reduction_is_canonical() {
        let f = RationalFunction::new(q(&[-2, 0, 2]), q(&[2, 2])).unwrap();
        assert_eq!(f.num(), &q(&[-1, 1]));
        assert_eq!(f.den(), &q(&[1]));
        assert_eq!(f.as_poly(), Some(q(&[-1, 1])));
        let g = RationalFunction::new(q(&[1]), q(&[0, 3])).unwrap();
        assert_eq!(g.den(), &q(&[0, 1]));
        assert_eq!(g.num(), &Poly::constant(rat(1, 3)));
        assert!(RationalFunction::new(q(&[1]), Poly::zero()).is_err());
        assert_eq!(RationalFunction::new(Poly::zero(), q(&[5, 1])).unwrap(), RationalFunction::zero());
    }

    #[test]
    fn field_operations() {
        let a = RationalFunction::new(q(&[1]), q(&[0, 1])).unwrap(); // 1/x
        let b = RationalFunction::new(q(&[1]), q(&[1, 1])).unwrap(); // 1/(x+1)
        let diff = &a - &b;
        assert_eq!(diff, RationalFunction::new(q(&[1]), q(&[0, 1, 1])).unwrap());
        assert_eq!(a.shift(&int(1)), b);
        assert_eq!(&a * &a.recip().unwrap(), RationalFunction::from_poly(Poly::one()));
        assert_eq!(a.derivative(), RationalFunction::new(q(&[-1]), q(&[0, 0, 1])).unwrap());
        assert_eq!(a.eval(&int(0)), Err(Error::DivisionByZero));
    }
}
