//! Second-order difference and differential operators with rational
//! coefficients: exact application to polynomials, composition, and the
//! operators `D_F` attached to a finite set.

mod charlier;
mod hermite;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polycore::{binomial, Poly, Rational, RationalFunction, Ring};

pub use charlier::{build_charlier_op, charlier_darboux_down, charlier_darboux_split, charlier_operator, CharlierOps};
pub use hermite::{build_hermite_op, hermite_darboux_down, hermite_darboux_split};

pub use self::checks::{darboux_down, darboux_split, symmetry_pearson_check, verify_eigen, DarbouxFactors, Factors};

mod checks;

pub type QFn = RationalFunction<Rational>;

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

fn lcm(a: &Poly<Rational>, b: &Poly<Rational>) -> Poly<Rational> {
    let g = a.gcd(b);
    (a * b).exact_div(&g).expect("gcd divides the product").monic()
}

/// Common denominator `L` and numerators `n_i·L/d_i` of a coefficient family.
fn clear<K: Copy + Ord>(coeffs: &BTreeMap<K, QFn>) -> (Poly<Rational>, Vec<(K, Poly<Rational>)>) {
    let den = coeffs.values().fold(Poly::one(), |acc, c| lcm(&acc, c.den()));
    let nums = coeffs
        .iter()
        .map(|(&key, c)| (key, c.num() * &den.exact_div(c.den()).expect("denominator divides lcm")))
        .collect();
    (den, nums)
}

fn finish_image(num: Poly<Rational>, den: &Poly<Rational>) -> Result<Poly<Rational>> {
    let (quot, rem) = num.div_rem(den)?;
    if rem.is_zero() {
        Ok(quot)
    } else {
        Err(Error::ImageNotPolynomial {
            remainder: format!("({rem}) / ({den})"),
        })
    }
}

/// Linear operators acting on polynomials.
pub trait LinearOp {
    /// The image `T(p)` as a rational function.
    fn apply_rational(&self, p: &Poly<Rational>) -> QFn;

    /// The image `T(p)`, which must be a polynomial.
    fn apply(&self, p: &Poly<Rational>) -> Result<Poly<Rational>>;

    fn is_zero(&self) -> bool;

    /// `c` when the operator is `c·Id`.
    fn as_scalar(&self) -> Option<Rational>;
}

/// `T(p)`; a nonzero remainder is an [`Error::ImageNotPolynomial`].
pub fn apply_op<O: LinearOp>(op: &O, p: &Poly<Rational>) -> Result<Poly<Rational>> {
    op.apply(p)
}

/// `Σ_l h_l(x) Sh_l`, where `Sh_l p(x) = p(x + l)`.
#[derive(Clone)]
pub struct DiffOp {
    coeffs: BTreeMap<i64, QFn>,
    cleared: (Poly<Rational>, Vec<(i64, Poly<Rational>)>),
}

impl DiffOp {
    pub fn new(coeffs: impl IntoIterator<Item = (i64, QFn)>) -> Self {
        let mut map: BTreeMap<i64, QFn> = BTreeMap::new();
        for (l, c) in coeffs {
            let sum = match map.remove(&l) {
                Some(prev) => &prev + &c,
                None => c,
            };
            if !sum.is_zero() {
                map.insert(l, sum);
            }
        }
        let cleared = clear(&map);
        Self { coeffs: map, cleared }
    }

    pub fn scalar(c: Rational) -> Self {
        Self::new([(0, QFn::constant(c))])
    }

    pub fn coeff(&self, offset: i64) -> QFn {
        self.coeffs.get(&offset).cloned().unwrap_or_else(QFn::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, QFn> {
        &self.coeffs
    }

    /// `self ∘ inner`: `Σ_{j,i} s_j(x) t_i(x+j) Sh_{i+j}`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut terms = Vec::new();
        for (&j, s) in &self.coeffs {
            for (&i, t) in &inner.coeffs {
                terms.push((i + j, s * &t.shift(&q(j))));
            }
        }
        Self::new(terms)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.coeffs.iter().chain(&other.coeffs).map(|(&l, c)| (l, c.clone())))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.coeffs.iter().map(|(&l, c)| (l, c.clone())).chain(other.coeffs.iter().map(|(&l, c)| (l, -c))))
    }

    pub fn add_scalar(&self, c: &Rational) -> Self {
        self.add(&Self::scalar(c.clone()))
    }
}

impl LinearOp for DiffOp {
    fn apply_rational(&self, p: &Poly<Rational>) -> QFn {
        let num = self.cleared.1.iter().fold(Poly::zero(), |acc, (l, c)| &acc + &(c * &p.shift(&q(*l))));
        QFn::new(num, self.cleared.0.clone()).expect("nonzero denominator")
    }

    fn apply(&self, p: &Poly<Rational>) -> Result<Poly<Rational>> {
        let num = self.cleared.1.iter().fold(Poly::zero(), |acc, (l, c)| &acc + &(c * &p.shift(&q(*l))));
        finish_image(num, &self.cleared.0)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn as_scalar(&self) -> Option<Rational> {
        scalar_of(&self.coeffs, 0)
    }
}

fn scalar_of<K: Ord + Copy>(coeffs: &BTreeMap<K, QFn>, identity: K) -> Option<Rational> {
    match coeffs.len() {
        0 => Some(Rational::zero()),
        1 => coeffs
            .get(&identity)
            .and_then(QFn::as_poly)
            .filter(|p| p.degree() == Some(0))
            .map(|p| p.coeff(0)),
        _ => None,
    }
}

/// `Σ_j c_j(x) ∂^j`.
#[derive(Clone)]
pub struct DiffeOp {
    coeffs: BTreeMap<u32, QFn>,
    cleared: (Poly<Rational>, Vec<(u32, Poly<Rational>)>),
}

impl DiffeOp {
    pub fn new(coeffs: impl IntoIterator<Item = (u32, QFn)>) -> Self {
        let mut map: BTreeMap<u32, QFn> = BTreeMap::new();
        for (j, c) in coeffs {
            let sum = match map.remove(&j) {
                Some(prev) => &prev + &c,
                None => c,
            };
            if !sum.is_zero() {
                map.insert(j, sum);
            }
        }
        let cleared = clear(&map);
        Self { coeffs: map, cleared }
    }

    pub fn scalar(c: Rational) -> Self {
        Self::new([(0, QFn::constant(c))])
    }

    pub fn coeff(&self, order: u32) -> QFn {
        self.coeffs.get(&order).cloned().unwrap_or_else(QFn::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, QFn> {
        &self.coeffs
    }

    /// `self ∘ inner`, expanding `∂^j (t ∂^i)` by Leibniz.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut terms = Vec::new();
        for (&j, s) in &self.coeffs {
            for (&i, t) in &inner.coeffs {
                let mut dt = t.clone();
                for r in 0..=j {
                    let c = Rational::from(binomial(j as u64, r as u64));
                    terms.push((i + j - r, (s * &dt).scale(&c)));
                    dt = dt.derivative();
                }
            }
        }
        Self::new(terms)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.coeffs.iter().chain(&other.coeffs).map(|(&l, c)| (l, c.clone())))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.coeffs.iter().map(|(&l, c)| (l, c.clone())).chain(other.coeffs.iter().map(|(&l, c)| (l, -c))))
    }

    pub fn add_scalar(&self, c: &Rational) -> Self {
        self.add(&Self::scalar(c.clone()))
    }
}

impl LinearOp for DiffeOp {
    fn apply_rational(&self, p: &Poly<Rational>) -> QFn {
        let num = self.derivative_sum(p);
        QFn::new(num, self.cleared.0.clone()).expect("nonzero denominator")
    }

    fn apply(&self, p: &Poly<Rational>) -> Result<Poly<Rational>> {
        finish_image(self.derivative_sum(p), &self.cleared.0)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn as_scalar(&self) -> Option<Rational> {
        scalar_of(&self.coeffs, 0)
    }
}

impl DiffeOp {
    fn derivative_sum(&self, p: &Poly<Rational>) -> Poly<Rational> {
        self.cleared
            .1
            .iter()
            .fold(Poly::zero(), |acc, (j, c)| &acc + &(c * &p.nth_derivative(*j as usize)))
    }
}

macro_rules! op_traits {
    ($ty:ty, $name:literal, $sym:literal) => {
        impl PartialEq for $ty {
            fn eq(&self, other: &Self) -> bool {
                self.coeffs == other.coeffs
            }
        }

        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_tuple($name).field(&self.coeffs).finish()
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.coeffs.is_empty() {
                    return write!(f, "0");
                }
                for (i, (k, c)) in self.coeffs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "[{c}] {}{k}", $sym)?;
                }
                Ok(())
            }
        }

        /// `{"<key>": {"num": ..., "den": ...}}`.
        impl Serialize for $ty {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.coeffs.len()))?;
                for (k, c) in &self.coeffs {
                    map.serialize_entry(&k.to_string(), c)?;
                }
                map.end()
            }
        }
    };
}

op_traits!(DiffOp, "DiffOp", "Sh_");
op_traits!(DiffeOp, "DiffeOp", "∂^");

/// `p(x) / r(x)` as a reduced rational function.
pub(crate) fn ratio(p: &Poly<Rational>, r: &Poly<Rational>) -> Result<QFn> {
    QFn::new(p.clone(), r.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::charlier;
    use crate::polycore::int;

    fn x() -> QFn {
        QFn::from_poly(Poly::x())
    }

    #[test]
    fn classical_charlier_operator() {
        let a = int(1);
        let d = DiffOp::new([
            (-1, (-&x())),
            (0, &x() + &QFn::constant(a.clone())),
            (1, QFn::constant(-a.clone())),
        ]);
        let c5 = charlier(5, &a);
        assert_eq!(apply_op(&d, &c5).unwrap(), c5.scale(&int(5)));
        assert!(apply_op(&d, &Poly::zero()).unwrap().is_zero());
    }

    #[test]
    fn non_polynomial_image_is_an_error() {
        let d = DiffOp::new([(0, QFn::new(Poly::one(), Poly::x()).unwrap())]);
        assert!(matches!(apply_op(&d, &Poly::one()), Err(Error::ImageNotPolynomial { .. })));
    }

    #[test]
    fn composition_matches_sequential_application() {
        let a = DiffOp::new([(0, x()), (1, QFn::constant(int(-2)))]);
        let b = DiffOp::new([(-1, QFn::constant(int(3))), (0, &x() + &x())]);
        let p = Poly::from_ints(&[1, -2, 0, 5]);
        let ba = b.compose(&a);
        assert_eq!(ba.apply(&p).unwrap(), b.apply(&a.apply(&p).unwrap()).unwrap());

        let c = DiffeOp::new([(1, x()), (0, QFn::constant(int(2)))]);
        let e = DiffeOp::new([(2, QFn::constant(int(-1))), (1, &x() + &x())]);
        assert_eq!(e.compose(&c).apply(&p).unwrap(), e.apply(&c.apply(&p).unwrap()).unwrap());
        assert_eq!(e.sub(&e).as_scalar(), Some(int(0)));
        assert_eq!(DiffeOp::scalar(int(3)).as_scalar(), Some(int(3)));
        assert_eq!(a.as_scalar(), None);
    }
}
