//! Exact determinants over commutative rings.

use num_traits::One;

use super::poly::Poly;
use super::scalar::{DualRational, Field, GaussRational, Rational, Ring};
use crate::error::{Error, Result};
use crate::report::VerificationReport;

pub type Matrix<R> = Vec<Vec<R>>;

/// Rings with a partial exact division, as fraction-free elimination needs.
pub trait ExactDivRing: Ring {
    /// `self / d` when `d` divides `self` exactly; `None` otherwise.
    fn exact_quotient(&self, d: &Self) -> Option<Self>;
}

macro_rules! field_exact_div {
    ($($t:ty),*) => {$(
        impl ExactDivRing for $t {
            fn exact_quotient(&self, d: &Self) -> Option<Self> {
                self.try_div(d).ok()
            }
        }
    )*};
}

field_exact_div!(Rational, GaussRational, DualRational, f64);

impl<T: Field> ExactDivRing for Poly<T> {
    fn exact_quotient(&self, d: &Self) -> Option<Self> {
        self.exact_div(d).ok()
    }
}

/// Matrices up to this size use cofactor expansion; larger ones Bareiss.
pub const COFACTOR_MAX: usize = 4;

fn check_square<R>(m: &Matrix<R>) -> Result<usize> {
    let n = m.len();
    for (row, r) in m.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NonSquare {
                rows: n,
                row,
                cols: r.len(),
            });
        }
    }
    Ok(n)
}

/// Determinant, by cofactor expansion for small sizes and fraction-free
/// elimination otherwise. The empty matrix has determinant one.
pub fn determinant<R: ExactDivRing>(m: &Matrix<R>) -> Result<R> {
    let n = check_square(m)?;
    if n <= COFACTOR_MAX {
        return Ok(cofactor(m));
    }
    Ok(bareiss(m.clone()).unwrap_or_else(|| cofactor(m)))
}

/// Laplace expansion along the first row.
pub fn det_cofactor<R: Ring>(m: &Matrix<R>) -> Result<R> {
    check_square(m)?;
    Ok(cofactor(m))
}

/// Bareiss fraction-free elimination with row pivoting.
///
/// Falls back to cofactor expansion if an intermediate pivot is a zero
/// divisor of the ring (possible for dual numbers).
pub fn det_bareiss<R: ExactDivRing>(m: &Matrix<R>) -> Result<R> {
    check_square(m)?;
    Ok(bareiss(m.clone()).unwrap_or_else(|| cofactor(m)))
}

fn cofactor<R: Ring>(m: &Matrix<R>) -> R {
    let n = m.len();
    match n {
        0 => R::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        _ => {
            let mut acc = R::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let sub = minor(m, &[0], &[j]);
                let term = m[0][j].clone() * cofactor(&sub);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

fn bareiss<R: ExactDivRing>(mut a: Matrix<R>) -> Option<R> {
    let n = a.len();
    if n == 0 {
        return Some(R::one());
    }
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return Some(R::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = if prev.is_one() { t } else { t.exact_quotient(&prev)? };
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Some(if negate { -d } else { d })
}

/// Copy of `m` without the given rows and columns (0-based).
pub fn minor<R: Clone>(m: &Matrix<R>, rows: &[usize], cols: &[usize]) -> Matrix<R> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| !rows.contains(i))
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| !cols.contains(j))
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Checks `det(M)·det(M_{i0,i1}^{j0,j1}) = det(M_{i0}^{j0})det(M_{i1}^{j1}) - det(M_{i0}^{j1})det(M_{i1}^{j0})`
/// for 1-based indices `i0 < i1`, `j0 < j1`.
pub fn sylvester_check<T: Field>(
    m: &Matrix<Poly<T>>,
    (i0, i1): (usize, usize),
    (j0, j1): (usize, usize),
) -> Result<VerificationReport> {
    let k = check_square(m)?;
    let valid = |a: usize, b: usize| 1 <= a && a < b && b <= k;
    if !valid(i0, i1) || !valid(j0, j1) {
        return Err(Error::IndexOutOfRange(format!(
            "rows ({i0},{i1}), columns ({j0},{j1}) for a {k}x{k} matrix"
        )));
    }
    let (i0, i1, j0, j1) = (i0 - 1, i1 - 1, j0 - 1, j1 - 1);
    let d = |rows: &[usize], cols: &[usize]| determinant(&minor(m, rows, cols));
    let lhs = &determinant(m)? * &d(&[i0, i1], &[j0, j1])?;
    let rhs = &(&d(&[i0], &[j0])? * &d(&[i1], &[j1])?) - &(&d(&[i0], &[j1])? * &d(&[i1], &[j0])?);
    let mut report = VerificationReport::asserted("sylvester")
        .with_input("size", k)
        .with_input("rows", format!("{},{}", i0 + 1, i1 + 1))
        .with_input("cols", format!("{},{}", j0 + 1, j1 + 1));
    report.record("identity", lhs == rhs, || (format!("{lhs:?}"), format!("{rhs:?}")));
    Ok(report.finish())
}

/// `∏_{i<j} (f_j - f_i)`; one for fewer than two points.
pub fn vandermonde<I>(points: I) -> Rational
where
    I: IntoIterator,
    I::Item: Into<i64>,
{
    let pts: Vec<i64> = points.into_iter().map(Into::into).collect();
    let mut acc = Rational::one();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            acc *= Rational::from_int(b - a);
        }
    }
    acc
}
