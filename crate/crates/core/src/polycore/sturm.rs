//! Exact real-root counting with Sturm sequences.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::poly::Poly;
use super::scalar::{Rational, Ring};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum RootInterval {
    Whole,
    /// Open interval `(lo, hi)`.
    Open(Rational, Rational),
}

/// Cauchy bound `1 + max|c_i| / |c_deg|`; every complex root lies strictly inside.
pub fn cauchy_bound(p: &Poly<Rational>) -> Result<Rational> {
    let lc = p.leading().ok_or(Error::ZeroPolynomial)?.abs();
    let deg = p.degree().unwrap_or(0);
    let max = p.coeffs()[..deg]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(Rational::from_int(1) + max / lc)
}

/// Smallest natural `t` with `t^i ≥ r`, for `r ≥ 0`.
fn ceil_root(r: &Rational, i: u32) -> BigInt {
    let guess = r.to_f64().filter(|f| f.is_finite()).map_or(0.0, |f| f.powf(1.0 / i as f64).ceil());
    let mut t = BigInt::from(guess as u64);
    let reaches = |t: &BigInt| Rational::from_integer(num_traits::pow(t.clone(), i as usize)) >= *r;
    while !reaches(&t) {
        t = if t.is_zero() { BigInt::from(1) } else { &t * 2 };
    }
    while t > BigInt::zero() && reaches(&(&t - 1)) {
        t -= 1;
    }
    t
}

/// Fujiwara bound `2 max_i |c_{d−i}/c_d|^{1/i}` (the last term halved inside
/// the root), rounded up to an integer; every complex root has modulus at
/// most this.
pub fn fujiwara_bound(p: &Poly<Rational>) -> Result<Rational> {
    let lc = p.leading().ok_or(Error::ZeroPolynomial)?.abs();
    let deg = p.degree().unwrap_or(0);
    let mut best = BigInt::zero();
    for i in 1..=deg {
        let mut r = p.coeffs()[deg - i].abs() / &lc;
        if i == deg {
            r /= Rational::from_int(2);
        }
        best = best.max(ceil_root(&r, i as u32));
    }
    Ok(Rational::from_integer(best * 2))
}

/// The tighter of the Cauchy and Fujiwara bounds.
pub fn root_bound(p: &Poly<Rational>) -> Result<Rational> {
    Ok(cauchy_bound(p)?.min(fujiwara_bound(p)?))
}

/// Sturm chain of the squarefree part of `p`.
pub fn sturm_sequence(p: &Poly<Rational>) -> Result<Vec<Poly<Rational>>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p0 = p.squarefree_part();
    let p1 = p0.derivative();
    let mut seq = vec![p0, p1];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1])?;
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    Ok(seq)
}

fn sign(q: &Rational) -> i8 {
    match q.cmp(&Rational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

fn sign_changes(seq: &[Poly<Rational>], x: &Rational) -> usize {
    let signs: Vec<i8> = seq.iter().map(|p| sign(&p.eval(x))).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `p` in the interval.
pub fn real_root_count(p: &Poly<Rational>, interval: &RootInterval) -> Result<usize> {
    let seq = sturm_sequence(p)?;
    let (lo, hi) = match interval {
        RootInterval::Whole => {
            let b = cauchy_bound(p)?;
            (-b.clone(), b)
        }
        RootInterval::Open(lo, hi) => (lo.clone(), hi.clone()),
    };
    if lo >= hi {
        return Ok(0);
    }
    // Sturm's theorem counts roots in (lo, hi].
    let half_open = sign_changes(&seq, &lo).saturating_sub(sign_changes(&seq, &hi));
    let at_hi = usize::from(p.eval(&hi).is_zero());
    Ok(half_open - at_hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NaturalSign {
    AlwaysPositive,
    AlwaysNegative,
    ChangesSign,
    /// Vanishes at this natural number (the smallest such).
    HasIntegerZero(u64),
}

impl NaturalSign {
    /// Whether `p(n)p(n+1) > 0` for every natural `n`.
    pub fn is_constant(self) -> bool {
        matches!(self, Self::AlwaysPositive | Self::AlwaysNegative)
    }
}

fn natural_scan_limit(p: &Poly<Rational>) -> Result<u64> {
    let b = root_bound(p)?;
    let ceil: BigInt = b.numer().div_ceil(b.denom());
    u64::try_from(ceil + 1).map_err(|_| Error::Internal("root bound too large to scan".into()))
}

/// Sign behaviour of `p` on `{0, 1, 2, ...}`: exact values up to the Cauchy
/// bound, the sign of the leading coefficient beyond it.
pub fn sign_constant_on_naturals(p: &Poly<Rational>) -> Result<NaturalSign> {
    let limit = natural_scan_limit(p)?;
    let mut seen = 0i8;
    let mut changes = false;
    for n in 0..=limit {
        let s = sign(&p.eval(&Rational::from_int(n as i64)));
        if s == 0 {
            return Ok(NaturalSign::HasIntegerZero(n));
        }
        if seen != 0 && s != seen {
            changes = true;
        }
        seen = s;
    }
    let tail = sign(p.leading().expect("nonzero"));
    Ok(match (changes || tail != seen, seen) {
        (true, _) => NaturalSign::ChangesSign,
        (false, 1) => NaturalSign::AlwaysPositive,
        _ => NaturalSign::AlwaysNegative,
    })
}

/// All natural numbers at which `p` vanishes, ascending.
pub fn natural_zeros(p: &Poly<Rational>) -> Result<Vec<u64>> {
    let limit = natural_scan_limit(p)?;
    Ok((0..=limit)
        .filter(|&n| p.eval(&Rational::from_int(n as i64)).is_zero())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::scalar::int;

    fn q(c: &[i64]) -> Poly<Rational> {
        Poly::from_ints(c)
    }

    #[test]
    fn counts_on_intervals() {
        let p = q(&[-1, 0, 1]);
        assert_eq!(real_root_count(&p, &RootInterval::Open(int(-2), int(2))).unwrap(), 2);
        assert_eq!(real_root_count(&p, &RootInterval::Open(int(-1), int(1))).unwrap(), 0);
        assert_eq!(real_root_count(&p, &RootInterval::Open(int(-1), int(2))).unwrap(), 1);
        assert_eq!(real_root_count(&q(&[4, 0, 8]), &RootInterval::Whole).unwrap(), 0);
        assert_eq!(real_root_count(&q(&[0, -12, 0, 8]), &RootInterval::Whole).unwrap(), 3);
        assert_eq!(real_root_count(&Poly::zero(), &RootInterval::Whole), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn repeated_roots_counted_once() {
        let p = &q(&[-1, 1]).pow(3) * &q(&[1, 1]);
        assert_eq!(real_root_count(&p, &RootInterval::Whole).unwrap(), 2);
        assert_eq!(real_root_count(&q(&[7]), &RootInterval::Whole).unwrap(), 0);
    }

    #[test]
    fn natural_sign_examples() {
        assert_eq!(sign_constant_on_naturals(&q(&[4, 0, 8])).unwrap(), NaturalSign::AlwaysPositive);
        assert_eq!(sign_constant_on_naturals(&q(&[0, 2])).unwrap(), NaturalSign::HasIntegerZero(0));
        assert_eq!(sign_constant_on_naturals(&q(&[2, -3, 1])).unwrap(), NaturalSign::HasIntegerZero(1));
        // (2x-1)(2x-3) is positive at 0, negative at 1, positive beyond.
        assert_eq!(sign_constant_on_naturals(&q(&[3, -8, 4])).unwrap(), NaturalSign::ChangesSign);
        assert_eq!(sign_constant_on_naturals(&q(&[-1, 0, -1])).unwrap(), NaturalSign::AlwaysNegative);
        assert!(sign_constant_on_naturals(&Poly::zero()).is_err());
        assert_eq!(natural_zeros(&q(&[2, -3, 1])).unwrap(), vec![1, 2]);
    }

    #[test]
    fn fujiwara_is_tight_and_valid() {
        // (x − 100)(x + 3): Cauchy gives 301, Fujiwara stays near 2·100.
        let p = &q(&[-100, 1]) * &q(&[3, 1]);
        let b = fujiwara_bound(&p).unwrap();
        assert!(b >= int(100) && b <= int(200));
        assert!(root_bound(&p).unwrap() <= cauchy_bound(&p).unwrap());
    }
}
