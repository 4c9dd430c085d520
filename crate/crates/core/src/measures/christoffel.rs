//! Christoffel transform of the Charlier measure: the polynomials `q_n^F`,
//! the determinants `Φ_n`, `Ψ_n`, their recurrence and the dualities tying
//! them to `c_n^{a;F}`, `Ω_F` and `Λ_F`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exceptional::CharlierSystem;
use crate::families::charlier;
use crate::fsets::FiniteSet;
use crate::polycore::{determinant, factorial, factorial_q, format_rational, minor, natural_zeros, pow, Poly, Rational, Ring};
use crate::report::VerificationReport;

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

fn prod_factorials(set: &FiniteSet) -> Rational {
    Rational::from(set.elements().iter().map(|&f| factorial(f as u64)).product::<BigInt>())
}

/// `a^e` for a possibly negative exponent.
fn powi(a: &Rational, e: i64) -> Rational {
    if e >= 0 {
        pow(a, e as u64)
    } else {
        pow(a, (-e) as u64).recip()
    }
}

/// `Φ_n`, `Ψ_n` and `q_n^F` for `0 ≤ n ≤ nmax`.
#[derive(Debug, Clone, Serialize)]
pub struct ChristoffelData {
    #[serde(with = "crate::polycore::rational_serde::vec")]
    pub phi: Vec<Rational>,
    #[serde(with = "crate::polycore::rational_serde::vec")]
    pub psi: Vec<Rational>,
    pub q: Vec<Poly<Rational>>,
}

/// Charlier values `c_j^a(f)` at the points of `F`.
struct Columns<'a> {
    set: &'a FiniteSet,
    a: &'a Rational,
}

impl Columns<'_> {
    fn column(&self, j: i64) -> Vec<Rational> {
        let c = charlier(j, self.a);
        self.set.elements().iter().map(|&f| c.eval(&q(f as i64))).collect()
    }

    /// `det[c_{idx_j}(f_i)]` over the given column indices.
    fn det(&self, idx: &[i64]) -> Rational {
        if idx.is_empty() {
            return Rational::one();
        }
        let cols: Vec<Vec<Rational>> = idx.iter().map(|&j| self.column(j)).collect();
        let rows: Vec<Vec<Rational>> = (0..self.set.k()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        determinant(&rows).expect("square by construction")
    }
}

/// `Φ_n = |c_{n+j−1}(f_i)|`; `1` for the empty set.
pub fn phi(n: u64, set: &FiniteSet, a: &Rational) -> Rational {
    let k = set.k() as i64;
    let idx: Vec<i64> = (0..k).map(|j| n as i64 + j).collect();
    Columns { set, a }.det(&idx)
}

/// `Ψ_n`: as `Φ_n` with the last column moved from `n+k−1` to `n+k`; `0` for
/// the empty set.
pub fn psi(n: u64, set: &FiniteSet, a: &Rational) -> Rational {
    let k = set.k() as i64;
    if k == 0 {
        return Rational::zero();
    }
    let mut idx: Vec<i64> = (0..k - 1).map(|j| n as i64 + j).collect();
    idx.push(n as i64 + k);
    Columns { set, a }.det(&idx)
}

/// `q_n^F(x) = det[c_{n+j}(x−u_F); c_{n+j}(f_i)] / ∏(x−f−u_F)`.
pub fn christoffel_q(n: u64, set: &FiniteSet, a: &Rational) -> Result<Poly<Rational>> {
    if a.is_zero() {
        return Err(Error::InvalidParameter("the Charlier parameter must be nonzero".into()));
    }
    let k = set.k();
    let u = q(set.u() as i64);
    let cols = Columns { set, a };
    let block: Vec<Vec<Rational>> = {
        let cs: Vec<Vec<Rational>> = (0..=k as i64).map(|j| cols.column(n as i64 + j)).collect();
        (0..k).map(|i| cs.iter().map(|c| c[i].clone()).collect()).collect()
    };
    let mut det = Poly::zero();
    for j in 0..=k {
        let cof = determinant(&minor(&block, &[], &[j]))?;
        if cof.is_zero() {
            continue;
        }
        let entry = charlier(n as i64 + j as i64, a).shift(&-u.clone());
        let term = entry.scale(&cof);
        det = if j % 2 == 0 { &det + &term } else { &det - &term };
    }
    let annihilator = set
        .elements()
        .iter()
        .fold(Poly::one(), |acc, &f| &acc * &Poly::linear(Rational::one(), -(q(f as i64) + &u)));
    det.exact_div(&annihilator)
        .map_err(|e| Error::Internal(format!("q_{n} is not a polynomial: {e}")))
}

pub fn christoffel_data(set: &FiniteSet, a: &Rational, nmax: u64) -> Result<ChristoffelData> {
    Ok(ChristoffelData {
        phi: (0..=nmax).map(|n| phi(n, set, a)).collect(),
        psi: (0..=nmax).map(|n| psi(n, set, a)).collect(),
        q: (0..=nmax).map(|n| christoffel_q(n, set, a)).collect::<Result<_>>()?,
    })
}

/// Largest natural zero of `Ω_F^a`, or `−1` when there is none; equivalently
/// the largest `n` with `Φ_n = 0`.
pub fn largest_natural_zero(set: &FiniteSet, a: &Rational) -> Result<i64> {
    let om = CharlierSystem::new(set, a.clone())?.omega();
    Ok(natural_zeros(&om)?.last().map_or(-1, |&z| z as i64))
}

/// Recurrence coefficients `(a_n^Q, b_n^Q, c_n^Q)`.
pub fn q_recurrence_coefficients(n: u64, set: &FiniteSet, a: &Rational) -> Result<(Rational, Rational, Rational)> {
    let (k, u) = (set.k() as i64, set.u() as i64);
    let (p0, p1) = (phi(n, set, a), phi(n + 1, set, a));
    if p0.is_zero() || p1.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (s0, s1) = (psi(n, set, a), psi(n + 1, set, a));
    let ni = n as i64;
    let an = q(ni + k + 1) * &p0 / &p1;
    let bn = q(ni + k + u) + a + q(ni + k + 1) * &s1 / &p1 - q(ni + k) * &s0 / &p0;
    let cn = a * &p1 / &p0;
    Ok((an, bn, cn))
}

/// `x q_n = a_n q_{n+1} + b_n q_n + c_n q_{n−1}` for `n` in `ns`, restricted to
/// `n > x_a^F + 1` (with `q_{−1} = 0` when `Ω_F^a` has no natural zero).
pub fn q_recurrence_check(set: &FiniteSet, a: &Rational, ns: &[u64]) -> Result<VerificationReport> {
    let mut report = VerificationReport::asserted("q_recurrence")
        .with_input("set", set)
        .with_input("a", a);
    let xa = largest_natural_zero(set, a)?;
    report.note(format!("largest natural zero of Ω: {xa}"));
    let x = Poly::x();
    for &n in ns {
        if (n as i64) <= xa + 1 {
            report.note(format!("n={n} skipped: needs n > {}", xa + 1));
            continue;
        }
        let (an, bn, cn) = match q_recurrence_coefficients(n, set, a) {
            Ok(c) => c,
            Err(_) => {
                report.fail(format!("n={n}"), || ("Φ vanishes", "n lies in the zero set of Φ"));
                continue;
            }
        };
        let qn = christoffel_q(n, set, a)?;
        let next = christoffel_q(n + 1, set, a)?;
        let prev = if n == 0 { Poly::zero() } else { christoffel_q(n - 1, set, a)? };
        let lhs = &x * &qn;
        let rhs = &(&next.scale(&an) + &qn.scale(&bn)) + &prev.scale(&cn);
        report.record(format!("n={n}"), lhs == rhs, || (&lhs, &rhs));
    }
    Ok(report.finish())
}

/// `ξ_u = (−a)^{(k+1)u} / ∏_{i=0}^k (u+i)!`.
pub fn xi(u: u64, set: &FiniteSet, a: &Rational) -> Rational {
    let k = set.k() as u64;
    let den: Rational = (0..=k).map(|i| factorial_q(u + i)).product();
    pow(&-a.clone(), (k + 1) * u) / den
}

/// `ζ_v = (−a)^{−v} (v−u_F)! ∏f! / ∏(v−f−u_F)`, for `v ∈ σ_F`.
pub fn zeta(v: u64, set: &FiniteSet, a: &Rational) -> Result<Rational> {
    if !set.in_sigma(v) {
        return Err(Error::Precondition(format!("ζ_v needs v ∈ σ_F, got {v}")));
    }
    let u = set.u();
    let gaps: Rational = set.elements().iter().map(|&f| q(v as i64 - f as i64 - u as i64)).product();
    Ok(powi(&-a.clone(), -(v as i64)) * factorial_q(v - u) * prod_factorials(set) / gaps)
}

/// `(−a)^{k(n−1)−u_F} ∏f!`, the common denominator of both dualities.
fn duality_scale(n: u64, set: &FiniteSet, a: &Rational, extra: i64) -> Rational {
    let (k, u) = (set.k() as i64, set.u() as i64);
    powi(&-a.clone(), k * (n as i64 - 1) - u + extra) * prod_factorials(set)
}

/// `Ω_F(n)` from `Φ_n` through the duality.
pub fn omega_from_phi(n: u64, set: &FiniteSet, a: &Rational) -> Rational {
    let k = set.k() as u64;
    let num: Rational = (0..k).map(|i| factorial_q(n + i)).product();
    num * phi(n, set, a) / duality_scale(n, set, a, 0)
}

/// `Λ_F(n)` from `Ψ_n` through the duality.
pub fn lambda_from_psi(n: u64, set: &FiniteSet, a: &Rational) -> Rational {
    let k = set.k() as u64;
    if k == 0 {
        return Rational::zero();
    }
    let num: Rational = factorial_q(n + k) * (0..k - 1).map(|i| factorial_q(n + i)).product::<Rational>();
    num * psi(n, set, a) / duality_scale(n, set, a, 1)
}

/// The three dualities: `q_u(v) = ξ_u ζ_v c_v^F(u)` for `u ≤ umax` and
/// `v ∈ σ_F ∩ [u_F, v_F+extra]`, and `Ω_F(n)`, `Λ_F(n)` against `Φ_n`,
/// `Ψ_n` for `n ≤ umax`.
pub fn christoffel_duality_check(set: &FiniteSet, a: &Rational, umax: u64, extra: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::asserted("christoffel_duality")
        .with_input("set", set)
        .with_input("a", a);
    let sys = CharlierSystem::new(set, a.clone())?;
    let vs = set.sigma_range(set.u(), set.v() + extra);
    let polys: Vec<Poly<Rational>> = vs.iter().map(|&v| sys.poly(v)).collect();
    for u in 0..=umax {
        let qu = christoffel_q(u, set, a)?;
        let xu = xi(u, set, a);
        for (&v, cv) in vs.iter().zip(&polys) {
            let lhs = qu.eval(&q(v as i64));
            let rhs = &xu * zeta(v, set, a)? * cv.eval(&q(u as i64));
            report.record(format!("q_{u}({v})"), lhs == rhs, || (format_rational(&lhs), format_rational(&rhs)));
        }
    }
    let (om, la) = (sys.omega(), sys.lambda());
    for n in 0..=umax {
        let x = q(n as i64);
        let (lhs, rhs) = (om.eval(&x), omega_from_phi(n, set, a));
        report.record(format!("Ω({n})"), lhs == rhs, || (format_rational(&lhs), format_rational(&rhs)));
        let (lhs, rhs) = (la.eval(&x), lambda_from_psi(n, set, a));
        report.record(format!("Λ({n})"), lhs == rhs, || (format_rational(&lhs), format_rational(&rhs)));
    }
    Ok(report.finish())
}

/// `α_n = (−1)^{k(n+1)} a^{k(n−1)−u_F} ∏f! / ∏_{i=1}^k (n+i)!`.
pub fn alpha(n: u64, set: &FiniteSet, a: &Rational) -> Rational {
    let (k, u) = (set.k() as i64, set.u() as i64);
    let den: Rational = (1..=k as u64).map(|i| factorial_q(n + i)).product();
    let sign = if (k * (n as i64 + 1)) % 2 == 0 { q(1) } else { q(-1) };
    sign * powi(a, k * (n as i64 - 1) - u) * prod_factorials(set) / den
}

/// Involuted form `α_n det[(−1)^j c_{n−j}(x−v_F); c^{−a}_{g_i}(−n−1+j)]` of
/// `q_n^F`, valid when `Ω_F^a` has no natural zero.
pub fn christoffel_q_alt(n: u64, set: &FiniteSet, a: &Rational) -> Result<Poly<Rational>> {
    let g = set.involution()?;
    let m = g.k();
    let v = q(set.v() as i64);
    let minus_a = -a.clone();
    let block: Vec<Vec<Rational>> = g
        .elements()
        .iter()
        .map(|&gi| {
            let c = charlier(gi as i64, &minus_a);
            (0..=m as i64).map(|j| c.eval(&q(-(n as i64) - 1 + j))).collect()
        })
        .collect();
    let mut det = Poly::zero();
    for j in 0..=m {
        let cof = determinant(&minor(&block, &[], &[j]))?;
        let entry = charlier(n as i64 - j as i64, a).shift(&-v.clone()).scale(&cof);
        // (−1)^j from the entry and (−1)^j from the expansion cancel.
        det = &det + &entry;
    }
    Ok(det.scale(&alpha(n, set, a)))
}

/// Compares the involuted form with the bordered determinant for `n ≤ nmax`.
pub fn christoffel_alt_check(set: &FiniteSet, a: &Rational, nmax: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::asserted("christoffel_alt_form")
        .with_input("set", set)
        .with_input("a", a);
    let xa = largest_natural_zero(set, a)?;
    if xa >= 0 {
        return Err(Error::Precondition(format!("Ω_F^a vanishes at the natural number {xa}")));
    }
    for n in 0..=nmax {
        let lhs = christoffel_q_alt(n, set, a)?;
        let rhs = christoffel_q(n, set, a)?;
        report.record(format!("n={n}"), lhs == rhs, || (&lhs, &rhs));
    }
    Ok(report.finish())
}

/// Leading coefficient `(−1)^k Φ_n / (n+k)!` of `q_n^F`.
pub fn christoffel_leading(n: u64, set: &FiniteSet, a: &Rational) -> Rational {
    let k = set.k() as u64;
    let s = if k.is_multiple_of(2) { q(1) } else { q(-1) };
    s * phi(n, set, a) / factorial_q(n + k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(s: &str) -> FiniteSet {
        s.parse().unwrap()
    }

    #[test]
    fn empty_set_gives_charlier() {
        let a = q(2);
        for n in 0..5 {
            assert_eq!(christoffel_q(n, &FiniteSet::empty(), &a).unwrap(), charlier(n as i64, &a));
        }
    }

    #[test]
    fn degree_and_leading_coefficient() {
        let (set, a) = (fs("1,2"), q(1));
        assert!(!phi(0, &set, &a).is_zero());
        let q0 = christoffel_q(0, &set, &a).unwrap();
        assert_eq!(q0.degree(), Some(0));
        for n in 0..6 {
            let qn = christoffel_q(n, &set, &a).unwrap();
            assert_eq!(qn.degree(), Some(n as usize));
            assert_eq!(qn.leading().unwrap(), &christoffel_leading(n, &set, &a));
        }
    }

    #[test]
    fn recurrence_and_dualities() {
        let (set, a) = (fs("1,2"), q(1));
        let ns: Vec<u64> = (0..=8).collect();
        assert!(q_recurrence_check(&set, &a, &ns).unwrap().passed);
        assert!(q_recurrence_check(&FiniteSet::empty(), &q(3), &ns).unwrap().passed);
        let r = christoffel_duality_check(&fs("1,3"), &q(2), 8, 5).unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn involuted_form() {
        let r = christoffel_alt_check(&fs("1,2"), &q(1), 6).unwrap();
        assert!(r.passed, "{r}");
    }
}
