//! `D_F` for the Hermite construction and its two Darboux factorizations.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::checks::{check_factorization, check_intertwining, DarbouxFactors};
use super::{q, ratio, DiffeOp, LinearOp, QFn};
use crate::error::{Error, Result};
use crate::exceptional::{hermite_omega, hermite_omega_tilde, HermiteSystem};
use crate::fsets::FiniteSet;
use crate::polycore::{factorial_q, Poly, Rational};
use crate::report::VerificationReport;

/// `D_F = −∂² + h_1 ∂ + h_0` with `h_1 = 2(x + Ω'/Ω)` and
/// `h_0 = 2(k + u_F − x Ω'/Ω) − Ω''/Ω`.
pub fn build_hermite_op(set: &FiniteSet) -> Result<DiffeOp> {
    let om = hermite_omega(set);
    if om.is_zero() {
        return Err(Error::Internal("Ω vanishes identically".into()));
    }
    let d1 = ratio(&om.derivative(), &om)?;
    let d2 = ratio(&om.nth_derivative(2), &om)?;
    let x = QFn::from_poly(Poly::x());
    let h1 = (&x + &d1).scale(&q(2));
    let kp = QFn::constant(q(set.k() as i64 + set.u() as i64));
    let h0 = &(&kp - &(&x * &d1)).scale(&q(2)) - &d2;
    Ok(DiffeOp::new([(2, QFn::constant(q(-1))), (1, h1), (0, h0)]))
}

/// `A_F = −Ω_F/Ω_{F_k} ∂ + Ω_F'/Ω_{F_k}`,
/// `B_F = Ω_{F_k}/Ω_F ∂ − (2x Ω_{F_k} + Ω_{F_k}')/Ω_F`.
pub fn hermite_darboux_split(set: &FiniteSet, extra: u64) -> Result<DarbouxFactors<DiffeOp>> {
    let fk = set.largest().ok_or(Error::EmptySet)? as i64;
    let k = set.k() as i64;
    let lower = set.drop_last();
    let om = hermite_omega(set);
    let om_k = hermite_omega(&lower);
    let first = DiffeOp::new([(1, -&ratio(&om, &om_k)?), (0, ratio(&om.derivative(), &om_k)?)]);
    let two_x = Poly::monomial(q(2), 1);
    let second = DiffeOp::new([
        (1, ratio(&om_k, &om)?),
        (0, -&ratio(&(&(&two_x * &om_k) + &om_k.derivative()), &om)?),
    ]);

    let mut report = VerificationReport::asserted("darboux_split")
        .with_input("family", "hermite")
        .with_input("set", set);
    let d_upper = build_hermite_op(set)?;
    let d_lower = build_hermite_op(&lower)?;
    let mut shifts = Vec::new();
    check_factorization(
        &mut report,
        "D_{F_k} = B A + c",
        &d_lower,
        &second.compose(&first),
        &q(2 * (fk + lower.u() as i64)),
        &mut shifts,
    );
    check_factorization(
        &mut report,
        "D_F = A B + c",
        &d_upper,
        &first.compose(&second),
        &q(2 * (fk + set.u() as i64)),
        &mut shifts,
    );
    let upper = HermiteSystem::new(set);
    let lower_sys = HermiteSystem::new(&lower);
    for n in set.sigma_range(set.u(), set.v() + extra) {
        let m = (n as i64 - fk + k) as u64;
        let image = first.apply(&lower_sys.poly(m));
        check_intertwining(&mut report, n, image, &upper.poly(n), &Rational::one());
    }
    Ok(DarbouxFactors {
        first,
        second,
        shifts,
        report: report.finish(),
    })
}

/// Constant `κ_n` with `C_F(H^{F↓}_{n−k−1}) = κ_n H_n^F`:
/// `−2^{m + C(k−s+2,2) − C(k+1,2) − 1} ∏_{j<m}(g_m − g_j)` divided by
/// `∏_{j=1}^{s−1} (j−1)! (j−n+u_F) ∏_{f∈F, f>s}(f−j)`.
pub(crate) fn intertwining_constant(set: &FiniteSet, n: u64) -> Result<Rational> {
    let g = set.involution()?;
    let (k, m, s) = (set.k() as i64, g.k() as i64, set.s() as i64);
    let u = set.u() as i64;
    let c2 = |t: i64| t * (t - 1) / 2;
    let exp = m + c2(k - s + 2) - c2(k + 1) - 1;
    let two = if exp >= 0 {
        Rational::from(BigInt::one() << exp as u64)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-exp) as u64)
    };
    let gm = *g.elements().last().expect("nonempty involution") as i64;
    let num: Rational = g.elements()[..g.k() - 1].iter().map(|&gj| q(gm - gj as i64)).product();
    let mut den = Rational::one();
    for j in 1..s {
        den *= factorial_q((j - 1) as u64) * q(j - n as i64 + u);
        for &f in set.elements().iter().filter(|&&f| (f as i64) > s) {
            den *= q(f as i64 - j);
        }
    }
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(-(two * num / den))
}

/// `C_F = Ω̃_F/Ω̃_{F↓} ∂ − (Ω̃_F' + 2x Ω̃_F)/Ω̃_{F↓}`,
/// `E_F = −Ω̃_{F↓}/Ω̃_F ∂ + Ω̃_{F↓}'/Ω̃_F`, with `C_F(H^{F↓}_{n−k−1}) = κ_n H_n^F`
/// asserted for `v_F ≤ n ≤ v_F + extra` and recorded as evidence below `v_F`.
pub fn hermite_darboux_down(set: &FiniteSet, extra: u64) -> Result<(DarbouxFactors<DiffeOp>, VerificationReport)> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let k = set.k() as i64;
    let down = set.down();
    let ot = hermite_omega_tilde(set)?;
    let ot_down = hermite_omega_tilde(&down)?;
    let two_x = Poly::monomial(q(2), 1);
    let first = DiffeOp::new([
        (1, ratio(&ot, &ot_down)?),
        (0, -&ratio(&(&ot.derivative() + &(&two_x * &ot)), &ot_down)?),
    ]);
    let second = DiffeOp::new([(1, -&ratio(&ot_down, &ot)?), (0, ratio(&ot_down.derivative(), &ot)?)]);

    let mut report = VerificationReport::asserted("darboux_down")
        .with_input("family", "hermite")
        .with_input("set", set)
        .with_input("admissible", set.is_admissible());
    let d_upper = build_hermite_op(set)?;
    let d_lower = build_hermite_op(&down)?;
    let u = set.u() as i64;
    let mut shifts = Vec::new();
    check_factorization(
        &mut report,
        "D_{F↓} = E C + c",
        &d_lower,
        &second.compose(&first),
        &q(2 * (u - k - 1)),
        &mut shifts,
    );
    check_factorization(&mut report, "D_F = C E + c", &d_upper, &first.compose(&second), &q(2 * u), &mut shifts);

    let mut evidence = VerificationReport::evidence("darboux_down_below_v")
        .with_input("family", "hermite")
        .with_input("set", set);
    let upper = HermiteSystem::new(set);
    let lower = HermiteSystem::new(&down);
    let v = set.v();
    for n in set.sigma_range(set.u(), v + extra) {
        let idx = n as i64 - k - 1;
        let image = if idx < 0 { Ok(Poly::zero()) } else { first.apply(&lower.poly(idx as u64)) };
        let target = if n >= v { &mut report } else { &mut evidence };
        match intertwining_constant(set, n) {
            Ok(factor) => check_intertwining(target, n, image, &upper.poly(n), &factor),
            Err(e) => target.fail(format!("n={n}"), || (e.to_string(), "constant undefined")),
        }
    }
    Ok((
        DarbouxFactors {
            first,
            second,
            shifts,
            report: report.finish(),
        },
        evidence.finish(),
    ))
}

/// `(a_2 f)' = a_1 f` for `f = e^{−x²}/Ω²`, divided by `f`:
/// `a_2' + a_2 (−2x − 2Ω'/Ω) = a_1`.
pub(crate) fn hermite_pearson(set: &FiniteSet) -> Result<VerificationReport> {
    let d = build_hermite_op(set)?;
    let om = hermite_omega(set);
    let log_der = &QFn::from_poly(Poly::monomial(q(-2), 1)) - &ratio(&om.derivative(), &om)?.scale(&q(2));
    let a2 = d.coeff(2);
    let lhs = &a2.derivative() + &(&a2 * &log_der);
    let rhs = d.coeff(1);
    let mut report = VerificationReport::asserted("pearson")
        .with_input("family", "hermite")
        .with_input("set", set);
    report.record("(a_2 f)' = a_1 f", lhs == rhs, || (&lhs, &rhs));
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::Family;
    use crate::operators::{darboux_down, darboux_split, verify_eigen};

    fn fs(s: &str) -> FiniteSet {
        s.parse().unwrap()
    }

    #[test]
    fn empty_set_is_classical() {
        let d = build_hermite_op(&FiniteSet::empty()).unwrap();
        assert_eq!(d.coeff(2), QFn::constant(q(-1)));
        assert_eq!(d.coeff(1), QFn::from_poly(Poly::monomial(q(2), 1)));
        assert!(d.coeff(0).is_zero());
    }

    #[test]
    fn coefficients_one_two() {
        let d = build_hermite_op(&fs("1,2")).unwrap();
        let om = Poly::from_ints(&[4, 0, 8]);
        let expect_h1 = &QFn::from_poly(Poly::monomial(q(2), 1))
            + &QFn::new(Poly::monomial(q(32), 1), om.clone()).unwrap();
        assert_eq!(d.coeff(1), expect_h1);
        // h_0 = 2(2 − 16x²/(8x²+4)) − 16/(8x²+4)
        let expect_h0 = &QFn::constant(q(4))
            - &QFn::new(&Poly::monomial(q(32), 2) + &Poly::constant(q(16)), om).unwrap();
        assert_eq!(d.coeff(0), expect_h0);
    }

    #[test]
    fn eigen_and_factorizations() {
        let ns: Vec<u64> = (0..=10).collect();
        assert!(verify_eigen(&fs("1,2"), &Family::Hermite, &ns).unwrap().passed);
        let split = darboux_split(&fs("2,3"), &Family::Hermite, 4).unwrap();
        assert!(split.report().passed, "{}", split.report());
        let (down, _) = darboux_down(&fs("2,3"), &Family::Hermite, 4).unwrap();
        assert!(down.report().passed, "{}", down.report());
        let n = fs("2,3").v();
        assert_eq!(intertwining_constant(&fs("2,3"), n).unwrap(), q(-2));
    }

    #[test]
    fn pearson_one_two() {
        assert!(hermite_pearson(&fs("1,2")).unwrap().passed);
        assert!(hermite_pearson(&fs("1")).unwrap().passed);
    }
}
