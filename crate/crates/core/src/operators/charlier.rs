//! `D_F` for the Charlier construction and its two Darboux factorizations.

use num_traits::{One, Zero};
use serde::Serialize;

use super::checks::{check_factorization, check_intertwining, DarbouxFactors};
use super::{q, ratio, DiffOp, LinearOp, QFn};
use crate::error::{Error, Result};
use crate::exceptional::{
    charlier_lambda, charlier_lambda_tilde, charlier_omega, charlier_omega_tilde, CharlierSystem,
};
use crate::fsets::FiniteSet;
use crate::polycore::{natural_zeros, Poly, Rational};
use crate::report::VerificationReport;

/// Both coefficient forms of `D_F`: through `Ω_F, Λ_F` and through `Ω̃_F, Λ̃_F`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharlierOps {
    pub primary: DiffOp,
    pub tilde: DiffOp,
}

impl CharlierOps {
    pub fn forms_agree(&self) -> bool {
        self.primary == self.tilde
    }
}

fn three_term(
    omega: &Poly<Rational>,
    lambda: &Poly<Rational>,
    constant: Rational,
    lambda_sign: i64,
    a: &Rational,
) -> Result<DiffOp> {
    if omega.is_zero() {
        return Err(Error::Internal("Ω vanishes identically".into()));
    }
    let one = Rational::one();
    let om1 = omega.shift(&one);
    let x = Poly::x();
    let h_m1 = ratio(&(&x * &om1), omega)?.scale(&-one.clone());
    let h_1 = ratio(omega, &om1)?.scale(&-a.clone());
    let l_ratio = ratio(lambda, omega)?;
    let l_diff = &l_ratio.shift(&one) - &l_ratio;
    let h_0 = &QFn::from_poly(Poly::linear(one, constant)) + &l_diff.scale(&(a * q(lambda_sign)));
    Ok(DiffOp::new([(-1, h_m1), (0, h_0), (1, h_1)]))
}

/// `D_F = h_{−1} Sh_{−1} + h_0 + h_1 Sh_1` with
/// `h_{−1} = −x Ω(x+1)/Ω(x)`, `h_0 = x+k+a+u − aΛ(x+1)/Ω(x+1) + aΛ(x)/Ω(x)`, `h_1 = −a Ω(x)/Ω(x+1)`.
pub fn charlier_operator(set: &FiniteSet, a: &Rational) -> Result<DiffOp> {
    if a.is_zero() {
        return Err(Error::InvalidParameter("the Charlier parameter must be nonzero".into()));
    }
    let constant = q(set.k() as i64 + set.u() as i64) + a;
    three_term(&charlier_omega(set, a), &charlier_lambda(set, a), constant, -1, a)
}

/// The operator in both coefficient forms; the tilde form has
/// `h_0 = x+m+a+u_G + aΛ̃(x+1)/Ω̃(x+1) − aΛ̃(x)/Ω̃(x)`.
pub fn build_charlier_op(set: &FiniteSet, a: &Rational) -> Result<CharlierOps> {
    let primary = charlier_operator(set, a)?;
    let (m, ug) = match set.involution() {
        Ok(g) => (g.k() as i64, g.u() as i64),
        Err(_) => (0, 0),
    };
    let tilde = three_term(
        &charlier_omega_tilde(set, a),
        &charlier_lambda_tilde(set, a),
        q(m + ug) + a,
        1,
        a,
    )?;
    Ok(CharlierOps { primary, tilde })
}

/// `A_F = Ω_F(x+1)/Ω_{F_k}(x+1) Sh_0 − Ω_F(x)/Ω_{F_k}(x+1) Sh_1`,
/// `B_F = −x Ω_{F_k}(x+1)/Ω_F(x) Sh_{−1} + a Ω_{F_k}(x)/Ω_F(x) Sh_0`,
/// with `F_k = F \ {max F}`. Checks `c_n^F = A_F(c^{F_k}_{n−f_k+k})` for
/// `n ∈ σ_F`, `n ≤ v_F + extra`, both factorizations with the shift sign
/// found by exact comparison, and the reconstruction of each factor from
/// the other through the coefficient relations of a first-order product.
pub fn charlier_darboux_split(set: &FiniteSet, a: &Rational, extra: u64) -> Result<DarbouxFactors<DiffOp>> {
    let fk = set.largest().ok_or(Error::EmptySet)? as i64;
    let k = set.k() as i64;
    let lower = set.drop_last();
    let one = Rational::one();
    let om = charlier_omega(set, a);
    let om_k = charlier_omega(&lower, a);
    let om_k1 = om_k.shift(&one);
    let x = Poly::x();
    let first = DiffOp::new([(0, ratio(&om.shift(&one), &om_k1)?), (1, -&ratio(&om, &om_k1)?)]);
    let second = DiffOp::new([
        (-1, -&ratio(&(&x * &om_k1), &om)?),
        (0, ratio(&om_k, &om)?.scale(a)),
    ]);

    let mut report = VerificationReport::asserted("darboux_split")
        .with_input("family", "charlier")
        .with_input("set", set)
        .with_input("a", a);
    let d_upper = charlier_operator(set, a)?;
    let d_lower = charlier_operator(&lower, a)?;
    let mut shifts = Vec::new();
    let lower_shift = check_factorization(
        &mut report,
        "D_{F_k} = B A + c",
        &d_lower,
        &second.compose(&first),
        &q(fk + lower.u() as i64),
        &mut shifts,
    );
    let upper_shift = check_factorization(
        &mut report,
        "D_F = A B + c",
        &d_upper,
        &first.compose(&second),
        &q(fk + set.u() as i64),
        &mut shifts,
    );

    if let Some(c) = lower_shift {
        recompose_left(&mut report, &d_lower.add_scalar(&-c), &first, &second);
    }
    if let Some(c) = upper_shift {
        recompose_right(&mut report, &d_upper.add_scalar(&-c), &second, &first);
    }

    let upper = CharlierSystem::new(set, a.clone())?;
    let lower_sys = CharlierSystem::new(&lower, a.clone())?;
    for n in set.sigma_range(set.u(), set.v() + extra) {
        let m = n as i64 - fk + k;
        let image = first.apply(&lower_sys.poly(m as u64));
        check_intertwining(&mut report, n, image, &upper.poly(n), &Rational::one());
    }
    Ok(DarbouxFactors {
        first,
        second,
        shifts,
        report: report.finish(),
    })
}

/// Given `D = B A` and `A = a_0 + a_1 Sh_1`, rebuild `B` from
/// `b_{−1} = f_{−1}(x)/a_0(x−1)`, `b_0 = f_1/a_1` and confirm `f_0`.
fn recompose_left(report: &mut VerificationReport, d: &DiffOp, a_op: &DiffOp, b_op: &DiffOp) {
    let one = Rational::one();
    let (a0, a1) = (a_op.coeff(0), a_op.coeff(1));
    let (fm1, f0, f1) = (d.coeff(-1), d.coeff(0), d.coeff(1));
    let (Ok(bm1), Ok(b0)) = (fm1.try_div(&a0.shift(&-one.clone())), f1.try_div(&a1)) else {
        report.fail("recompose B", || ("zero first-order coefficient", ""));
        return;
    };
    let rebuilt = DiffOp::new([(-1, bm1), (0, b0)]);
    report.record("recompose B", &rebuilt == b_op, || (&rebuilt, b_op));
    let f0_expect = match (
        (&fm1 * &a1.shift(&-one.clone())).try_div(&a0.shift(&-one)),
        (&f1 * &a0).try_div(&a1),
    ) {
        (Ok(l), Ok(r)) => &l + &r,
        _ => QFn::zero(),
    };
    report.record("recompose f_0 (B A)", f0_expect == f0, || (&f0_expect, &f0));
}

/// Given `D = A B` and `B = b_{−1} Sh_{−1} + b_0`, rebuild `A` from
/// `a_0 = f_{−1}/b_{−1}`, `a_1 = f_1/b_0(x+1)` and confirm `f_0`.
fn recompose_right(report: &mut VerificationReport, d: &DiffOp, b_op: &DiffOp, a_op: &DiffOp) {
    let one = Rational::one();
    let (bm1, b0) = (b_op.coeff(-1), b_op.coeff(0));
    let (fm1, f0, f1) = (d.coeff(-1), d.coeff(0), d.coeff(1));
    let (Ok(a0), Ok(a1)) = (fm1.try_div(&bm1), f1.try_div(&b0.shift(&one))) else {
        report.fail("recompose A", || ("zero first-order coefficient", ""));
        return;
    };
    let rebuilt = DiffOp::new([(0, a0), (1, a1)]);
    report.record("recompose A", &rebuilt == a_op, || (&rebuilt, a_op));
    let f0_expect = match (
        (&fm1 * &b0).try_div(&bm1),
        (&f1 * &bm1.shift(&one)).try_div(&b0.shift(&one)),
    ) {
        (Ok(l), Ok(r)) => &l + &r,
        _ => QFn::zero(),
    };
    report.record("recompose f_0 (A B)", f0_expect == f0, || (&f0_expect, &f0));
}

/// `Ω_F^a(n) ≠ 0` for every natural `n`.
pub(crate) fn require_nonvanishing(set: &FiniteSet, a: &Rational) -> Result<()> {
    let zeros = natural_zeros(&charlier_omega(set, a))?;
    match zeros.first() {
        None => Ok(()),
        Some(z) => Err(Error::Precondition(format!("Ω_F^a vanishes at the natural number {z} (F={set}, a={a})"))),
    }
}

/// `C_F = −x Ω̃_F(x+1)/(a Ω̃_{F↓}(x)) Sh_{−1} + Ω̃_F(x)/Ω̃_{F↓}(x) Sh_0`,
/// `E_F = a Ω̃_{F↓}(x+1)/Ω̃_F(x+1) Sh_0 − a Ω̃_{F↓}(x)/Ω̃_F(x+1) Sh_1`.
///
/// Requires `Ω_F^a(n) ≠ 0` on the naturals. The intertwining
/// `C_F(c^{F↓}_{n−k−1}) = (−1)^{u_F+u_{F↓}+1} (n−u_F)/a · c_n^F` is asserted
/// for `v_F ≤ n ≤ v_F + extra`; the companion evidence report covers
/// `n ∈ σ_F`, `n < v_F`.
pub fn charlier_darboux_down(
    set: &FiniteSet,
    a: &Rational,
    extra: u64,
) -> Result<(DarbouxFactors<DiffOp>, VerificationReport)> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    require_nonvanishing(set, a)?;
    let k = set.k() as i64;
    let down = set.down();
    let one = Rational::one();
    let ot = charlier_omega_tilde(set, a);
    let ot_down = charlier_omega_tilde(&down, a);
    let ot1 = ot.shift(&one);
    let x = Poly::x();
    let inv_a = one.clone() / a;
    let first = DiffOp::new([
        (-1, ratio(&(&x * &ot1), &ot_down)?.scale(&-inv_a.clone())),
        (0, ratio(&ot, &ot_down)?),
    ]);
    let second = DiffOp::new([
        (0, ratio(&ot_down.shift(&one), &ot1)?.scale(a)),
        (1, ratio(&ot_down, &ot1)?.scale(&-a.clone())),
    ]);

    let mut report = VerificationReport::asserted("darboux_down")
        .with_input("family", "charlier")
        .with_input("set", set)
        .with_input("a", a);
    let d_upper = charlier_operator(set, a)?;
    let d_lower = charlier_operator(&down, a)?;
    let u = set.u() as i64;
    let mut shifts = Vec::new();
    check_factorization(
        &mut report,
        "D_{F↓} = E C + c",
        &d_lower,
        &second.compose(&first),
        &q(u - k - 1),
        &mut shifts,
    );
    check_factorization(&mut report, "D_F = C E + c", &d_upper, &first.compose(&second), &q(u), &mut shifts);

    let mut evidence = VerificationReport::evidence("darboux_down_below_v")
        .with_input("family", "charlier")
        .with_input("set", set)
        .with_input("a", a);
    let upper = CharlierSystem::new(set, a.clone())?;
    let lower = CharlierSystem::new(&down, a.clone())?;
    let sign = if (set.u() + down.u() + 1).is_multiple_of(2) { 1 } else { -1 };
    let (v, top) = (set.v(), set.v() + extra);
    for n in set.sigma_range(set.u(), top) {
        let idx = n as i64 - k - 1;
        let image = if idx < 0 { Ok(Poly::zero()) } else { first.apply(&lower.poly(idx as u64)) };
        let factor = q(sign * (n as i64 - u)) / a;
        let target = if n >= v { &mut report } else { &mut evidence };
        check_intertwining(target, n, image, &upper.poly(n), &factor);
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

/// `h_1(x−1) w(x−1) = h_{−1}(x) w(x)` for `w = a^x/(x! Ω(x) Ω(x+1))`, after
/// division by `a^x/x!`, plus the boundary condition `h_{−1}(0) = 0`.
pub(crate) fn charlier_symmetry(set: &FiniteSet, a: &Rational) -> Result<VerificationReport> {
    let d = charlier_operator(set, a)?;
    let om = charlier_omega(set, a);
    let one = Rational::one();
    let mut report = VerificationReport::asserted("symmetry")
        .with_input("family", "charlier")
        .with_input("set", set)
        .with_input("a", a);
    // w(x)·x!/a^x = 1/(Ω(x)Ω(x+1)); w(x−1)·x!/a^x = x/(a Ω(x−1)Ω(x)).
    let w = QFn::new(Poly::one(), &om * &om.shift(&one))?;
    let w_prev = QFn::new(Poly::x(), (&om.shift(&-one.clone()) * &om).scale(a))?;
    let lhs = &d.coeff(1).shift(&-one) * &w_prev;
    let rhs = &d.coeff(-1) * &w;
    report.record("h_1(x−1) w(x−1) = h_{−1}(x) w(x)", lhs == rhs, || (&lhs, &rhs));
    let hm1 = d.coeff(-1);
    let at_zero = hm1.num().eval(&Rational::zero());
    report.record("h_{−1}(0) = 0", at_zero.is_zero() || hm1.is_zero(), || (hm1.to_string(), "x·(...)"));
    Ok(report.finish())
}
