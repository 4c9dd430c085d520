//! Casorati and Wronskian constructions over a finite set `F`: the polynomials
//! `Ω_F`, `Λ_F` and their involuted counterparts, the exceptional sequences
//! `c_n^{a;F}` and `H_n^F` in both determinantal forms, and normalizations.
//!
//! Every determinant whose first row is the only `n`-dependent row is
//! expanded along that row once; the cofactors are cached per set.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{charlier, hermite, Family};
use crate::fsets::FiniteSet;
use crate::polycore::{
    determinant, factorial, factorial_q, imag_pow, minor, pow, powi, vandermonde, DualRational, Field, GaussRational,
    Matrix, Poly, Rational, Ring,
    rational_serde,
};
use crate::report::VerificationReport;

fn q(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

fn choose2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// Signed cofactors of the first row of an `(r+1)×(r+1)` matrix whose lower
/// `r` rows are `rows`: `det = Σ_j first[j]·cof[j]`.
fn first_row_cofactors<T: Field>(rows: &Matrix<Poly<T>>) -> Vec<Poly<T>> {
    let width = rows.first().map_or(1, Vec::len);
    (0..width)
        .map(|j| {
            let d = determinant(&minor(rows, &[], &[j])).expect("square minor");
            if j % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

fn expand<T: Field>(first: &[Poly<T>], cof: &[Poly<T>]) -> Poly<T> {
    first.iter().zip(cof).fold(Poly::zero(), |acc, (a, b)| &acc + &(a * b))
}

fn int_t<T: Ring>(n: i64) -> T {
    T::from_int(n)
}

/// `ν_F = 2^{C(k+1,2)} ∏ f!`.
pub fn nu(set: &FiniteSet) -> Rational {
    let k = set.k() as u64;
    let prod: BigInt = set.elements().iter().map(|&f| factorial(f as u64)).product();
    Rational::from((BigInt::one() << (k * (k + 1) / 2)) * prod)
}

fn prod_factorials(set: &FiniteSet) -> Rational {
    Rational::from(set.elements().iter().map(|&f| factorial(f as u64)).product::<BigInt>())
}

/// `∏_i (f_i − n + u_F)`, zero exactly when `n ∉ σ_F` (for `n ≥ u_F`).
fn gap_product(set: &FiniteSet, n: u64) -> Rational {
    let u = set.u() as i64;
    set.elements().iter().map(|&f| q(f as i64 - n as i64 + u)).product()
}

/// Involuted set, its size and `u`; `None` for the empty set.
fn involution_data(set: &FiniteSet) -> Option<(FiniteSet, usize, u64)> {
    let g = set.involution().ok()?;
    let (m, ug) = (g.k(), g.u());
    Some((g, m, ug))
}

// ---------------------------------------------------------------------------
// Charlier

/// `Ω_F^a(x) = |c_{f_i}(x+j−1)|`, `k×k`; one for the empty set.
pub fn charlier_omega<T: Field>(set: &FiniteSet, a: &T) -> Poly<T> {
    casorati(set, a, &(0..set.k() as i64).collect::<Vec<_>>())
}

/// `Λ_F^a`: as `Ω_F^a` with the last column shifted by `k` instead of `k−1`; zero for ∅.
pub fn charlier_lambda<T: Field>(set: &FiniteSet, a: &T) -> Poly<T> {
    let k = set.k() as i64;
    if k == 0 {
        return Poly::zero();
    }
    let mut shifts: Vec<i64> = (0..k - 1).collect();
    shifts.push(k);
    casorati(set, a, &shifts)
}

fn casorati<T: Field>(set: &FiniteSet, a: &T, shifts: &[i64]) -> Poly<T> {
    let m: Matrix<Poly<T>> = set
        .elements()
        .iter()
        .map(|&f| {
            let c = charlier(f as i64, a);
            shifts.iter().map(|&s| c.shift(&int_t(s))).collect()
        })
        .collect();
    determinant(&m).expect("square")
}

/// `|c_{f_i−j+1}(x)|`, the column-reduced form of `Ω_F^a`.
pub fn charlier_omega_reduced<T: Field>(set: &FiniteSet, a: &T) -> Poly<T> {
    let k = set.k() as i64;
    let m: Matrix<Poly<T>> = set
        .elements()
        .iter()
        .map(|&f| (0..k).map(|j| charlier(f as i64 - j, a)).collect())
        .collect();
    determinant(&m).expect("square")
}

fn tilde_rows<T: Field>(g: &FiniteSet, a: &T, shifts: &[i64]) -> Matrix<Poly<T>> {
    let minus_a = -a.clone();
    g.elements()
        .iter()
        .map(|&gi| {
            let c = charlier(gi as i64, &minus_a);
            shifts
                .iter()
                .map(|&s| c.compose_linear(&-T::one(), &int_t(s)))
                .collect()
        })
        .collect()
}

/// `Ω̃_F^a(x) = |c^{−a}_{g_i}(−x+j−1)|` over `G = I(F)`; one for ∅.
pub fn charlier_omega_tilde<T: Field>(set: &FiniteSet, a: &T) -> Poly<T> {
    match involution_data(set) {
        None => Poly::one(),
        Some((g, m, _)) => determinant(&tilde_rows(&g, a, &(0..m as i64).collect::<Vec<_>>())).expect("square"),
    }
}

/// `Λ̃_F^a`: columns `−x, ..., −x+m−2, −x+m`; zero for ∅.
pub fn charlier_lambda_tilde<T: Field>(set: &FiniteSet, a: &T) -> Poly<T> {
    match involution_data(set) {
        None => Poly::zero(),
        Some((g, m, _)) => {
            let mut shifts: Vec<i64> = (0..m as i64 - 1).collect();
            shifts.push(m as i64);
            determinant(&tilde_rows(&g, a, &shifts)).expect("square")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CasoratiData {
    pub omega: Poly<Rational>,
    pub lambda: Poly<Rational>,
    pub omega_tilde: Poly<Rational>,
    pub lambda_tilde: Poly<Rational>,
}

/// The four Casorati polynomials of `(F, a)`; `Ω` is computed both directly
/// and in column-reduced form, and the two must agree.
pub fn casorati_polys(set: &FiniteSet, a: &Rational) -> Result<CasoratiData> {
    if a.is_zero() {
        return Err(Error::InvalidParameter("the Charlier parameter must be nonzero".into()));
    }
    let omega = charlier_omega(set, a);
    let reduced = charlier_omega_reduced(set, a);
    if omega != reduced {
        return Err(Error::Internal(format!("column reduction changed Ω for {set}: {omega} vs {reduced}")));
    }
    Ok(CasoratiData {
        lambda: charlier_lambda(set, a),
        omega_tilde: charlier_omega_tilde(set, a),
        lambda_tilde: charlier_lambda_tilde(set, a),
        omega,
    })
}

/// `c_n^{a;F}` for one `(F, a)`, with cached cofactors for both
/// determinantal forms.
#[derive(Debug, Clone)]
pub struct CharlierSystem<T: Field = Rational> {
    set: FiniteSet,
    a: T,
    u: u64,
    v: u64,
    cof: Vec<Poly<T>>,
    cof_reduced: Vec<Poly<T>>,
    /// Cofactors of the first row of the involuted determinant, with `m`.
    alt: Option<(usize, Vec<Poly<T>>)>,
}

impl<T: Field> CharlierSystem<T> {
    pub fn new(set: &FiniteSet, a: T) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidParameter("the Charlier parameter must be nonzero".into()));
        }
        let k = set.k() as i64;
        let rows: Matrix<Poly<T>> = set
            .elements()
            .iter()
            .map(|&f| {
                let c = charlier(f as i64, &a);
                (0..=k).map(|j| c.shift(&int_t(j))).collect()
            })
            .collect();
        let reduced: Matrix<Poly<T>> = set
            .elements()
            .iter()
            .map(|&f| (0..=k).map(|j| charlier(f as i64 - j, &a)).collect())
            .collect();
        let alt = involution_data(set).map(|(g, m, _)| {
            let rows = tilde_rows(&g, &a, &(-1..m as i64).collect::<Vec<_>>());
            (m, first_row_cofactors(&rows))
        });
        Ok(Self {
            u: set.u(),
            v: set.v(),
            cof: first_row_cofactors(&rows),
            cof_reduced: first_row_cofactors(&reduced),
            alt,
            set: set.clone(),
            a,
        })
    }

    pub fn set(&self) -> &FiniteSet {
        &self.set
    }

    pub fn a(&self) -> &T {
        &self.a
    }

    /// `Ω_F` (the cofactor of the last first-row entry, up to sign).
    pub fn omega(&self) -> Poly<T> {
        let k = self.set.k();
        if k.is_multiple_of(2) {
            self.cof[k].clone()
        } else {
            -&self.cof[k]
        }
    }

    /// `Λ_F`; zero for the empty set.
    pub fn lambda(&self) -> Poly<T> {
        let k = self.set.k();
        if k == 0 {
            return Poly::zero();
        }
        if (k - 1).is_multiple_of(2) {
            self.cof[k - 1].clone()
        } else {
            -&self.cof[k - 1]
        }
    }

    /// `c_n^{a;F}(x) = det[c_{n−u}(x+j); c_{f_i}(x+j)]`; zero below `u_F`
    /// and off `σ_F`.
    pub fn poly(&self, n: u64) -> Poly<T> {
        if n < self.u {
            return Poly::zero();
        }
        let c = charlier((n - self.u) as i64, &self.a);
        let first: Vec<Poly<T>> = (0..self.cof.len()).map(|j| c.shift(&int_t(j as i64))).collect();
        expand(&first, &self.cof)
    }

    /// Column-reduced form `det[c_{n−u−j}(x); c_{f_i−j}(x)]`.
    pub fn poly_reduced(&self, n: u64) -> Poly<T> {
        if n < self.u {
            return Poly::zero();
        }
        let first: Vec<Poly<T>> = (0..self.cof_reduced.len())
            .map(|j| charlier((n - self.u) as i64 - j as i64, &self.a))
            .collect();
        expand(&first, &self.cof_reduced)
    }

    /// The involuted form `β_n det[x^{(j)}/a^j c_{n−v}(x−j); c^{−a}_{g_i}(−x−1+j)]`,
    /// defined for `n ≥ v_F` (below, `(n−v_F)!` has no meaning).
    pub fn poly_alt(&self, n: u64) -> Result<Poly<T>> {
        let (m, cof) = self.alt.as_ref().ok_or(Error::EmptySet)?;
        if n < self.v {
            return Err(Error::Precondition(format!(
                "the involuted form needs n ≥ v_F = {}, got {n}",
                self.v
            )));
        }
        let c = charlier((n - self.v) as i64, &self.a);
        let inv_a = self.a.try_inv().expect("nonzero parameter");
        let mut ff = Poly::one();
        let mut first = Vec::with_capacity(m + 1);
        for j in 0..=*m as i64 {
            first.push(&ff.scale(&pow(&inv_a, j as u64)) * &c.shift(&int_t(-j)));
            ff = &ff * &Poly::linear(T::one(), int_t(-j));
        }
        Ok(expand(&first, cof).scale(&self.beta(n)?))
    }

    /// `β_n = (−1)^{m+k+u} a^m (n−v)! V_F ∏g! ∏(f_i−n+u) / ((n−u)! V_G ∏f!)`, `n ≥ v_F`.
    pub fn beta(&self, n: u64) -> Result<T> {
        let (g, m, _) = involution_data(&self.set).ok_or(Error::EmptySet)?;
        if n < self.v {
            return Err(Error::Precondition(format!("β_n needs n ≥ v_F = {}", self.v)));
        }
        let k = self.set.k() as i64;
        let rational = factorial_q(n - self.v) * vandermonde(self.set.elements().iter().copied())
            * prod_factorials(&g)
            * gap_product(&self.set, n)
            / (factorial_q(n - self.u) * vandermonde(g.elements().iter().copied()) * prod_factorials(&self.set));
        let sign = if (m as i64 + k + self.u as i64) % 2 == 0 { 1 } else { -1 };
        Ok(pow(&self.a, m as u64) * embed_rational::<T>(&(rational * q(sign))))
    }

    /// `V_F ∏(f_i−n+u) / ((n−u)! ∏f!)`, the leading coefficient of `c_n^{a;F}`.
    pub fn leading_coefficient(&self, n: u64) -> Rational {
        if n < self.u {
            return Rational::zero();
        }
        vandermonde(self.set.elements().iter().copied()) * gap_product(&self.set, n)
            / (factorial_q(n - self.u) * prod_factorials(&self.set))
    }
}

/// Rationals into any field, through numerator and denominator.
fn embed_rational<T: Field>(r: &Rational) -> T {
    T::from_bigint(r.numer()) * T::from_bigint(r.denom()).try_inv().expect("nonzero denominator")
}

pub fn charlier_exceptional(n: u64, set: &FiniteSet, a: &Rational) -> Result<Poly<Rational>> {
    Ok(CharlierSystem::new(set, a.clone())?.poly(n))
}

pub fn charlier_exceptional_alt(n: u64, set: &FiniteSet, a: &Rational) -> Result<Poly<Rational>> {
    CharlierSystem::new(set, a.clone())?.poly_alt(n)
}

// ---------------------------------------------------------------------------
// Hermite

fn wronskian_rows<T: Ring>(set: &FiniteSet, width: usize) -> Matrix<Poly<T>> {
    set.elements()
        .iter()
        .map(|&f| {
            let h = hermite::<T>(f as i64);
            let mut row = Vec::with_capacity(width);
            let mut d = h;
            for _ in 0..width {
                let next = d.derivative();
                row.push(d);
                d = next;
            }
            row
        })
        .collect()
}

/// Rows `H_{g_i}^{(l)}(−ix)`, `l < width`, over the Gaussian rationals.
fn imaginary_rows(g: &FiniteSet, width: usize) -> Matrix<Poly<GaussRational>> {
    let minus_i = -imag_pow(1);
    wronskian_rows::<Rational>(g, width)
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|p| p.embed::<GaussRational>().compose_linear(&minus_i, &GaussRational::zero()))
                .collect()
        })
        .collect()
}

fn real_part(p: &Poly<GaussRational>, what: &str) -> Result<Poly<Rational>> {
    if p.coeffs().iter().any(|c| !c.im.is_zero()) {
        return Err(Error::NonReal(format!("{what} has a nonzero imaginary part")));
    }
    Ok(p.map(|c| c.re.clone()))
}

/// Wronskian `Ω_F = |H_{f_i}^{(j−1)}|`, `k×k`; one for ∅.
pub fn hermite_omega(set: &FiniteSet) -> Poly<Rational> {
    determinant(&wronskian_rows(set, set.k())).expect("square")
}

/// `Ω̃_F = i^{u_G+m} |H_{g_i}^{(j−1)}(−ix)|` over `G = I(F)`, certified real; one for ∅.
pub fn hermite_omega_tilde(set: &FiniteSet) -> Result<Poly<Rational>> {
    let Some((g, m, ug)) = involution_data(set) else {
        return Ok(Poly::one());
    };
    let det = determinant(&imaginary_rows(&g, m))?.scale(&imag_pow((ug + m as u64) as i64));
    real_part(&det, "Ω̃")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WronskianData {
    pub omega: Poly<Rational>,
    pub omega_tilde: Poly<Rational>,
}

pub fn wronskian_polys(set: &FiniteSet) -> Result<WronskianData> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(WronskianData {
        omega: hermite_omega(set),
        omega_tilde: hermite_omega_tilde(set)?,
    })
}

/// First-row layouts of the involuted Hermite determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HermiteAltRow {
    /// `(−i)^j H_{n−v+j}(x)`.
    Ascending,
    /// `(−1)^j H_{n−v−j}(x)`.
    Descending,
}

impl HermiteAltRow {
    pub const ALL: [Self; 2] = [Self::Ascending, Self::Descending];
}

/// `H_n^F` for one `F`, with cached cofactors.
#[derive(Debug, Clone)]
pub struct HermiteSystem {
    set: FiniteSet,
    u: u64,
    v: u64,
    cof: Vec<Poly<Rational>>,
    alt: Option<(usize, Vec<Poly<GaussRational>>)>,
}

impl HermiteSystem {
    pub fn new(set: &FiniteSet) -> Self {
        let k = set.k();
        let alt = involution_data(set).map(|(g, m, _)| (m, first_row_cofactors(&imaginary_rows(&g, m + 1))));
        Self {
            u: set.u(),
            v: set.v(),
            cof: first_row_cofactors(&wronskian_rows(set, k + 1)),
            alt,
            set: set.clone(),
        }
    }

    pub fn set(&self) -> &FiniteSet {
        &self.set
    }

    pub fn omega(&self) -> Poly<Rational> {
        let k = self.set.k();
        if k.is_multiple_of(2) {
            self.cof[k].clone()
        } else {
            -&self.cof[k]
        }
    }

    /// `H_n^F = det[H_{n−u}^{(j)}; H_{f_i}^{(j)}]`.
    pub fn poly(&self, n: u64) -> Poly<Rational> {
        if n < self.u {
            return Poly::zero();
        }
        let mut d = hermite::<Rational>((n - self.u) as i64);
        let mut first = Vec::with_capacity(self.cof.len());
        for _ in 0..self.cof.len() {
            let next = d.derivative();
            first.push(d);
            d = next;
        }
        expand(&first, &self.cof)
    }

    /// `γ_n = i^{u_G} 2^{C(k+1,2)−C(m,2)} (V_F/V_G) ∏(f−n+u)`.
    pub fn gamma(&self, n: u64) -> Result<GaussRational> {
        let (g, m, ug) = involution_data(&self.set).ok_or(Error::EmptySet)?;
        let k = self.set.k() as i64;
        let two_pow = powi(&q(2), choose2(k + 1) - choose2(m as i64))?;
        let r = two_pow * vandermonde(self.set.elements().iter().copied()) * gap_product(&self.set, n)
            / vandermonde(g.elements().iter().copied());
        Ok(imag_pow(ug as i64) * GaussRational::new(r, Rational::zero()))
    }

    /// The involuted form `γ_n det[first row; H_{g_i}^{(j)}(−ix)]`, certified real.
    pub fn poly_alt(&self, n: u64, row: HermiteAltRow) -> Result<Poly<Rational>> {
        let (m, cof) = self.alt.as_ref().ok_or(Error::EmptySet)?;
        let base = n as i64 - self.v as i64;
        let first: Vec<Poly<GaussRational>> = (0..=*m as i64)
            .map(|j| {
                let (index, factor) = match row {
                    HermiteAltRow::Ascending => (base + j, imag_pow(-j)),
                    HermiteAltRow::Descending => (base - j, if j % 2 == 0 { GaussRational::one() } else { -GaussRational::one() }),
                };
                hermite::<Rational>(index).embed::<GaussRational>().scale(&factor)
            })
            .collect();
        let det = expand(&first, cof).scale(&self.gamma(n)?);
        real_part(&det, "involuted H_n^F")
    }

    /// `2^{n+C(k+1,2)} V_F ∏(f−n+u)`.
    pub fn leading_coefficient(&self, n: u64) -> Rational {
        if n < self.u {
            return Rational::zero();
        }
        let k = self.set.k() as u64;
        Rational::from(BigInt::one() << (n + k * (k + 1) / 2))
            * vandermonde(self.set.elements().iter().copied())
            * gap_product(&self.set, n)
    }
}

pub fn hermite_exceptional(n: u64, set: &FiniteSet) -> Poly<Rational> {
    HermiteSystem::new(set).poly(n)
}

pub fn hermite_exceptional_alt(n: u64, set: &FiniteSet, row: HermiteAltRow) -> Result<Poly<Rational>> {
    HermiteSystem::new(set).poly_alt(n, row)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormConstants {
    #[serde(with = "rational_serde")]
    pub nu: Rational,
    /// `β_n` (Charlier parameter given, `n ≥ v_F`).
    #[serde(with = "rational_serde::option")]
    pub beta: Option<Rational>,
    /// `γ_n`, or its imaginary part when `u_G` is odd.
    #[serde(with = "rational_serde::option")]
    pub gamma: Option<Rational>,
}

pub fn norm_constants(set: &FiniteSet, n: u64, a: Option<&Rational>) -> Result<NormConstants> {
    let beta = match a {
        Some(a) if !set.is_empty() && n >= set.v() => Some(CharlierSystem::new(set, a.clone())?.beta(n)?),
        _ => None,
    };
    let gamma = if set.is_empty() {
        None
    } else {
        let g = HermiteSystem::new(set).gamma(n)?;
        // γ_n is real exactly when u_G is even; otherwise report its imaginary part.
        Some(if g.im.is_zero() { g.re } else { g.im })
    };
    Ok(NormConstants { nu: nu(set), beta, gamma })
}

// ---------------------------------------------------------------------------
// Checks

/// `Ω_F = (−1)^{k+u_F} Ω̃_F` (Charlier) or `Ω_F = 2^{C(k,2)−C(m,2)} (V_F/V_G) Ω̃_F` (Hermite).
pub fn invariance_check(set: &FiniteSet, family: &Family) -> Result<VerificationReport> {
    let (g, m, _) = involution_data(set).ok_or(Error::EmptySet)?;
    let k = set.k() as i64;
    let mut report = VerificationReport::asserted("invariance")
        .with_input("family", family.name())
        .with_input("set", set);
    let (lhs, rhs) = match family {
        Family::Charlier(a) => {
            report = report.with_input("a", a);
            let sign = if (k + set.u() as i64) % 2 == 0 { 1 } else { -1 };
            (charlier_omega(set, a), charlier_omega_tilde(set, a).scale(&q(sign)))
        }
        Family::Hermite => {
            let c = powi(&q(2), choose2(k) - choose2(m as i64))? * vandermonde(set.elements().iter().copied())
                / vandermonde(g.elements().iter().copied());
            (hermite_omega(set), hermite_omega_tilde(set)?.scale(&c))
        }
    };
    report.record("omega", lhs == rhs, || (&lhs, &rhs));
    Ok(report.finish())
}

/// Structural identities of the exceptional sequence for `n ≤ v_F + extra`:
/// degree and leading coefficient on `σ_F`, vanishing off `σ_F`, agreement of
/// the two column forms (Charlier), the value at `n = u_F`, and the
/// relations tying `Ω_F` to smaller sets.
pub fn structure_check(set: &FiniteSet, family: &Family, extra: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::asserted("structure")
        .with_input("family", family.name())
        .with_input("set", set)
        .with_input("extra", extra);
    let top = set.v() + extra;
    let k = set.k();
    let down = set.down();
    match family {
        Family::Charlier(a) => {
            report = report.with_input("a", a);
            let sys = CharlierSystem::new(set, a.clone())?;
            let omega = sys.omega();
            let degree_ok = omega.degree() == Some(set.u() as usize + k);
            report.record("deg Ω", degree_ok, || (format!("{:?}", omega.degree()), set.u() + k as u64));
            let lambda = sys.lambda();
            if k > 0 {
                let ok = lambda.degree() == Some(set.u() as usize + k);
                report.record("deg Λ", ok, || (format!("{:?}", lambda.degree()), set.u() + k as u64));
            }
            let direct = charlier_omega(set, a);
            report.record("Ω cofactor", direct == omega, || (&direct, &omega));
            let reduced = charlier_omega_reduced(set, a);
            report.record("Ω reduced", reduced == omega, || (&reduced, &omega));
            let lam = charlier_lambda(set, a);
            report.record("Λ cofactor", lam == lambda, || (&lam, &lambda));

            // Λ = kΩ − dΩ/da
            let dual = charlier_omega(set, &DualRational::variable(a.clone()));
            let d_da = dual.map(|c| c.derivative.clone());
            let expect = &omega.scale(&q(k as i64)) - &d_da;
            report.record("Λ = kΩ − dΩ/da", lambda == expect, || (&lambda, &expect));

            if k > 0 {
                let last = set.drop_last();
                let n = set.largest().expect("nonempty") as u64 + last.u();
                let sign = if (k - 1).is_multiple_of(2) { 1 } else { -1 };
                let rhs = CharlierSystem::new(&last, a.clone())?.poly(n).scale(&q(sign));
                report.record("Ω_F = ±c^{F_k}", omega == rhs, || (&omega, &rhs));
            }
            let at_u = sys.poly(set.u());
            let down_omega = charlier_omega(&down, a);
            report.record("c_u = Ω_{F↓}", at_u == down_omega, || (&at_u, &down_omega));

            for n in 0..=top {
                let p = sys.poly(n);
                let r = sys.poly_reduced(n);
                report.record(format!("column forms n={n}"), p == r, || (&p, &r));
                check_degree(&mut report, set, n, &p, &sys.leading_coefficient(n));
            }
        }
        Family::Hermite => {
            let sys = HermiteSystem::new(set);
            let omega = sys.omega();
            let direct = hermite_omega(set);
            report.record("Ω cofactor", direct == omega, || (&direct, &omega));
            let degree_ok = omega.degree() == Some(set.u() as usize + k);
            report.record("deg Ω", degree_ok, || (format!("{:?}", omega.degree()), set.u() + k as u64));
            let at_u = sys.poly(set.u());
            let factor = powi(&q(2), k as i64 - set.s() as i64 + 1)? * nu(set) / nu(&down);
            let expect = hermite_omega(&down).scale(&factor);
            report.record("H_u = c·Ω_{F↓}", at_u == expect, || (&at_u, &expect));
            for n in 0..=top {
                let p = sys.poly(n);
                check_degree(&mut report, set, n, &p, &sys.leading_coefficient(n));
            }
        }
    }
    Ok(report.finish())
}

fn check_degree(report: &mut VerificationReport, set: &FiniteSet, n: u64, p: &Poly<Rational>, lc: &Rational) {
    if set.in_sigma(n) {
        let ok = p.degree() == Some(n as usize) && p.leading() == Some(lc);
        report.record(format!("degree n={n}"), ok, || {
            (format!("deg {:?} lc {:?}", p.degree(), p.leading().map(ToString::to_string)), format!("deg {n} lc {lc}"))
        });
    } else {
        report.record(format!("vanishes n={n}"), p.is_zero(), || (p, "0"));
    }
}

/// Outcome of comparing the involuted forms with the primary definitions.
#[derive(Debug, Clone, Serialize)]
pub struct AltFormOutcome {
    /// Equality for `v_F ≤ n ≤ v_F + extra`.
    pub asserted: VerificationReport,
    /// The same comparison for `n ∈ σ_F`, `u_F ≤ n < v_F`.
    pub evidence: VerificationReport,
    /// Hermite first-row layout that matched every asserted case.
    pub hermite_row: Option<HermiteAltRow>,
}

pub fn alt_form_check(set: &FiniteSet, family: &Family, extra: u64) -> Result<AltFormOutcome> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let (u, v) = (set.u(), set.v());
    let mut asserted = VerificationReport::asserted("alt_form")
        .with_input("family", family.name())
        .with_input("set", set)
        .with_input("extra", extra);
    let mut evidence = VerificationReport::evidence("alt_form_below_v")
        .with_input("family", family.name())
        .with_input("set", set);
    let below: Vec<u64> = set.sigma_range(u, v.saturating_sub(1)).into_iter().filter(|&n| n < v).collect();
    let mut hermite_row = None;
    match family {
        Family::Charlier(a) => {
            asserted = asserted.with_input("a", a);
            evidence = evidence.with_input("a", a);
            let sys = CharlierSystem::new(set, a.clone())?;
            for n in v..=v + extra {
                let (p, alt) = (sys.poly(n), sys.poly_alt(n)?);
                asserted.record(format!("n={n}"), p == alt, || (&p, &alt));
            }
            for n in below {
                match sys.poly_alt(n) {
                    Ok(alt) => {
                        let p = sys.poly(n);
                        evidence.record(format!("n={n}"), p == alt, || (&p, &alt));
                    }
                    Err(_) => evidence.note(format!("n={n}: first-row index n−v_F is negative; form undefined")),
                }
            }
        }
        Family::Hermite => {
            let sys = HermiteSystem::new(set);
            let mut results = Vec::new();
            for row in HermiteAltRow::ALL {
                let mut r = VerificationReport::asserted(format!("alt_form_{row:?}").to_lowercase());
                for n in v..=v + extra {
                    let p = sys.poly(n);
                    match sys.poly_alt(n, row) {
                        Ok(alt) => r.record(format!("n={n}"), p == alt, || (&p, &alt)),
                        Err(e) => r.fail(format!("n={n}"), || (e.to_string(), "")),
                    }
                }
                results.push((row, r));
            }
            let winners: Vec<HermiteAltRow> = results.iter().filter(|(_, r)| r.passed).map(|(row, _)| *row).collect();
            asserted.note(format!("matching first-row layouts: {winners:?}"));
            match winners.first() {
                Some(&row) => {
                    hermite_row = Some(row);
                    let (_, r) = results.into_iter().find(|(w, _)| *w == row).expect("winner present");
                    asserted.absorb(r);
                }
                None => {
                    for (_, r) in results {
                        asserted.absorb(r);
                    }
                }
            }
            let row = hermite_row.unwrap_or(HermiteAltRow::Ascending);
            for n in below {
                let p = sys.poly(n);
                match sys.poly_alt(n, row) {
                    Ok(alt) => evidence.record(format!("n={n}"), p == alt, || (&p, &alt)),
                    Err(e) => evidence.fail(format!("n={n}"), || (e.to_string(), "")),
                }
            }
        }
    }
    Ok(AltFormOutcome {
        asserted: asserted.finish(),
        evidence: evidence.finish(),
        hermite_row,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{int, rat};

    fn fs(s: &str) -> FiniteSet {
        s.parse().unwrap()
    }

    #[test]
    fn singleton_omega_is_the_polynomial() {
        assert_eq!(charlier_omega(&fs("3"), &int(2)), charlier(3, &int(2)));
        assert_eq!(hermite_omega(&fs("3")), hermite::<Rational>(3));
        assert_eq!(charlier_omega(&FiniteSet::empty(), &int(2)), Poly::one());
    }

    #[test]
    fn hermite_omega_one_two() {
        assert_eq!(hermite_omega(&fs("1,2")), Poly::from_ints(&[4, 0, 8]));
        let w = wronskian_polys(&fs("1,2")).unwrap();
        assert!(invariance_check(&fs("1,2"), &Family::Hermite).unwrap().passed);
        assert_eq!(w.omega.degree(), Some(2));
    }

    #[test]
    fn leading_coefficient_one_two_three() {
        let h = hermite_exceptional(3, &fs("1,2"));
        assert_eq!(h.degree(), Some(3));
        assert_eq!(h.leading(), Some(&int(128)));
        let c = charlier_exceptional(3, &fs("1,2"), &int(1)).unwrap();
        // V_F (1−3)(2−3) / (3! · 1! · 2!) = 2/12
        assert_eq!(c.leading(), Some(&rat(1, 6)));
    }

    #[test]
    fn gaps_vanish() {
        let f = fs("2,3");
        for n in [4, 5] {
            assert!(charlier_exceptional(n, &f, &int(1)).unwrap().is_zero());
            assert!(hermite_exceptional(n, &f).is_zero());
        }
    }

    #[test]
    fn structure_small_sets() {
        for s in ["1", "1,2", "2,3", "1,3", "1,2,4"] {
            for fam in [Family::Charlier(int(1)), Family::Charlier(rat(1, 2)), Family::Hermite] {
                let r = structure_check(&fs(s), &fam, 4).unwrap();
                assert!(r.passed, "{r}");
            }
        }
    }

    #[test]
    fn invariance_examples() {
        for (s, a) in [("1,2,3", 1), ("1,3", 2), ("2,5", -1)] {
            assert!(invariance_check(&fs(s), &Family::Charlier(int(a))).unwrap().passed);
        }
        assert!(invariance_check(&fs("2,3"), &Family::Hermite).unwrap().passed);
        assert!(invariance_check(&FiniteSet::empty(), &Family::Hermite).is_err());
    }

    #[test]
    fn alternative_forms() {
        for (s, a) in [("1,2", int(1)), ("2,3", rat(1, 2)), ("1,2,3,4", int(1))] {
            let c = alt_form_check(&fs(s), &Family::Charlier(a), 5).unwrap();
            assert!(c.asserted.passed, "{}", c.asserted);
            let h = alt_form_check(&fs(s), &Family::Hermite, 5).unwrap();
            assert!(h.asserted.passed, "{} {:?}", h.asserted, h.asserted.notes);
        }
    }
}
