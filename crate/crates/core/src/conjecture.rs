//! Exploration harness for the admissibility conjecture and for the
//! involuted-form and down-intertwining identities below `v_F`.
//!
//! Orthogonal families enter through their three-term recurrence
//! `x p_n = a_n p_{n+1} + b_n p_n + c_n p_{n−1}` with rational data. For a
//! finite set `F` the derivative Wronskian `Ω_F^μ = |p_{f_i}^{(j−1)}|` is
//! built exactly and its distinct real zeros are counted with Sturm
//! sequences. The conjectured equivalence reads: `F` admissible if and only
//! if `Ω_F^μ` has no real zero for every positive measure `μ`.
//!
//! Only the Hermite instance of "admissible ⇒ zero-free" and the even
//! consecutive runs of the Karlin–Szegő theorem are proved; everything else
//! is reported as evidence and never treated as a failure.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exceptional::alt_form_check;
use crate::families::Family;
use crate::fsets::FiniteSet;
use crate::operators::darboux_down;
use crate::polycore::{determinant, format_rational, real_root_count, Matrix, Poly, Rational, RootInterval};
use crate::report::VerificationReport;

/// Three-term recurrence data; entry `n` of each list is the coefficient
/// in the relation for `x p_n`. `c_0` multiplies `p_{−1} = 0` and is ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceFamily {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(with = "crate::polycore::rational_serde::vec")]
    pub a: Vec<Rational>,
    #[serde(with = "crate::polycore::rational_serde::vec")]
    pub b: Vec<Rational>,
    #[serde(with = "crate::polycore::rational_serde::vec")]
    pub c: Vec<Rational>,
}

fn default_name() -> String {
    "custom".into()
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

impl RecurrenceFamily {
    pub fn new(name: impl Into<String>, a: Vec<Rational>, b: Vec<Rational>, c: Vec<Rational>) -> Self {
        Self {
            name: name.into(),
            a,
            b,
            c,
        }
    }

    /// `x H_n = ½ H_{n+1} + n H_{n−1}`, enough data for degrees up to `len`.
    pub fn hermite(len: usize) -> Self {
        Self::new(
            "hermite",
            vec![Rational::new(1.into(), 2.into()); len],
            vec![Rational::zero(); len],
            (0..len as i64).map(q).collect(),
        )
    }

    /// `x c_n^a = (n+1) c_{n+1}^a + (n+a) c_n^a + a c_{n−1}^a`.
    pub fn charlier(a: &Rational, len: usize) -> Self {
        Self::new(
            format!("charlier(a={})", format_rational(a)),
            (1..=len as i64).map(q).collect(),
            (0..len as i64).map(|n| q(n) + a).collect(),
            vec![a.clone(); len],
        )
    }

    /// `x L_n^α = −(n+1) L_{n+1}^α + (2n+α+1) L_n^α − (n+α) L_{n−1}^α`.
    pub fn laguerre(alpha: &Rational, len: usize) -> Self {
        Self::new(
            format!("laguerre(alpha={})", format_rational(alpha)),
            (1..=len as i64).map(|n| -q(n)).collect(),
            (0..len as i64).map(|n| q(2 * n + 1) + alpha).collect(),
            (0..len as i64).map(|n| -(q(n) + alpha)).collect(),
        )
    }

    /// Highest degree the stored data reaches.
    pub fn max_degree(&self) -> usize {
        self.a.len().min(self.b.len()).min(self.c.len())
    }

    /// Checks that degrees up to `nmax` are available and that
    /// `a_{n−1} c_n ≠ 0` wherever both enter.
    pub fn validate(&self, nmax: usize) -> Result<()> {
        if self.max_degree() < nmax {
            return Err(Error::InvalidFamily(format!(
                "{}: recurrence data reaches degree {}, {nmax} requested",
                self.name,
                self.max_degree()
            )));
        }
        if let Some(n) = (0..nmax).find(|&n| self.a[n].is_zero()) {
            return Err(Error::InvalidFamily(format!("{}: a_{n} = 0", self.name)));
        }
        if let Some(n) = (1..nmax).find(|&n| self.c[n].is_zero()) {
            return Err(Error::InvalidFamily(format!("{}: c_{n} = 0", self.name)));
        }
        Ok(())
    }

    /// Whether `a_{n−1} c_n > 0` for every `n` covered by the data.
    pub fn is_positive(&self) -> bool {
        (1..self.max_degree()).all(|n| (&self.a[n - 1] * &self.c[n]).is_positive())
    }

    /// The recurrence of the monic rescaling: `a_n = 1`, `c_n ↦ a_{n−1} c_n`.
    pub fn monic(&self) -> Self {
        let len = self.max_degree();
        let c = (0..len)
            .map(|n| if n == 0 { Rational::zero() } else { &self.a[n - 1] * &self.c[n] })
            .collect();
        Self::new(
            format!("{} (monic)", self.name),
            vec![Rational::one(); len],
            self.b[..len].to_vec(),
            c,
        )
    }

    /// Whether the data is that of the Hermite polynomials up to
    /// normalization, which is where "admissible ⇒ zero-free" is a theorem.
    pub fn matches_hermite(&self) -> bool {
        let m = self.monic();
        let half = Rational::new(1.into(), 2.into());
        (0..m.max_degree()).all(|n| m.b[n].is_zero() && (n == 0 || m.c[n] == q(n as i64) * &half))
    }
}

impl FromStr for RecurrenceFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("recurrence family: {e}")))
    }
}

/// `p_0, …, p_nmax` from the recurrence with `p_{−1} = 0`, `p_0 = 1`.
pub fn family_polys(fam: &RecurrenceFamily, nmax: usize) -> Result<Vec<Poly<Rational>>> {
    fam.validate(nmax)?;
    let mut out = vec![Poly::one()];
    let mut prev = Poly::zero();
    for n in 0..nmax {
        let cur = &out[n];
        let x_minus_b = Poly::linear(Rational::one(), -fam.b[n].clone());
        let mut next = &x_minus_b * cur;
        if n > 0 {
            next = &next - &prev.scale(&fam.c[n]);
        }
        let next = next.scale(&(Rational::one() / &fam.a[n]));
        prev = cur.clone();
        out.push(next);
    }
    Ok(out)
}

/// `|p_{f_i}^{(j−1)}|_{i,j=1..k}`; `polys` must reach degree `f_k`.
pub fn wronskian(polys: &[Poly<Rational>], set: &FiniteSet) -> Result<Poly<Rational>> {
    let k = set.k();
    let rows: Matrix<Poly<Rational>> = set
        .elements()
        .iter()
        .map(|&f| {
            let p = polys
                .get(f as usize)
                .ok_or_else(|| Error::IndexOutOfRange(format!("degree {f} not generated")))?;
            Ok((0..k).map(|j| p.nth_derivative(j)).collect())
        })
        .collect::<Result<_>>()?;
    if k == 0 {
        return Ok(Poly::one());
    }
    determinant(&rows)
}

/// Outcome of one Wronskian zero count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureRecord {
    pub family: String,
    pub set: FiniteSet,
    pub admissible: bool,
    /// Distinct real zeros of `Ω_F^μ`; absent when the Wronskian vanishes identically.
    pub real_zero_count: Option<usize>,
    pub degenerate: bool,
    pub omega_degree: Option<usize>,
    /// `admissible XOR (real_zero_count > 0)`; false for degenerate records.
    pub agrees_with_conjecture: bool,
}

impl ConjectureRecord {
    /// An admissible set whose Wronskian has a real zero.
    pub fn violates_admissible_direction(&self) -> bool {
        self.admissible && self.real_zero_count.is_some_and(|z| z > 0)
    }

    /// A non-admissible set whose Wronskian is zero-free.
    pub fn violates_converse(&self) -> bool {
        !self.admissible && self.real_zero_count == Some(0)
    }
}

fn record_from_polys(family: &str, polys: &[Poly<Rational>], set: &FiniteSet) -> Result<ConjectureRecord> {
    let omega = wronskian(polys, set)?;
    let admissible = set.is_admissible();
    let (real_zero_count, degenerate) = if omega.is_zero() {
        (None, true)
    } else {
        (Some(real_root_count(&omega, &RootInterval::Whole)?), false)
    };
    Ok(ConjectureRecord {
        family: family.to_string(),
        set: set.clone(),
        admissible,
        agrees_with_conjecture: real_zero_count.is_some_and(|z| admissible != (z > 0)),
        real_zero_count,
        degenerate,
        omega_degree: omega.degree(),
    })
}

/// Builds `Ω_F^μ` exactly and counts its real zeros.
pub fn wronskian_zero_scan(fam: &RecurrenceFamily, set: &FiniteSet) -> Result<ConjectureRecord> {
    let top = set.largest().unwrap_or(0) as usize;
    let polys = family_polys(fam, top)?;
    record_from_polys(&fam.name, &polys, set)
}

/// Tallies over a sweep; degenerate records are counted but excluded from
/// both directions.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConjectureSummary {
    pub family: String,
    pub positive_measure: bool,
    pub max_fk: u32,
    pub records: usize,
    pub degenerate: usize,
    pub admissible: usize,
    pub admissible_zero_free: usize,
    pub non_admissible: usize,
    pub non_admissible_with_zero: usize,
    /// Admissible sets with a real zero.
    pub admissible_direction_violations: Vec<FiniteSet>,
    /// Non-admissible sets without a real zero.
    pub converse_violations: Vec<FiniteSet>,
}

impl ConjectureSummary {
    pub fn from_records(fam: &RecurrenceFamily, max_fk: u32, records: &[ConjectureRecord]) -> Self {
        let mut s = Self {
            family: fam.name.clone(),
            positive_measure: fam.is_positive(),
            max_fk,
            records: records.len(),
            ..Self::default()
        };
        for r in records {
            let Some(z) = r.real_zero_count else {
                s.degenerate += 1;
                continue;
            };
            if r.admissible {
                s.admissible += 1;
                s.admissible_zero_free += usize::from(z == 0);
            } else {
                s.non_admissible += 1;
                s.non_admissible_with_zero += usize::from(z > 0);
            }
            if r.violates_admissible_direction() {
                s.admissible_direction_violations.push(r.set.clone());
            }
            if r.violates_converse() {
                s.converse_violations.push(r.set.clone());
            }
        }
        s
    }

    /// Agreement rate among non-degenerate records, in percent.
    pub fn agreement_percent(&self) -> f64 {
        let total = self.admissible + self.non_admissible;
        if total == 0 {
            return 100.0;
        }
        100.0 * (self.admissible_zero_free + self.non_admissible_with_zero) as f64 / total as f64
    }
}

/// Scans every nonempty `F` with `f_k ≤ max_fk`; records are sorted by `F`.
pub fn conjecture_sweep(fam: &RecurrenceFamily, max_fk: u32) -> Result<(Vec<ConjectureRecord>, ConjectureSummary)> {
    let polys = family_polys(fam, max_fk as usize)?;
    let mut records = FiniteSet::all_with_max(max_fk)
        .par_iter()
        .map(|set| record_from_polys(&fam.name, &polys, set))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|x, y| x.set.cmp(&y.set));
    let summary = ConjectureSummary::from_records(fam, max_fk, &records);
    Ok((records, summary))
}

/// Reports for the two directions of the equivalence. The admissible
/// direction is asserted when `proved` holds and is evidence otherwise; the
/// converse is always evidence.
pub fn direction_reports(
    fam: &RecurrenceFamily,
    records: &[ConjectureRecord],
    proved: bool,
) -> (VerificationReport, VerificationReport) {
    let kind_name = "conjecture_admissible_zero_free";
    let mut forward = if proved {
        VerificationReport::asserted(kind_name)
    } else {
        VerificationReport::evidence(kind_name)
    }
    .with_input("family", &fam.name);
    let mut converse =
        VerificationReport::evidence("conjecture_non_admissible_has_zero").with_input("family", &fam.name);
    for r in records.iter().filter(|r| !r.degenerate) {
        let zeros = r.real_zero_count.unwrap_or(0);
        let report = if r.admissible { &mut forward } else { &mut converse };
        report.record(format!("F={}", r.set), r.agrees_with_conjecture, || {
            (format!("{zeros} real zeros"), if r.admissible { "0" } else { "≥ 1" })
        });
    }
    let degenerate = records.iter().filter(|r| r.degenerate).count();
    if degenerate > 0 {
        converse.note(format!("{degenerate} identically vanishing Wronskians excluded"));
    }
    if !fam.is_positive() {
        forward.note("recurrence data is not that of a positive measure");
    }
    (forward.finish(), converse.finish())
}

/// Sets `{s, s+1, …, s+2r−1}` with largest element at most `max_fk`.
pub fn even_segments(max_fk: u32) -> Vec<FiniteSet> {
    let mut out = Vec::new();
    for start in 1..=max_fk {
        for len in (2..=max_fk + 1 - start).step_by(2) {
            out.push(FiniteSet::new((start..start + len).collect()).expect("increasing positive run"));
        }
    }
    out
}

/// Karlin–Szegő: for a positive family, every even run of consecutive
/// integers gives a zero-free Wronskian.
pub fn karlin_szego_check(fam: &RecurrenceFamily, max_fk: u32) -> Result<VerificationReport> {
    if !fam.is_positive() {
        return Err(Error::Precondition(format!("{} is not a positive-measure family", fam.name)));
    }
    let polys = family_polys(fam, max_fk as usize)?;
    let mut report = VerificationReport::asserted("karlin_szego")
        .with_input("family", &fam.name)
        .with_input("max_fk", max_fk);
    for set in even_segments(max_fk) {
        let r = record_from_polys(&fam.name, &polys, &set)?;
        report.record(format!("F={set}"), r.real_zero_count == Some(0), || {
            (format!("{:?} real zeros", r.real_zero_count), "0")
        });
    }
    Ok(report.finish())
}

/// Which identity an evidence sweep compares below `v_F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvidenceScope {
    /// Involuted determinants against the primary definitions.
    AltForms,
    /// Down-intertwining `F↓ → F`.
    DarbouxDown,
}

impl fmt::Display for EvidenceScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::AltForms => "alt-forms",
            Self::DarbouxDown => "darboux-down",
        })
    }
}

impl FromStr for EvidenceScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alt-forms" => Ok(Self::AltForms),
            "darboux-down" => Ok(Self::DarbouxDown),
            other => Err(Error::Parse(format!("unknown evidence scope {other:?}"))),
        }
    }
}

fn evidence_for(scope: EvidenceScope, set: &FiniteSet, family: &Family) -> VerificationReport {
    let outcome = match scope {
        EvidenceScope::AltForms => alt_form_check(set, family, 0).map(|o| o.evidence),
        EvidenceScope::DarbouxDown => darboux_down(set, family, 0).map(|(_, e)| e),
    };
    let name = match scope {
        EvidenceScope::AltForms => "alt_form_below_v",
        EvidenceScope::DarbouxDown => "darboux_down_below_v",
    };
    let mut report = match outcome {
        Ok(r) => r,
        Err(e) => {
            let mut r = VerificationReport::evidence(name)
                .with_input("family", family.name())
                .with_input("set", set);
            if let Family::Charlier(a) = family {
                r = r.with_input("a", a);
            }
            r.note(format!("not evaluated: {e}"));
            r.finish()
        }
    };
    report.inputs.insert("admissible".into(), set.is_admissible().to_string());
    report
}

/// Evidence reports for every nonempty `F` with `f_k ≤ max_fk`, for the
/// Charlier family at each `a` in `a_list` and for the Hermite family.
/// Failures are data; only the comparisons for `u_F ≤ n < v_F` appear.
pub fn evidence_sweep(scope: EvidenceScope, max_fk: u32, a_list: &[Rational]) -> Vec<VerificationReport> {
    let families: Vec<Family> = a_list
        .iter()
        .map(|a| Family::Charlier(a.clone()))
        .chain(std::iter::once(Family::Hermite))
        .collect();
    let sets = FiniteSet::all_with_max(max_fk);
    let tasks: Vec<(&Family, &FiniteSet)> = families.iter().flat_map(|f| sets.iter().map(move |s| (f, s))).collect();
    let mut reports: Vec<VerificationReport> = tasks
        .par_iter()
        .map(|(family, set)| evidence_for(scope, set, family))
        .collect();
    reports.sort_by(|x, y| x.inputs.cmp(&y.inputs));
    reports
}

/// Aggregate counts over evidence reports.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EvidenceTally {
    pub scope: String,
    pub reports: usize,
    pub cases: usize,
    pub agreeing: usize,
    pub disagreeing: usize,
    /// Reports that could not be evaluated (hypothesis fails or form undefined).
    pub not_evaluated: usize,
}

impl EvidenceTally {
    pub fn from_reports(scope: EvidenceScope, reports: &[VerificationReport]) -> Self {
        let mut t = Self {
            scope: scope.to_string(),
            reports: reports.len(),
            ..Self::default()
        };
        for r in reports {
            t.cases += r.cases;
            t.disagreeing += r.failure_count;
            t.agreeing += r.cases - r.failure_count;
            t.not_evaluated += usize::from(r.notes.iter().any(|n| n.starts_with("not evaluated")));
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{charlier, hermite};
    use crate::polycore::{int, rat};

    fn fs(s: &str) -> FiniteSet {
        s.parse().unwrap()
    }

    #[test]
    fn recurrences_reproduce_classical_families() {
        let h = family_polys(&RecurrenceFamily::hermite(9), 8).unwrap();
        let c = family_polys(&RecurrenceFamily::charlier(&rat(3, 2), 9), 8).unwrap();
        for n in 0..=8 {
            assert_eq!(h[n], hermite::<Rational>(n as i64));
            assert_eq!(c[n], charlier(n as i64, &rat(3, 2)));
        }
        let monic = family_polys(&RecurrenceFamily::hermite(3).monic(), 1).unwrap();
        assert_eq!(monic[1], Poly::linear(int(1), int(0)));
    }

    #[test]
    fn hermite_records() {
        let fam = RecurrenceFamily::hermite(8);
        let r = wronskian_zero_scan(&fam, &fs("1,2")).unwrap();
        assert!(r.admissible && r.real_zero_count == Some(0) && r.agrees_with_conjecture);
        let r = wronskian_zero_scan(&fam, &fs("1")).unwrap();
        assert!(!r.admissible && r.real_zero_count == Some(1));
        assert!(fam.matches_hermite() && fam.monic().matches_hermite());
        assert!(!RecurrenceFamily::charlier(&int(1), 8).matches_hermite());
    }

    #[test]
    fn invalid_recurrence() {
        let mut fam = RecurrenceFamily::hermite(4);
        fam.c[2] = int(0);
        assert!(matches!(family_polys(&fam, 4), Err(Error::InvalidFamily(_))));
        assert!(family_polys(&RecurrenceFamily::hermite(2), 4).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let fam: RecurrenceFamily = r#"{"a": ["1", "1"], "b": ["0", "1/2"], "c": ["0", "-3/4"]}"#.parse().unwrap();
        assert_eq!(fam.name, "custom");
        assert_eq!(fam.b[1], rat(1, 2));
        assert!(!fam.is_positive());
        let back: RecurrenceFamily = serde_json::to_string(&fam).unwrap().parse().unwrap();
        assert_eq!(back, fam);
    }

    #[test]
    fn even_runs_are_zero_free() {
        for fam in [RecurrenceFamily::charlier(&int(2), 7), RecurrenceFamily::laguerre(&rat(1, 2), 7)] {
            let r = karlin_szego_check(&fam, 6).unwrap();
            assert!(r.passed, "{r}");
            assert_eq!(r.cases, 9);
        }
    }
}
