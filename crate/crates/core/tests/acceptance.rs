//! Acceptance criteria, one status line each.
//!
//! Asserted identities make the binary exit nonzero when they fail. Items
//! that are evidence for conjectured statements are printed with their
//! tallies and never change the exit status.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use exop::conjecture::{conjecture_sweep, direction_reports, RecurrenceFamily};
use exop::exceptional::{alt_form_check, hermite_omega, invariance_check};
use exop::families::{
    charlier_duality_check, default_limit_parameters, default_limit_points, hermite_limit_check, CharlierFamily,
    Family, LimitTarget,
};
use exop::fsets::FiniteSet;
use exop::measures::{christoffel_duality_check, norm_check, positivity_equivalence_check};
use exop::operators::{darboux_down, darboux_split, symmetry_pearson_check, verify_eigen};
use exop::polycore::{int, rat, Poly, Rational};
use exop::{Error, VerificationReport};
use num_bigint::BigInt;
use rayon::prelude::*;

/// Working precision for certified numerics, in bits.
const PRECISION: u32 = 256;

fn tol_exp10(e: usize) -> Rational {
    Rational::new(1.into(), num_traits::pow(BigInt::from(10), e))
}

/// Outcome of one criterion.
struct Line {
    pass: bool,
    blocking: bool,
    detail: String,
}

impl Line {
    fn asserted(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            blocking: !pass,
            detail: detail.into(),
        }
    }
}

fn sets_with(max_fk: u32, max_k: usize) -> Vec<FiniteSet> {
    FiniteSet::all_with_max(max_fk).into_iter().filter(|s| s.k() <= max_k).collect()
}

/// Folds reports into a single one; returns it with the first blocking report's text.
fn merge(name: &str, reports: Vec<exop::Result<VerificationReport>>) -> (VerificationReport, Option<String>) {
    let mut all = VerificationReport::asserted(name);
    let mut first = None;
    for r in reports {
        match r {
            Ok(r) => {
                if first.is_none() && r.blocks() {
                    first = Some(r.to_string());
                }
                all.absorb(r);
            }
            Err(e) => {
                first.get_or_insert_with(|| e.to_string());
                all.fail("error", || (e.to_string(), ""));
            }
        }
    }
    (all, first)
}

fn summary(r: &VerificationReport, first: Option<String>) -> String {
    let mut s = format!("cases={} vacuous={} failures={}", r.cases, r.vacuous, r.failure_count);
    if let Some(f) = first {
        s.push_str(&format!(" first: {f}"));
    }
    s
}

fn eigen(family_of: impl Fn() -> Vec<Family> + Sync) -> Line {
    let sets = sets_with(6, 4);
    let reports: Vec<_> = family_of()
        .into_iter()
        .flat_map(|fam| sets.iter().map(move |s| (fam.clone(), s.clone())))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(fam, s)| {
            let ns: Vec<u64> = (0..=s.v() + 8).collect();
            verify_eigen(&s, &fam, &ns)
        })
        .collect();
    let (r, first) = merge("eigen", reports);
    Line::asserted(r.passed, format!("{} sets, {}, tolerance exact", sets.len(), summary(&r, first)))
}

fn criterion_1() -> Line {
    eigen(|| [int(1), rat(1, 2), int(3), int(-2)].into_iter().map(Family::Charlier).collect())
}

fn criterion_2() -> Line {
    eigen(|| vec![Family::Hermite])
}

fn criterion_3() -> Line {
    let omega = hermite_omega(&"1,2".parse().unwrap());
    let want = Poly::from_ints(&[4, 0, 8]);
    Line::asserted(omega == want, format!("Ω_{{1,2}} = {omega}, tolerance exact"))
}

fn criterion_4() -> Line {
    let sets = FiniteSet::all_with_max(7);
    let families: Vec<Family> = [int(1), int(2), int(-1)]
        .into_iter()
        .map(Family::Charlier)
        .chain([Family::Hermite])
        .collect();
    let reports: Vec<_> = families
        .iter()
        .flat_map(|f| sets.iter().map(move |s| (f, s)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(f, s)| invariance_check(s, f))
        .collect();
    let (r, first) = merge("invariance", reports);
    Line::asserted(r.passed, format!("{} sets, {}, tolerance exact", sets.len(), summary(&r, first)))
}

/// First parameter in the list for which the Charlier down-factorization's
/// hypothesis holds.
fn down_with_fallback(set: &FiniteSet) -> exop::Result<(Rational, exop::operators::Factors)> {
    let mut last = None;
    for a in [int(1), rat(1, 2), rat(1, 3), rat(2, 7)] {
        match darboux_down(set, &Family::Charlier(a.clone()), 3) {
            Ok((f, _)) => return Ok((a, f)),
            Err(e @ Error::Precondition(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one parameter tried"))
}

fn criterion_5() -> Line {
    let sets = FiniteSet::all_with_max(5);
    let results: Vec<_> = sets
        .par_iter()
        .map(|s| {
            let split_c = darboux_split(s, &Family::Charlier(int(1)), 3);
            let split_h = darboux_split(s, &Family::Hermite, 3);
            let down_h = darboux_down(s, &Family::Hermite, 3).map(|(f, _)| f);
            let down_c = down_with_fallback(s);
            (s.clone(), split_c, split_h, down_h, down_c)
        })
        .collect();
    let mut reports = Vec::new();
    let mut signs = BTreeSet::new();
    let mut fallback = Vec::new();
    for (s, split_c, split_h, down_h, down_c) in results {
        let down_c = down_c.map(|(a, f)| {
            if a != int(1) {
                fallback.push(format!("{s}:a={a}"));
            }
            f
        });
        for f in [split_c, split_h, down_h, down_c] {
            reports.push(f.map(|f| {
                for sh in f.shifts() {
                    signs.insert((sh.factorization.clone(), sh.sign));
                }
                f.report().clone()
            }));
        }
    }
    let (r, first) = merge("darboux", reports);
    let signs: Vec<String> = signs.into_iter().map(|(f, s)| format!("{f}:{s:+}")).collect();
    Line::asserted(
        r.passed,
        format!(
            "{} sets, {}, shift signs [{}], Charlier down at a≠1 for [{}], tolerance exact",
            sets.len(),
            summary(&r, first),
            signs.join(", "),
            fallback.join(" ")
        ),
    )
}

fn criterion_6() -> Line {
    let sets = FiniteSet::all_with_max(6);
    let families = [Family::Charlier(int(1)), Family::Hermite];
    let outcomes: Vec<_> = families
        .iter()
        .flat_map(|f| sets.iter().map(move |s| (f, s)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(f, s)| alt_form_check(s, f, 5))
        .collect();
    let mut asserted = Vec::new();
    let (mut agree, mut cases, mut undefined) = (0usize, 0usize, 0usize);
    for o in outcomes {
        match o {
            Ok(o) => {
                cases += o.evidence.cases;
                agree += o.evidence.cases - o.evidence.failure_count;
                undefined += o.evidence.notes.len();
                asserted.push(Ok(o.asserted));
            }
            Err(e) => asserted.push(Err(e)),
        }
    }
    let (r, first) = merge("alt_form", asserted);
    let evidence_full = agree == cases;
    Line {
        pass: r.passed && evidence_full,
        blocking: !r.passed,
        detail: format!(
            "v_F ≤ n ≤ v_F+5: {}; below v_F (evidence, non-blocking): {agree}/{cases} agree, \
             {undefined} Charlier indices undefined, expected 100%{}, tolerance exact",
            summary(&r, first),
            if evidence_full { "" } else { " NOT MET" }
        ),
    }
}

fn first_indices(set: &FiniteSet, count: usize) -> Vec<u64> {
    set.sigma().take(count).collect()
}

fn criterion_7() -> Line {
    let (discrete_tol, continuous_tol) = (tol_exp10(20), tol_exp10(12));
    let mut jobs: Vec<(FiniteSet, Family, Rational)> = Vec::new();
    for s in ["1,2", "1,2,3,4", "2,3"] {
        for a in [int(1), int(2)] {
            jobs.push((s.parse().unwrap(), Family::Charlier(a), discrete_tol.clone()));
        }
    }
    for s in ["1,2", "1,2,3,4"] {
        jobs.push((s.parse().unwrap(), Family::Hermite, continuous_tol.clone()));
    }
    let reports: Vec<_> = jobs
        .iter()
        .map(|(s, f, tol)| norm_check(s, f, &first_indices(s, 4), PRECISION, tol).map(|(r, _)| r))
        .collect();
    let (r, first) = merge("norms", reports);
    Line::asserted(
        r.passed,
        format!(
            "{}, relative tolerance 1e-20 (Charlier) / 1e-12 (Hermite), {PRECISION}-bit",
            summary(&r, first)
        ),
    )
}

fn criterion_8() -> Line {
    let (r, first) = merge("positivity", vec![positivity_equivalence_check(8, &int(1))]);
    Line::asserted(r.passed, format!("255 sets expected, {}, a=1, tolerance exact", summary(&r, first)))
}

fn criterion_9() -> Line {
    let mut targets: Vec<LimitTarget> = (0..=3)
        .map(|n| LimitTarget {
            set: FiniteSet::empty(),
            n,
        })
        .collect();
    targets.push(LimitTarget {
        set: "1,2".parse().unwrap(),
        n: 3,
    });
    let (params, points) = (default_limit_parameters(), default_limit_points());
    let reports = targets
        .iter()
        .map(|t| hermite_limit_check(t, &params, &points, PRECISION))
        .collect();
    let (r, first) = merge("limit", reports);
    Line::asserted(
        r.passed,
        format!("{}, a ∈ {{1e2,1e4,1e6}}, x ∈ {{0,1/2,1}}, {PRECISION}-bit strict decrease", summary(&r, first)),
    )
}

fn criterion_10() -> Line {
    let fam = RecurrenceFamily::hermite(8);
    let (records, s) = match conjecture_sweep(&fam, 8) {
        Ok(x) => x,
        Err(e) => return Line::asserted(false, e.to_string()),
    };
    let (forward, converse) = direction_reports(&fam, &records, fam.matches_hermite());
    Line::asserted(
        forward.passed && forward.kind == exop::CheckKind::Asserted,
        format!(
            "{} sets; admissible zero-free {}/{} (asserted); non-admissible with a zero {}/{} \
             (evidence, {} counterexamples); Sturm counts exact",
            s.records,
            s.admissible_zero_free,
            s.admissible,
            s.non_admissible_with_zero,
            s.non_admissible,
            converse.failure_count
        ),
    )
}

fn criterion_11() -> Line {
    let sets = FiniteSet::all_with_max(5);
    let mut reports: Vec<_> = sets
        .par_iter()
        .flat_map_iter(|s| {
            [Family::Charlier(int(1)), Family::Charlier(int(-2)), Family::Hermite]
                .into_iter()
                .map(move |f| symmetry_pearson_check(s, &f))
        })
        .collect();
    reports.push(CharlierFamily::new(int(3)).and_then(|f| charlier_duality_check(&f, 12, 12)));
    for s in ["1,2", "1,3", "2,3", "1,2,4,5"] {
        for a in [int(1), int(2)] {
            reports.push(christoffel_duality_check(&s.parse().unwrap(), &a, 8, 5));
        }
    }
    let (r, first) = merge("symmetry_duality", reports);
    Line::asserted(
        r.passed,
        format!(
            "{} sets for symmetry/Pearson, 13×13 Charlier duality grid, Christoffel dualities u ≤ 8; {}, tolerance exact",
            sets.len(),
            summary(&r, first)
        ),
    )
}

type Criterion = (&'static str, fn() -> Line);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("exact eigen-equation, Charlier", criterion_1),
        ("exact eigen-equation, Hermite", criterion_2),
        ("Hermite Ω_{1,2} = 8x²+4", criterion_3),
        ("invariance identities", criterion_4),
        ("Darboux factorizations", criterion_5),
        ("alternative determinantal forms", criterion_6),
        ("norm reproduction", criterion_7),
        ("positivity three-way equivalence", criterion_8),
        ("Charlier to Hermite limit", criterion_9),
        ("conjecture scan, proved direction", criterion_10),
        ("symmetry, Pearson and dualities", criterion_11),
    ];
    let mut blocking = false;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let line = run();
        blocking |= line.blocking;
        let status = if line.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {status} {name}: {} [{:.1}s]",
            i + 1,
            line.detail,
            t.elapsed().as_secs_f64()
        );
    }
    if blocking {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
