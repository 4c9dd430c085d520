//! `exop verify`: runs identity suites and reports them as JSON.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use exop::exceptional::{alt_form_check, invariance_check, structure_check};
use exop::families::{
    charlier_duality_check, default_limit_parameters, default_limit_points, hermite_limit_check,
    verify_charlier_relations, verify_hermite_relations, CharlierFamily, Family, LimitTarget,
};
use exop::fsets::FiniteSet;
use exop::measures::{
    christoffel_duality_check, default_tolerances, norm_check, orthogonality_check, positivity_scan,
    q_recurrence_check, NormCheck,
};
use exop::operators::{darboux_down, darboux_split, symmetry_pearson_check, verify_eigen};
use exop::polycore::{format_rational, real_root_count, Rational, RootInterval};
use exop::exceptional::hermite_omega;
use exop::{Error, VerificationReport};
use serde::Serialize;

use crate::config::{config, parse_degrees, parse_rat, parse_set, parse_tolerance, sink, CliResult};
use crate::FamilyName;

pub const SUITES: [&str; 11] = [
    "eigen",
    "structure",
    "invariance",
    "darboux",
    "alt-forms",
    "duality",
    "symmetry",
    "norms",
    "recurrence",
    "limit",
    "positivity",
];

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated suites, or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Restrict to one family; both run by default.
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[arg(long, default_value = "")]
    pub set: String,
    #[arg(long, default_value = "1")]
    pub a: String,
    /// Highest degree for exact suites (default v_F + 8).
    #[arg(long)]
    pub nmax: Option<u64>,
    /// Degrees for the norm suite (default: first four of σ_F).
    #[arg(long)]
    pub n: Option<String>,
    /// Working precision in bits for certified numerics.
    #[arg(long, default_value_t = 256)]
    pub precision: u32,
    /// Relative tolerance for norm checks (default 1e-20 discrete, 1e-12 continuous).
    #[arg(long)]
    pub tol: Option<String>,
}

#[derive(Serialize)]
struct Output {
    config: BTreeMap<&'static str, String>,
    passed: bool,
    reports: Vec<VerificationReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    norms: Vec<NormCheck>,
}

struct Context {
    set: FiniteSet,
    a: Rational,
    nmax: u64,
    norm_ns: Vec<u64>,
    precision: u32,
    tol: Option<Rational>,
}

#[derive(Default)]
struct Collected {
    reports: Vec<VerificationReport>,
    norms: Vec<NormCheck>,
}

/// Hypotheses that do not hold for this input; the suite is skipped with a note.
fn is_inapplicable(e: &Error) -> bool {
    matches!(e, Error::Precondition(_) | Error::EmptySet | Error::InvalidParameter(_))
}

impl Collected {
    fn push(&mut self, suite: &str, ctx: &Context, family: &Family, r: exop::Result<VerificationReport>) -> CliResult<()> {
        match r {
            Ok(r) => self.reports.push(r),
            Err(e) if is_inapplicable(&e) => {
                let mut r = VerificationReport::asserted(suite)
                    .with_input("family", family.name())
                    .with_input("set", &ctx.set);
                r.note(format!("skipped: {e}"));
                self.reports.push(r.finish());
            }
            Err(e) => return Err(e.into()),
        }
        Ok(())
    }
}

fn run_suite(suite: &str, family: &Family, ctx: &Context, out: &mut Collected) -> CliResult<()> {
    let set = &ctx.set;
    match suite {
        "eigen" => out.push(suite, ctx, family, verify_eigen(set, family, &(0..=ctx.nmax).collect::<Vec<_>>()))?,
        "structure" => out.push(suite, ctx, family, structure_check(set, family, 5))?,
        "invariance" => out.push(suite, ctx, family, invariance_check(set, family))?,
        "darboux" => {
            out.push(suite, ctx, family, darboux_split(set, family, 5).map(|f| f.report().clone()))?;
            match darboux_down(set, family, 5) {
                Ok((f, evidence)) => {
                    out.reports.push(f.report().clone());
                    out.reports.push(evidence);
                }
                Err(e) => out.push("darboux_down", ctx, family, Err(e))?,
            }
        }
        "alt-forms" => match alt_form_check(set, family, 5) {
            Ok(o) => {
                out.reports.push(o.asserted);
                out.reports.push(o.evidence);
            }
            Err(e) => out.push(suite, ctx, family, Err(e))?,
        },
        "duality" => match family {
            Family::Charlier(a) => {
                out.push(suite, ctx, family, CharlierFamily::new(a.clone()).and_then(|f| charlier_duality_check(&f, 12, 12)))?;
                if !set.is_empty() {
                    out.push(suite, ctx, family, christoffel_duality_check(set, a, 8, 5))?;
                }
            }
            Family::Hermite => {}
        },
        "symmetry" => out.push(suite, ctx, family, symmetry_pearson_check(set, family))?,
        "norms" => {
            let tol = ctx.tol.clone().unwrap_or_else(|| {
                let (discrete, continuous) = default_tolerances();
                if matches!(family, Family::Charlier(_)) {
                    discrete
                } else {
                    continuous
                }
            });
            for check in [norm_check, orthogonality_check] {
                match check(set, family, &ctx.norm_ns, ctx.precision, &tol) {
                    Ok((r, rows)) => {
                        out.reports.push(r);
                        out.norms.extend(rows);
                    }
                    Err(e) => {
                        out.push("norms", ctx, family, Err(e))?;
                        break;
                    }
                }
            }
        }
        "recurrence" => match family {
            Family::Charlier(a) => {
                let cap = ctx.nmax.min(12) as u32;
                out.push(suite, ctx, family, CharlierFamily::new(a.clone()).and_then(|f| verify_charlier_relations(&f, cap)))?;
                out.push(suite, ctx, family, q_recurrence_check(set, a, &(0..=cap as u64).collect::<Vec<_>>()))?;
            }
            Family::Hermite => out.reports.push(verify_hermite_relations(ctx.nmax.min(16) as u32)),
        },
        "limit" => {
            // Family-independent; run once, attached to Hermite.
            if matches!(family, Family::Hermite) {
                let (params, points) = (default_limit_parameters(), default_limit_points());
                for n in set.sigma().take(4) {
                    let target = LimitTarget { set: set.clone(), n };
                    out.push(suite, ctx, family, hermite_limit_check(&target, &params, &points, ctx.precision))?;
                }
            }
        }
        "positivity" => out.push(suite, ctx, family, positivity(family, set))?,
        other => return Err(config(format!("unknown suite {other:?}; known: {}, all", SUITES.join(", ")))),
    }
    Ok(())
}

fn positivity(family: &Family, set: &FiniteSet) -> exop::Result<VerificationReport> {
    let admissible = set.is_admissible();
    let mut r = VerificationReport::asserted("positivity")
        .with_input("family", family.name())
        .with_input("set", set);
    match family {
        Family::Charlier(a) => {
            r = r.with_input("a", a);
            let v = positivity_scan(set, a)?;
            r.record("admissible ⇔ ρ positive ⇔ Ω sign-constant on ℕ", v.consistent(), || {
                (format!("{v:?}"), "all three equal")
            });
            r.note(if v.rho_positive {
                "positive measure"
            } else {
                "signed measure: ρ has negative masses, orthogonality holds for a possibly signed measure"
            });
        }
        Family::Hermite => {
            let zeros = real_root_count(&hermite_omega(set), &RootInterval::Whole)?;
            if admissible {
                r.record("admissible ⇒ Ω has no real zero", zeros == 0, || (format!("{zeros} real zeros"), "0"));
                r.note("positive weight e^{-x²}/Ω²");
            } else {
                r.note(format!(
                    "non-admissible: Ω has {zeros} real zeros; the weight e^{{-x²}}/Ω² is singular on ℝ"
                ));
            }
        }
    }
    Ok(r.finish())
}

pub fn run(args: &VerifyArgs, out: &Option<PathBuf>) -> CliResult<bool> {
    let set = parse_set(&args.set)?;
    let a = parse_rat("--a", &args.a)?;
    let tol = args.tol.as_deref().map(parse_tolerance).transpose()?;
    if !(32..=4096).contains(&args.precision) {
        return Err(config("--precision must be between 32 and 4096 bits"));
    }
    let suites: Vec<&str> = if args.suite == "all" {
        SUITES.to_vec()
    } else {
        args.suite.split(',').map(str::trim).collect()
    };
    if let Some(bad) = suites.iter().find(|s| !SUITES.contains(s)) {
        return Err(config(format!("unknown suite {bad:?}; known: {}, all", SUITES.join(", "))));
    }
    let families: Vec<Family> = match args.family {
        Some(FamilyName::Charlier) => vec![Family::Charlier(a.clone())],
        Some(FamilyName::Hermite) => vec![Family::Hermite],
        None => vec![Family::Charlier(a.clone()), Family::Hermite],
    };
    let ctx = Context {
        nmax: args.nmax.unwrap_or(set.v() + 8),
        norm_ns: match &args.n {
            Some(list) => parse_degrees(list)?,
            None => set.sigma().take(4).collect(),
        },
        precision: args.precision,
        tol,
        a,
        set,
    };

    let mut collected = Collected::default();
    for suite in &suites {
        for family in &families {
            run_suite(suite, family, &ctx, &mut collected)?;
        }
    }

    let passed = !collected.reports.iter().any(VerificationReport::blocks);
    let mut stderr = std::io::stderr().lock();
    for r in &collected.reports {
        writeln!(stderr, "{r}")?;
        for n in &r.notes {
            writeln!(stderr, "    note: {n}")?;
        }
    }
    if !collected.norms.is_empty() {
        writeln!(stderr, "{:>4} {:>4}  {:<44} {:<14} target", "n", "m", "value", "error bound")?;
        for c in &collected.norms {
            writeln!(
                stderr,
                "{:>4} {:>4}  {:<44} {:<14} {} {}",
                c.n,
                c.m,
                exop::certified::format_sci(&c.result.value, 36),
                exop::certified::format_sci(&c.result.error_bound, 4),
                c.target,
                if c.pass { "ok" } else { "FAIL" }
            )?;
        }
    }
    if let Some((r, w)) = collected.reports.iter().filter(|r| r.blocks()).find_map(|r| r.first_failure().map(|w| (r, w))) {
        writeln!(stderr, "first failure in {}: {}: {} != {}", r.check, w.case, w.lhs, w.rhs)?;
    }

    let mut config_echo = BTreeMap::new();
    config_echo.insert("set", ctx.set.to_string());
    config_echo.insert("a", format_rational(&ctx.a));
    config_echo.insert("suites", suites.join(","));
    config_echo.insert("nmax", ctx.nmax.to_string());
    config_echo.insert("precision", ctx.precision.to_string());
    let output = Output {
        config: config_echo,
        passed,
        reports: collected.reports,
        norms: collected.norms,
    };
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, &output)?;
    writeln!(w)?;
    w.flush()?;
    Ok(passed)
}
