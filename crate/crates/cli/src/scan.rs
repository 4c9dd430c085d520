//! `exop scan`: conjecture sweeps and below-`v_F` evidence as JSON lines.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use exop::conjecture::{
    conjecture_sweep, direction_reports, evidence_sweep, karlin_szego_check, EvidenceScope, EvidenceTally,
    RecurrenceFamily,
};
use serde::Serialize;

use crate::config::{config, parse_rat, parse_rat_list, sink, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanFamily {
    Hermite,
    Charlier,
    Laguerre,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Built-in recurrence family (default hermite).
    #[arg(long, value_enum, conflicts_with = "family_file")]
    pub family: Option<ScanFamily>,
    /// JSON file `{"a": [...], "b": [...], "c": [...]}` with `p/q` strings.
    #[arg(long)]
    pub family_file: Option<PathBuf>,
    /// Charlier parameter or Laguerre α; a comma list for --evidence.
    #[arg(long, default_value = "1")]
    pub a: String,
    /// Largest element of the scanned sets.
    #[arg(long, default_value_t = 8)]
    pub max_fk: u32,
    /// Run a below-v_F evidence sweep instead: `alt-forms` or `darboux-down`.
    #[arg(long, conflicts_with_all = ["family", "family_file"])]
    pub evidence: Option<String>,
    /// Use the monic rescaling of the recurrence.
    #[arg(long)]
    pub monic: bool,
    /// Also assert zero-free Wronskians for even runs of consecutive integers.
    #[arg(long)]
    pub karlin_szego: bool,
}

#[derive(Serialize)]
struct Summary<T: Serialize> {
    summary: T,
}

pub fn run(args: &ScanArgs, out: &Option<PathBuf>) -> CliResult<bool> {
    if !(1..=16).contains(&args.max_fk) {
        return Err(config("--max-fk must be between 1 and 16"));
    }
    if let Some(scope) = &args.evidence {
        return run_evidence(scope.parse()?, args, out);
    }
    let len = args.max_fk as usize;
    let mut fam = match (&args.family_file, args.family) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| config(format!("{}: {e}", path.display())))?;
            let mut fam: RecurrenceFamily = text.parse()?;
            if fam.name == "custom" {
                fam.name = path.display().to_string();
            }
            fam
        }
        (None, Some(ScanFamily::Charlier)) => RecurrenceFamily::charlier(&parse_rat("--a", &args.a)?, len),
        (None, Some(ScanFamily::Laguerre)) => RecurrenceFamily::laguerre(&parse_rat("--a", &args.a)?, len),
        (None, Some(ScanFamily::Hermite) | None) => RecurrenceFamily::hermite(len),
    };
    if args.monic {
        fam = fam.monic();
    }
    if args.karlin_szego && !fam.is_positive() {
        return Err(config(format!("--karlin-szego needs a positive-measure family; {} is not", fam.name)));
    }
    let (records, summary) = conjecture_sweep(&fam, args.max_fk)?;
    let proved = fam.matches_hermite();
    let (forward, converse) = direction_reports(&fam, &records, proved);
    let karlin = if args.karlin_szego {
        Some(karlin_szego_check(&fam, args.max_fk)?)
    } else {
        None
    };

    let mut w = sink(out)?;
    for r in &records {
        serde_json::to_writer(&mut w, r)?;
        writeln!(w)?;
    }
    serde_json::to_writer(&mut w, &Summary { summary: &summary })?;
    writeln!(w)?;
    w.flush()?;

    let mut stderr = std::io::stderr().lock();
    writeln!(
        stderr,
        "{}: {} sets, admissible zero-free {}/{}, non-admissible with a zero {}/{}, degenerate {}, agreement {:.1}%",
        summary.family,
        summary.records,
        summary.admissible_zero_free,
        summary.admissible,
        summary.non_admissible_with_zero,
        summary.non_admissible,
        summary.degenerate,
        summary.agreement_percent()
    )?;
    writeln!(stderr, "{forward}")?;
    writeln!(stderr, "{converse}")?;
    if let Some(k) = &karlin {
        writeln!(stderr, "{k}")?;
    }
    if !summary.positive_measure {
        writeln!(stderr, "note: the recurrence is not that of a positive measure; the conjecture does not apply")?;
    }
    Ok(!forward.blocks() && !karlin.is_some_and(|k| k.blocks()))
}

fn run_evidence(scope: EvidenceScope, args: &ScanArgs, out: &Option<PathBuf>) -> CliResult<bool> {
    let a_list = parse_rat_list("--a", &args.a)?;
    let reports = evidence_sweep(scope, args.max_fk, &a_list);
    let tally = EvidenceTally::from_reports(scope, &reports);
    let mut w = sink(out)?;
    for r in &reports {
        serde_json::to_writer(&mut w, r)?;
        writeln!(w)?;
    }
    serde_json::to_writer(&mut w, &Summary { summary: &tally })?;
    writeln!(w)?;
    w.flush()?;
    writeln!(
        std::io::stderr(),
        "{scope}: {} reports, {} cases, {} agree, {} disagree, {} not evaluated",
        tally.reports,
        tally.cases,
        tally.agreeing,
        tally.disagreeing,
        tally.not_evaluated
    )?;
    Ok(true)
}
