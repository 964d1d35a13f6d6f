use std::fmt::Write;

use serde::Serialize;

use super::{Outcome, VerificationReport, SCOPE_NOTE, VERSION};

#[derive(Serialize)]
struct Document<'a> {
    scope: &'a str,
    version: &'a str,
    passed: bool,
    reports: &'a [VerificationReport],
}

/// JSON document with one entry per check, in the given order.
pub fn render_structured(reports: &[VerificationReport]) -> String {
    let doc = Document {
        scope: SCOPE_NOTE,
        version: VERSION,
        passed: reports.iter().all(|r| r.passed()),
        reports,
    };
    serde_json::to_string_pretty(&doc).expect("reports serialize") + "\n"
}

fn cells(outcome: &Outcome) -> (&'static str, &str) {
    match outcome {
        Outcome::Pass => ("pass", ""),
        Outcome::Fail { witness } => ("FAIL", witness),
        Outcome::Skipped { reason } => ("skip", reason),
    }
}

pub fn render_table(reports: &[VerificationReport]) -> String {
    let mut out = format!("# {SCOPE_NOTE}\n# dehnfill {VERSION}\n");
    let mut totals = [0usize; 3];
    for r in reports {
        let _ = writeln!(out, "\n{} [{}] {}", r.check, r.anchor, r.summary);
        for rec in &r.records {
            let param = rec.param.map(|p| format!("{}={}", p.name, p.value)).unwrap_or_else(|| "-".into());
            let subject = rec.subject.as_deref().map(|s| format!(" @ {s}")).unwrap_or_default();
            let (status, witness) = cells(&rec.outcome);
            totals[match status {
                "pass" => 0,
                "FAIL" => 1,
                _ => 2,
            }] += 1;
            let _ = write!(out, "  {status:<4}  {param:<6}  {}{subject}", rec.assertion);
            if !witness.is_empty() {
                let _ = write!(out, "  ({witness})");
            }
            out.push('\n');
        }
    }
    let _ = writeln!(
        out,
        "\n{} checks: {} passed, {} failed, {} skipped",
        reports.len(),
        totals[0],
        totals[1],
        totals[2]
    );
    out
}
