//! Scenario runner and reproduction catalog for quantized matrix games:
//! JSON configs in, JSON reports out, plus a fixed catalog of published case
//! studies with stored expected verdicts.

pub mod catalog;
pub mod config;
pub mod csv;
pub mod scenario;

use std::io::Write;

/// Print the per-assertion table for finished cases and return the total
/// failure count.
pub fn print_case_results(cases: &[catalog::CaseRun], out: &mut impl Write) -> std::io::Result<usize> {
    let mut failures = 0;
    for case in cases {
        writeln!(out, "[case {}]", case.id)?;
        for assertion in &case.assertions {
            let mark = if assertion.passed { "PASS" } else { "FAIL" };
            writeln!(out, "  {mark}  {} — {}", assertion.name, assertion.detail)?;
        }
        for note in &case.notes {
            writeln!(out, "  note: {note}")?;
        }
        failures += case.failures();
    }
    Ok(failures)
}
