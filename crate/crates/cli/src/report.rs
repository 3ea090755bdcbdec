use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::suite::{CheckReport, CHECKS};

fn number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6e}")
    } else {
        "-".to_string()
    }
}

/// One CSV row per check: check, anchor, criterion, measured, tolerance, verdict.
pub fn write_summary_csv(reports: &[CheckReport], w: &mut dyn io::Write) -> io::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["check", "anchor", "criterion", "measured", "tolerance", "verdict"])?;
    for r in reports {
        wtr.write_record([
            r.check.clone(),
            r.anchor.clone(),
            r.criterion.map_or(String::new(), |c| c.to_string()),
            number(r.measured),
            number(r.tolerance),
            r.verdict.label().to_string(),
        ])?;
    }
    wtr.flush()
}

/// Plain-text table; a missing report is listed as SKIPPED. Returns the table and whether
/// every listed check passed.
pub fn render_table(names: &[&str], reports: &[Option<&CheckReport>]) -> (String, bool) {
    let rows: Vec<[String; 5]> = names
        .iter()
        .zip(reports)
        .map(|(name, r)| match r {
            Some(r) => [r.check.clone(), r.anchor.clone(), number(r.measured), number(r.tolerance), r.verdict.label().to_string()],
            None => {
                let anchor = CHECKS.iter().find(|c| c.name == *name).map_or("", |c| c.anchor);
                [name.to_string(), anchor.to_string(), "-".into(), "-".into(), "SKIPPED".into()]
            }
        })
        .collect();
    let header = ["check", "anchor", "measured", "tolerance", "verdict"];
    let mut width = header.map(|h| h.chars().count());
    for row in &rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        let padded: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(&header.map(String::from));
    for row in &rows {
        line(row);
    }
    let passed = reports.iter().all(|r| r.is_some_and(|r| r.passed()));
    let count = reports.iter().filter(|r| r.is_some_and(|r| r.passed())).count();
    let _ = writeln!(out, "{count} of {} checks passed", names.len());
    (out, passed)
}

/// Reads checks/<name>.json for every registered check under `dir`.
pub fn emit_report(dir: &Path) -> (String, bool) {
    let names: Vec<&str> = CHECKS.iter().map(|c| c.name).collect();
    let loaded: Vec<Option<CheckReport>> = names
        .iter()
        .map(|n| {
            let text = std::fs::read_to_string(dir.join("checks").join(format!("{n}.json"))).ok()?;
            serde_json::from_str(&text).ok()
        })
        .collect();
    let refs: Vec<Option<&CheckReport>> = loaded.iter().map(Option::as_ref).collect();
    render_table(&names, &refs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_directory_is_all_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let (table, ok) = emit_report(dir.path());
        assert!(!ok);
        assert_eq!(table.matches("SKIPPED").count(), CHECKS.len());
    }

    #[test]
    fn missing_tolerance_round_trips() {
        let r = CheckReport {
            check: "x".into(),
            anchor: "a".into(),
            criterion: None,
            level: crate::suite::Level::Fast,
            seed: 1,
            measured: 0.5,
            tolerance: f64::NAN,
            verdict: crate::suite::CheckVerdict::Pass,
            notes: vec![],
            details: serde_json::Value::Null,
        };
        let back: CheckReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert!(back.tolerance.is_nan() && back.passed());
    }
}
