use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lab::report::{format_number, InequalityReport};
use crate::solver::DiagnosticsRecord;

pub const DIAGNOSTICS_HEADER: &str = "t,dt,l2,l4,l8,h1dot,hm1dot,sup_p_ratio,grad_u_sup,energy_gamma";

/// One parsed line of a diagnostics CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub dt: f64,
    pub l2: f64,
    pub l4: f64,
    pub l8: f64,
    pub h1dot: f64,
    pub hm1dot: f64,
    pub sup_p_ratio: f64,
    pub grad_u_sup: f64,
    pub energy_gamma: f64,
}

impl DiagnosticsRow {
    pub fn from_record(r: &DiagnosticsRecord) -> Self {
        let n = &r.norms;
        DiagnosticsRow {
            t: r.t,
            dt: r.dt_used,
            l2: n.l2,
            l4: n.lp(4).unwrap_or(f64::NAN),
            l8: n.lp(8).unwrap_or(f64::NAN),
            h1dot: n.h1dot,
            hm1dot: n.hm1dot,
            sup_p_ratio: n.sup_p_ratio,
            grad_u_sup: n.grad_u_sup,
            energy_gamma: n.energy_gamma,
        }
    }

    fn values(&self) -> [f64; 10] {
        [
            self.t,
            self.dt,
            self.l2,
            self.l4,
            self.l8,
            self.h1dot,
            self.hm1dot,
            self.sup_p_ratio,
            self.grad_u_sup,
            self.energy_gamma,
        ]
    }

    fn from_values(v: [f64; 10]) -> Self {
        DiagnosticsRow {
            t: v[0],
            dt: v[1],
            l2: v[2],
            l4: v[3],
            l8: v[4],
            h1dot: v[5],
            hm1dot: v[6],
            sup_p_ratio: v[7],
            grad_u_sup: v[8],
            energy_gamma: v[9],
        }
    }
}

pub fn diagnostics_csv(records: &[DiagnosticsRecord]) -> String {
    let mut out = String::from(DIAGNOSTICS_HEADER);
    out.push('\n');
    for r in records {
        let row = DiagnosticsRow::from_record(r).values().map(format_number);
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_diagnostics_csv(path: impl AsRef<Path>, records: &[DiagnosticsRecord]) -> Result<()> {
    if records.is_empty() {
        return Err(Error::param("records", "nothing to write"));
    }
    let path = path.as_ref();
    fs::write(path, diagnostics_csv(records)).map_err(|e| Error::io(path, e))
}

pub fn parse_diagnostics_csv(text: &str) -> Result<Vec<DiagnosticsRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == DIAGNOSTICS_HEADER => {}
        other => {
            return Err(Error::Format(format!(
                "expected header `{DIAGNOSTICS_HEADER}`, found {other:?}"
            )))
        }
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 10 {
                return Err(Error::Format(format!(
                    "line {}: expected 10 columns, found {}",
                    i + 2,
                    fields.len()
                )));
            }
            let mut v = [0.0; 10];
            for (slot, f) in v.iter_mut().zip(&fields) {
                *slot = f.trim().parse().map_err(|_| {
                    Error::Format(format!("line {}: `{f}` is not a number", i + 2))
                })?;
            }
            Ok(DiagnosticsRow::from_values(v))
        })
        .collect()
}

pub fn read_diagnostics_csv(path: impl AsRef<Path>) -> Result<Vec<DiagnosticsRow>> {
    let path = path.as_ref();
    parse_diagnostics_csv(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}

pub fn write_report_csv(path: impl AsRef<Path>, report: &InequalityReport) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, report.to_csv()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::NormBundle;

    fn record(t: f64) -> DiagnosticsRecord {
        DiagnosticsRecord {
            t,
            step: 0,
            dt_used: t / 3.0,
            norms: NormBundle {
                l2: 1.0 / 7.0,
                h1dot: std::f64::consts::PI,
                hm1dot: 1e-300,
                lp: vec![(4, 0.1), (8, 2.0f64.sqrt())],
                sup_p_ratio: 0.3,
                grad_u_sup: 1e10 / 3.0,
                energy_gamma: f64::MIN_POSITIVE,
            },
            aliasing_energy_discarded: 0.0,
        }
    }

    #[test]
    fn csv_round_trips_exactly() {
        let recs = vec![record(0.0), record(0.1), record(1.0 / 3.0)];
        let text = diagnostics_csv(&recs);
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().all(|l| l.split(',').count() == 10));
        let rows = parse_diagnostics_csv(&text).unwrap();
        for (r, rec) in rows.iter().zip(&recs) {
            assert_eq!(*r, DiagnosticsRow::from_record(rec));
        }
        assert_eq!(diagnostics_csv(&recs[..1]).lines().count(), 2);
    }

    #[test]
    fn malformed_csv_is_rejected() {
        assert!(parse_diagnostics_csv("a,b\n").is_err());
        let bad = format!("{DIAGNOSTICS_HEADER}\n1,2,3\n");
        assert!(parse_diagnostics_csv(&bad).is_err());
        let bad = format!("{DIAGNOSTICS_HEADER}\n1,2,3,4,5,6,7,8,9,x\n");
        assert!(parse_diagnostics_csv(&bad).is_err());
    }
}
