use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Complex;

/// Outcome of one identity check: both sides, residuals and verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_id: String,
    pub parameters: BTreeMap<String, f64>,
    pub lhs: Complex,
    pub rhs: Complex,
    pub abs_residual: f64,
    /// `abs_residual / |rhs|`, or `abs_residual` itself when `rhs = 0`.
    pub rel_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(
        identity_id: impl Into<String>,
        parameters: &[(&str, f64)],
        lhs: Complex,
        rhs: Complex,
        tolerance: f64,
    ) -> Result<Self> {
        let identity_id = identity_id.into();
        let abs_residual = (lhs - rhs).norm();
        let scale = rhs.norm();
        let rel_residual = if scale > 0.0 { abs_residual / scale } else { abs_residual };
        if !abs_residual.is_finite() || !rel_residual.is_finite() {
            return Err(Error::NonConvergence {
                what: "verification residual",
                detail: format!("{}: lhs = {}, rhs = {}", identity_id, lhs, rhs),
            });
        }
        let mut report = Self {
            identity_id,
            parameters: parameters.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            lhs,
            rhs,
            abs_residual,
            rel_residual,
            tolerance,
            pass: false,
        };
        report.pass = report.recompute_pass();
        Ok(report)
    }

    pub fn real(identity_id: impl Into<String>, parameters: &[(&str, f64)], lhs: f64, rhs: f64, tolerance: f64) -> Result<Self> {
        Self::new(identity_id, parameters, Complex::new(lhs, 0.0), Complex::new(rhs, 0.0), tolerance)
    }

    /// `abs_residual <= tolerance || rel_residual <= tolerance`.
    pub fn recompute_pass(&self) -> bool {
        self.abs_residual <= self.tolerance || self.rel_residual <= self.tolerance
    }

    /// The same comparison judged at another tolerance.
    pub fn at_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.recompute_pass();
        self
    }

    pub fn with_parameter(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn parameter(&self, key: &str) -> Option<f64> {
        self.parameters.get(key).copied()
    }

    /// Parameters as `key=value` pairs joined by `;`, keys sorted.
    pub fn params_string(&self) -> String {
        self.parameters
            .iter()
            .map(|(k, v)| format!("{}={}", k, format_number(*v)))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Column order of the CSV serialization.
pub const CSV_COLUMNS: [&str; 10] = [
    "identity_id",
    "params",
    "lhs_re",
    "lhs_im",
    "rhs_re",
    "rhs_im",
    "abs_residual",
    "rel_residual",
    "tolerance",
    "pass",
];

pub fn write_csv<W: std::io::Write>(reports: &[VerificationReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidConfig(format!("writing CSV: {}", e));
    w.write_record(CSV_COLUMNS).map_err(io)?;
    for r in reports {
        w.write_record([
            r.identity_id.clone(),
            r.params_string(),
            format_number(r.lhs.re),
            format_number(r.lhs.im),
            format_number(r.rhs.re),
            format_number(r.rhs.im),
            format_number(r.abs_residual),
            format_number(r.rel_residual),
            format_number(r.tolerance),
            r.pass.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidConfig(format!("writing CSV: {}", e)))?;
    Ok(())
}

/// The reports as a JSON document with the same fields.
pub fn to_json(reports: &[VerificationReport]) -> Result<String> {
    serde_json::to_string_pretty(reports).map_err(|e| Error::InvalidConfig(format!("serializing reports: {}", e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residuals_and_pass_rule() {
        let r = VerificationReport::real("x", &[("a", 1.0)], 1.0 + 1e-9, 1.0, 1e-8).unwrap();
        assert!(r.pass && r.recompute_pass());
        assert!((r.rel_residual - 1e-9).abs() < 1e-15);
        let r = r.at_tolerance(1e-10);
        assert!(!r.pass);
        // rhs = 0: relative residual falls back to the absolute one
        let r = VerificationReport::real("y", &[], 3e-3, 0.0, 1e-2).unwrap();
        assert_eq!(r.rel_residual, r.abs_residual);
        assert!(r.pass);
        assert!(VerificationReport::real("z", &[], f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn csv_layout_and_round_trip() {
        let r = VerificationReport::real("dup", &[("xi", 0.1), ("b", 2.0)], 0.1 + 0.2, 0.3, 1e-12).unwrap();
        let mut buf = Vec::new();
        write_csv(&[r.clone()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "dup");
        assert_eq!(row[1], "b=2.0000000000000000e0;xi=1.0000000000000001e-1");
        assert_eq!(row[2].parse::<f64>().unwrap(), r.lhs.re);
        let json = to_json(&[r.clone()]).unwrap();
        let back: Vec<VerificationReport> = serde_json::from_str(&json).unwrap();
        assert_eq!(back[0], r);
    }
}
