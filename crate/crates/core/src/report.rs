//! CSV and table emission.
//!
//! All floating-point output uses 17 significant digits so that doubles
//! round-trip losslessly and repeated runs produce byte-identical files.

use crate::model::MainInequalityReport;

/// Format a double with 17 significant digits (lossless round-trip).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Minimal CSV assembler: comma separator, `.` decimal, one header row.
pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new<S: Into<String>>(header: Vec<S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<S: Into<String>>(&mut self, cells: Vec<S>) {
        let cells: Vec<String> = cells.into_iter().map(Into::into).collect();
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Render the frequency-inequality report as an aligned text table.
pub fn inequality_table(report: &MainInequalityReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<10} {:>24} {:>24} {:>24} {:>20}\n",
        "orbit", "action", "intersections", "ratio", "verdict"
    ));
    for row in &report.rows {
        out.push_str(&format!(
            "{:<10} {:>24} {:>24} {:>24} {:>20}\n",
            row.label,
            fmt_f64(row.action),
            fmt_f64(row.intersections),
            fmt_f64(row.ratio),
            row.verdict.to_string()
        ));
    }
    out.push_str(&format!(
        "threshold (area/volume) = {}\n",
        fmt_f64(report.threshold)
    ));
    match report.sup_ratio {
        Some(sup) => out.push_str(&format!("sup ratio               = {}\n", fmt_f64(sup))),
        None => out.push_str("sup ratio               = -inf (no orbits)\n"),
    }
    out.push_str(&format!(
        "strict hypothesis: {}   lower bound witnessed: {}\n",
        if report.strict_hypothesis_holds {
            "holds"
        } else if report.any_equality {
            "fails (equality within tol)"
        } else {
            "fails"
        },
        report.lower_bound_witnessed
    ));
    out
}
