//! CSV output for tree-pressure runs and estimator comparisons.
//!
//! Reals are written with 17 significant digits so they round-trip exactly;
//! `−∞` is written as `-inf`. The header carries a trailing `schema=1` column
//! (every row holds `1` there) so readers can check the layout.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::extended::ExtendedReal;
use crate::pressure::{Diagnostics, PressureEstimate, TreePressureRun};

pub const CSV_SCHEMA_VERSION: u32 = 1;

pub const TREE_HEADER: [&str; 8] = [
    "n",
    "estimate",
    "log_sum",
    "leaf_count",
    "pole_hits",
    "min_pole_distance",
    "cauchy_increment",
    "elapsed_ms",
];

pub const COMPARE_HEADER: [&str; 4] = ["method", "value", "parameters", "discrepancy"];

pub fn fmt_real(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else {
        format!("{v:.16e}")
    }
}

pub fn fmt_extended(v: ExtendedReal) -> String {
    fmt_real(v.to_f64())
}

fn header(cols: &[&str]) -> String {
    format!("{},schema={CSV_SCHEMA_VERSION}\n", cols.join(","))
}

/// One row per depth. Empty cells mean "not applicable".
pub fn tree_csv(run: &TreePressureRun) -> String {
    let mut out = header(&TREE_HEADER);
    for (e, inc) in run.estimates.iter().zip(&run.cauchy_increments) {
        let Diagnostics::Tree(fold) = &e.diagnostics else {
            continue;
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{CSV_SCHEMA_VERSION}",
            e.size,
            fmt_extended(e.value),
            fmt_extended(fold.log_sum),
            fold.leaf_count,
            fold.pole_hits,
            fold.min_pole_distance.map(fmt_real).unwrap_or_default(),
            inc.map(fmt_real).unwrap_or_default(),
            fmt_real(fold.elapsed_ms),
        );
    }
    out
}

/// One row per estimator; discrepancies are taken against the first row.
pub fn compare_csv(estimates: &[PressureEstimate]) -> String {
    let mut out = header(&COMPARE_HEADER);
    let Some(first) = estimates.first() else {
        return out;
    };
    let reference = first.value.to_f64();
    for e in estimates {
        let params = match e.method {
            crate::pressure::Method::Tree => format!("n={}", e.size),
            crate::pressure::Method::Ulam => format!("bins={}", e.size),
            crate::pressure::Method::Periodic => format!("n={}", e.size),
            crate::pressure::Method::Exact => String::new(),
        };
        let method = serde_json::to_value(e.method)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{method},{},{params},{},{CSV_SCHEMA_VERSION}",
            fmt_extended(e.value),
            fmt_real(e.value.to_f64() - reference),
        );
    }
    out
}

pub fn write_to<W: Write>(mut w: W, csv: &str) -> io::Result<()> {
    w.write_all(csv.as_bytes())?;
    w.flush()
}
