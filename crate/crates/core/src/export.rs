//! CSV output. Numbers carry 17 significant digits in Rust's
//! locale-independent scientific notation.

use std::fmt::Write;

use crate::gram::{GramMatrix, GridSpec};
use crate::linalg::C64;

pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// Header `k`, then `<m> re`, `<m> im` per column index; one row per `k`.
pub fn gram_csv(gram: &GramMatrix) -> String {
    let mut out = String::new();
    out.push_str(&quoted("k"));
    for m in &gram.indices {
        let _ = write!(out, ",{},{}", quoted(&format!("{m} re")), quoted(&format!("{m} im")));
    }
    out.push('\n');
    for (k, row) in gram.indices.iter().zip(&gram.entries) {
        out.push_str(&quoted(&k.to_string()));
        for g in row {
            let _ = write!(out, ",{},{}", format_f64(g.re), format_f64(g.im));
        }
        out.push('\n');
    }
    out
}

/// Header `x1..xd,re,im`; rows in the grid's row-major order.
pub fn grid_csv(grid: &GridSpec, values: &[C64]) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=grid.dim()).map(|j| format!("x{j}")).collect();
    let _ = writeln!(out, "{},re,im", header.join(","));
    for (i, v) in values.iter().enumerate() {
        for x in grid.point(i) {
            out.push_str(&format_f64(x));
            out.push(',');
        }
        let _ = writeln!(out, "{},{}", format_f64(v.re), format_f64(v.im));
    }
    out
}
