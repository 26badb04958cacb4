//! CPLEX-LP text dump for cross-checking with external solvers.
//!
//! The format has no fractions, so coefficients are written as the nearest
//! `f64`; the dump is for inspection and is not part of any certificate.

use std::fmt::Write;

use super::{LinearProgram, VarBound};
use crate::scalar::Scalar;

fn term<S: Scalar>(out: &mut String, c: &S, var: usize) {
    let v = c.to_f64_lossy();
    let sign = if v < 0.0 { '-' } else { '+' };
    let _ = write!(out, " {sign} {:?} y{var}", v.abs());
}

pub fn to_cplex_lp<S: Scalar>(lp: &LinearProgram<S>) -> String {
    let mut out = String::from("\\ dynproof linear program\nMinimize\n obj:");
    for (j, c) in lp.objective.iter().enumerate() {
        if !c.is_zero() {
            term(&mut out, c, j);
        }
    }
    out.push_str("\nSubject To\n");
    let mut rows: Vec<Vec<(usize, &S)>> = vec![Vec::new(); lp.num_rows];
    for (j, col) in lp.columns.iter().enumerate() {
        for (r, v) in col {
            rows[*r].push((j, v));
        }
    }
    for (i, row) in rows.iter().enumerate() {
        let _ = write!(out, " r{i}:");
        if row.is_empty() {
            out.push_str(" 0 y0");
        }
        for (j, v) in row {
            term(&mut out, *v, *j);
        }
        let _ = writeln!(out, " = {:?}", lp.rhs[i].to_f64_lossy());
    }
    out.push_str("Bounds\n");
    for (j, b) in lp.bounds.iter().enumerate() {
        if *b == VarBound::Free {
            let _ = writeln!(out, " y{j} free");
        }
    }
    out.push_str("End\n");
    out
}
