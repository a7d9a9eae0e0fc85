//! Human-readable model dump in LP text format, for eyeballing and for
//! cross-checking a model against external tools.

use crate::generic::{Model, Relation, Scalar, Sense, VarKind};
use std::io::{self, Write};

pub fn write_lp<S: Scalar, W: Write>(model: &Model<S>, out: &mut W) -> io::Result<()> {
    writeln!(out, "{}", if model.sense() == Sense::Maximize { "Maximize" } else { "Minimize" })?;
    write!(out, " obj:")?;
    let mut any = false;
    for j in 0..model.num_vars() {
        let c = model.objective_coeff(j);
        if c != S::zero() {
            write!(out, " {}{} x{}", if c >= S::zero() { "+" } else { "-" }, c.abs(), j)?;
            any = true;
        }
    }
    if !any {
        write!(out, " 0 x0")?;
    }
    writeln!(out, "\nSubject To")?;
    for (i, row) in model.rows.iter().enumerate() {
        write!(out, " c{}:", i)?;
        for &(j, a) in &row.coeffs {
            write!(out, " {}{} x{}", if a >= S::zero() { "+" } else { "-" }, a.abs(), j)?;
        }
        let rel = match row.rel {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        };
        writeln!(out, " {} {}", rel, row.rhs)?;
    }
    writeln!(out, "Bounds")?;
    for j in 0..model.num_vars() {
        let (l, u) = model.bounds(j);
        match (l.is_finite(), u.is_finite()) {
            (true, true) => writeln!(out, " {} <= x{} <= {}", l, j, u)?,
            (true, false) => writeln!(out, " x{} >= {}", j, l)?,
            (false, true) => writeln!(out, " -inf <= x{} <= {}", j, u)?,
            (false, false) => writeln!(out, " x{} free", j)?,
        }
    }
    let bins: Vec<String> =
        (0..model.num_vars()).filter(|&j| model.var_kind(j) == VarKind::Binary).map(|j| format!("x{}", j)).collect();
    if !bins.is_empty() {
        writeln!(out, "Binary")?;
        writeln!(out, " {}", bins.join(" "))?;
    }
    writeln!(out, "End")
}
