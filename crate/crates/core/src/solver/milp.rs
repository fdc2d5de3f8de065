//! LP-format export of the fitting problem as a mixed-integer program.
//!
//! Each rated item gets a continuous error variable `e_i >= |d_i(x) - delta_i|`
//! written as two inequalities; the objective is `sum e_i`. For binary models
//! `d_i(x) = sum_{v_ij=0} x_j + sum_{v_ij=1} (1 - x_j)`. Ternary coordinates
//! are split as `x_j = p_j - m_j` with `p_j + m_j <= 1`, giving
//! `d_i = sum_{v_ij=1} m_j + sum_{v_ij=0} p_j`. Every row of item `i` is
//! multiplied by the denominator of `delta_i` so all coefficients are
//! integers and `e_i` keeps its original units.

use std::fmt::Write;

use serde::Serialize;

use super::FitInstance;
use crate::error::Result;
use crate::vector::Variant;

/// Soft limit on the length of a written line; longer rows continue on the
/// next line.
const LINE_WIDTH: usize = 78;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MilpSummary {
    pub binary_vars: usize,
    pub continuous_vars: usize,
    pub constraints: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilpExport {
    pub text: String,
    pub summary: MilpSummary,
}

struct Term {
    coef: i64,
    var: String,
}

pub fn export_milp(inst: &FitInstance, variant: Variant) -> Result<MilpExport> {
    let n = inst.dim();
    let m = inst.len();
    let mut out = String::new();
    let mut constraints = 0;

    writeln!(out, "\\ hyperfit {} export", variant.algorithm()).unwrap();
    writeln!(out, "\\ variant: {variant}, attributes: {n}, rated items: {m}").unwrap();
    writeln!(out, "Minimize").unwrap();
    let objective: Vec<Term> = (1..=m).map(|i| Term { coef: 1, var: format!("e_{i}") }).collect();
    write_row(&mut out, "obj", &objective, None);

    writeln!(out, "Subject To").unwrap();
    for (idx, (item, delta)) in inst.items().iter().zip(inst.dratings()).enumerate() {
        let i = idx + 1;
        let q = *delta.value().denom();
        let p = *delta.value().numer();
        // distance terms d_i(x) = constant + sum(coef * var)
        let (constant, dist_terms): (i64, Vec<Term>) = match variant {
            Variant::Binary => {
                let ones = item.bits().iter().filter(|&&b| b).count() as i64;
                let terms = item
                    .bits()
                    .iter()
                    .enumerate()
                    .map(|(j, &b)| Term { coef: if b { -1 } else { 1 }, var: format!("x_{}", j + 1) })
                    .collect();
                (ones, terms)
            }
            Variant::Ternary => {
                let terms = item
                    .bits()
                    .iter()
                    .enumerate()
                    .map(|(j, &b)| Term { coef: 1, var: format!("{}_{}", if b { 'm' } else { 'p' }, j + 1) })
                    .collect();
                (0, terms)
            }
        };
        // e_i >= d_i - delta_i  <=>  q e_i - q sum(...) >= q constant - p
        let mut upper = vec![Term { coef: q, var: format!("e_{i}") }];
        upper.extend(dist_terms.iter().map(|t| Term { coef: -q * t.coef, var: t.var.clone() }));
        write_row(&mut out, &format!("up_{i}"), &upper, Some(q * constant - p));
        // e_i >= delta_i - d_i  <=>  q e_i + q sum(...) >= p - q constant
        let mut lower = vec![Term { coef: q, var: format!("e_{i}") }];
        lower.extend(dist_terms.iter().map(|t| Term { coef: q * t.coef, var: t.var.clone() }));
        write_row(&mut out, &format!("lo_{i}"), &lower, Some(p - q * constant));
        constraints += 2;
    }
    if variant == Variant::Ternary {
        for j in 1..=n {
            writeln!(out, " one_{j}: p_{j} + m_{j} <= 1").unwrap();
            constraints += 1;
        }
    }

    writeln!(out, "Bounds").unwrap();
    for i in 1..=m {
        writeln!(out, " e_{i} >= 0").unwrap();
    }

    writeln!(out, "Binary").unwrap();
    let binaries: Vec<String> = match variant {
        Variant::Binary => (1..=n).map(|j| format!("x_{j}")).collect(),
        Variant::Ternary => (1..=n).flat_map(|j| [format!("p_{j}"), format!("m_{j}")]).collect(),
    };
    write_names(&mut out, &binaries);
    writeln!(out, "End").unwrap();

    Ok(MilpExport {
        text: out,
        summary: MilpSummary { binary_vars: binaries.len(), continuous_vars: m, constraints },
    })
}

fn write_row(out: &mut String, name: &str, terms: &[Term], rhs: Option<i64>) {
    let mut line = format!(" {name}:");
    for (k, term) in terms.iter().enumerate() {
        let mut piece = String::new();
        let magnitude = term.coef.abs();
        if k > 0 || term.coef < 0 {
            piece.push_str(if term.coef < 0 { " -" } else { " +" });
        }
        if magnitude != 1 {
            write!(piece, " {magnitude}").unwrap();
        }
        write!(piece, " {}", term.var).unwrap();
        if line.len() + piece.len() > LINE_WIDTH {
            out.push_str(&line);
            out.push('\n');
            line = String::from(" ");
        }
        line.push_str(&piece);
    }
    if let Some(rhs) = rhs {
        write!(line, " >= {rhs}").unwrap();
    }
    out.push_str(&line);
    out.push('\n');
}

fn write_names(out: &mut String, names: &[String]) {
    let mut line = String::new();
    for name in names {
        if !line.is_empty() && line.len() + name.len() + 1 > LINE_WIDTH {
            out.push_str(&line);
            out.push('\n');
            line.clear();
        }
        line.push(' ');
        line.push_str(name);
    }
    if !line.is_empty() {
        out.push_str(&line);
        out.push('\n');
    }
}
