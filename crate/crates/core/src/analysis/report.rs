use std::fmt::Write as _;

use serde_json::{json, Value};

use super::{generation_degree, reproduction_degree, ParamShift, Witness};
use crate::mask::Mask;
use crate::rational::format_rational;

pub const DEFAULT_CAP: u32 = 10;

const NONSINGULARITY_NOTE: &str = "degrees are algebraic certificates; equating them with \
     reproduction of limit functions additionally assumes the scheme is non-singular \
     (for convergent schemes the conditions are sufficient)";

/// Everything `analyze` certifies about a mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisReport {
    pub dimension: usize,
    pub dilation: i64,
    pub cap: u32,
    pub sum_rules_order_1: bool,
    pub generation_degree: Option<u32>,
    /// Violations at the first failing degree of the generation search.
    pub generation_violations: Vec<Witness>,
    pub tau: Option<ParamShift>,
    pub reproduction_degree: Option<u32>,
    /// Violations at the first failing degree of the reproduction search.
    pub reproduction_violations: Vec<Witness>,
    pub interpolatory: bool,
}

pub fn analyze(mask: &Mask, cap: u32) -> AnalysisReport {
    let generation = generation_degree(mask, cap);
    let (tau, reproduction) = reproduction_degree(mask, cap);
    AnalysisReport {
        dimension: mask.dimension(),
        dilation: mask.dilation(),
        cap,
        sum_rules_order_1: generation.degree.is_some(),
        generation_degree: generation.degree,
        generation_violations: generation.violations,
        tau,
        reproduction_degree: reproduction.degree,
        reproduction_violations: reproduction.violations,
        interpolatory: mask.is_interpolatory(),
    }
}

fn fmt_degree(d: Option<u32>, cap: u32) -> String {
    match d {
        None => "none".to_string(),
        Some(d) if d == cap => format!("{d} (cap reached)"),
        Some(d) => d.to_string(),
    }
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::SumAtOne { value, expected } => json!({
            "kind": "sum_at_one",
            "lhs": format_rational(value),
            "rhs": format_rational(expected),
        }),
        Witness::DerivativeAtOne { j, lhs, rhs } => json!({
            "kind": "derivative_at_one",
            "j": j.entries(),
            "lhs": format_rational(lhs),
            "rhs": format_rational(rhs),
        }),
        Witness::NonzeroAtCoset { coset, j, value } => json!({
            "kind": "nonzero_at_coset",
            "coset": coset.entries(),
            "j": j.entries(),
            "value": value.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
        }),
    }
}

impl AnalysisReport {
    /// Remark on the approximation order implied by the generation degree;
    /// never computed independently.
    pub fn approximation_remark(&self) -> Option<String> {
        self.generation_degree.map(|k| {
            format!(
                "generation degree {k} is the algebraic condition associated with approximation order {} of the refinable function",
                k + 1
            )
        })
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "dimension: {}", self.dimension);
        let _ = writeln!(s, "dilation: {}", self.dilation);
        let _ = writeln!(s, "degree cap: {}", self.cap);
        let _ = writeln!(s, "interpolatory: {}", self.interpolatory);
        let _ = writeln!(s, "sum rules of order 1: {}", self.sum_rules_order_1);
        let _ = writeln!(
            s,
            "generation degree: {}",
            fmt_degree(self.generation_degree, self.cap)
        );
        if let Some(w) = self.generation_violations.first() {
            let _ = writeln!(s, "  stopped at: {w}");
        }
        match &self.tau {
            Some(t) => {
                let _ = writeln!(s, "tau: {t}");
            }
            None => {
                let _ = writeln!(s, "tau: none (sum rules of order 1 fail)");
            }
        }
        let _ = writeln!(
            s,
            "reproduction degree: {}",
            fmt_degree(self.reproduction_degree, self.cap)
        );
        if let Some(w) = self.reproduction_violations.first() {
            let _ = writeln!(s, "  first failure: {w}");
            for w in &self.reproduction_violations[1..] {
                let _ = writeln!(s, "  also fails: {w}");
            }
        }
        if let Some(r) = self.approximation_remark() {
            let _ = writeln!(s, "remark: {r}");
        }
        let _ = writeln!(s, "note: {NONSINGULARITY_NOTE}");
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dimension": self.dimension,
            "dilation": self.dilation,
            "cap": self.cap,
            "interpolatory": self.interpolatory,
            "sum_rules_order_1": self.sum_rules_order_1,
            "generation_degree": self.generation_degree,
            "generation_violations": self.generation_violations.iter().map(witness_json).collect::<Vec<_>>(),
            "tau": self.tau.as_ref().map(|t| t.components().iter().map(format_rational).collect::<Vec<_>>()),
            "reproduction_degree": self.reproduction_degree,
            "failure_witness": self.reproduction_violations.first().map(witness_json),
            "reproduction_violations": self.reproduction_violations.iter().map(witness_json).collect::<Vec<_>>(),
            "approximation_remark": self.approximation_remark(),
            "note": NONSINGULARITY_NOTE,
        })
    }
}
