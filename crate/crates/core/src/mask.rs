//! Subdivision masks with scalar dilation `m`, their coset decomposition and
//! the JSON mask document.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::multi_index::{IndexBox, MultiIndex};
use crate::rational::{format_rational, parse_rational, Rational};

/// A finitely supported mask together with its dilation. The mask and its
/// symbol are the same data: coefficient `a_α` is the coefficient of `z^α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    dilation: i64,
    symbol: LaurentPoly,
}

impl Mask {
    pub fn new(symbol: LaurentPoly, dilation: i64) -> Result<Self> {
        if symbol.dim() == 0 {
            return Err(Error::ZeroDimension);
        }
        if dilation.unsigned_abs() < 2 {
            return Err(Error::InvalidDilation(dilation));
        }
        Ok(Mask { dilation, symbol })
    }

    pub fn dimension(&self) -> usize {
        self.symbol.dim()
    }

    /// Signed dilation factor `m`.
    pub fn dilation(&self) -> i64 {
        self.dilation
    }

    /// `|m|`, the number of cosets per axis.
    pub fn modulus(&self) -> u64 {
        self.dilation.unsigned_abs()
    }

    /// `|m|^s`, the value `a(1)` must take.
    pub fn coset_count(&self) -> u64 {
        self.modulus().pow(self.dimension() as u32)
    }

    pub fn symbol(&self) -> &LaurentPoly {
        &self.symbol
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Rational {
        self.symbol.coeff(alpha)
    }

    /// Support bounding box; a zero mask reports the box `{0}`.
    pub fn support_box(&self) -> IndexBox {
        self.symbol
            .support_box()
            .unwrap_or_else(|| IndexBox::cube(self.dimension(), 0))
    }

    /// Largest `|α_i|` over the support.
    pub fn support_radius(&self) -> i64 {
        let b = self.support_box();
        b.lower
            .entries()
            .iter()
            .chain(b.upper.entries())
            .map(|x| x.abs())
            .max()
            .unwrap_or(0)
    }

    /// Largest per-axis extent `max α_i - min α_i` of the support.
    pub fn support_diameter(&self) -> i64 {
        let b = self.support_box();
        b.lower
            .entries()
            .iter()
            .zip(b.upper.entries())
            .map(|(lo, hi)| hi - lo)
            .max()
            .unwrap_or(0)
    }

    /// Coset representatives `{0,...,|m|-1}^s` in graded-lex order.
    pub fn coset_reps(&self) -> Vec<MultiIndex> {
        let top = self.modulus() as i64 - 1;
        let bx = IndexBox::new(
            MultiIndex::zeros(self.dimension()),
            MultiIndex::new(vec![top; self.dimension()]),
        );
        let mut reps: Vec<MultiIndex> = bx.iter().collect();
        reps.sort();
        reps
    }

    /// The coset of `α` modulo `m Z^s`, as a representative in `{0..|m|-1}^s`.
    pub fn coset_of(&self, alpha: &MultiIndex) -> MultiIndex {
        let n = self.modulus() as i64;
        alpha
            .entries()
            .iter()
            .map(|x| x.rem_euclid(n))
            .collect::<Vec<_>>()
            .into()
    }

    fn check_coset(&self, e: &MultiIndex) -> Result<()> {
        let n = self.modulus() as i64;
        if e.dim() != self.dimension() || e.entries().iter().any(|&x| x < 0 || x >= n) {
            return Err(Error::InvalidCoset {
                coset: e.clone(),
                modulus: self.modulus(),
            });
        }
        Ok(())
    }

    /// Subsymbol `a_e(z) = Σ_α a_{e+mα} z^{e+mα}`.
    pub fn subsymbol(&self, e: &MultiIndex) -> Result<LaurentPoly> {
        self.check_coset(e)?;
        LaurentPoly::from_terms(
            self.dimension(),
            self.symbol
                .terms()
                .filter(|(a, _)| &self.coset_of(a) == e)
                .map(|(a, c)| (a.clone(), c.clone())),
        )
    }

    /// `a_0 = 1` and `a_{mα} = 0` for every `α ≠ 0`.
    pub fn is_interpolatory(&self) -> bool {
        let zero = MultiIndex::zeros(self.dimension());
        if !self.coefficient(&zero).is_one() {
            return false;
        }
        self.symbol
            .terms()
            .all(|(a, _)| a.is_zero() || !self.coset_of(a).is_zero())
    }

    /// Mask of the symbol `z^α a(z)`.
    pub fn shift(&self, alpha: &MultiIndex) -> Result<Mask> {
        Ok(Mask {
            dilation: self.dilation,
            symbol: self.symbol.monomial_shift(alpha)?,
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaskDocument {
    dimension: i64,
    dilation: i64,
    coefficients: Vec<CoefficientEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoefficientEntry {
    index: Vec<i64>,
    value: String,
}

fn field_error(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Field {
        field: field.into(),
        message: message.into(),
    }
}

/// Parse and validate a mask document.
pub fn read_mask(text: &str) -> Result<Mask> {
    let doc: MaskDocument = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.dimension < 1 {
        return Err(field_error("dimension", "must be at least 1"));
    }
    if doc.dilation.unsigned_abs() < 2 {
        return Err(Error::InvalidDilation(doc.dilation));
    }
    let dim = doc.dimension as usize;
    let mut seen = BTreeSet::new();
    let mut terms = Vec::with_capacity(doc.coefficients.len());
    for (i, entry) in doc.coefficients.into_iter().enumerate() {
        if entry.index.len() != dim {
            return Err(field_error(
                format!("coefficients[{i}].index"),
                format!("has length {}, expected {dim}", entry.index.len()),
            ));
        }
        let value = parse_rational(&entry.value)
            .map_err(|e| field_error(format!("coefficients[{i}].value"), e.to_string()))?;
        let index = MultiIndex::new(entry.index);
        if !seen.insert(index.clone()) {
            return Err(field_error(
                format!("coefficients[{i}].index"),
                format!("duplicate index {index}"),
            ));
        }
        terms.push((index, value));
    }
    Mask::new(LaurentPoly::from_terms(dim, terms)?, doc.dilation)
}

/// Serialize to the mask document, coefficients in graded-lex order.
pub fn write_mask(mask: &Mask) -> String {
    let doc = MaskDocument {
        dimension: mask.dimension() as i64,
        dilation: mask.dilation(),
        coefficients: mask
            .symbol()
            .terms()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| CoefficientEntry {
                index: a.entries().to_vec(),
                value: format_rational(c),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("mask document serializes");
    s.push('\n');
    s
}
