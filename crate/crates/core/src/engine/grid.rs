use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::multi_index::{IndexBox, MultiIndex};
use crate::rational::{format_rational, to_f64, Rational};

/// Numerators over a shared denominator. Most grids fit in `i128`; the
/// `Big` form is used as soon as anything would overflow.
#[derive(Clone, Debug)]
pub(crate) enum Numerators {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

impl Numerators {
    pub(crate) fn len(&self) -> usize {
        match self {
            Numerators::Small(v) => v.len(),
            Numerators::Big(v) => v.len(),
        }
    }

    pub(crate) fn get(&self, i: usize) -> BigInt {
        match self {
            Numerators::Small(v) => BigInt::from(v[i]),
            Numerators::Big(v) => v[i].clone(),
        }
    }

    pub(crate) fn to_big(&self) -> Vec<BigInt> {
        match self {
            Numerators::Small(v) => v.iter().map(|&x| BigInt::from(x)).collect(),
            Numerators::Big(v) => v.clone(),
        }
    }
}

/// Data sequence on a finite box of `Z^s`, exact rational values stored
/// densely in row-major order (last axis fastest). Indices outside the
/// support box are zero.
///
/// The trusted box marks the indices whose values are unaffected by the
/// truncation of the bi-infinite sequence to a finite box.
#[derive(Clone, Debug)]
pub struct GridData {
    support: IndexBox,
    trusted: IndexBox,
    denom: BigInt,
    numers: Numerators,
}

impl PartialEq for GridData {
    fn eq(&self, other: &Self) -> bool {
        // representation is canonical after `normalize`
        self.support == other.support
            && self.trusted == other.trusted
            && self.denom == other.denom
            && (0..self.numers.len()).all(|i| self.numers.get(i) == other.numers.get(i))
    }
}

impl Eq for GridData {}

impl GridData {
    pub(crate) fn from_parts(
        support: IndexBox,
        trusted: IndexBox,
        denom: BigInt,
        numers: Numerators,
    ) -> Self {
        debug_assert_eq!(support.len(), numers.len());
        let mut g = GridData {
            support,
            trusted,
            denom,
            numers,
        };
        g.normalize();
        g
    }

    /// Values in row-major order over `support`. The trusted box defaults to
    /// the support box and must lie inside it.
    pub fn from_values(
        support: IndexBox,
        trusted: Option<IndexBox>,
        values: Vec<Rational>,
    ) -> Result<Self> {
        if let Some(axis) =
            (0..support.dim()).find(|&i| support.lower.entries()[i] > support.upper.entries()[i])
        {
            return Err(Error::InvalidBox { axis });
        }
        if values.len() != support.len() {
            return Err(Error::DimensionMismatch {
                expected: support.len(),
                found: values.len(),
            });
        }
        let trusted = trusted.unwrap_or_else(|| support.clone());
        if trusted.dim() != support.dim() {
            return Err(Error::DimensionMismatch {
                expected: support.dim(),
                found: trusted.dim(),
            });
        }
        if !support.contains_box(&trusted) {
            return Err(Error::InvalidBox { axis: 0 });
        }
        let denom = values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let big: Vec<BigInt> = values
            .iter()
            .map(|v| v.numer() * (&denom / v.denom()))
            .collect();
        let numers = match big
            .iter()
            .map(ToPrimitive::to_i128)
            .collect::<Option<Vec<_>>>()
        {
            Some(small) => Numerators::Small(small),
            None => Numerators::Big(big),
        };
        Ok(Self::from_parts(support, trusted, denom, numers))
    }

    /// Evaluate `f` at every index of `support`.
    pub fn from_fn(
        support: IndexBox,
        trusted: Option<IndexBox>,
        f: impl FnMut(&MultiIndex) -> Rational,
    ) -> Result<Self> {
        let mut f = f;
        let values = support.iter().map(|i| f(&i)).collect();
        Self::from_values(support, trusted, values)
    }

    /// The unit impulse at the origin.
    pub fn delta(dim: usize) -> Self {
        Self::from_values(IndexBox::cube(dim, 0), None, vec![Rational::one()])
            .expect("one value on the unit box")
    }

    fn normalize(&mut self) {
        let mut g = self.denom.clone();
        match &self.numers {
            Numerators::Small(v) => {
                for &x in v {
                    if g.is_one() {
                        break;
                    }
                    if x != 0 {
                        g = g.gcd(&BigInt::from(x));
                    }
                }
            }
            Numerators::Big(v) => {
                for x in v {
                    if g.is_one() {
                        break;
                    }
                    if !x.is_zero() {
                        g = g.gcd(x);
                    }
                }
            }
        }
        if !g.is_one() && !g.is_zero() {
            self.denom /= &g;
            match &mut self.numers {
                Numerators::Small(v) => {
                    let gs = g.to_i128().expect("divides an i128 numerator");
                    v.iter_mut().for_each(|x| *x /= gs);
                }
                Numerators::Big(v) => v.iter_mut().for_each(|x| *x /= &g),
            }
        }
        if let Numerators::Big(v) = &self.numers {
            if let Some(small) = v
                .iter()
                .map(ToPrimitive::to_i128)
                .collect::<Option<Vec<_>>>()
            {
                self.numers = Numerators::Small(small);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.support.dim()
    }

    pub fn support(&self) -> &IndexBox {
        &self.support
    }

    pub fn trusted(&self) -> &IndexBox {
        &self.trusted
    }

    /// Replace the trusted box; it must lie inside the support box.
    pub fn with_trusted(mut self, trusted: IndexBox) -> Result<Self> {
        if trusted.dim() != self.dim() || !self.support.contains_box(&trusted) {
            return Err(Error::InvalidBox { axis: 0 });
        }
        self.trusted = trusted;
        Ok(self)
    }

    pub(crate) fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub(crate) fn numers(&self) -> &Numerators {
        &self.numers
    }

    /// Value at `idx`; zero outside the support box.
    pub fn get(&self, idx: &MultiIndex) -> Rational {
        if !self.support.contains(idx) {
            return Rational::zero();
        }
        Rational::new(
            self.numers.get(self.support.offset(idx)),
            self.denom.clone(),
        )
    }

    pub fn is_trusted(&self, idx: &MultiIndex) -> bool {
        self.trusted.contains(idx)
    }

    /// `(index, value)` over the support box in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, Rational)> + '_ {
        self.support
            .iter()
            .enumerate()
            .map(|(i, idx)| (idx, Rational::new(self.numers.get(i), self.denom.clone())))
    }

    /// Sum of all stored values.
    pub fn sum(&self) -> Rational {
        let total = match &self.numers {
            Numerators::Small(v) => {
                let mut acc = BigInt::zero();
                let mut part: i128 = 0;
                for &x in v {
                    match part.checked_add(x) {
                        Some(p) => part = p,
                        None => {
                            acc += part;
                            part = x;
                        }
                    }
                }
                acc + part
            }
            Numerators::Big(v) => v.iter().sum(),
        };
        Rational::new(total, self.denom.clone())
    }

    /// Nonzero values keyed by index, in graded-lex order.
    pub fn nonzero_map(&self) -> std::collections::BTreeMap<MultiIndex, Rational> {
        self.iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Delimited text export: one line per index with the index tuple, the
    /// exact value, its nearest double and the trusted flag.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for i in 0..self.dim() {
            let _ = write!(s, "i{},", i + 1);
        }
        s.push_str("exact,float,trusted\n");
        for (idx, v) in self.iter() {
            for x in idx.entries() {
                let _ = write!(s, "{x},");
            }
            let _ = writeln!(
                s,
                "{},{},{}",
                format_rational(&v),
                to_f64(&v),
                self.trusted.contains(&idx)
            );
        }
        s
    }

    /// Binary PGM (P5) rendering of a bivariate grid. The first axis runs
    /// left to right and the second bottom to top; gray levels are scaled
    /// linearly between the minimum and maximum value.
    pub fn to_pgm(&self) -> Result<Vec<u8>> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        let shape = self.support.shape();
        let (w, h) = (shape[0], shape[1]);
        let floats: Vec<f64> = (0..self.numers.len())
            .map(|i| to_f64(&Rational::new(self.numers.get(i), self.denom.clone())))
            .collect();
        let lo = floats
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
            .min(0.0);
        let hi = floats.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let span = if hi > lo { hi - lo } else { 1.0 };
        let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
        for y in (0..h).rev() {
            for x in 0..w {
                let v = floats[x * h + y];
                out.push((((v - lo) / span) * 255.0).round().clamp(0.0, 255.0) as u8);
            }
        }
        Ok(out)
    }

    /// Largest `|value|` in the grid, as a double.
    pub fn max_abs_f64(&self) -> f64 {
        (0..self.numers.len())
            .map(|i| to_f64(&Rational::new(self.numers.get(i), self.denom.clone())).abs())
            .fold(0.0, f64::max)
    }
}

/// `|a - b|` where both sides are `n/d` pairs; `None` when equal.
pub(crate) fn residual(na: &BigInt, da: &BigInt, nb: &BigInt, db: &BigInt) -> Option<Rational> {
    let lhs = na * db;
    let rhs = nb * da;
    (lhs != rhs).then(|| Rational::new((lhs - rhs).abs(), da * db))
}
