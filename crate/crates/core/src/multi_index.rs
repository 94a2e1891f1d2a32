//! Integer multi-indices and their enumeration.
//!
//! Multi-indices serve as exponents of Laurent monomials, derivative orders
//! and grid positions. They are ordered graded-lexicographically: first by
//! the entry sum, then lexicographically, so `(0,0) < (0,1) < (1,0) < (1,1)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<i64>);

impl MultiIndex {
    pub fn new(entries: Vec<i64>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// The unit vector along `axis`.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![0; dim];
        v[axis] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| a * k).collect())
    }

    pub fn dot(&self, other: &MultiIndex) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Componentwise `self <= other`.
    pub fn le_componentwise(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `q_j(x) = Π_i Π_{l<j_i} (x_i - l)` at the integer point `self`, i.e.
    /// the coefficient produced by differentiating `z^self` with order `j`.
    /// `j` must be nonnegative.
    pub fn falling_factorial(&self, j: &MultiIndex) -> BigInt {
        let mut acc = BigInt::from(1);
        for (&x, &ji) in self.0.iter().zip(&j.0) {
            for l in 0..ji {
                let f = x - l;
                if f == 0 {
                    return BigInt::from(0);
                }
                acc *= f;
            }
        }
        acc
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for MultiIndex {
    fn from(v: Vec<i64>) -> Self {
        MultiIndex(v)
    }
}

impl<const N: usize> From<[i64; N]> for MultiIndex {
    fn from(v: [i64; N]) -> Self {
        MultiIndex(v.to_vec())
    }
}

/// All nonnegative multi-indices of dimension `dim` with total degree exactly
/// `degree`, in graded-lex order.
pub fn of_total_degree(dim: usize, degree: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; dim];
    fill_degree(&mut cur, 0, degree as i64, &mut out);
    out
}

fn fill_degree(cur: &mut Vec<i64>, pos: usize, remaining: i64, out: &mut Vec<MultiIndex>) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    if cur.is_empty() {
        return;
    }
    for v in 0..=remaining {
        cur[pos] = v;
        fill_degree(cur, pos + 1, remaining - v, out);
    }
    cur[pos] = 0;
}

/// All nonnegative multi-indices with total degree `<= max_degree`, graded-lex.
pub fn up_to_total_degree(dim: usize, max_degree: u32) -> Vec<MultiIndex> {
    (0..=max_degree)
        .flat_map(|d| of_total_degree(dim, d))
        .collect()
}

/// Axis-aligned integer box `[lower, upper]` (inclusive on both ends).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexBox {
    pub lower: MultiIndex,
    pub upper: MultiIndex,
}

impl IndexBox {
    pub fn new(lower: MultiIndex, upper: MultiIndex) -> Self {
        debug_assert_eq!(lower.dim(), upper.dim());
        IndexBox { lower, upper }
    }

    /// The cube `[-radius, radius]^dim`.
    pub fn cube(dim: usize, radius: i64) -> Self {
        IndexBox::new(
            MultiIndex(vec![-radius; dim]),
            MultiIndex(vec![radius; dim]),
        )
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.lower
            .0
            .iter()
            .zip(&self.upper.0)
            .any(|(lo, hi)| lo > hi)
    }

    pub fn contains(&self, idx: &MultiIndex) -> bool {
        idx.0
            .iter()
            .zip(self.lower.0.iter().zip(&self.upper.0))
            .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    pub fn contains_box(&self, other: &IndexBox) -> bool {
        other.is_empty() || (self.contains(&other.lower) && self.contains(&other.upper))
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        self.lower
            .0
            .iter()
            .zip(&self.upper.0)
            .map(|(lo, hi)| (hi - lo + 1) as usize)
            .product()
    }

    /// Extent along each axis (`upper - lower + 1`).
    pub fn shape(&self) -> Vec<usize> {
        self.lower
            .0
            .iter()
            .zip(&self.upper.0)
            .map(|(lo, hi)| (hi - lo + 1).max(0) as usize)
            .collect()
    }

    /// Row-major offset of `idx` (last axis fastest). `idx` must be inside.
    pub fn offset(&self, idx: &MultiIndex) -> usize {
        let mut off = 0usize;
        for ((x, lo), hi) in idx.0.iter().zip(&self.lower.0).zip(&self.upper.0) {
            let w = (hi - lo + 1) as usize;
            off = off * w + (x - lo) as usize;
        }
        off
    }

    pub fn intersect(&self, other: &IndexBox) -> IndexBox {
        IndexBox::new(
            MultiIndex(
                self.lower
                    .0
                    .iter()
                    .zip(&other.lower.0)
                    .map(|(a, b)| *a.max(b))
                    .collect(),
            ),
            MultiIndex(
                self.upper
                    .0
                    .iter()
                    .zip(&other.upper.0)
                    .map(|(a, b)| *a.min(b))
                    .collect(),
            ),
        )
    }

    /// Iterate the box in row-major order (last axis fastest), which matches
    /// [`IndexBox::offset`].
    pub fn iter(&self) -> BoxIter<'_> {
        BoxIter {
            bx: self,
            cur: if self.is_empty() {
                None
            } else {
                Some(self.lower.0.clone())
            },
        }
    }
}

pub struct BoxIter<'a> {
    bx: &'a IndexBox,
    cur: Option<Vec<i64>>,
}

impl Iterator for BoxIter<'_> {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let cur = self.cur.as_mut()?;
        let out = MultiIndex(cur.clone());
        let mut axis = cur.len();
        loop {
            if axis == 0 {
                self.cur = None;
                break;
            }
            axis -= 1;
            if cur[axis] < self.bx.upper.0[axis] {
                cur[axis] += 1;
                break;
            }
            cur[axis] = self.bx.lower.0[axis];
        }
        Some(out)
    }
}
