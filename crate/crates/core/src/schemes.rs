//! Built-in subdivision schemes and box-spline helpers.
//!
//! All constructors return fully expanded coefficient maps.

use num_traits::{One, Zero};

use crate::analysis::ParamShift;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::mask::Mask;
use crate::multi_index::MultiIndex;
use crate::rational::{int, rat, Rational};

/// Integer `s × n` matrix whose columns are box-spline directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionMatrix {
    rows: Vec<Vec<i64>>,
}

fn determinant(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let pivot_row = a[col].clone();
        let p = &pivot_row[col];
        det *= p;
        for row in a.iter_mut().skip(col + 1) {
            let f = &row[col] / p;
            if f.is_zero() {
                continue;
            }
            for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &f * y;
            }
        }
    }
    det
}

fn rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| int(x)).collect())
        .collect();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pivot, rank);
        let pivot_row = a[rank].clone();
        let p = &pivot_row[col];
        for (r, row) in a.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = &row[col] / p;
            for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl DirectionMatrix {
    /// Validates a rectangular `s × n` matrix with `n >= s` and rank `s`.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let s = rows.len();
        if s == 0 {
            return Err(Error::ZeroDimension);
        }
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::MalformedMatrix("ragged rows".into()));
        }
        if n < s {
            return Err(Error::MalformedMatrix(format!(
                "{n} columns but {s} rows; need at least as many directions as dimensions"
            )));
        }
        let r = rank(&rows);
        if r < s {
            return Err(Error::RankDeficient {
                rank: r,
                expected: s,
            });
        }
        Ok(DirectionMatrix { rows })
    }

    /// Build from a list of direction vectors (the columns).
    pub fn from_columns(columns: &[Vec<i64>]) -> Result<Self> {
        let s = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != s) {
            return Err(Error::MalformedMatrix("ragged columns".into()));
        }
        Self::new(
            (0..s)
                .map(|i| columns.iter().map(|c| c[i]).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn num_directions(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn column(&self, c: usize) -> MultiIndex {
        self.rows.iter().map(|r| r[c]).collect::<Vec<_>>().into()
    }

    pub fn columns(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        (0..self.num_directions()).map(|c| self.column(c))
    }
}

/// `(1 + z^θ)/2`.
fn half_binomial(theta: &MultiIndex) -> LaurentPoly {
    let s = theta.dim();
    LaurentPoly::constant(s, rat(1, 2))
        .add(&LaurentPoly::monomial(theta.clone(), rat(1, 2)))
        .expect("same dimension")
}

/// Box-spline mask `2^s Π_θ (1 + z^θ)/2` with dilation 2.
pub fn box_spline(theta: &DirectionMatrix) -> Mask {
    let s = theta.dim();
    let symbol = theta
        .columns()
        .fold(LaurentPoly::constant(s, int(1 << s)), |acc, col| {
            acc.mul(&half_binomial(&col)).expect("same dimension")
        });
    Mask::new(symbol, 2).expect("dilation 2 and s >= 1")
}

/// `τ = ½ (Σ_θ θ_1, ..., Σ_θ θ_s)`.
pub fn box_spline_tau(theta: &DirectionMatrix) -> ParamShift {
    ParamShift::new(
        theta
            .rows()
            .iter()
            .map(|r| rat(r.iter().sum(), 2))
            .collect(),
    )
}

/// Every nonzero `s × s` minor is `±1` (and at least one is nonzero, which
/// rank `s` guarantees). Singular minors are allowed because repeated
/// directions produce them in ordinary box splines.
pub fn is_unimodular(theta: &DirectionMatrix) -> bool {
    let s = theta.dim();
    let mut any_nonzero = false;
    for cols in combinations(theta.num_directions(), s) {
        let sub: Vec<Vec<Rational>> = theta
            .rows()
            .iter()
            .map(|r| cols.iter().map(|&c| int(r[c])).collect())
            .collect();
        let d = determinant(sub);
        if d.is_zero() {
            continue;
        }
        any_nonzero = true;
        if d != int(1) && d != int(-1) {
            return false;
        }
    }
    any_nonzero
}

/// Columns `e1` (k times), `e2` (l times) and `e1 + e2` (n times).
pub fn three_directional_directions(k: usize, l: usize, n: usize) -> Result<DirectionMatrix> {
    let mut cols = Vec::new();
    cols.extend(std::iter::repeat_n(vec![1, 0], k));
    cols.extend(std::iter::repeat_n(vec![0, 1], l));
    cols.extend(std::iter::repeat_n(vec![1, 1], n));
    DirectionMatrix::from_columns(&cols)
}

/// `((1+z1)/2)^k ((1+z2)/2)^l ((1+z1 z2)/2)^n` without the leading factor.
fn three_directional_product(k: u32, l: u32, n: u32) -> LaurentPoly {
    half_binomial(&[1, 0].into())
        .pow(k)
        .mul(&half_binomial(&[0, 1].into()).pow(l))
        .and_then(|p| p.mul(&half_binomial(&[1, 1].into()).pow(n)))
        .expect("bivariate")
}

/// Three-directional box-spline symbol `B_{k,l,n} = 4 ((1+z1)/2)^k
/// ((1+z2)/2)^l ((1+z1 z2)/2)^n`, expanded from the product formula.
pub fn three_directional(k: u32, l: u32, n: u32) -> Mask {
    Mask::new(three_directional_product(k, l, n).scale(&int(4)), 2).expect("valid")
}

/// Univariate cubic B-spline, `(1+z)^4 / 8`.
pub fn cubic_bspline() -> Mask {
    box_spline(&DirectionMatrix::new(vec![vec![1, 1, 1, 1]]).expect("rank 1"))
}

/// Four-directional box spline with directions `e1, e2, e1+e2, e1-e2`;
/// convergent but not unimodular.
pub fn four_directional() -> Mask {
    box_spline(&four_directional_directions())
}

pub fn four_directional_directions() -> DirectionMatrix {
    DirectionMatrix::from_columns(&[vec![1, 0], vec![0, 1], vec![1, 1], vec![1, -1]])
        .expect("rank 2")
}

/// Butterfly scheme,
/// `4 z1^-3 z2^-3 [7 z1 z2 P_{2,2,2} - 2 z1 P_{1,3,3} - 2 z2 P_{3,1,3} - 2 z1 z2 P_{3,3,1}]`
/// where `P_{k,l,n}` is the bare three-directional product (no factor 4).
pub fn butterfly() -> Mask {
    let term = |shift: [i64; 2], c: i64, k, l, n| {
        three_directional_product(k, l, n)
            .monomial_shift(&shift.into())
            .expect("bivariate")
            .scale(&int(c))
    };
    let bracket = [
        term([1, 1], 7, 2, 2, 2),
        term([1, 0], -2, 1, 3, 3),
        term([0, 1], -2, 3, 1, 3),
        term([1, 1], -2, 3, 3, 1),
    ]
    .iter()
    .try_fold(LaurentPoly::zero(2), |acc, t| acc.add(t))
    .expect("bivariate");
    let symbol = bracket
        .monomial_shift(&[-3, -3].into())
        .expect("bivariate")
        .scale(&int(4));
    Mask::new(symbol, 2).expect("valid")
}

/// Dubuc–Deslauriers four-point scheme `(-z^-3 + 9z^-1 + 16 + 9z - z^3)/16`.
pub fn dubuc_deslauriers_4pt() -> Mask {
    let symbol = LaurentPoly::from_terms(
        1,
        [(-3, -1), (-1, 9), (0, 16), (1, 9), (3, -1)]
            .into_iter()
            .map(|(e, c)| (MultiIndex::from([e]), rat(c, 16))),
    )
    .expect("univariate");
    Mask::new(symbol, 2).expect("valid")
}

/// Trivariate example with dilation 2:
/// `8 [6 z1z2z3 P(2,2,2,2) - 5/4 z1 P(1,3,3,3) - 5/4 z2 P(3,1,3,3)
///     - 5/4 z3 P(3,3,1,3) - 5/4 z1z2z3 P(3,3,3,1)]`
/// with `P(a,b,c,d) = ((1+z1)/2)^a ((1+z2)/2)^b ((1+z3)/2)^c ((1+z1z2z3)/2)^d`.
pub fn three_dim_example() -> Mask {
    let factors: [LaurentPoly; 4] = [
        half_binomial(&[1, 0, 0].into()),
        half_binomial(&[0, 1, 0].into()),
        half_binomial(&[0, 0, 1].into()),
        half_binomial(&[1, 1, 1].into()),
    ];
    let product = |powers: [u32; 4]| {
        factors
            .iter()
            .zip(powers)
            .try_fold(LaurentPoly::one(3), |acc, (f, p)| acc.mul(&f.pow(p)))
            .expect("trivariate")
    };
    let term = |shift: [i64; 3], c: Rational, powers: [u32; 4]| {
        product(powers)
            .monomial_shift(&shift.into())
            .expect("trivariate")
            .scale(&c)
    };
    let q = rat(-5, 4);
    let bracket = [
        term([1, 1, 1], int(6), [2, 2, 2, 2]),
        term([1, 0, 0], q.clone(), [1, 3, 3, 3]),
        term([0, 1, 0], q.clone(), [3, 1, 3, 3]),
        term([0, 0, 1], q.clone(), [3, 3, 1, 3]),
        term([1, 1, 1], q, [3, 3, 3, 1]),
    ]
    .iter()
    .try_fold(LaurentPoly::zero(3), |acc, t| acc.add(t))
    .expect("trivariate");
    Mask::new(bracket.scale(&int(8)), 2).expect("valid")
}

/// Exponent map of the substitution `z1 -> z1 z2^-2`, `z2 -> z1^2 z2^-1`;
/// columns are the images' exponent vectors. It squares to `-3 I`.
pub const SQRT3_MATRIX: [[i64; 2]; 2] = [[1, 2], [-2, -1]];

pub fn sqrt3_matrix() -> Vec<Vec<i64>> {
    SQRT3_MATRIX.iter().map(|r| r.to_vec()).collect()
}

/// Symbol of the approximating √3 scheme (dilation matrix, not `mI`).
pub fn sqrt3_base() -> LaurentPoly {
    let sixth = [[1, 1], [-1, -1], [-1, 2], [-2, 1], [1, -2], [2, -1]];
    let third = [[-1, 0], [0, 1], [1, -1], [0, -1], [1, 0], [-1, 1]];
    LaurentPoly::from_terms(
        2,
        sixth
            .iter()
            .map(|e| (MultiIndex::from(*e), rat(1, 6)))
            .chain(third.iter().map(|e| (MultiIndex::from(*e), rat(1, 3)))),
    )
    .expect("bivariate")
}

/// Twice-iterated √3 mask `a(z1 z2^-2, z1^2 z2^-1) · a(z)`, dilation `-3`.
pub fn sqrt3_iterated() -> Mask {
    let base = sqrt3_base();
    let symbol = base
        .substitute_monomial_map(&sqrt3_matrix())
        .and_then(|p| p.mul(&base))
        .expect("bivariate");
    Mask::new(symbol, -3).expect("valid")
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "cubic-bspline",
    "dubuc-deslauriers-4pt",
    "three-directional-222",
    "four-directional",
    "butterfly",
    "three-dim",
    "sqrt3-iterated",
];

pub fn builtin(name: &str) -> Option<Mask> {
    Some(match name {
        "cubic-bspline" => cubic_bspline(),
        "dubuc-deslauriers-4pt" => dubuc_deslauriers_4pt(),
        "three-directional-222" => three_directional(2, 2, 2),
        "four-directional" => four_directional(),
        "butterfly" => butterfly(),
        "three-dim" => three_dim_example(),
        "sqrt3-iterated" => sqrt3_iterated(),
        _ => return None,
    })
}

/// Every built-in scheme with its name.
pub fn builtins() -> Vec<(&'static str, Mask)> {
    BUILTIN_NAMES
        .iter()
        .map(|&n| (n, builtin(n).expect("registered")))
        .collect()
}
