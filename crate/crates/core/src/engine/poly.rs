use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::grid::GridData;
use crate::analysis::ParamShift;
use crate::error::{Error, Result};
use crate::multi_index::{IndexBox, MultiIndex};
use crate::rational::{format_rational, pow, Rational};

/// Polynomial `π(x) = Σ c_j x^j` with nonnegative exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFunc {
    dim: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl PolyFunc {
    pub fn from_terms(
        dim: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Rational)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
        for (j, c) in terms {
            if j.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: j.dim(),
                });
            }
            if !j.is_nonnegative() {
                return Err(Error::NegativeDerivativeOrder(j));
            }
            *map.entry(j).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(PolyFunc { dim, terms: map })
    }

    /// `x^j`.
    pub fn monomial(j: &MultiIndex) -> Result<Self> {
        Self::from_terms(j.dim(), [(j.clone(), Rational::one())])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    /// Largest `|j|` over the terms; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|j| j.total() as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(j, c)| {
                j.entries()
                    .iter()
                    .zip(x)
                    .fold(c.clone(), |acc, (&e, xi)| acc * pow(xi, e))
            })
            .fold(Rational::zero(), |a, b| a + b)
    }
}

impl fmt::Display for PolyFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (j, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !c.is_one() || j.is_zero() {
                factors.push(format_rational(c));
            }
            for (axis, &e) in j.entries().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", axis + 1)),
                    _ => factors.push(format!("x{}^{}", axis + 1, e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Origin of the level-`r` grid, `t_0^{(r)} = -τ Σ_{i=1}^r m^{-i}`.
fn level_origin(tau: &ParamShift, m: i64, r: u32) -> Vec<Rational> {
    let m = Rational::from_integer(m.into());
    let geometric = (1..=r as i64).fold(Rational::zero(), |acc, i| acc + pow(&m, -i));
    tau.components().iter().map(|t| -(t * &geometric)).collect()
}

/// Parameter value `t^{(r)}_α = t^{(r)}_0 + α / m^r`.
pub fn param_point(tau: &ParamShift, m: i64, r: u32, alpha: &MultiIndex) -> Vec<Rational> {
    let scale = pow(&Rational::from_integer(m.into()), -(r as i64));
    level_origin(tau, m, r)
        .into_iter()
        .zip(alpha.entries())
        .map(|(t0, &a)| t0 + Rational::from_integer(a.into()) * &scale)
        .collect()
}

/// `π(t^{(r)}_α)` for every `α` in `bx`; the whole box is trusted.
pub fn sample_polynomial(
    poly: &PolyFunc,
    tau: &ParamShift,
    m: i64,
    r: u32,
    bx: &IndexBox,
) -> Result<GridData> {
    if poly.dim() != tau.dim() || poly.dim() != bx.dim() {
        return Err(Error::DimensionMismatch {
            expected: poly.dim(),
            found: if tau.dim() != poly.dim() {
                tau.dim()
            } else {
                bx.dim()
            },
        });
    }
    let degree = poly.total_degree() as usize;
    let origin = level_origin(tau, m, r);
    let scale = pow(&Rational::from_integer(m.into()), -(r as i64));
    // powers[axis][k][e] = (coordinate k along axis)^e
    let powers: Vec<Vec<Vec<Rational>>> = (0..bx.dim())
        .map(|axis| {
            (bx.lower.entries()[axis]..=bx.upper.entries()[axis])
                .map(|a| {
                    let t = &origin[axis] + Rational::from_integer(a.into()) * &scale;
                    let mut row = Vec::with_capacity(degree + 1);
                    let mut acc = Rational::one();
                    for _ in 0..=degree {
                        row.push(acc.clone());
                        acc *= &t;
                    }
                    row
                })
                .collect()
        })
        .collect();
    let terms: Vec<(&MultiIndex, &Rational)> = poly.terms().collect();
    GridData::from_fn(bx.clone(), None, |alpha| {
        terms
            .iter()
            .map(|(j, c)| {
                let mut v = (*c).clone();
                for (axis, (&a, &e)) in alpha.entries().iter().zip(j.entries()).enumerate() {
                    if e > 0 {
                        let k = (a - bx.lower.entries()[axis]) as usize;
                        v *= &powers[axis][k][e as usize];
                    }
                }
                v
            })
            .fold(Rational::zero(), |a, b| a + b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn parameter_points() {
        let tau = ParamShift::new(vec![int(2)]);
        assert_eq!(param_point(&tau, 2, 0, &[7].into()), vec![int(7)]);
        assert_eq!(
            param_point(&ParamShift::zeros(1), 2, 3, &[5].into()),
            vec![rat(5, 8)]
        );
        assert_eq!(param_point(&tau, 2, 1, &[0].into()), vec![int(-1)]);
        // recursion t0(r) = t0(r-1) - τ/m^r
        let t2 = param_point(&tau, 2, 2, &[0].into());
        assert_eq!(t2, vec![int(-1) - rat(2, 4)]);
        // negative dilation
        let t = param_point(&ParamShift::new(vec![int(3)]), -3, 2, &[1].into());
        assert_eq!(t, vec![int(1) - rat(1, 3) + rat(1, 9)]);
    }

    #[test]
    fn sampling() {
        let one = PolyFunc::from_terms(1, [(MultiIndex::from([0]), int(1))]).unwrap();
        let g =
            sample_polynomial(&one, &ParamShift::zeros(1), 2, 3, &IndexBox::cube(1, 3)).unwrap();
        assert!(g.iter().all(|(_, v)| v == int(1)));

        let x = PolyFunc::monomial(&[1].into()).unwrap();
        let g = sample_polynomial(&x, &ParamShift::zeros(1), 2, 1, &IndexBox::cube(1, 3)).unwrap();
        for (a, v) in g.iter() {
            assert_eq!(v, rat(a.entries()[0], 2));
        }

        let xy = PolyFunc::monomial(&[1, 1].into()).unwrap();
        let g = sample_polynomial(&xy, &ParamShift::zeros(2), 2, 0, &IndexBox::cube(2, 2)).unwrap();
        for (a, v) in g.iter() {
            assert_eq!(v, int(a.entries()[0] * a.entries()[1]));
        }
    }

    #[test]
    fn sampling_matches_direct_evaluation() {
        let p = PolyFunc::from_terms(
            2,
            [
                (MultiIndex::from([3, 0]), int(1)),
                (MultiIndex::from([1, 2]), int(-2)),
                (MultiIndex::from([0, 1]), int(1)),
            ],
        )
        .unwrap();
        let tau = ParamShift::new(vec![rat(1, 2), int(-1)]);
        let bx = IndexBox::new([-2, 0].into(), [1, 3].into());
        let g = sample_polynomial(&p, &tau, -3, 2, &bx).unwrap();
        for (a, v) in g.iter() {
            assert_eq!(v, p.eval(&param_point(&tau, -3, 2, &a)));
        }
        assert_eq!(p.total_degree(), 3);
        assert_eq!(p.to_string(), "x2 + -2*x1*x2^2 + x1^3");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PolyFunc::monomial(&[-1].into()).is_err());
        let x = PolyFunc::monomial(&[1].into()).unwrap();
        assert!(sample_polynomial(&x, &ParamShift::zeros(2), 2, 0, &IndexBox::cube(1, 1)).is_err());
    }
}
