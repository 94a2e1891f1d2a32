//! Sparse multivariate Laurent polynomials with exact rational coefficients.
//!
//! A [`LaurentPoly`] is a finite map from exponent multi-indices to nonzero
//! rationals. Every constructor and operation keeps the map canonical: no
//! stored coefficient is zero and all keys have the polynomial's dimension.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::multi_index::{IndexBox, MultiIndex};
use crate::rational::{format_rational, pow, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        LaurentPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::monomial(MultiIndex::zeros(dim), c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    /// `c · z^exponent`.
    pub fn monomial(exponent: MultiIndex, c: Rational) -> Self {
        let dim = exponent.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        LaurentPoly { dim, terms }
    }

    /// Build from `(exponent, coefficient)` pairs. Repeated exponents are
    /// summed and zero results dropped.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Rational)>,
    {
        let mut p = LaurentPoly::zero(dim);
        for (e, c) in terms {
            check_dim(dim, e.dim())?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lex order of their exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &MultiIndex) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn get(&self, e: &MultiIndex) -> Option<&Rational> {
        self.terms.get(e)
    }

    /// Smallest box containing every exponent; `None` for the zero polynomial.
    pub fn support_box(&self) -> Option<IndexBox> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut lo = first.entries().to_vec();
        let mut hi = lo.clone();
        for e in it {
            for (i, &x) in e.entries().iter().enumerate() {
                lo[i] = lo[i].min(x);
                hi[i] = hi[i].max(x);
            }
        }
        Some(IndexBox::new(lo.into(), hi.into()))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.add(&other.neg())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> LaurentPoly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.dim);
        }
        LaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Product of two polynomials (convolution of coefficient maps).
    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        check_dim(self.dim, other.dim)?;
        let mut out = LaurentPoly::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one(self.dim);
        for _ in 0..n {
            acc = acc.mul(self).expect("same dimension");
        }
        acc
    }

    /// Multiply by `z^alpha`: every exponent is translated by `alpha`.
    pub fn monomial_shift(&self, alpha: &MultiIndex) -> Result<LaurentPoly> {
        check_dim(self.dim, alpha.dim())?;
        Ok(LaurentPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.add(alpha), c.clone()))
                .collect(),
        })
    }

    /// Formal partial derivative `D^j`, using `D^j z^a = q_j(a) z^(a-j)`
    /// with the falling-factorial coefficient `q_j` in a single pass.
    pub fn partial_derivative(&self, j: &MultiIndex) -> Result<LaurentPoly> {
        check_dim(self.dim, j.dim())?;
        if !j.is_nonnegative() {
            return Err(Error::NegativeDerivativeOrder(j.clone()));
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let q = e.falling_factorial(j);
            if q.is_zero() {
                continue;
            }
            terms.insert(e.sub(j), c * Rational::from_integer(q));
        }
        Ok(LaurentPoly {
            dim: self.dim,
            terms,
        })
    }

    /// Exact value `Σ p_a x^a`.
    pub fn eval_rational(&self, x: &[Rational]) -> Result<Rational> {
        check_dim(self.dim, x.len())?;
        let mut sum = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (axis, (&k, xi)) in e.entries().iter().zip(x).enumerate() {
                if k < 0 && xi.is_zero() {
                    return Err(Error::ZeroToNegativePower { axis });
                }
                if k != 0 {
                    term *= pow(xi, k);
                }
            }
            sum += term;
        }
        Ok(sum)
    }

    /// Value at the all-ones point, i.e. the sum of all coefficients.
    pub fn value_at_one(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// Replace variable `z_i` by the monomial `Π_l z_l^{M[l][i]}`; column `i`
    /// of `matrix` is the exponent vector of the image of `z_i`, so each
    /// exponent key `a` maps to `M a`.
    pub fn substitute_monomial_map(&self, matrix: &[Vec<i64>]) -> Result<LaurentPoly> {
        if matrix.len() != self.dim || matrix.iter().any(|row| row.len() != self.dim) {
            return Err(Error::NonSquareMatrix { expected: self.dim });
        }
        let mut out = LaurentPoly::zero(self.dim);
        for (e, c) in &self.terms {
            let image: Vec<i64> = matrix
                .iter()
                .map(|row| row.iter().zip(e.entries()).map(|(m, a)| m * a).sum())
                .collect();
            out.add_term(image.into(), c.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", format_rational(c))?;
            for (axis, &k) in e.entries().iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*z{}", axis + 1)?,
                    _ => write!(f, "*z{}^{}", axis + 1, k)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn univariate(coeffs: &[(i64, Rational)]) -> LaurentPoly {
        LaurentPoly::from_terms(
            1,
            coeffs
                .iter()
                .map(|(e, c)| (MultiIndex::from([*e]), c.clone())),
        )
        .unwrap()
    }

    fn one_plus(dim: usize, e: &[i64]) -> LaurentPoly {
        LaurentPoly::one(dim)
            .add(&LaurentPoly::monomial(e.to_vec().into(), int(1)))
            .unwrap()
    }

    #[test]
    fn additive_identity_and_cancellation() {
        let p = one_plus(1, &[1]);
        assert_eq!(p.add(&LaurentPoly::zero(1)).unwrap(), p);
        let z = LaurentPoly::monomial([1].into(), int(1));
        let s = z.add(&z.neg()).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.num_terms(), 0);
    }

    #[test]
    fn dimension_mismatch() {
        let p = LaurentPoly::one(1);
        let q = LaurentPoly::one(2);
        assert!(matches!(p.add(&q), Err(Error::DimensionMismatch { .. })));
        assert!(p.mul(&q).is_err());
        assert!(p.monomial_shift(&[1, 1].into()).is_err());
        assert!(LaurentPoly::from_terms(2, [(MultiIndex::from([1]), int(1))]).is_err());
    }

    #[test]
    fn binomial_square() {
        let p = one_plus(1, &[1]);
        let want = univariate(&[(0, int(1)), (1, int(2)), (2, int(1))]);
        assert_eq!(p.mul(&p).unwrap(), want);
    }

    #[test]
    fn shift() {
        let p = one_plus(1, &[1]);
        assert_eq!(p.monomial_shift(&[0].into()).unwrap(), p);
        let want = univariate(&[(1, int(1)), (2, int(1))]);
        assert_eq!(p.monomial_shift(&[1].into()).unwrap(), want);
    }

    #[test]
    fn derivatives() {
        let cubic = one_plus(1, &[1]).pow(4).scale(&rat(1, 8));
        assert_eq!(cubic.partial_derivative(&[0].into()).unwrap(), cubic);
        let d1 = cubic.partial_derivative(&[1].into()).unwrap();
        assert_eq!(d1.eval_rational(&[int(1)]).unwrap(), int(4));
        assert!(matches!(
            cubic.partial_derivative(&[-1].into()),
            Err(Error::NegativeDerivativeOrder(_))
        ));
        // D^2 z^-1 = 2 z^-3
        let inv = LaurentPoly::monomial([-1].into(), int(1));
        assert_eq!(
            inv.partial_derivative(&[2].into()).unwrap(),
            LaurentPoly::monomial([-3].into(), int(2))
        );
        // constants vanish
        assert!(LaurentPoly::one(2)
            .partial_derivative(&[1, 0].into())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn evaluation() {
        assert_eq!(one_plus(1, &[1]).eval_rational(&[int(1)]).unwrap(), int(2));
        let p = univariate(&[(-2, int(3)), (1, rat(1, 2))]);
        assert_eq!(p.eval_rational(&[int(2)]).unwrap(), rat(3, 4) + int(1));
        assert!(matches!(
            p.eval_rational(&[int(0)]),
            Err(Error::ZeroToNegativePower { axis: 0 })
        ));
        // nonnegative exponents at 0 are fine
        assert_eq!(one_plus(1, &[1]).eval_rational(&[int(0)]).unwrap(), int(1));
        assert_eq!(p.value_at_one(), rat(7, 2));
    }

    #[test]
    fn substitution() {
        let p = one_plus(2, &[1, -1]);
        assert_eq!(
            p.substitute_monomial_map(&[vec![1, 0], vec![0, 1]])
                .unwrap(),
            p
        );
        let q = one_plus(1, &[1]);
        assert_eq!(
            q.substitute_monomial_map(&[vec![2]]).unwrap(),
            univariate(&[(0, int(1)), (2, int(1))])
        );
        // z1 -> z1 z2^-2, z2 -> z1^2 z2^-1 sends z1 to exponent (1,-2)
        let z1 = LaurentPoly::monomial([1, 0].into(), int(1));
        let m = vec![vec![1, 2], vec![-2, -1]];
        assert_eq!(
            z1.substitute_monomial_map(&m).unwrap(),
            LaurentPoly::monomial([1, -2].into(), int(1))
        );
        assert!(matches!(
            z1.substitute_monomial_map(&[vec![1, 2]]),
            Err(Error::NonSquareMatrix { expected: 2 })
        ));
    }

    #[test]
    fn support_and_display() {
        let p = univariate(&[(-3, int(-1)), (3, rat(1, 16))]);
        let b = p.support_box().unwrap();
        assert_eq!(b.lower, [-3].into());
        assert_eq!(b.upper, [3].into());
        assert_eq!(p.to_string(), "-1*z1^-3 + 1/16*z1^3");
        assert!(LaurentPoly::zero(2).support_box().is_none());
    }
}
