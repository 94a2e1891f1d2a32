//! Exact arithmetic with values of Laurent polynomials at roots of unity.
//!
//! A [`CycloElement`] of order `n` stores `Σ_{t<n} c_t ζ^t` with rational
//! `c_t`, where `ζ` is a primitive `n`-th root of unity. Arithmetic happens
//! in `Q[x]/(x^n - 1)`, so exponents simply fold modulo `n`. Deciding whether
//! such a sum vanishes needs the minimal polynomial of `ζ`, the cyclotomic
//! polynomial `Φ_n`, and only [`CycloElement::is_zero`] uses it.
//!
//! The sign of the dilation only picks which primitive root `ζ` denotes
//! (`e^{-2πi/m}`); it matters for [`CycloElement::to_complex`] and nothing
//! else, because complex conjugation preserves vanishing.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::multi_index::MultiIndex;
use crate::rational::{format_rational, to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElement {
    coeffs: Vec<Rational>,
}

impl CycloElement {
    pub fn zero(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidOrder(n));
        }
        Ok(CycloElement {
            coeffs: vec![Rational::zero(); n],
        })
    }

    /// The rational `r` viewed as `r·ζ^0`.
    pub fn from_rational(n: usize, r: Rational) -> Result<Self> {
        let mut x = Self::zero(n)?;
        x.coeffs[0] = r;
        Ok(x)
    }

    /// `ζ^(k mod n)`.
    pub fn from_root_power(n: usize, k: i64) -> Result<Self> {
        let mut x = Self::zero(n)?;
        x.coeffs[k.rem_euclid(n as i64) as usize] = Rational::one();
        Ok(x)
    }

    /// Build from an arbitrary coefficient list, folding exponents mod `n`.
    pub fn from_coeffs(n: usize, coeffs: impl IntoIterator<Item = Rational>) -> Result<Self> {
        let mut x = Self::zero(n)?;
        for (t, c) in coeffs.into_iter().enumerate() {
            x.coeffs[t % n] += c;
        }
        Ok(x)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn check_order(&self, other: &CycloElement) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &CycloElement) -> Result<CycloElement> {
        self.check_order(other)?;
        Ok(CycloElement {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Cyclic convolution of the coefficient vectors.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &CycloElement) -> Result<CycloElement> {
        self.check_order(other)?;
        let n = self.order();
        let mut coeffs = vec![Rational::zero(); n];
        for (s, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (t, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[(s + t) % n] += a * b;
                }
            }
        }
        Ok(CycloElement { coeffs })
    }

    pub fn scale(&self, c: &Rational) -> CycloElement {
        CycloElement {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Exact test for `Σ c_t ζ^t = 0`: the coefficient polynomial must be
    /// divisible by `Φ_n`.
    pub fn is_zero(&self) -> bool {
        if self.coeffs.iter().all(Zero::is_zero) {
            return true;
        }
        let phi: Vec<Rational> = cyclotomic_polynomial(self.order())
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        let mut rem = self.coeffs.clone();
        let deg_phi = phi.len() - 1;
        // Φ_n is monic, so long division stays exact over Q.
        for top in (deg_phi..rem.len()).rev() {
            let lead = std::mem::take(&mut rem[top]);
            if lead.is_zero() {
                continue;
            }
            let base = top - deg_phi;
            for (k, p) in phi.iter().enumerate().take(deg_phi) {
                rem[base + k] -= &lead * p;
            }
        }
        rem.iter().all(Zero::is_zero)
    }

    /// Numeric value with `ζ = e^{-2πi/m}`; returns `(re, im)`.
    pub fn to_complex(&self, m: i64) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (t, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = -2.0 * std::f64::consts::PI * t as f64 / m as f64;
            let v = to_f64(c);
            re += v * angle.cos();
            im += v * angle.sin();
        }
        (re, im)
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (t, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match t {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "{}*w", format_rational(c))?,
                _ => write!(f, "{}*w^{}", format_rational(c), t)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Value of `p` at `(ζ^{e_1}, ..., ζ^{e_s})` with `ζ` of order `|m|`:
/// `Σ_a p_a ζ^{(e·a) mod |m|}`.
pub fn eval_symbol_at_coset(p: &LaurentPoly, m: i64, e: &MultiIndex) -> Result<CycloElement> {
    let n = m.unsigned_abs() as usize;
    if e.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: e.dim(),
        });
    }
    let mut x = CycloElement::zero(n)?;
    for (a, c) in p.terms() {
        let t = e.dot(a).rem_euclid(n as i64) as usize;
        x.coeffs[t] += c;
    }
    Ok(x)
}

/// Integer coefficients of `Φ_n`, lowest degree first. Obtained by dividing
/// `x^n - 1` by `Φ_d` for every proper divisor `d` of `n`.
pub fn cyclotomic_polynomial(n: usize) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic order must be positive");
    let mut num = vec![BigInt::zero(); n + 1];
    num[0] = BigInt::from(-1);
    num[n] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for top in (dd..num.len()).rev() {
        let lead = rem[top].clone();
        if lead.is_zero() {
            continue;
        }
        let base = top - dd;
        quot[base] = lead.clone();
        for (k, c) in den.iter().enumerate() {
            rem[base + k] -= &lead * c;
        }
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Euler's totient, used to sanity-check `deg Φ_n`.
pub fn totient(n: usize) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}
