use num_traits::{Signed, Zero};

use super::grid::{residual, GridData};
use super::poly::{sample_polynomial, PolyFunc};
use super::subdivide::subdivide_once;
use crate::analysis::ParamShift;
use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::multi_index::{IndexBox, MultiIndex};
use crate::rational::Rational;

/// Outcome of comparing one subdivision step against direct sampling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    /// Level `r` of the input samples.
    pub level: u32,
    pub passed: bool,
    /// Number of compared indices at level `r + 1`.
    pub checked: usize,
    /// Largest `|S_a π^{(r)} - π^{(r+1)}|`; zero when passed.
    pub worst_residual: Rational,
    pub worst_index: Option<MultiIndex>,
}

/// Default level-`r` sampling box: the cube of half-width
/// `support_radius + 2|m|`, large enough for a nonempty trusted output.
pub fn default_oracle_box(mask: &Mask) -> IndexBox {
    let w = mask.support_radius() + 2 * mask.dilation().abs();
    IndexBox::cube(mask.dimension(), w)
}

/// Sample `π` at level `r` on `bx`, subdivide once and compare exactly with
/// the level-`r + 1` samples on the trusted part of the output.
pub fn stepwise_oracle(
    mask: &Mask,
    poly: &PolyFunc,
    tau: &ParamShift,
    r: u32,
    bx: &IndexBox,
) -> Result<OracleReport> {
    let m = mask.dilation();
    let coarse = sample_polynomial(poly, tau, m, r, bx)?;
    let fine = subdivide_once(mask, &coarse)?;
    let trusted = fine.trusted().clone();
    if trusted.is_empty() {
        return Err(Error::EmptyTrustedBox);
    }
    let expected = sample_polynomial(poly, tau, m, r + 1, &trusted)?;
    compare(r, &fine, &expected)
}

fn compare(level: u32, got: &GridData, expected: &GridData) -> Result<OracleReport> {
    let (dg, de) = (got.denom(), expected.denom());
    let mut worst = Rational::zero();
    let mut worst_index = None;
    for (i, idx) in expected.support().iter().enumerate() {
        let ng = got.numers().get(got.support().offset(&idx));
        let ne = expected.numers().get(i);
        if let Some(res) = residual(&ng, dg, &ne, de) {
            if res > worst {
                worst = res.abs();
                worst_index = Some(idx);
            }
        }
    }
    Ok(OracleReport {
        level,
        passed: worst_index.is_none(),
        checked: expected.support().len(),
        worst_residual: worst,
        worst_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPoly;
    use crate::rational::{int, rat};

    fn linear_interp() -> Mask {
        let p = LaurentPoly::from_terms(
            1,
            [(-1, rat(1, 2)), (0, int(1)), (1, rat(1, 2))]
                .into_iter()
                .map(|(i, c)| (MultiIndex::from([i]), c)),
        )
        .unwrap();
        Mask::new(p, 2).unwrap()
    }

    #[test]
    fn linear_interpolation_reproduces_lines() {
        let mask = linear_interp();
        let tau = ParamShift::zeros(1);
        let bx = default_oracle_box(&mask);
        for j in 0..=1 {
            for r in 0..3 {
                let p = PolyFunc::monomial(&[j].into()).unwrap();
                let rep = stepwise_oracle(&mask, &p, &tau, r, &bx).unwrap();
                assert!(rep.passed, "degree {j} level {r}");
                assert!(rep.checked > 0);
            }
        }
        let p = PolyFunc::monomial(&[2].into()).unwrap();
        let rep = stepwise_oracle(&mask, &p, &tau, 0, &bx).unwrap();
        assert!(!rep.passed);
        // midpoint of x^2 between k and k+1 is off by 1/4
        assert_eq!(rep.worst_residual, rat(1, 4));
        assert!(rep.worst_index.is_some());
    }

    #[test]
    fn empty_trusted_box_is_an_error() {
        let mask = linear_interp();
        let p = PolyFunc::monomial(&[0].into()).unwrap();
        let tiny = IndexBox::cube(1, 0);
        assert_eq!(
            stepwise_oracle(&mask, &p, &ParamShift::zeros(1), 0, &tiny),
            Err(Error::EmptyTrustedBox)
        );
    }
}
