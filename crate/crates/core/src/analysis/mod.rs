//! Algebraic conditions for polynomial generation and reproduction.
//!
//! Everything here is decided exactly from the mask symbol `a(z)`:
//!
//! * Condition `Z_k`: `a(1) = |m|^s` and `D^j a(ε) = 0` for every nontrivial
//!   root-of-unity point `ε` and `|j| < k`. A mask generates polynomials up to
//!   degree `k` iff it satisfies `Z_{k+1}`.
//! * The parametrization shift `τ = |m|^{-s} (D^{e_1} a(1), ..., D^{e_s} a(1))`.
//! * Reproduction up to degree `k` with shift `τ`: `D^j a(1) = |m|^s q_j(τ)`
//!   and `D^j a(ε) = 0` for all `|j| <= k`.
//!
//! Two independent routes are provided for cross-checking: the submask
//! derivative test (equivalent to `Z_k`) and the windowed moment identity
//! `Σ_β a_{α-mβ} β^j = ((α-τ)/m)^j` (equivalent to reproduction).

mod report;

pub use report::{analyze, AnalysisReport, DEFAULT_CAP};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::{eval_symbol_at_coset, CycloElement};
use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::multi_index::{of_total_degree, up_to_total_degree, IndexBox, MultiIndex};
use crate::rational::{format_rational, pow, Rational};

/// Shift `τ` of the parametrization `t^{(r)}_α = t^{(r)}_0 + α/m^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamShift(Vec<Rational>);

impl ParamShift {
    pub fn new(components: Vec<Rational>) -> Self {
        ParamShift(components)
    }

    pub fn zeros(dim: usize) -> Self {
        ParamShift(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Rational] {
        &self.0
    }

    /// `τ + α`, the shift of the mask `z^α a(z)`.
    pub fn translate(&self, alpha: &MultiIndex) -> ParamShift {
        ParamShift(
            self.0
                .iter()
                .zip(alpha.entries())
                .map(|(t, &a)| t + Rational::from_integer(a.into()))
                .collect(),
        )
    }
}

impl fmt::Display for ParamShift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_rational(t))?;
        }
        write!(f, ")")
    }
}

/// A violated condition, with both sides where they are rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `a(1) != |m|^s`.
    SumAtOne { value: Rational, expected: Rational },
    /// `D^j a(1) != |m|^s q_j(τ)`.
    DerivativeAtOne {
        j: MultiIndex,
        lhs: Rational,
        rhs: Rational,
    },
    /// `D^j a(ε_e) != 0`.
    NonzeroAtCoset {
        coset: MultiIndex,
        j: MultiIndex,
        value: CycloElement,
    },
}

impl Witness {
    pub fn order(&self) -> Option<&MultiIndex> {
        match self {
            Witness::SumAtOne { .. } => None,
            Witness::DerivativeAtOne { j, .. } | Witness::NonzeroAtCoset { j, .. } => Some(j),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::SumAtOne { value, expected } => write!(
                f,
                "a(1) = {} but |m|^s = {}",
                format_rational(value),
                format_rational(expected)
            ),
            Witness::DerivativeAtOne { j, lhs, rhs } => write!(
                f,
                "D^{j} a(1) = {} but |m|^s q_{j}(tau) = {}",
                format_rational(lhs),
                format_rational(rhs)
            ),
            Witness::NonzeroAtCoset { coset, j, value } => {
                write!(f, "D^{j} a(eps_{coset}) = {value} != 0")
            }
        }
    }
}

/// Outcome of a condition scan. The scan proceeds by total degree of `j`
/// and stops at the first degree with any violation; `violations` lists all
/// of them for that degree in graded-lex order of `(j, coset)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ConditionCheck {
    pub violations: Vec<Witness>,
}

impl ConditionCheck {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    /// First failing condition in graded-lex order.
    pub fn witness(&self) -> Option<&Witness> {
        self.violations.first()
    }
}

/// Result of a degree search up to a cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSearch {
    pub degree: Option<u32>,
    /// Empty iff the search reached the cap without failure.
    pub violations: Vec<Witness>,
}

/// `q_j(x) = Π_i Π_{l<j_i} (x_i - l)`.
pub fn q_eval(j: &MultiIndex, x: &[Rational]) -> Result<Rational> {
    if j.dim() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: j.dim(),
            found: x.len(),
        });
    }
    if !j.is_nonnegative() {
        return Err(Error::NegativeDerivativeOrder(j.clone()));
    }
    let mut acc = Rational::one();
    for (&ji, xi) in j.entries().iter().zip(x) {
        for l in 0..ji {
            acc *= xi - Rational::from_integer(l.into());
        }
    }
    Ok(acc)
}

fn coset_count(mask: &Mask) -> Rational {
    Rational::from_integer(mask.coset_count().into())
}

fn sum_rule_violation(mask: &Mask) -> Option<Witness> {
    let value = mask.symbol().value_at_one();
    let expected = coset_count(mask);
    (value != expected).then_some(Witness::SumAtOne { value, expected })
}

/// `D^j a` at every nontrivial coset point where it does not vanish.
fn coset_violations(mask: &Mask, j: &MultiIndex) -> Vec<Witness> {
    let d = mask
        .symbol()
        .partial_derivative(j)
        .expect("nonnegative order of mask dimension");
    mask.coset_reps()
        .into_iter()
        .filter(|e| !e.is_zero())
        .filter_map(|e| {
            let value = eval_symbol_at_coset(&d, mask.dilation(), &e).expect("valid coset");
            (!value.is_zero()).then_some(Witness::NonzeroAtCoset {
                coset: e,
                j: j.clone(),
                value,
            })
        })
        .collect()
}

/// `D^j a(1)`.
pub fn derivative_at_one(mask: &Mask, j: &MultiIndex) -> Rational {
    mask.symbol()
        .partial_derivative(j)
        .expect("nonnegative order of mask dimension")
        .value_at_one()
}

/// Condition `Z_k`. `k = 0` is vacuous apart from the normalization.
pub fn check_z(mask: &Mask, k: u32) -> ConditionCheck {
    if let Some(w) = sum_rule_violation(mask) {
        return ConditionCheck {
            violations: vec![w],
        };
    }
    for degree in 0..k {
        let violations: Vec<Witness> = of_total_degree(mask.dimension(), degree)
            .iter()
            .flat_map(|j| coset_violations(mask, j))
            .collect();
        if !violations.is_empty() {
            return ConditionCheck { violations };
        }
    }
    ConditionCheck::default()
}

/// Largest `k <= cap` such that `Z_{k+1}` holds; `None` if `Z_1` fails.
pub fn generation_degree(mask: &Mask, cap: u32) -> DegreeSearch {
    if let Some(w) = sum_rule_violation(mask) {
        return DegreeSearch {
            degree: None,
            violations: vec![w],
        };
    }
    for degree in 0..=cap {
        let violations: Vec<Witness> = of_total_degree(mask.dimension(), degree)
            .iter()
            .flat_map(|j| coset_violations(mask, j))
            .collect();
        if !violations.is_empty() {
            return DegreeSearch {
                degree: degree.checked_sub(1),
                violations,
            };
        }
    }
    DegreeSearch {
        degree: Some(cap),
        violations: Vec::new(),
    }
}

/// `τ` from the first derivatives at `1`, without checking `Z_1`.
pub fn tau_from_derivatives(mask: &Mask) -> ParamShift {
    let s = mask.dimension();
    let scale = coset_count(mask).recip();
    ParamShift(
        (0..s)
            .map(|i| derivative_at_one(mask, &MultiIndex::unit(s, i)) * &scale)
            .collect(),
    )
}

/// The shift `τ` that gives linear reproduction; absent when `Z_1` fails,
/// since it is meaningless then.
pub fn compute_tau(mask: &Mask) -> Option<ParamShift> {
    let tau = tau_from_derivatives(mask);
    check_z(mask, 1).holds().then_some(tau)
}

fn reproduction_violations_at(mask: &Mask, tau: &ParamShift, degree: u32) -> Vec<Witness> {
    let scale = coset_count(mask);
    let mut out = Vec::new();
    for j in of_total_degree(mask.dimension(), degree) {
        let lhs = derivative_at_one(mask, &j);
        let rhs = &scale * q_eval(&j, tau.components()).expect("matching dimension");
        if lhs != rhs {
            out.push(Witness::DerivativeAtOne {
                j: j.clone(),
                lhs,
                rhs,
            });
        }
        out.extend(coset_violations(mask, &j));
    }
    out
}

/// Reproduction conditions for every `|j| <= k` with the given `τ`.
pub fn check_reproduction(mask: &Mask, tau: &ParamShift, k: u32) -> Result<ConditionCheck> {
    if tau.dim() != mask.dimension() {
        return Err(Error::DimensionMismatch {
            expected: mask.dimension(),
            found: tau.dim(),
        });
    }
    for degree in 0..=k {
        let violations = reproduction_violations_at(mask, tau, degree);
        if !violations.is_empty() {
            return Ok(ConditionCheck { violations });
        }
    }
    Ok(ConditionCheck::default())
}

/// `τ` from [`compute_tau`] and the largest `k <= cap` passing
/// [`check_reproduction`].
pub fn reproduction_degree(mask: &Mask, cap: u32) -> (Option<ParamShift>, DegreeSearch) {
    let Some(tau) = compute_tau(mask) else {
        return (
            None,
            DegreeSearch {
                degree: None,
                violations: check_z(mask, 1).violations,
            },
        );
    };
    for degree in 0..=cap {
        let violations = reproduction_violations_at(mask, &tau, degree);
        if !violations.is_empty() {
            return (
                Some(tau),
                DegreeSearch {
                    degree: degree.checked_sub(1),
                    violations,
                },
            );
        }
    }
    (
        Some(tau),
        DegreeSearch {
            degree: Some(cap),
            violations: Vec::new(),
        },
    )
}

/// Submask form of `Z_k`: every submask sums to one and
/// `D^j a_e(1) = |m|^{-s} D^j a(1)` for all cosets `e` and `|j| < k`.
///
/// The submask derivatives are computed directly as `Σ_{α ≡ e} q_j(α) a_α`,
/// without going through root-of-unity evaluation.
pub fn submask_derivative_consistency(mask: &Mask, k: u32) -> bool {
    let s = mask.dimension();
    let inv = coset_count(mask).recip();
    let mut by_coset: BTreeMap<MultiIndex, Vec<(&MultiIndex, &Rational)>> = BTreeMap::new();
    for (a, c) in mask.symbol().terms() {
        by_coset.entry(mask.coset_of(a)).or_default().push((a, c));
    }
    let reps = mask.coset_reps();
    let sub_derivative = |e: &MultiIndex, j: &MultiIndex| -> Rational {
        by_coset.get(e).map_or_else(Rational::zero, |terms| {
            terms.iter().fold(Rational::zero(), |acc, (a, c)| {
                acc + *c * Rational::from_integer(a.falling_factorial(j))
            })
        })
    };
    if reps
        .iter()
        .any(|e| !sub_derivative(e, &MultiIndex::zeros(s)).is_one())
    {
        return false;
    }
    if k == 0 {
        return true;
    }
    for j in up_to_total_degree(s, k - 1) {
        let target = derivative_at_one(mask, &j) * &inv;
        if reps.iter().any(|e| sub_derivative(e, &j) != target) {
            return false;
        }
    }
    true
}

/// Largest violation of the moment identity found in a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentViolation {
    pub alpha: MultiIndex,
    pub j: MultiIndex,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl MomentViolation {
    pub fn magnitude(&self) -> Rational {
        (&self.lhs - &self.rhs).abs()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentCheck {
    pub max_violation: Option<MomentViolation>,
}

impl MomentCheck {
    pub fn holds(&self) -> bool {
        self.max_violation.is_none()
    }
}

/// Default half-width of the moment window: support diameter plus `2|m|`.
pub fn default_moment_window(mask: &Mask) -> i64 {
    mask.support_diameter() + 2 * mask.modulus() as i64
}

/// Verify `Σ_β a_{α-mβ} β^j = ((α-τ)/m)^j` for every `α` in
/// `[-window, window]^s` and `|j| <= k`.
pub fn moment_condition_check(
    mask: &Mask,
    tau: &ParamShift,
    k: u32,
    window: i64,
) -> Result<MomentCheck> {
    let s = mask.dimension();
    if tau.dim() != s {
        return Err(Error::DimensionMismatch {
            expected: s,
            found: tau.dim(),
        });
    }
    let m = mask.dilation();
    let m_rat = Rational::from_integer(m.into());
    let mut by_coset: BTreeMap<MultiIndex, Vec<(&MultiIndex, &Rational)>> = BTreeMap::new();
    for (a, c) in mask.symbol().terms() {
        by_coset.entry(mask.coset_of(a)).or_default().push((a, c));
    }
    let orders = up_to_total_degree(s, k);
    let mut worst: Option<MomentViolation> = None;

    for alpha in IndexBox::cube(s, window.max(0)).iter() {
        let mut lhs = vec![Rational::zero(); orders.len()];
        if let Some(terms) = by_coset.get(&mask.coset_of(&alpha)) {
            for (gamma, c) in terms {
                // β = (α - γ)/m is integral because γ ≡ α mod m
                let beta: Vec<i64> = alpha
                    .entries()
                    .iter()
                    .zip(gamma.entries())
                    .map(|(a, g)| (a - g) / m)
                    .collect();
                for (slot, j) in lhs.iter_mut().zip(&orders) {
                    let mut p = BigInt::one();
                    for (&b, &e) in beta.iter().zip(j.entries()) {
                        p *= BigInt::from(b).pow(e as u32);
                    }
                    *slot += *c * Rational::from_integer(p);
                }
            }
        }
        let point: Vec<Rational> = alpha
            .entries()
            .iter()
            .zip(tau.components())
            .map(|(&a, t)| (Rational::from_integer(a.into()) - t) / &m_rat)
            .collect();
        for (l, j) in lhs.into_iter().zip(&orders) {
            let rhs = point
                .iter()
                .zip(j.entries())
                .fold(Rational::one(), |acc, (x, &e)| acc * pow(x, e));
            if l != rhs {
                let v = MomentViolation {
                    alpha: alpha.clone(),
                    j: j.clone(),
                    lhs: l,
                    rhs,
                };
                if worst.as_ref().is_none_or(|w| v.magnitude() > w.magnitude()) {
                    worst = Some(v);
                }
            }
        }
    }
    Ok(MomentCheck {
        max_violation: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPoly;
    use crate::rational::{int, rat};

    fn univariate_mask(coeffs: &[(i64, Rational)]) -> Mask {
        let p = LaurentPoly::from_terms(
            1,
            coeffs
                .iter()
                .map(|(e, c)| (MultiIndex::from([*e]), c.clone())),
        )
        .unwrap();
        Mask::new(p, 2).unwrap()
    }

    fn cubic() -> Mask {
        univariate_mask(&[
            (0, rat(1, 8)),
            (1, rat(4, 8)),
            (2, rat(6, 8)),
            (3, rat(4, 8)),
            (4, rat(1, 8)),
        ])
    }

    #[test]
    fn q_values() {
        assert_eq!(
            q_eval(&[0, 0].into(), &[rat(7, 3), int(-2)]).unwrap(),
            int(1)
        );
        assert_eq!(q_eval(&[1, 1].into(), &[int(2), int(2)]).unwrap(), int(4));
        assert_eq!(
            q_eval(&[2, 0, 0].into(), &[int(3), int(3), int(3)]).unwrap(),
            int(6)
        );
        assert!(q_eval(&[-1].into(), &[int(1)]).is_err());
        assert!(q_eval(&[1].into(), &[int(1), int(1)]).is_err());
    }

    #[test]
    fn cubic_zero_conditions() {
        let m = cubic();
        assert!(check_z(&m, 4).holds());
        let z5 = check_z(&m, 5);
        assert!(!z5.holds());
        match z5.witness().unwrap() {
            Witness::NonzeroAtCoset { coset, j, .. } => {
                assert_eq!(coset, &MultiIndex::from([1]));
                assert_eq!(j, &MultiIndex::from([4]));
            }
            w => panic!("unexpected {w:?}"),
        }
        assert_eq!(generation_degree(&m, 8).degree, Some(3));
    }

    #[test]
    fn cubic_tau_and_reproduction() {
        let m = cubic();
        assert_eq!(compute_tau(&m), Some(ParamShift::new(vec![int(2)])));
        let (tau, search) = reproduction_degree(&m, 6);
        assert_eq!(tau.unwrap(), ParamShift::new(vec![int(2)]));
        assert_eq!(search.degree, Some(1));
        assert_eq!(
            search.violations[0],
            Witness::DerivativeAtOne {
                j: [2].into(),
                lhs: int(6),
                rhs: int(4)
            }
        );
    }

    #[test]
    fn unnormalized_masks_fail_z1() {
        let one = univariate_mask(&[(0, int(1))]);
        assert!(!check_z(&one, 1).holds());
        assert_eq!(generation_degree(&one, 5).degree, None);
        assert_eq!(compute_tau(&one), None);
        assert!(!submask_derivative_consistency(&one, 1));
        // constant |m|^s: a(1) fine, a(-1) = 2 != 0
        let two = univariate_mask(&[(0, int(2))]);
        let g = generation_degree(&two, 5);
        assert_eq!(g.degree, None);
        assert!(matches!(g.violations[0], Witness::NonzeroAtCoset { .. }));
        let (tau, r) = reproduction_degree(&two, 5);
        assert!(tau.is_none() && r.degree.is_none());
        // twice the cubic: every submask has the same sum but a(1) = 4
        let double = Mask::new(cubic().symbol().scale(&int(2)), 2).unwrap();
        assert!(!check_z(&double, 1).holds());
        assert!(!submask_derivative_consistency(&double, 1));
    }

    #[test]
    fn submask_route_matches_z() {
        let m = cubic();
        for k in 0..=6 {
            assert_eq!(
                check_z(&m, k).holds(),
                submask_derivative_consistency(&m, k),
                "k = {k}"
            );
        }
    }

    #[test]
    fn moment_checks() {
        let m = cubic();
        let tau = ParamShift::new(vec![int(2)]);
        assert!(moment_condition_check(&m, &tau, 1, 6).unwrap().holds());
        let bad = moment_condition_check(&m, &tau, 2, 6).unwrap();
        assert!(!bad.holds());
        assert_eq!(bad.max_violation.unwrap().j, MultiIndex::from([2]));
        let wrong_tau = ParamShift::new(vec![int(0)]);
        assert!(!moment_condition_check(&m, &wrong_tau, 1, 6)
            .unwrap()
            .holds());
    }

    #[test]
    fn external_tau_is_checked_not_searched() {
        let m = cubic();
        let r = check_reproduction(&m, &ParamShift::new(vec![int(1)]), 1).unwrap();
        assert_eq!(r.witness().unwrap().order(), Some(&MultiIndex::from([1])));
        assert!(check_reproduction(&m, &ParamShift::zeros(2), 1).is_err());
    }
}
