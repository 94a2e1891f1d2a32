mod common;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use common::{exponent, laurent, order, rational};
use subdiv_core::analysis::q_eval;
use subdiv_core::laurent::LaurentPoly;
use subdiv_core::multi_index::MultiIndex;
use subdiv_core::rational::{int, Rational};

fn point(dim: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational().prop_filter("nonzero", |r| !r.is_zero()), dim)
}

fn binomial(n: i64, k: i64) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #[test]
    fn evaluation_is_a_ring_homomorphism(p in laurent(2), q in laurent(2), x in point(2)) {
        let px = p.eval_rational(&x).unwrap();
        let qx = q.eval_rational(&x).unwrap();
        prop_assert_eq!(p.add(&q).unwrap().eval_rational(&x).unwrap(), &px + &qx);
        prop_assert_eq!(p.sub(&q).unwrap().eval_rational(&x).unwrap(), &px - &qx);
        prop_assert_eq!(p.mul(&q).unwrap().eval_rational(&x).unwrap(), &px * &qx);
        prop_assert_eq!(p.pow(2).eval_rational(&x).unwrap(), &px * &px);
    }

    #[test]
    fn leibniz_rule(p in laurent(2), q in laurent(2), axis in 0usize..2) {
        let e = MultiIndex::unit(2, axis);
        let lhs = p.mul(&q).unwrap().partial_derivative(&e).unwrap();
        let rhs = p.partial_derivative(&e).unwrap().mul(&q).unwrap()
            .add(&p.mul(&q.partial_derivative(&e).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivatives_compose(p in laurent(2), j in order(2, 2), k in order(2, 2)) {
        let stepwise = p.partial_derivative(&j).unwrap().partial_derivative(&k).unwrap();
        prop_assert_eq!(stepwise, p.partial_derivative(&j.add(&k)).unwrap());
    }

    #[test]
    fn repeated_first_derivatives(p in laurent(1), n in 0i64..5) {
        let mut stepwise = p.clone();
        for _ in 0..n {
            stepwise = stepwise.partial_derivative(&MultiIndex::from([1])).unwrap();
        }
        prop_assert_eq!(stepwise, p.partial_derivative(&MultiIndex::from([n])).unwrap());
    }

    /// `D^j (z^α p)(1) = Σ_{k<=j} C(j,k) q_{j-k}(α) D^k p(1)`.
    #[test]
    fn shift_binomial_expansion(p in laurent(2), alpha in exponent(2, 3), j in order(2, 3)) {
        let lhs = p.monomial_shift(&alpha).unwrap().partial_derivative(&j).unwrap().value_at_one();
        let alpha_r: Vec<Rational> = alpha.entries().iter().map(|&a| int(a)).collect();
        let mut rhs = Rational::zero();
        for k0 in 0..=j.entries()[0] {
            for k1 in 0..=j.entries()[1] {
                let k = MultiIndex::from([k0, k1]);
                let c = binomial(j.entries()[0], k0) * binomial(j.entries()[1], k1);
                rhs += Rational::from_integer(c)
                    * q_eval(&j.sub(&k), &alpha_r).unwrap()
                    * p.partial_derivative(&k).unwrap().value_at_one();
            }
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_respects_evaluation(
        p in laurent(2),
        m in prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 2),
        x in point(2),
    ) {
        let sub = p.substitute_monomial_map(&m).unwrap();
        // z_i -> Π_l x_l^{m[l][i]}
        let y: Vec<Rational> = (0..2)
            .map(|i| (0..2).fold(int(1), |acc, l| acc * subdiv_core::rational::pow(&x[l], m[l][i])))
            .collect();
        prop_assert_eq!(sub.eval_rational(&x).unwrap(), p.eval_rational(&y).unwrap());
    }

    #[test]
    fn canonical_form_has_no_zero_terms(p in laurent(3), q in laurent(3)) {
        let r = p.sub(&q).unwrap().add(&q).unwrap();
        prop_assert_eq!(&r, &p);
        prop_assert!(r.terms().all(|(_, c)| !c.is_zero()));
        prop_assert!(p.sub(&p).unwrap().is_zero());
    }
}

#[test]
fn negative_orders_and_zero_division_are_errors() {
    let p = LaurentPoly::monomial(MultiIndex::from([-1, 0]), int(1));
    assert!(p.partial_derivative(&MultiIndex::from([-1, 0])).is_err());
    assert!(p.eval_rational(&[int(0), int(1)]).is_err());
    assert!(p.eval_rational(&[int(1)]).is_err());
}
