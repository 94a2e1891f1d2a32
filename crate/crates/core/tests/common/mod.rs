#![allow(dead_code)]

use proptest::prelude::*;

use subdiv_core::laurent::LaurentPoly;
use subdiv_core::mask::Mask;
use subdiv_core::multi_index::MultiIndex;
use subdiv_core::rational::{rat, Rational};

pub fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=6, 1i64..=4, any::<bool>()).prop_map(|(n, d, neg)| rat(if neg { -n } else { n }, d))
}

pub fn exponent(dim: usize, radius: i64) -> impl Strategy<Value = MultiIndex> {
    prop::collection::vec(-radius..=radius, dim).prop_map(MultiIndex::new)
}

pub fn order(dim: usize, max: i64) -> impl Strategy<Value = MultiIndex> {
    prop::collection::vec(0..=max, dim).prop_map(MultiIndex::new)
}

pub fn laurent(dim: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((exponent(dim, 3), rational()), 0..6)
        .prop_map(move |terms| LaurentPoly::from_terms(dim, terms).unwrap())
}

/// `(1+z_1)^k ... (1+z_s)^k` times a random factor, scaled so the symbol
/// sums to `|m|^s` when the random factor does not vanish at one.
pub fn structured_mask(dim: usize) -> impl Strategy<Value = Mask> {
    (
        1usize..=3,
        laurent(dim),
        prop_oneof![Just(2i64), Just(-2), Just(3)],
    )
        .prop_map(move |(k, extra, m)| {
            let n = m.unsigned_abs() as i64;
            let mut p = LaurentPoly::one(dim);
            for axis in 0..dim {
                let mut factor = LaurentPoly::zero(dim);
                for t in 0..n {
                    factor = factor
                        .add(&LaurentPoly::monomial(
                            MultiIndex::unit(dim, axis).scale(t),
                            rat(1, 1),
                        ))
                        .unwrap();
                }
                p = p.mul(&factor.pow(k as u32)).unwrap();
            }
            let extra = if extra.value_at_one() == rat(0, 1) {
                extra.add(&LaurentPoly::one(dim)).unwrap()
            } else {
                extra
            };
            let p = p.mul(&extra).unwrap();
            let target = Rational::from_integer(n.pow(dim as u32).into());
            let scale = target / p.value_at_one();
            Mask::new(p.scale(&scale), m).unwrap()
        })
}

pub fn any_mask(dim: usize) -> impl Strategy<Value = Mask> {
    (
        prop::collection::vec((exponent(dim, 3), nonzero_rational()), 1..6),
        prop_oneof![Just(2i64), Just(-2), Just(3), Just(-3)],
    )
        .prop_map(move |(terms, m)| {
            let p = LaurentPoly::from_terms(dim, terms).unwrap();
            let p = if p.is_zero() {
                LaurentPoly::one(dim)
            } else {
                p
            };
            Mask::new(p, m).unwrap()
        })
}
