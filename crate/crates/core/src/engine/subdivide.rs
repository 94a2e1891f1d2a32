use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::grid::{GridData, Numerators};
use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::multi_index::{IndexBox, MultiIndex};

/// Largest cascade level accepted by [`cascade`].
pub const MAX_CASCADE_LEVEL: u32 = 12;

trait Scalar: Clone + Zero {
    /// `acc += a * b`; `false` on overflow.
    fn mul_add(acc: &mut Self, a: &Self, b: &Self) -> bool;
}

impl Scalar for i128 {
    #[inline]
    fn mul_add(acc: &mut i128, a: &i128, b: &i128) -> bool {
        match a.checked_mul(*b).and_then(|p| acc.checked_add(p)) {
            Some(v) => {
                *acc = v;
                true
            }
            None => false,
        }
    }
}

impl Scalar for BigInt {
    #[inline]
    fn mul_add(acc: &mut BigInt, a: &BigInt, b: &BigInt) -> bool {
        *acc += a * b;
        true
    }
}

/// One mask term seen from its coset: `β = q + shift` for the output
/// `α = m q + e`, and `offset` is the row-major displacement of `shift`.
struct Tap<T> {
    shift: Vec<i64>,
    offset: isize,
    coeff: T,
}

struct CosetPlan<T> {
    rep: Vec<i64>,
    taps: Vec<Tap<T>>,
    /// componentwise min/max of the tap shifts
    lo: Vec<i64>,
    hi: Vec<i64>,
}

fn strides(shape: &[usize]) -> Vec<isize> {
    let mut st = vec![1isize; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        st[i] = st[i + 1] * shape[i + 1] as isize;
    }
    st
}

/// Output box `m·B + supp(a)`, with the signed product taken cornerwise.
fn output_box(m: i64, input: &IndexBox, support: &IndexBox) -> IndexBox {
    let (lo, hi): (Vec<i64>, Vec<i64>) = (0..input.dim())
        .map(|i| {
            let a = m * input.lower.entries()[i];
            let b = m * input.upper.entries()[i];
            (
                a.min(b) + support.lower.entries()[i],
                a.max(b) + support.upper.entries()[i],
            )
        })
        .unzip();
    IndexBox::new(lo.into(), hi.into())
}

/// Conservative box of outputs whose whole stencil lies in `trusted`.
fn trusted_output_box(m: i64, trusted: &IndexBox, support: &IndexBox) -> IndexBox {
    if trusted.is_empty() {
        return IndexBox::new(
            MultiIndex::new(vec![1; trusted.dim()]),
            MultiIndex::zeros(trusted.dim()),
        );
    }
    let (lo, hi): (Vec<i64>, Vec<i64>) = (0..trusted.dim())
        .map(|i| {
            let (tl, th) = (trusted.lower.entries()[i], trusted.upper.entries()[i]);
            let (sl, sh) = (support.lower.entries()[i], support.upper.entries()[i]);
            if m > 0 {
                (m * tl + sh, m * th + sl)
            } else {
                (m * th + sh, m * tl + sl)
            }
        })
        .unzip();
    IndexBox::new(lo.into(), hi.into())
}

fn build_plans<T>(
    mask: &Mask,
    in_strides: &[isize],
    coeff: impl Fn(&BigInt) -> T,
) -> Vec<CosetPlan<T>>
where
    T: Clone,
{
    let m = mask.dilation();
    let s = mask.dimension();
    let denom = mask
        .symbol()
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    mask.coset_reps()
        .into_iter()
        .map(|e| {
            let taps: Vec<Tap<T>> = mask
                .symbol()
                .terms()
                .filter(|(g, _)| mask.coset_of(g) == e)
                .map(|(g, c)| {
                    let shift: Vec<i64> = e
                        .entries()
                        .iter()
                        .zip(g.entries())
                        .map(|(ei, gi)| (ei - gi) / m)
                        .collect();
                    let offset = shift
                        .iter()
                        .zip(in_strides)
                        .map(|(d, st)| *d as isize * st)
                        .sum();
                    let integer = c.numer() * (&denom / c.denom());
                    Tap {
                        shift,
                        offset,
                        coeff: coeff(&integer),
                    }
                })
                .collect();
            let lo = (0..s)
                .map(|i| taps.iter().map(|t| t.shift[i]).min().unwrap_or(0))
                .collect();
            let hi = (0..s)
                .map(|i| taps.iter().map(|t| t.shift[i]).max().unwrap_or(0))
                .collect();
            CosetPlan {
                rep: e.entries().to_vec(),
                taps,
                lo,
                hi,
            }
        })
        .collect()
}

/// Range of `q` with `lo <= m q + e <= hi`.
fn q_range(m: i64, e: i64, lo: i64, hi: i64) -> (i64, i64) {
    if m > 0 {
        (
            Integer::div_ceil(&(lo - e), &m),
            Integer::div_floor(&(hi - e), &m),
        )
    } else {
        (
            Integer::div_ceil(&(hi - e), &m),
            Integer::div_floor(&(lo - e), &m),
        )
    }
}

/// Apply the mask to integer numerators. `None` signals overflow.
fn kernel<T: Scalar>(
    m: i64,
    plans: &[CosetPlan<T>],
    input_box: &IndexBox,
    input: &[T],
    out_box: &IndexBox,
) -> Option<Vec<T>> {
    let s = input_box.dim();
    let in_st = strides(&input_box.shape());
    let out_st = strides(&out_box.shape());
    let in_lo = input_box.lower.entries();
    let in_hi = input_box.upper.entries();
    let out_lo = out_box.lower.entries();
    let out_hi = out_box.upper.entries();
    let mut out = vec![T::zero(); out_box.len()];

    for plan in plans {
        if plan.taps.is_empty() {
            continue;
        }
        let ranges: Vec<(i64, i64)> = (0..s)
            .map(|i| q_range(m, plan.rep[i], out_lo[i], out_hi[i]))
            .collect();
        if ranges.iter().any(|(a, b)| a > b) {
            continue;
        }
        let mut q: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        'outer: loop {
            let interior =
                (0..s).all(|i| q[i] + plan.lo[i] >= in_lo[i] && q[i] + plan.hi[i] <= in_hi[i]);
            let out_off: isize = (0..s)
                .map(|i| (m * q[i] + plan.rep[i] - out_lo[i]) as isize * out_st[i])
                .sum();
            let acc = &mut out[out_off as usize];
            if interior {
                let base: isize = (0..s).map(|i| (q[i] - in_lo[i]) as isize * in_st[i]).sum();
                for tap in &plan.taps {
                    if !T::mul_add(acc, &tap.coeff, &input[(base + tap.offset) as usize]) {
                        return None;
                    }
                }
            } else {
                for tap in &plan.taps {
                    let mut off = 0isize;
                    let mut inside = true;
                    for i in 0..s {
                        let b = q[i] + tap.shift[i];
                        if b < in_lo[i] || b > in_hi[i] {
                            inside = false;
                            break;
                        }
                        off += (b - in_lo[i]) as isize * in_st[i];
                    }
                    if inside && !T::mul_add(acc, &tap.coeff, &input[off as usize]) {
                        return None;
                    }
                }
            }
            // advance q, last axis fastest
            let mut axis = s;
            loop {
                if axis == 0 {
                    break 'outer;
                }
                axis -= 1;
                if q[axis] < ranges[axis].1 {
                    q[axis] += 1;
                    continue 'outer;
                }
                q[axis] = ranges[axis].0;
            }
        }
    }
    Some(out)
}

/// One subdivision step `(S_a d)_α = Σ_β a_{α-mβ} d_β` over the finite data.
///
/// The output support box is `m·B + supp(a)`. Its trusted box contains only
/// outputs whose full stencil lies in the input's trusted box, so those
/// values coincide with the bi-infinite operator applied to any extension
/// of the data.
pub fn subdivide_once(mask: &Mask, data: &GridData) -> Result<GridData> {
    if mask.dimension() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: mask.dimension(),
            found: data.dim(),
        });
    }
    let m = mask.dilation();
    let support = mask.support_box();
    let out_box = output_box(m, data.support(), &support);
    let trusted = out_box.intersect(&trusted_output_box(m, data.trusted(), &support));
    let mask_denom = mask
        .symbol()
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let denom = &mask_denom * data.denom();
    let in_st = strides(&data.support().shape());

    let small = match data.numers() {
        Numerators::Small(input) => {
            let plans = build_plans(mask, &in_st, |c| c.to_i128());
            if plans
                .iter()
                .all(|p| p.taps.iter().all(|t| t.coeff.is_some()))
            {
                let plans: Vec<CosetPlan<i128>> = plans
                    .into_iter()
                    .map(|p| CosetPlan {
                        rep: p.rep,
                        lo: p.lo,
                        hi: p.hi,
                        taps: p
                            .taps
                            .into_iter()
                            .map(|t| Tap {
                                shift: t.shift,
                                offset: t.offset,
                                coeff: t.coeff.expect("checked"),
                            })
                            .collect(),
                    })
                    .collect();
                kernel(m, &plans, data.support(), input, &out_box).map(Numerators::Small)
            } else {
                None
            }
        }
        Numerators::Big(_) => None,
    };
    let numers = match small {
        Some(n) => n,
        None => {
            let plans = build_plans(mask, &in_st, BigInt::clone);
            let input = data.numers().to_big();
            Numerators::Big(
                kernel(m, &plans, data.support(), &input, &out_box).expect("no overflow in BigInt"),
            )
        }
    };
    Ok(GridData::from_parts(out_box, trusted, denom, numers))
}

/// `S_a^r δ`: samples of the basic limit function on the level-`r` grid.
pub fn cascade(mask: &Mask, r: u32) -> Result<GridData> {
    if r > MAX_CASCADE_LEVEL {
        return Err(Error::CascadeTooDeep {
            requested: r,
            max: MAX_CASCADE_LEVEL,
        });
    }
    let mut d = GridData::delta(mask.dimension());
    for _ in 0..r {
        // the impulse is exact (zero outside its box), so nothing is truncated
        d = subdivide_once(mask, &d)?;
        let full = d.support().clone();
        d = d.with_trusted(full)?;
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPoly;
    use crate::rational::{int, rat, Rational};

    fn cubic() -> Mask {
        let p = LaurentPoly::from_terms(
            1,
            [1, 4, 6, 4, 1]
                .iter()
                .enumerate()
                .map(|(i, &c)| (MultiIndex::from([i as i64]), rat(c, 8))),
        )
        .unwrap();
        Mask::new(p, 2).unwrap()
    }

    /// Direct evaluation of the subdivision sum, independent of the kernel.
    fn naive(mask: &Mask, data: &GridData, alpha: &MultiIndex) -> Rational {
        let m = mask.dilation();
        data.iter()
            .map(|(beta, v)| mask.coefficient(&alpha.sub(&beta.scale(m))) * v)
            .fold(Rational::zero(), |a, b| a + b)
    }

    #[test]
    fn delta_gives_mask() {
        for m in [2, 3, -2, -3] {
            let p = LaurentPoly::from_terms(
                2,
                [([0, 0], rat(1, 2)), ([-1, 2], rat(3, 7)), ([4, 1], int(-2))]
                    .into_iter()
                    .map(|(e, c)| (MultiIndex::from(e), c)),
            )
            .unwrap();
            let mask = Mask::new(p.clone(), m).unwrap();
            let out = subdivide_once(&mask, &GridData::delta(2)).unwrap();
            assert_eq!(
                out.nonzero_map(),
                p.terms().map(|(a, c)| (a.clone(), c.clone())).collect()
            );
        }
    }

    #[test]
    fn matches_naive_sum_for_signed_dilations() {
        for m in [2, -2, 3, -3] {
            let p = LaurentPoly::from_terms(
                1,
                [
                    (-2, rat(1, 3)),
                    (0, int(1)),
                    (1, rat(-1, 5)),
                    (3, rat(2, 7)),
                ]
                .into_iter()
                .map(|(e, c)| (MultiIndex::from([e]), c)),
            )
            .unwrap();
            let mask = Mask::new(p, m).unwrap();
            let data = GridData::from_fn(IndexBox::new([-3].into(), [4].into()), None, |i| {
                rat(i.entries()[0] * i.entries()[0] - 2, 3)
            })
            .unwrap();
            let out = subdivide_once(&mask, &data).unwrap();
            for (alpha, v) in out.iter() {
                assert_eq!(v, naive(&mask, &data, &alpha), "m = {m}, alpha = {alpha}");
            }
            assert!(out.support().contains_box(out.trusted()));
        }
    }

    #[test]
    fn constants_are_reproduced_on_trusted_box() {
        let data = GridData::from_fn(IndexBox::cube(1, 10), None, |_| int(1)).unwrap();
        let out = subdivide_once(&cubic(), &data).unwrap();
        assert!(!out.trusted().is_empty());
        for idx in out.trusted().iter() {
            assert_eq!(out.get(&idx), int(1));
        }
        // the boundary is not trusted and is indeed wrong
        assert_ne!(out.get(&out.support().lower.clone()), int(1));
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = Rational::from_integer(BigInt::from(i128::MAX / 2));
        let data = GridData::from_values(IndexBox::cube(1, 1), None, vec![big.clone(); 3]).unwrap();
        let out = subdivide_once(&cubic(), &data).unwrap();
        for (alpha, v) in out.iter() {
            assert_eq!(v, naive(&cubic(), &data, &alpha));
        }
    }

    #[test]
    fn cascade_levels() {
        let c0 = cascade(&cubic(), 0).unwrap();
        assert_eq!(c0, GridData::delta(1));
        let c1 = cascade(&cubic(), 1).unwrap();
        assert_eq!(
            c1.nonzero_map(),
            cubic()
                .symbol()
                .terms()
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect()
        );
        for r in 0..=6 {
            assert_eq!(cascade(&cubic(), r).unwrap().sum(), int(2i64.pow(r)));
        }
        assert!(matches!(
            cascade(&cubic(), 13),
            Err(Error::CascadeTooDeep { requested: 13, .. })
        ));
    }
}
