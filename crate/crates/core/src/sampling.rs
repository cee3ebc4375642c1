//! Seeded random inputs. Each sample index gets its own ChaCha stream, so a
//! sample does not depend on how work is split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra2d::{AlgebraKind, A2};
use crate::error::{Error, Result};
use crate::proj_plane::{FrameA, PointA};
use crate::ruled::{CurveA, PolyA};
use crate::scalar::Scalar;

/// Bound on numerators and denominators of sampled rationals.
pub const COEFF_BOUND: i64 = 10;

const MAX_REJECTIONS: usize = 1000;

/// The generator for sample `index` of the run seeded with `seed`.
pub fn rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// `p/q` with `|p| ≤ 10`, `1 ≤ q ≤ 10`.
pub fn scalar<S: Scalar>(rng: &mut impl Rng) -> S {
    let p = rng.random_range(-COEFF_BOUND..=COEFF_BOUND);
    let q = rng.random_range(1..=COEFF_BOUND);
    S::ratio(p, q)
}

pub fn a2<S: Scalar>(rng: &mut impl Rng, kind: AlgebraKind) -> A2<S> {
    A2::new(kind, scalar(rng), scalar(rng))
}

fn retry<T>(what: &str, mut f: impl FnMut() -> Option<T>) -> Result<T> {
    (0..MAX_REJECTIONS)
        .find_map(|_| f())
        .ok_or_else(|| Error::DegenerateInput(format!("could not sample {what}")))
}

pub fn non_zero_divisor<S: Scalar>(rng: &mut impl Rng, kind: AlgebraKind) -> A2<S> {
    retry("a unit", || {
        let a = a2(rng, kind);
        (!a.is_zero() && !a.is_zero_divisor()).then_some(a)
    })
    .expect("units are dense")
}

/// A nonzero zero divisor; `None` for the complex numbers, which have none.
pub fn zero_divisor<S: Scalar>(rng: &mut impl Rng, kind: AlgebraKind) -> Option<A2<S>> {
    let t: S = loop {
        let t = scalar::<S>(rng);
        if !t.is_zero() {
            break t;
        }
    };
    match kind {
        AlgebraKind::Complex => None,
        AlgebraKind::Double => {
            let sign = if rng.random_bool(0.5) {
                S::one()
            } else {
                -S::one()
            };
            Some(A2::new(kind, t.clone(), sign * t))
        }
        AlgebraKind::Dual => Some(A2::new(kind, S::zero(), t)),
    }
}

/// A point with random coordinates, rejection-sampled against rank 2.
pub fn point<S: Scalar>(rng: &mut impl Rng, kind: AlgebraKind) -> Result<PointA<S>> {
    retry("a point", || {
        PointA::new([a2(rng, kind), a2(rng, kind), a2(rng, kind)]).ok()
    })
}

/// Three pairwise non-adjacent points.
pub fn frame<S: Scalar>(rng: &mut impl Rng, kind: AlgebraKind) -> Result<FrameA<S>> {
    retry("a frame", || {
        let pts = [
            point(rng, kind).ok()?,
            point(rng, kind).ok()?,
            point(rng, kind).ok()?,
        ];
        FrameA::new(pts).ok()
    })
}

/// Two distinct adjacent points `X` and `X·P + W·z` with `z` a zero divisor.
/// Over the complex numbers adjacency is equality, and `X·P` is returned.
pub fn adjacent_pair<S: Scalar>(
    rng: &mut impl Rng,
    kind: AlgebraKind,
) -> Result<(PointA<S>, PointA<S>)> {
    let x = point(rng, kind)?;
    retry("an adjacent point", || {
        let p = non_zero_divisor(rng, kind);
        let xp = x.right_mul(&p).ok()?;
        let y = match zero_divisor(rng, kind) {
            None => xp,
            Some(z) => {
                let w = point(rng, kind).ok()?;
                let c: [A2<S>; 3] =
                    std::array::from_fn(|i| &xp.coords()[i] + &(&w.coords()[i] * &z));
                let y = PointA::new(c).ok()?;
                if y.same_point(&x).ok()? {
                    return None;
                }
                y
            }
        };
        Some((x.clone(), y))
    })
}

fn poly<S: Scalar>(rng: &mut impl Rng, kind: AlgebraKind, degree: usize) -> PolyA<S> {
    let mut c: Vec<A2<S>> = (0..degree).map(|_| a2(rng, kind)).collect();
    c.push(non_zero_divisor(rng, kind));
    PolyA::new(kind, c).expect("one kind")
}

/// `(1, F¹, F²)` with `deg F¹ = 1` or `degree` and `deg F² = degree`,
/// unit leading coefficients.
pub fn curve<S: Scalar>(rng: &mut impl Rng, kind: AlgebraKind, degree: usize) -> CurveA<S> {
    let d1 = if rng.random_bool(0.5) { 1 } else { degree };
    CurveA::affine(poly(rng, kind, d1), poly(rng, kind, degree)).expect("one kind")
}

/// A curve of random degree 2 to 4.
pub fn random_curve<S: Scalar>(rng: &mut impl Rng, kind: AlgebraKind) -> CurveA<S> {
    let d = rng.random_range(2..=4);
    curve(rng, kind, d)
}

/// `n` curves, curve `i` drawn from stream `i`.
pub fn curves<S: Scalar>(seed: u64, kind: AlgebraKind, n: usize) -> Vec<CurveA<S>> {
    (0..n)
        .map(|i| random_curve(&mut rng(seed, i as u64), kind))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Q = scalar(&mut rng(7, 3));
        let b: Q = scalar(&mut rng(7, 3));
        assert_eq!(a, b);
        let xs: Vec<Q> = (0..8).map(|i| scalar(&mut rng(7, i))).collect();
        assert!(xs.windows(2).any(|w| w[0] != w[1]));
    }

    #[test]
    fn sampled_values_respect_bounds() {
        let mut r = rng(1, 0);
        for _ in 0..500 {
            let v: Q = scalar(&mut r);
            assert!(v.numer().magnitude() <= &10u32.into());
            assert!(v.denom() <= &10.into());
        }
    }

    #[test]
    fn zero_divisors_are_zero_divisors() {
        let mut r = rng(2, 0);
        for kind in [AlgebraKind::Double, AlgebraKind::Dual] {
            for _ in 0..50 {
                let z: A2<Q> = zero_divisor(&mut r, kind).unwrap();
                assert!(!z.is_zero() && z.is_zero_divisor());
            }
        }
        assert!(zero_divisor::<Q>(&mut r, AlgebraKind::Complex).is_none());
    }

    #[test]
    fn adjacent_pairs_are_adjacent() {
        for kind in AlgebraKind::ALL {
            for i in 0..20 {
                let (x, y) = adjacent_pair::<Q>(&mut rng(3, i), kind).unwrap();
                assert!(x.adjacent(&y).unwrap(), "{kind}");
            }
        }
    }

    #[test]
    fn curves_have_requested_degree() {
        for kind in AlgebraKind::ALL {
            let c: CurveA<Q> = curve(&mut rng(4, 0), kind, 3);
            assert_eq!(c.degree(), 3);
            assert!(c.is_affine());
        }
    }
}
