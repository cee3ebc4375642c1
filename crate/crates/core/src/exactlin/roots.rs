//! Real roots with multiplicities for low-degree polynomials.
//!
//! Exact mode factors the polynomial square-free (Yun), counts the real roots
//! of every factor with a Sturm sequence and only then locates them
//! numerically, so multiplicities and the real/complex split are exact.
//! Float mode clusters the complex root list with a fixed radius.

use std::cmp::Ordering;

use nalgebra::{Complex, DMatrix};
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::poly::{square_free, Poly};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Root clustering radius in float mode.
pub const CLUSTER_RADIUS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealRoot {
    pub value: f64,
    /// Exact value when the root is rational and was certified exactly.
    #[serde(serialize_with = "ser_opt_rational")]
    pub exact: Option<Rational>,
    pub multiplicity: usize,
}

/// A conjugate pair `re ± i·im` with `im > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexPair {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RootSet {
    pub real: Vec<RealRoot>,
    pub complex: Vec<ComplexPair>,
}

fn ser_opt_rational<S: serde::Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

impl RootSet {
    /// Sum of multiplicities, counting each conjugate pair twice.
    pub fn total_multiplicity(&self) -> usize {
        self.real.iter().map(|r| r.multiplicity).sum::<usize>()
            + 2 * self.complex.iter().map(|c| c.multiplicity).sum::<usize>()
    }

    pub fn real_count(&self) -> usize {
        self.real.len()
    }

    /// Same real and complex roots with the same multiplicities, roots
    /// within `tol` of each other.
    pub fn matches(&self, other: &RootSet, tol: f64) -> bool {
        self.real.len() == other.real.len()
            && self.complex.len() == other.complex.len()
            && self
                .real
                .iter()
                .zip(&other.real)
                .all(|(a, b)| a.multiplicity == b.multiplicity && (a.value - b.value).abs() <= tol)
            && self.complex.iter().zip(&other.complex).all(|(a, b)| {
                a.multiplicity == b.multiplicity
                    && (a.re - b.re).abs() <= tol
                    && (a.im - b.im).abs() <= tol
            })
    }

    /// Largest distance between paired roots, `inf` on a structural mismatch.
    pub fn distance(&self, other: &RootSet) -> f64 {
        if self.real.len() != other.real.len() || self.complex.len() != other.complex.len() {
            return f64::INFINITY;
        }
        let mut d = 0.0_f64;
        for (a, b) in self.real.iter().zip(&other.real) {
            if a.multiplicity != b.multiplicity {
                return f64::INFINITY;
            }
            d = d.max((a.value - b.value).abs());
        }
        for (a, b) in self.complex.iter().zip(&other.complex) {
            if a.multiplicity != b.multiplicity {
                return f64::INFINITY;
            }
            d = d.max(Complex::new(a.re - b.re, a.im - b.im).norm());
        }
        d
    }

    fn sort(&mut self) {
        self.real
            .sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap_or(Ordering::Equal));
        self.complex.sort_by(|a, b| {
            (a.re, a.im)
                .partial_cmp(&(b.re, b.im))
                .unwrap_or(Ordering::Equal)
        });
    }
}

/// All roots of `p` with multiplicities.
///
/// Float mode clusters roots closer than `radius`; exact mode ignores it.
pub fn real_roots_with_multiplicity<S: Scalar>(p: &Poly<S>, radius: f64) -> Result<RootSet> {
    if p.is_zero() {
        return Err(Error::DegenerateInput(
            "zero polynomial has every number as a root".into(),
        ));
    }
    if S::EXACT {
        Ok(exact_roots(&p.to_rational()))
    } else {
        Ok(clustered_roots(&p.map(|c| c.to_f64()), radius))
    }
}

/// Roots shared by all nonzero polynomials in `polys`, together with the
/// polynomial that carries them (exact gcd, or the dominant member in float
/// mode).
pub fn common_roots<S: Scalar>(polys: &[Poly<S>], radius: f64) -> Result<(RootSet, Poly<S>)> {
    let nonzero: Vec<&Poly<S>> = polys.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::DegenerateInput(
            "all polynomials vanish identically".into(),
        ));
    }
    if S::EXACT {
        let g = nonzero[1..]
            .iter()
            .fold(nonzero[0].monic(), |acc, p| acc.gcd(p));
        let roots = if g.degree() == Some(0) {
            RootSet::default()
        } else {
            exact_roots(&g.to_rational())
        };
        return Ok((roots, g));
    }
    let primary = nonzero
        .iter()
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap_or(Ordering::Equal))
        .unwrap();
    let primary = primary.monic();
    let mut roots = clustered_roots(&primary.map(|c| c.to_f64()), radius);
    let shared = |z: Complex<f64>| {
        nonzero.iter().all(|q| {
            let deg = q.degree().unwrap_or(0) as i32;
            q.eval_complex(z).norm() <= radius * q.norm() * (1.0 + z.norm()).powi(deg)
        })
    };
    roots.real.retain(|r| shared(Complex::new(r.value, 0.0)));
    roots.complex.retain(|c| shared(Complex::new(c.re, c.im)));
    Ok((roots, primary))
}

/// `b² - 4ac` of a quadratic, `None` for other degrees.
pub fn discriminant<S: Scalar>(p: &Poly<S>) -> Option<S> {
    if p.degree() != Some(2) {
        return None;
    }
    let c = p.coeffs();
    Some(c[1].clone() * c[1].clone() - S::from_i64(4) * c[2].clone() * c[0].clone())
}

fn exact_roots(p: &Poly<Rational>) -> RootSet {
    let mut out = RootSet::default();
    for (factor, mult) in square_free(p) {
        let c = factor.coeffs();
        if factor.degree() == Some(1) {
            let r = -c[0].clone() / c[1].clone();
            out.real.push(RealRoot {
                value: Scalar::to_f64(&r),
                exact: Some(r),
                multiplicity: mult,
            });
            continue;
        }
        let n_real = sturm_count(&factor);
        let f = factor.map(Scalar::to_f64);
        let mut numeric = companion_roots(&f);
        numeric.sort_by(|a, b| {
            a.im.abs()
                .partial_cmp(&b.im.abs())
                .unwrap_or(Ordering::Equal)
        });
        for z in numeric.iter().take(n_real) {
            let value = newton_polish(&f, z.re);
            let exact = recover_rational(value).filter(|r| factor.eval(r).is_zero());
            out.real.push(RealRoot {
                value: exact.as_ref().map(Scalar::to_f64).unwrap_or(value),
                exact,
                multiplicity: mult,
            });
        }
        for z in numeric.iter().skip(n_real).filter(|z| z.im > 0.0) {
            out.complex.push(ComplexPair {
                re: z.re,
                im: z.im,
                multiplicity: mult,
            });
        }
    }
    out.sort();
    out
}

fn clustered_roots(p: &Poly<f64>, radius: f64) -> RootSet {
    let c = p.coeffs();
    let zeros = c.iter().take_while(|v| **v == 0.0).count();
    let rest = Poly::new(c[zeros..].to_vec());
    let mut all: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); zeros];
    all.extend(companion_roots(&rest));

    // single-linkage clustering
    let n = all.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (all[i] - all[j]).norm() <= radius {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut clusters: Vec<(usize, Vec<Complex<f64>>)> = Vec::new();
    for (i, z) in all.iter().enumerate() {
        let root = find(&mut label, i);
        match clusters.iter_mut().find(|(r, _)| *r == root) {
            Some((_, members)) => members.push(*z),
            None => clusters.push((root, vec![*z])),
        }
    }
    let mut out = RootSet::default();
    for (_, members) in clusters {
        let m = members.len();
        let mean = members.iter().sum::<Complex<f64>>() / m as f64;
        if mean.im.abs() <= radius {
            out.real.push(RealRoot {
                value: if m == 1 {
                    newton_polish(p, mean.re)
                } else {
                    mean.re
                },
                exact: None,
                multiplicity: m,
            });
        } else if mean.im > 0.0 {
            out.complex.push(ComplexPair {
                re: mean.re,
                im: mean.im,
                multiplicity: m,
            });
        }
    }
    out.sort();
    out
}

/// Eigenvalues of the companion matrix.
fn companion_roots(p: &Poly<f64>) -> Vec<Complex<f64>> {
    let Some(n) = p.degree() else {
        return vec![];
    };
    if n == 0 {
        return vec![];
    }
    let c = p.coeffs();
    let lc = c[n];
    if n == 1 {
        return vec![Complex::new(-c[0] / lc, 0.0)];
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lc;
    }
    match m.try_schur(f64::EPSILON, 500) {
        Some(schur) => schur.complex_eigenvalues().iter().cloned().collect(),
        None => aberth(c),
    }
}

/// Simultaneous Aberth iteration; only used when the Schur iteration stalls.
fn aberth(c: &[f64]) -> Vec<Complex<f64>> {
    let n = c.len() - 1;
    let eval = |z: Complex<f64>| {
        let mut v = Complex::new(0.0, 0.0);
        let mut d = Complex::new(0.0, 0.0);
        for k in (0..=n).rev() {
            d = d * z + v;
            v = v * z + c[k];
        }
        (v, d)
    };
    let radius = 1.0 + c[..n].iter().map(|v| (v / c[n]).abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex<f64>> = (0..n)
        .map(|k| {
            Complex::from_polar(
                radius * 0.5,
                0.4 + std::f64::consts::TAU * k as f64 / n as f64,
            )
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0_f64;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let repulsion: Complex<f64> = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex::new(1.0, 0.0) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm());
            }
        }
        if moved <= 1e-15 * radius {
            break;
        }
    }
    z
}

fn newton_polish(p: &Poly<f64>, x0: f64) -> f64 {
    let dp = p.derivative();
    let mut x = x0;
    for _ in 0..8 {
        let d = dp.eval(&x);
        if d == 0.0 {
            break;
        }
        let step = p.eval(&x) / d;
        if !step.is_finite() {
            break;
        }
        x -= step;
        if step.abs() <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    if p.eval(&x).abs() <= p.eval(&x0).abs() {
        x
    } else {
        x0
    }
}

/// Best continued-fraction approximant with denominator at most 10⁶.
fn recover_rational(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let target = Rational::from_float(x)?;
    let (mut h0, mut h1) = (num_bigint::BigInt::from(0), num_bigint::BigInt::from(1));
    let (mut k0, mut k1) = (num_bigint::BigInt::from(1), num_bigint::BigInt::from(0));
    let mut rest = target;
    let limit = num_bigint::BigInt::from(1_000_000);
    let mut best = None;
    for _ in 0..64 {
        let a = rest.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > limit {
            break;
        }
        best = Some(Rational::new(h2.clone(), k2.clone()));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = &rest - Rational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    best
}

/// Number of distinct real roots of a square-free polynomial.
fn sturm_count(f: &Poly<Rational>) -> usize {
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    let signs_at = |neg_inf: bool| -> Vec<i32> {
        seq.iter()
            .map(|p| {
                let lc = p.leading().unwrap();
                let mut s = if lc.is_positive() { 1 } else { -1 };
                if neg_inf && p.degree().unwrap() % 2 == 1 {
                    s = -s;
                }
                s
            })
            .collect()
    };
    let changes = |v: Vec<i32>| v.windows(2).filter(|w| w[0] != w[1]).count();
    changes(signs_at(true)) - changes(signs_at(false))
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Rational;

    fn q(c: &[i64]) -> Poly<Q> {
        Poly::from_i64(c)
    }

    fn squared(p: &Poly<Q>) -> Poly<Q> {
        p * p
    }

    #[test]
    fn double_roots_at_plus_minus_one() {
        let r = real_roots_with_multiplicity(&squared(&q(&[1, 0, -1])), 0.0).unwrap();
        assert_eq!(r.real.len(), 2);
        assert_eq!(r.real[0].exact, Some(<Q as Scalar>::from_i64(-1)));
        assert_eq!(r.real[1].exact, Some(<Q as Scalar>::from_i64(1)));
        assert!(r.real.iter().all(|x| x.multiplicity == 2));
        assert!(r.complex.is_empty());
    }

    #[test]
    fn quadruple_root_at_zero() {
        let r = real_roots_with_multiplicity(&q(&[0, 0, 0, 0, 1]), 0.0).unwrap();
        assert_eq!(r.real.len(), 1);
        assert_eq!(r.real[0].exact, Some(<Q as Scalar>::from_i64(0)));
        assert_eq!(r.real[0].multiplicity, 4);
        let f =
            real_roots_with_multiplicity(&Poly::<f64>::from_i64(&[0, 0, 0, 0, 1]), CLUSTER_RADIUS)
                .unwrap();
        assert_eq!(f.real.len(), 1);
        assert_eq!(f.real[0].multiplicity, 4);
    }

    #[test]
    fn conjugate_pair_of_multiplicity_two() {
        let r = real_roots_with_multiplicity(&squared(&q(&[1, 0, 1])), 0.0).unwrap();
        assert!(r.real.is_empty());
        assert_eq!(r.complex.len(), 1);
        let c = &r.complex[0];
        assert!(c.re.abs() < 1e-12 && (c.im - 1.0).abs() < 1e-12);
        assert_eq!(c.multiplicity, 2);
    }

    #[test]
    fn float_clustering_recovers_double_roots() {
        let p = Poly::<f64>::from_i64(&[1, 0, -2, 0, 1]);
        let r = real_roots_with_multiplicity(&p, CLUSTER_RADIUS).unwrap();
        assert_eq!(r.real.len(), 2);
        assert!(r.real.iter().all(|x| x.multiplicity == 2));
        assert_eq!(r.total_multiplicity(), 4);
    }

    #[test]
    fn irrational_roots_are_real_but_not_exact() {
        let r = real_roots_with_multiplicity(&q(&[-2, 0, 1]), 0.0).unwrap();
        assert_eq!(r.real.len(), 2);
        assert!(r.real.iter().all(|x| x.exact.is_none()));
        assert!((r.real[1].value - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn zero_polynomial_is_degenerate() {
        assert!(matches!(
            real_roots_with_multiplicity(&Poly::<Q>::zero(), 0.0),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn common_roots_exact_and_float() {
        let a = &q(&[-1, 0, 1]) * &q(&[3, 1]);
        let b = &q(&[-1, 0, 1]) * &q(&[5, 2]);
        let (r, g) = common_roots(&[a.clone(), b.clone(), Poly::zero()], 0.0).unwrap();
        assert_eq!(g, q(&[-1, 0, 1]));
        assert_eq!(r.real.len(), 2);
        let (rf, _) = common_roots(
            &[a.map(Scalar::to_f64), b.map(Scalar::to_f64)],
            CLUSTER_RADIUS,
        )
        .unwrap();
        assert!(rf.matches(&r, 1e-9));
        assert_eq!(discriminant(&g), Some(<Q as Scalar>::from_i64(4)));
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(sturm_count(&q(&[-1, 0, 1])), 2);
        assert_eq!(sturm_count(&q(&[1, 0, 1])), 0);
        assert_eq!(sturm_count(&q(&[0, -1, 0, 1])), 3);
    }
}
