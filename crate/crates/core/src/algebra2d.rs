//! The algebras of complex, double and dual numbers, their 2×2 matrix
//! representations, and the zero-divisor cone of the full matrix algebra.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{scale_of, Scalar};

/// Relative tolerance for float-mode determinant tests on 2×2 matrices.
pub const MAT_ZERO_DIVISOR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Complex,
    Double,
    Dual,
}

impl AlgebraKind {
    pub const ALL: [AlgebraKind; 3] =
        [AlgebraKind::Complex, AlgebraKind::Double, AlgebraKind::Dual];

    /// The square of the imaginary unit: -1, +1 or 0.
    pub fn unit_square(self) -> i64 {
        match self {
            AlgebraKind::Complex => -1,
            AlgebraKind::Double => 1,
            AlgebraKind::Dual => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgebraKind::Complex => "complex",
            AlgebraKind::Double => "double",
            AlgebraKind::Dual => "dual",
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgebraKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "complex" => Ok(AlgebraKind::Complex),
            "double" => Ok(AlgebraKind::Double),
            "dual" => Ok(AlgebraKind::Dual),
            other => Err(Error::Parse(format!("unknown algebra kind {other:?}"))),
        }
    }
}

/// An element `x + u y` of one of the three algebras.
#[derive(Debug, Clone, PartialEq)]
pub struct A2<S> {
    pub kind: AlgebraKind,
    pub x: S,
    pub y: S,
}

impl<S: Scalar> A2<S> {
    pub fn new(kind: AlgebraKind, x: S, y: S) -> Self {
        A2 { kind, x, y }
    }

    pub fn from_ints(kind: AlgebraKind, x: i64, y: i64) -> Self {
        A2::new(kind, S::from_i64(x), S::from_i64(y))
    }

    pub fn zero(kind: AlgebraKind) -> Self {
        A2::new(kind, S::zero(), S::zero())
    }

    pub fn one(kind: AlgebraKind) -> Self {
        A2::new(kind, S::one(), S::zero())
    }

    /// The imaginary unit `i`, `e` or `ε`.
    pub fn unit(kind: AlgebraKind) -> Self {
        A2::new(kind, S::zero(), S::one())
    }

    pub fn real(kind: AlgebraKind, x: S) -> Self {
        A2::new(kind, x, S::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    fn check_kind(&self, other: &Self) -> Result<()> {
        if self.kind == other.kind {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                left: self.kind,
                right: other.kind,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_kind(other)?;
        Ok(A2::new(
            self.kind,
            self.x.clone() + other.x.clone(),
            self.y.clone() + other.y.clone(),
        ))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_kind(other)?;
        let s = S::from_i64(self.kind.unit_square());
        let x = self.x.clone() * other.x.clone() + s * self.y.clone() * other.y.clone();
        let y = self.x.clone() * other.y.clone() + self.y.clone() * other.x.clone();
        Ok(A2::new(self.kind, x, y))
    }

    pub fn scale(&self, k: &S) -> Self {
        A2::new(
            self.kind,
            self.x.clone() * k.clone(),
            self.y.clone() * k.clone(),
        )
    }

    /// `x² - u² y²`, the determinant of the matrix representation.
    pub fn norm(&self) -> S {
        let s = S::from_i64(self.kind.unit_square());
        self.x.clone() * self.x.clone() - s * self.y.clone() * self.y.clone()
    }

    /// `x - u y`; the product with `self` is the norm.
    pub fn conjugate(&self) -> Self {
        A2::new(self.kind, self.x.clone(), -self.y.clone())
    }

    /// Zero itself counts as a zero divisor so that [`A2::inverse`] has a
    /// single guard. Float mode compares the norm against `1e-12` of the
    /// squared magnitude.
    pub fn is_zero_divisor(&self) -> bool {
        let scale = {
            let m = scale_of(&[self.x.clone(), self.y.clone()]);
            m * m
        };
        match self.kind {
            AlgebraKind::Complex => self.norm().negligible(scale, 1e-24),
            AlgebraKind::Double => self.norm().negligible(scale, 1e-12),
            AlgebraKind::Dual => self.x.negligible(scale.sqrt(), 1e-12),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero_divisor() {
            return Err(Error::Divisor(format!(
                "{} element ({}, {}) has no inverse",
                self.kind, self.x, self.y
            )));
        }
        let n = self.norm();
        let c = self.conjugate();
        Ok(A2::new(self.kind, c.x / n.clone(), c.y / n))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = A2::one(self.kind);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// `[[x, u² y], [y, x]]`: complex `[[x,-y],[y,x]]`, double `[[x,y],[y,x]]`,
    /// dual `[[x,0],[y,x]]`.
    pub fn to_matrix(&self) -> Mat2<S> {
        let s = S::from_i64(self.kind.unit_square());
        Mat2::new(
            self.x.clone(),
            s * self.y.clone(),
            self.y.clone(),
            self.x.clone(),
        )
    }

    /// Inverse of [`A2::to_matrix`]; the matrix must have the kind's shape
    /// exactly (to `1e-12` relative in float mode).
    pub fn from_matrix(m: &Mat2<S>, kind: AlgebraKind) -> Result<Self> {
        let scale = m.scale();
        let tol = 1e-12;
        let s = S::from_i64(kind.unit_square());
        let diag_ok = (m.a00.clone() - m.a11.clone()).negligible(scale, tol);
        let off_ok = (m.a01.clone() - s * m.a10.clone()).negligible(scale, tol);
        if !diag_ok {
            return Err(Error::Representation {
                kind,
                reason: "diagonal entries differ".into(),
            });
        }
        if !off_ok {
            let reason = match kind {
                AlgebraKind::Complex => "upper-right entry must be the negated lower-left entry",
                AlgebraKind::Double => "off-diagonal entries must be equal",
                AlgebraKind::Dual => "upper-right entry must be 0",
            };
            return Err(Error::Representation {
                kind,
                reason: reason.into(),
            });
        }
        Ok(A2::new(kind, m.a00.clone(), m.a10.clone()))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> A2<T> {
        A2::new(self.kind, f(&self.x), f(&self.y))
    }

    pub fn to_f64(&self) -> A2<f64> {
        self.map(|v| v.to_f64())
    }
}

impl<S: Scalar> fmt::Display for A2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = match self.kind {
            AlgebraKind::Complex => "i",
            AlgebraKind::Double => "e",
            AlgebraKind::Dual => "ε",
        };
        write!(f, "{} + {}·{}", self.x, self.y, unit)
    }
}

// Mixing kinds in operator form is a contract violation and panics; use
// `try_add` / `try_mul` at API boundaries.
macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<S: Scalar> $tr<&A2<S>> for &A2<S> {
            type Output = A2<S>;
            fn $method(self, rhs: &A2<S>) -> A2<S> {
                assert_eq!(self.kind, rhs.kind, "algebra kind mismatch");
                $body(self, rhs)
            }
        }
        impl<S: Scalar> $tr for A2<S> {
            type Output = A2<S>;
            fn $method(self, rhs: A2<S>) -> A2<S> {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a: &A2<S>, b: &A2<S>| A2::new(
    a.kind,
    a.x.clone() + b.x.clone(),
    a.y.clone() + b.y.clone()
));
binop!(Sub, sub, |a: &A2<S>, b: &A2<S>| A2::new(
    a.kind,
    a.x.clone() - b.x.clone(),
    a.y.clone() - b.y.clone()
));
binop!(Mul, mul, |a: &A2<S>, b: &A2<S>| a
    .try_mul(b)
    .expect("same kind"));

impl<S: Scalar> Neg for &A2<S> {
    type Output = A2<S>;
    fn neg(self) -> A2<S> {
        A2::new(self.kind, -self.x.clone(), -self.y.clone())
    }
}

impl<S: Scalar> Neg for A2<S> {
    type Output = A2<S>;
    fn neg(self) -> A2<S> {
        -&self
    }
}

/// A general 2×2 real matrix `[[a00, a01], [a10, a11]]`, an element of the
/// total matrix algebra. In the cone notation `a00 = x₀⁰`, `a01 = x₁⁰`,
/// `a10 = x₀¹`, `a11 = x₁¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat2<S> {
    pub a00: S,
    pub a01: S,
    pub a10: S,
    pub a11: S,
}

impl<S: Scalar> Mat2<S> {
    pub fn new(a00: S, a01: S, a10: S, a11: S) -> Self {
        Mat2 { a00, a01, a10, a11 }
    }

    pub fn from_ints(rows: [[i64; 2]; 2]) -> Self {
        Mat2::new(
            S::from_i64(rows[0][0]),
            S::from_i64(rows[0][1]),
            S::from_i64(rows[1][0]),
            S::from_i64(rows[1][1]),
        )
    }

    pub fn identity() -> Self {
        Mat2::from_ints([[1, 0], [0, 1]])
    }

    pub fn entries(&self) -> [S; 4] {
        [
            self.a00.clone(),
            self.a01.clone(),
            self.a10.clone(),
            self.a11.clone(),
        ]
    }

    fn scale(&self) -> f64 {
        scale_of(&self.entries())
    }

    pub fn det(&self) -> S {
        self.a00.clone() * self.a11.clone() - self.a01.clone() * self.a10.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|v| v.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(
            self.a00.clone(),
            self.a10.clone(),
            self.a01.clone(),
            self.a11.clone(),
        )
    }

    /// First column `(a00, a10)`.
    pub fn col0(&self) -> [S; 2] {
        [self.a00.clone(), self.a10.clone()]
    }

    /// Second column `(a01, a11)`.
    pub fn col1(&self) -> [S; 2] {
        [self.a01.clone(), self.a11.clone()]
    }

    /// Zero-divisor test on the cone `x₀⁰ x₁¹ - x₀¹ x₁⁰ = 0`; exact in
    /// rational mode, `|det| <= 1e-10·‖m‖²` in float mode.
    pub fn is_zero_divisor(&self) -> bool {
        let s = self.scale();
        self.det().negligible(s * s, MAT_ZERO_DIVISOR_TOL)
    }

    /// The two plane generators of the isotropic cone through `self`.
    ///
    /// `λ = x₀⁰/x₀¹ = x₁⁰/x₁¹` and `μ = x₀⁰/x₁⁰ = x₀¹/x₁¹`, each read from
    /// whichever defining ratio is not `0/0`.
    pub fn cone_ruling(&self) -> Result<ConeRuling<S>> {
        if self.is_zero() {
            return Err(Error::DegenerateInput(
                "zero matrix lies on every generator".into(),
            ));
        }
        if !self.is_zero_divisor() {
            return Err(Error::Contract(format!(
                "matrix is not a zero divisor (det = {})",
                self.det()
            )));
        }
        let scale = self.scale();
        let tol = MAT_ZERO_DIVISOR_TOL;
        let lambda = projective_ratio((&self.a00, &self.a10), (&self.a01, &self.a11), scale, tol);
        let mu = projective_ratio((&self.a00, &self.a01), (&self.a10, &self.a11), scale, tol);
        let ruling = ConeRuling { lambda, mu };
        // both defining fractions of each family must agree
        let check = |num: &S, den: &S, r: &Extended<S>| match r {
            Extended::Finite(v) => (num.clone() - v.clone() * den.clone()).negligible(scale, tol),
            Extended::Infinite => den.negligible(scale, tol),
        };
        let consistent = check(&self.a00, &self.a10, &ruling.lambda)
            && check(&self.a01, &self.a11, &ruling.lambda)
            && check(&self.a00, &self.a01, &ruling.mu)
            && check(&self.a10, &self.a11, &ruling.mu);
        if !consistent {
            return Err(Error::InternalConsistency(
                "cone ruling ratios disagree".into(),
            ));
        }
        Ok(ruling)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat2<T> {
        Mat2::new(f(&self.a00), f(&self.a01), f(&self.a10), f(&self.a11))
    }
}

fn projective_ratio<S: Scalar>(
    first: (&S, &S),
    second: (&S, &S),
    scale: f64,
    tol: f64,
) -> Extended<S> {
    let (num, den) = if first.0.negligible(scale, tol) && first.1.negligible(scale, tol) {
        second
    } else {
        first
    };
    if den.negligible(scale, tol) {
        Extended::Infinite
    } else {
        Extended::Finite(num.clone() / den.clone())
    }
}

impl<S: Scalar> Mul for &Mat2<S> {
    type Output = Mat2<S>;
    fn mul(self, b: &Mat2<S>) -> Mat2<S> {
        let a = self;
        Mat2::new(
            a.a00.clone() * b.a00.clone() + a.a01.clone() * b.a10.clone(),
            a.a00.clone() * b.a01.clone() + a.a01.clone() * b.a11.clone(),
            a.a10.clone() * b.a00.clone() + a.a11.clone() * b.a10.clone(),
            a.a10.clone() * b.a01.clone() + a.a11.clone() * b.a11.clone(),
        )
    }
}

/// A real number or the point at infinity of `RP^1`.
#[derive(Debug, Clone, PartialEq)]
pub enum Extended<S> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> Extended<S> {
    /// Homogeneous pair `(v, 1)` or `(1, 0)`.
    pub fn homogeneous(&self) -> (S, S) {
        match self {
            Extended::Finite(v) => (v.clone(), S::one()),
            Extended::Infinite => (S::one(), S::zero()),
        }
    }

    pub fn encode(&self) -> String {
        match self {
            Extended::Finite(v) => v.encode(),
            Extended::Infinite => "inf".into(),
        }
    }
}

/// Parameters `(λ, μ)` of the two plane generators through a point of the
/// zero-divisor cone.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeRuling<S> {
    pub lambda: Extended<S>,
    pub mu: Extended<S>,
}

impl<S: Scalar> ConeRuling<S> {
    /// The rank-one matrix `(λ, 1)ᵀ (μ, 1)` with the given generators; equal
    /// to the source matrix up to a nonzero scale.
    pub fn representative(&self) -> Mat2<S> {
        let (c0, c1) = self.lambda.homogeneous();
        let (r0, r1) = self.mu.homogeneous();
        Mat2::new(
            c0.clone() * r0.clone(),
            c0 * r1.clone(),
            c1.clone() * r0,
            c1 * r1,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    fn q(kind: AlgebraKind, x: i64, y: i64) -> A2<Q> {
        A2::from_ints(kind, x, y)
    }

    #[test]
    fn unit_squares() {
        use AlgebraKind::*;
        assert_eq!(&q(Double, 0, 1) * &q(Double, 0, 1), q(Double, 1, 0));
        assert_eq!(&q(Dual, 0, 1) * &q(Dual, 0, 1), q(Dual, 0, 0));
        assert_eq!(&q(Complex, 0, 1) * &q(Complex, 0, 1), q(Complex, -1, 0));
    }

    #[test]
    fn mixing_kinds_is_an_error() {
        let err = q(AlgebraKind::Dual, 1, 0)
            .try_mul(&q(AlgebraKind::Double, 1, 0))
            .unwrap_err();
        assert!(matches!(err, Error::KindMismatch { .. }));
    }

    #[test]
    #[should_panic(expected = "algebra kind mismatch")]
    fn operator_mixing_panics() {
        let _ = &q(AlgebraKind::Dual, 1, 0) * &q(AlgebraKind::Complex, 1, 0);
    }

    #[test]
    fn zero_divisors() {
        use AlgebraKind::*;
        assert!(q(Double, 1, 1).is_zero_divisor());
        assert!(q(Double, 2, -2).is_zero_divisor());
        assert!(q(Dual, 0, 5).is_zero_divisor());
        assert!(!q(Complex, 3, 4).is_zero_divisor());
        assert!(q(Complex, 0, 0).is_zero_divisor());
        assert!(!q(Dual, 1, 7).is_zero_divisor());
    }

    #[test]
    fn inverses() {
        use AlgebraKind::*;
        assert_eq!(q(Complex, 0, 1).inverse().unwrap(), q(Complex, 0, -1));
        let dual = q(Dual, 2, 3);
        let inv = dual.inverse().unwrap();
        assert_eq!(inv, A2::new(Dual, Q::ratio(1, 2), Q::ratio(-3, 4)));
        // oracle: multiply back
        assert_eq!(&dual * &inv, A2::one(Dual));
        assert!(matches!(q(Double, 1, 1).inverse(), Err(Error::Divisor(_))));
    }

    #[test]
    fn float_inverse_is_close() {
        let a = A2::new(AlgebraKind::Double, 0.3_f64, -1.7);
        let p = &a * &a.inverse().unwrap();
        assert!((p.x - 1.0).abs() < 1e-12 && p.y.abs() < 1e-12);
    }

    #[test]
    fn representations() {
        use AlgebraKind::*;
        let m = q(Complex, 3, 4).to_matrix();
        assert_eq!(m, Mat2::from_ints([[3, -4], [4, 3]]));
        assert_eq!(m.det(), <Q as Scalar>::from_i64(25));
        assert_eq!(q(Dual, 3, 4).to_matrix(), Mat2::from_ints([[3, 0], [4, 3]]));
        assert_eq!(
            q(Double, 3, 4).to_matrix(),
            Mat2::from_ints([[3, 4], [4, 3]])
        );
        let err = A2::<Q>::from_matrix(&Mat2::from_ints([[1, 1], [0, 1]]), Dual).unwrap_err();
        assert!(matches!(err, Error::Representation { .. }));
        assert_eq!(
            A2::from_matrix(&q(Double, -2, 5).to_matrix(), Double).unwrap(),
            q(Double, -2, 5)
        );
    }

    #[test]
    fn matrix_zero_divisors() {
        assert!(Mat2::<Q>::from_ints([[2, 4], [1, 2]]).is_zero_divisor());
        assert!(!Mat2::<Q>::identity().is_zero_divisor());
        let m = Mat2::<Q>::from_ints([[1, 2], [3, 4]]);
        assert_eq!(m.det(), <Q as Scalar>::from_i64(-2));
        assert!(!m.is_zero_divisor());
    }

    #[test]
    fn cone_rulings() {
        let r = Mat2::<Q>::from_ints([[2, 4], [1, 2]])
            .cone_ruling()
            .unwrap();
        assert_eq!(r.lambda, Extended::Finite(<Q as Scalar>::from_i64(2)));
        assert_eq!(r.mu, Extended::Finite(Q::ratio(1, 2)));

        let r = Mat2::<Q>::from_ints([[1, 0], [0, 0]])
            .cone_ruling()
            .unwrap();
        assert_eq!(r.lambda, Extended::Infinite);
        assert_eq!(r.mu, Extended::Infinite);

        assert!(matches!(
            Mat2::<Q>::identity().cone_ruling(),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            Mat2::<Q>::from_ints([[0, 0], [0, 0]]).cone_ruling(),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn cone_ruling_of_column_only_matrix() {
        // first column zero: λ must come from the second defining fraction
        let r = Mat2::<Q>::from_ints([[0, 3], [0, 1]])
            .cone_ruling()
            .unwrap();
        assert_eq!(r.lambda, Extended::Finite(<Q as Scalar>::from_i64(3)));
        assert_eq!(r.mu, Extended::Finite(<Q as Scalar>::from_i64(0)));
    }

    #[test]
    fn matrix_cone_has_split_signature() {
        // det as a quadratic form on (a00, a01, a10, a11)
        let form = nalgebra::Matrix4::new(
            0.0, 0.0, 0.0, 0.5, //
            0.0, 0.0, -0.5, 0.0, //
            0.0, -0.5, 0.0, 0.0, //
            0.5, 0.0, 0.0, 0.0,
        );
        let eig = form.symmetric_eigenvalues();
        let pos = eig.iter().filter(|v| **v > 1e-12).count();
        let neg = eig.iter().filter(|v| **v < -1e-12).count();
        assert_eq!((pos, neg), (2, 2));
    }
}
