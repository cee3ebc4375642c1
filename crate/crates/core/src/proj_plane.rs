//! Points, lines and frames of the projective plane `AP²` over one of the
//! two-dimensional algebras.
//!
//! Homogeneous coordinates are only defined up to right multiplication by a
//! non-zero-divisor. Points are stored as given; normalization is always an
//! explicit call because a zero-divisor pivot makes it impossible.

use crate::algebra2d::{AlgebraKind, A2};
use crate::error::{Error, Result};
use crate::exactlin::{nullspace, rank, Mat, RANK_TOL};
use crate::scalar::{scale_of, Scalar};

/// Absolute tolerance for float-mode incidence.
pub const INCIDENCE_TOL: f64 = 1e-10;

fn same_kind(a: AlgebraKind, b: AlgebraKind) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::KindMismatch { left: a, right: b })
    }
}

/// Stacks the 2×2 representations of three algebra elements into a 6×2
/// real matrix.
fn stack<S: Scalar>(coords: &[A2<S>; 3]) -> Mat<S> {
    let mut m = Mat::zeros(6, 2);
    for (a, c) in coords.iter().enumerate() {
        let r = c.to_matrix();
        m[(2 * a, 0)] = r.a00.clone();
        m[(2 * a, 1)] = r.a01.clone();
        m[(2 * a + 1, 0)] = r.a10.clone();
        m[(2 * a + 1, 1)] = r.a11.clone();
    }
    m
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointA<S> {
    kind: AlgebraKind,
    coords: [A2<S>; 3],
}

impl<S: Scalar> PointA<S> {
    /// Requires the stacked 6×2 matrix to have independent columns.
    pub fn new(coords: [A2<S>; 3]) -> Result<Self> {
        let kind = coords[0].kind;
        for c in &coords[1..] {
            same_kind(kind, c.kind)?;
        }
        let p = PointA { kind, coords };
        if rank(&p.stacked(), RANK_TOL)? < 2 {
            return Err(Error::Contract(
                "point coordinates must have linearly independent columns".into(),
            ));
        }
        Ok(p)
    }

    pub fn from_ints(kind: AlgebraKind, c: [(i64, i64); 3]) -> Result<Self> {
        PointA::new(c.map(|(x, y)| A2::from_ints(kind, x, y)))
    }

    /// `(1, x1, x2)`; always valid because of the unit block.
    pub fn affine(x1: A2<S>, x2: A2<S>) -> Result<Self> {
        same_kind(x1.kind, x2.kind)?;
        Ok(PointA {
            kind: x1.kind,
            coords: [A2::one(x1.kind), x1, x2],
        })
    }

    /// Basis point `E_index`.
    pub fn basis(kind: AlgebraKind, index: usize) -> Self {
        let coords = std::array::from_fn(|i| {
            if i == index {
                A2::one(kind)
            } else {
                A2::zero(kind)
            }
        });
        PointA { kind, coords }
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn coords(&self) -> &[A2<S>; 3] {
        &self.coords
    }

    /// The 6×2 real matrix of stacked coordinate representations; its columns
    /// are the points `x₀`, `x₁` of `RP⁵`.
    pub fn stacked(&self) -> Mat<S> {
        stack(&self.coords)
    }

    pub fn right_mul(&self, p: &A2<S>) -> Result<Self> {
        same_kind(self.kind, p.kind)?;
        if p.is_zero_divisor() {
            return Err(Error::Divisor(format!(
                "right factor {p} is a zero divisor"
            )));
        }
        Ok(PointA {
            kind: self.kind,
            coords: self.coords.clone().map(|c| &c * p),
        })
    }

    /// Rescales so that coordinate `by` becomes the unit.
    pub fn normalize(&self, by: usize) -> Result<Self> {
        let pivot = &self.coords[by];
        let inv = pivot.inverse().map_err(|_| {
            Error::Divisor(format!(
                "pivot coordinate X^{by} = {pivot} is a zero divisor"
            ))
        })?;
        Ok(PointA {
            kind: self.kind,
            coords: self.coords.clone().map(|c| &c * &inv),
        })
    }

    /// `(X¹(X⁰)⁻¹, X²(X⁰)⁻¹)`.
    pub fn matrix_coordinate(&self) -> Result<MatrixCoordinate<S>> {
        let n = self.normalize(0)?;
        let [_, x1, x2] = n.coords;
        Ok(MatrixCoordinate { x1, x2 })
    }

    /// Adjacent points are joined by more than one line: the stacked 6×4
    /// matrix has rank below 4.
    pub fn adjacent(&self, other: &PointA<S>) -> Result<bool> {
        Ok(self.joint_rank(other)? < 4)
    }

    /// Same point of `AP²`: the stacked 6×4 matrix has rank 2.
    pub fn same_point(&self, other: &PointA<S>) -> Result<bool> {
        Ok(self.joint_rank(other)? == 2)
    }

    fn joint_rank(&self, other: &PointA<S>) -> Result<usize> {
        same_kind(self.kind, other.kind)?;
        let (a, b) = (self.stacked(), other.stacked());
        let mut m = Mat::zeros(6, 4);
        for i in 0..6 {
            for j in 0..2 {
                m[(i, j)] = a[(i, j)].clone();
                m[(i, j + 2)] = b[(i, j)].clone();
            }
        }
        rank(&m, RANK_TOL)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> PointA<T> {
        PointA {
            kind: self.kind,
            coords: self.coords.clone().map(|c| c.map(f)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixCoordinate<S> {
    pub x1: A2<S>,
    pub x2: A2<S>,
}

/// The line `U₀X⁰ + U₁X¹ + U₂X² = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineA<S> {
    kind: AlgebraKind,
    coeffs: [A2<S>; 3],
}

impl<S: Scalar> LineA<S> {
    /// Requires the 2×6 row `(U₀ U₁ U₂)` of representations to have rank 2.
    pub fn new(coeffs: [A2<S>; 3]) -> Result<Self> {
        let kind = coeffs[0].kind;
        for c in &coeffs[1..] {
            same_kind(kind, c.kind)?;
        }
        if rank(&stack(&coeffs).transpose(), RANK_TOL)? < 2 {
            return Err(Error::Contract(
                "line coefficients must have linearly independent rows".into(),
            ));
        }
        Ok(LineA { kind, coeffs })
    }

    pub fn from_ints(kind: AlgebraKind, c: [(i64, i64); 3]) -> Result<Self> {
        LineA::new(c.map(|(x, y)| A2::from_ints(kind, x, y)))
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn coeffs(&self) -> &[A2<S>; 3] {
        &self.coeffs
    }

    /// `U₀X⁰ + U₁X¹ + U₂X²`.
    pub fn apply(&self, p: &PointA<S>) -> Result<A2<S>> {
        same_kind(self.kind, p.kind)?;
        Ok(self
            .coeffs
            .iter()
            .zip(p.coords())
            .fold(A2::zero(self.kind), |acc, (u, x)| &acc + &(u * x)))
    }

    pub fn incident(&self, p: &PointA<S>) -> Result<bool> {
        let v = self.apply(p)?;
        Ok(v.x.negligible(1.0, INCIDENCE_TOL) && v.y.negligible(1.0, INCIDENCE_TOL))
    }

    pub fn left_mul(&self, p: &A2<S>) -> Result<Self> {
        same_kind(self.kind, p.kind)?;
        if p.is_zero_divisor() {
            return Err(Error::Divisor(format!("left factor {p} is a zero divisor")));
        }
        LineA::new(self.coeffs.clone().map(|c| p * &c))
    }

    /// The unique line through two non-adjacent points, from the exact
    /// nullspace of the 4×6 real incidence system.
    pub fn through(p: &PointA<S>, q: &PointA<S>) -> Result<Self> {
        if p.adjacent(q)? {
            return Err(Error::Contract(
                "adjacent points do not determine a unique line".into(),
            ));
        }
        let kind = p.kind;
        let s = S::from_i64(kind.unit_square());
        let mut rows = Vec::with_capacity(4);
        for pt in [p, q] {
            let mut re = Vec::with_capacity(6);
            let mut im = Vec::with_capacity(6);
            for c in pt.coords() {
                re.extend([c.x.clone(), s.clone() * c.y.clone()]);
                im.extend([c.y.clone(), c.x.clone()]);
            }
            rows.push(re);
            rows.push(im);
        }
        let tol = RANK_TOL;
        let ns = nullspace(&Mat::from_rows(&rows)?, tol);
        let to_line = |v: &[S]| {
            LineA::new(std::array::from_fn(|a| {
                A2::new(kind, v[2 * a].clone(), v[2 * a + 1].clone())
            }))
        };
        let mut candidates: Vec<Vec<S>> = ns.clone();
        if ns.len() == 2 {
            candidates.push(
                ns[0]
                    .iter()
                    .zip(&ns[1])
                    .map(|(a, b)| a.clone() + b.clone())
                    .collect(),
            );
        }
        candidates
            .iter()
            .find_map(|v| to_line(v).ok())
            .ok_or_else(|| {
                Error::InternalConsistency("no rank-2 line in the incidence nullspace".into())
            })
    }
}

/// Three pairwise non-adjacent points.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameA<S> {
    points: [PointA<S>; 3],
}

impl<S: Scalar> FrameA<S> {
    pub fn new(points: [PointA<S>; 3]) -> Result<Self> {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if points[i].adjacent(&points[j])? {
                return Err(Error::Contract(format!(
                    "frame points A{i} and A{j} are adjacent"
                )));
            }
        }
        Ok(FrameA { points })
    }

    pub fn standard(kind: AlgebraKind) -> Self {
        FrameA {
            points: std::array::from_fn(|i| PointA::basis(kind, i)),
        }
    }

    pub fn points(&self) -> &[PointA<S>; 3] {
        &self.points
    }

    pub fn kind(&self) -> AlgebraKind {
        self.points[0].kind()
    }
}

/// Largest absolute coordinate of a point, for float tolerances.
pub fn point_scale<S: Scalar>(p: &PointA<S>) -> f64 {
    let v: Vec<S> = p
        .coords()
        .iter()
        .flat_map(|c| [c.x.clone(), c.y.clone()])
        .collect();
    scale_of(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use AlgebraKind::*;

    type Q = Rational;

    fn a(kind: AlgebraKind, x: i64, y: i64) -> A2<Q> {
        A2::from_ints(kind, x, y)
    }

    #[test]
    fn normalization() {
        let p = PointA::new([A2::one(Complex), a(Complex, 2, 3), a(Complex, -1, 1)]).unwrap();
        assert_eq!(p.normalize(0).unwrap(), p);

        let p = PointA::new([a(Complex, 2, 0), a(Complex, 2, 4), a(Complex, 4, -2)]).unwrap();
        let n = p.normalize(0).unwrap();
        let half = A2::real(Complex, Q::ratio(1, 2));
        assert_eq!(n.coords()[1], &a(Complex, 2, 4) * &half);
        assert_eq!(n.coords()[0], A2::one(Complex));

        let p = PointA::new([a(Dual, 0, 1), a(Dual, 1, 0), a(Dual, 0, 0)]).unwrap();
        assert!(matches!(p.normalize(0), Err(Error::Divisor(_))));
    }

    #[test]
    fn invalid_points_are_rejected() {
        // (ε, 0, 0) stacks to a rank-1 matrix
        assert!(PointA::new([a(Dual, 0, 1), a(Dual, 0, 0), a(Dual, 0, 0)]).is_err());
        assert!(PointA::new([a(Dual, 1, 0), a(Double, 0, 0), a(Dual, 0, 0)]).is_err());
    }

    #[test]
    fn adjacency() {
        for kind in AlgebraKind::ALL {
            let e0 = PointA::<Q>::basis(kind, 0);
            let e1 = PointA::<Q>::basis(kind, 1);
            assert!(!e0.adjacent(&e1).unwrap());
            let x = PointA::new([a(kind, 1, 2), a(kind, 3, -1), a(kind, 0, 5)]).unwrap();
            let xp = x.right_mul(&a(kind, 2, 1)).unwrap();
            assert!(x.adjacent(&xp).unwrap());
            assert!(x.same_point(&xp).unwrap());
        }
        let p = PointA::new([a(Dual, 1, 0), a(Dual, 0, 0), a(Dual, 0, 0)]).unwrap();
        let q = PointA::new([a(Dual, 1, 0), a(Dual, 0, 1), a(Dual, 0, 0)]).unwrap();
        // oracle: exact rank of the stacked 6×4 matrix
        let mut m = Mat::<Q>::zeros(6, 4);
        for i in 0..6 {
            for j in 0..2 {
                m[(i, j)] = p.stacked()[(i, j)].clone();
                m[(i, j + 2)] = q.stacked()[(i, j)].clone();
            }
        }
        let r = rank(&m, 0.0).unwrap();
        assert_eq!(p.adjacent(&q).unwrap(), r < 4);
        assert_eq!(r, 3);
    }

    #[test]
    fn incidence() {
        let z = a(Complex, 2, -3);
        let w = a(Complex, 1, 4);
        let line = LineA::new([A2::zero(Complex), A2::zero(Complex), A2::one(Complex)]).unwrap();
        let p = PointA::new([A2::one(Complex), z.clone(), A2::zero(Complex)]).unwrap();
        assert!(line.incident(&p).unwrap());
        let line =
            LineA::<Q>::new([A2::one(Complex), A2::zero(Complex), A2::zero(Complex)]).unwrap();
        assert!(!line.incident(&PointA::basis(Complex, 0)).unwrap());
        let line = LineA::new([-&z, A2::one(Complex), A2::zero(Complex)]).unwrap();
        let p = PointA::new([A2::one(Complex), z.clone(), w]).unwrap();
        assert!(line.incident(&p).unwrap());
    }

    #[test]
    fn matrix_coordinates() {
        let (z, w) = (a(Complex, 1, 2), a(Complex, -3, 1));
        let p = PointA::new([A2::one(Complex), z.clone(), w.clone()]).unwrap();
        let mc = p.matrix_coordinate().unwrap();
        assert_eq!((mc.x1, mc.x2), (z.clone(), w.clone()));

        let two = a(Complex, 2, 0);
        let p = PointA::new([two.clone(), &two * &z, &(&two * &two) * &w]).unwrap();
        let mc = p.matrix_coordinate().unwrap();
        assert_eq!((mc.x1, mc.x2), (z, &two * &w));

        let p = PointA::new([a(Double, 1, 1), a(Double, 1, 0), a(Double, 0, 0)]).unwrap();
        assert!(matches!(p.matrix_coordinate(), Err(Error::Divisor(_))));
    }

    #[test]
    fn line_through_two_points() {
        for kind in AlgebraKind::ALL {
            let p = PointA::new([a(kind, 1, 0), a(kind, 2, 1), a(kind, -1, 3)]).unwrap();
            let q = PointA::new([a(kind, 0, 1), a(kind, 1, 0), a(kind, 2, 2)]).unwrap();
            if p.adjacent(&q).unwrap() {
                continue;
            }
            let l = LineA::through(&p, &q).unwrap();
            assert!(l.incident(&p).unwrap() && l.incident(&q).unwrap(), "{kind}");
        }
    }

    #[test]
    fn frames_reject_adjacent_points() {
        let e = |i| PointA::<Q>::basis(Double, i);
        assert!(FrameA::new([e(0), e(1), e(2)]).is_ok());
        let p = PointA::new([a(Double, 1, 0), a(Double, 1, 1), a(Double, 0, 0)]).unwrap();
        assert!(FrameA::new([e(0), p, e(2)]).is_err());
    }
}
