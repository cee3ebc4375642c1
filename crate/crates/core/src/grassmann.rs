//! The embedding of `AP²` into the lines of `RP⁵` and the focal theory of
//! the resulting line congruences.

use serde::Serialize;

use crate::algebra2d::{AlgebraKind, A2};
use crate::error::{Error, Result};
use crate::exactlin::{
    normalize_homogeneous, poly_det, rank_of_vectors, real_roots_with_multiplicity, Poly, RootSet,
    Subspace, RANK_TOL,
};
use crate::model::{model, ComplexPlanePattern, CongruenceClass, PlanePattern};
use crate::proj_plane::PointA;
use crate::scalar::{scale_of, Rational, Scalar};

pub type RP5Vec<S> = [S; 6];

/// Index pairs `(i, j)`, `i < j`, in lexicographic order.
pub const PLUCKER_INDEX: [(usize, usize); 15] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (0, 5),
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (2, 3),
    (2, 4),
    (2, 5),
    (3, 4),
    (3, 5),
    (4, 5),
];

fn plucker_slot(i: usize, j: usize) -> usize {
    PLUCKER_INDEX
        .iter()
        .position(|&p| p == (i, j))
        .expect("i < j < 6")
}

/// The standard basis `e₀ … e₅`.
pub fn standard_frame<S: Scalar>() -> [RP5Vec<S>; 6] {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { S::one() } else { S::zero() }))
}

/// A line of `RP⁵` as a spanning pair with its Plücker vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Line5<S> {
    p: RP5Vec<S>,
    q: RP5Vec<S>,
    plucker: [S; 15],
}

impl<S: Scalar> Line5<S> {
    pub fn new(p: RP5Vec<S>, q: RP5Vec<S>) -> Result<Self> {
        if rank_of_vectors(&[&p[..], &q[..]], RANK_TOL)? < 2 {
            return Err(Error::Contract(
                "spanning points of a line must be independent".into(),
            ));
        }
        let plucker = std::array::from_fn(|k| {
            let (i, j) = PLUCKER_INDEX[k];
            p[i].clone() * q[j].clone() - p[j].clone() * q[i].clone()
        });
        Ok(Line5 { p, q, plucker })
    }

    pub fn points(&self) -> (&RP5Vec<S>, &RP5Vec<S>) {
        (&self.p, &self.q)
    }

    pub fn plucker(&self) -> &[S; 15] {
        &self.plucker
    }

    /// `pⁱʲ` for any ordered pair.
    pub fn coord(&self, i: usize, j: usize) -> S {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.plucker[plucker_slot(i, j)].clone(),
            std::cmp::Ordering::Greater => -self.plucker[plucker_slot(j, i)].clone(),
            std::cmp::Ordering::Equal => S::zero(),
        }
    }

    /// The fifteen Grassmann quadratic relations
    /// `pⁱʲpᵏˡ - pⁱᵏpʲˡ + pⁱˡpʲᵏ`, `i < j < k < l`.
    pub fn plucker_relations(&self) -> Vec<S> {
        let mut out = Vec::with_capacity(15);
        for i in 0..6 {
            for j in i + 1..6 {
                for k in j + 1..6 {
                    for l in k + 1..6 {
                        out.push(
                            self.coord(i, j) * self.coord(k, l)
                                - self.coord(i, k) * self.coord(j, l)
                                + self.coord(i, l) * self.coord(j, k),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn satisfies_plucker_relations(&self, tol: f64) -> bool {
        let scale = scale_of(&self.plucker).powi(2);
        self.plucker_relations()
            .iter()
            .all(|r| r.negligible(scale, tol))
    }

    /// Same projective line: proportional Plücker vectors.
    pub fn same_class(&self, other: &Line5<S>, tol: f64) -> Result<bool> {
        Ok(rank_of_vectors(&[&self.plucker[..], &other.plucker[..]], tol)? == 1)
    }

    /// `sin` of the angle between the unit Plücker vectors, 0 for the same
    /// line.
    pub fn class_distance(&self, other: &Line5<S>) -> f64 {
        if S::EXACT && self.same_class(other, 0.0).unwrap_or(false) {
            return 0.0;
        }
        sine_between(&self.plucker, &other.plucker)
    }

    pub fn span(&self) -> Result<Subspace<S>> {
        Subspace::span(6, &[&self.p[..], &self.q[..]], RANK_TOL)
    }

    pub fn to_f64(&self) -> Line5<f64> {
        Line5 {
            p: self.p.clone().map(|v| v.to_f64()),
            q: self.q.clone().map(|v| v.to_f64()),
            plucker: self.plucker.clone().map(|v| v.to_f64()),
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Sine of the angle between two nonzero vectors.
pub fn sine_between<S: Scalar>(a: &[S], b: &[S]) -> f64 {
    let unit = |v: &[S]| {
        let f: Vec<f64> = v.iter().map(|x| x.to_f64()).collect();
        let n = norm(&f);
        f.into_iter().map(|x| x / n).collect::<Vec<f64>>()
    };
    let (a, b) = (unit(a), unit(b));
    let c: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    norm(
        &a.iter()
            .zip(&b)
            .map(|(x, y)| x - c * y)
            .collect::<Vec<f64>>(),
    )
}

/// Two lines meet iff their four spanning points are dependent.
pub fn lines_intersect<S: Scalar>(l1: &Line5<S>, l2: &Line5<S>) -> Result<bool> {
    let vs = [&l1.p[..], &l1.q[..], &l2.p[..], &l2.q[..]];
    Ok(rank_of_vectors(&vs, RANK_TOL)? < 4)
}

/// The two columns `x₀`, `x₁` of a point: `x₀` collects the `(x, y)`
/// blocks, `x₁` applies the model's second-column map to each block.
pub fn embed_columns<S: Scalar>(p: &PointA<S>) -> (RP5Vec<S>, RP5Vec<S>) {
    columns_of(p.kind(), p.coords())
}

/// [`embed_columns`] for any coordinate triple, valid point or not.
pub fn columns_of<S: Scalar>(kind: AlgebraKind, coords: &[A2<S>; 3]) -> (RP5Vec<S>, RP5Vec<S>) {
    let m = model(kind).second_column_map();
    let mut x0: RP5Vec<S> = std::array::from_fn(|_| S::zero());
    let mut x1 = x0.clone();
    for (a, c) in coords.iter().enumerate() {
        x0[2 * a] = c.x.clone();
        x0[2 * a + 1] = c.y.clone();
        for r in 0..2 {
            x1[2 * a + r] = S::from_i64(m[r][0]) * c.x.clone() + S::from_i64(m[r][1]) * c.y.clone();
        }
    }
    (x0, x1)
}

pub fn embed<S: Scalar>(p: &PointA<S>) -> Result<Line5<S>> {
    let (x0, x1) = embed_columns(p);
    Line5::new(x0, x1).map_err(|_| {
        Error::InternalConsistency("embedded columns of a valid point are dependent".into())
    })
}

/// Consistency determinant of the congruence's focal system, as stated by
/// the algebra's model.
pub fn focal_polynomial(kind: AlgebraKind) -> Poly<Rational> {
    model(kind).focal_polynomial()
}

/// The 4×4 system for a focus `a₁ + λa₀` of the congruence, built from the
/// representations of `1` and `u` alone.
///
/// The displacement of `A₀` along `A₁`, `A₂` is `Ω = p + u·q` in each block;
/// its 2×2 real matrix fixes which forms `ω₁ʲ` equal which `ω₀ᵏ`. Each block
/// contributes the two equations for the `a_{2β}`, `a_{2β+1}` components of
/// `d(a₁ + λa₀)` in the unknowns `(p, q)`.
pub fn focal_system_matrix(kind: AlgebraKind) -> Vec<Vec<Poly<Rational>>> {
    let one = A2::<Rational>::one(kind).to_matrix().entries();
    let u = A2::<Rational>::unit(kind).to_matrix().entries();
    // entries are [a00, a01, a10, a11]; component r of d a_c is entry (r, c)
    let entry = |m: &[Rational; 4], r: usize, c: usize| m[2 * r + c].clone();
    let eq = |r: usize| -> [Poly<Rational>; 2] {
        [&one, &u].map(|m| Poly::linear(entry(m, r, 1), entry(m, r, 0)))
    };
    let mut sys = vec![vec![Poly::zero(); 4]; 4];
    for b in 0..2 {
        for r in 0..2 {
            let [p, q] = eq(r);
            sys[2 * b + r][2 * b] = p;
            sys[2 * b + r][2 * b + 1] = q;
        }
    }
    sys
}

pub fn derived_focal_polynomial(kind: AlgebraKind) -> Poly<Rational> {
    poly_det(&focal_system_matrix(kind))
}

#[derive(Debug, Clone, Serialize)]
pub struct CongruenceClassification {
    pub kind: AlgebraKind,
    pub class: CongruenceClass,
    pub focal_polynomial: Vec<String>,
    pub roots: RootSet,
    pub real_foci: usize,
}

/// Classifies from the real-root structure of the focal polynomial: two
/// distinct real foci are hyperbolic, one parabolic, none elliptic.
pub fn classify_congruence(kind: AlgebraKind) -> Result<CongruenceClassification> {
    let poly = focal_polynomial(kind);
    if poly != derived_focal_polynomial(kind) {
        return Err(Error::InternalConsistency(format!(
            "stated focal polynomial {poly} differs from the derived {}",
            derived_focal_polynomial(kind)
        )));
    }
    let roots = real_roots_with_multiplicity(&poly, 0.0)?;
    let class = match roots.real_count() {
        0 => CongruenceClass::Elliptic,
        1 => CongruenceClass::Parabolic,
        2 => CongruenceClass::Hyperbolic,
        n => {
            return Err(Error::InternalConsistency(format!(
                "{n} distinct real foci"
            )));
        }
    };
    if class != model(kind).congruence_class() {
        return Err(Error::InternalConsistency(format!(
            "root structure gives {class}, the {kind} model expects {}",
            model(kind).congruence_class()
        )));
    }
    Ok(CongruenceClassification {
        kind,
        class,
        focal_polynomial: poly.encode(),
        real_foci: roots.real_count(),
        roots,
    })
}

/// A plane of `RP⁵` given by three spanning points.
#[derive(Debug, Clone)]
pub struct Plane5<S> {
    pub name: &'static str,
    pub vectors: [RP5Vec<S>; 3],
    space: Subspace<S>,
}

impl<S: Scalar> Plane5<S> {
    pub fn new(name: &'static str, vectors: [RP5Vec<S>; 3]) -> Result<Self> {
        let space = Subspace::span(6, &vectors, RANK_TOL)?;
        if space.dim() != 3 {
            return Err(Error::Contract(format!(
                "plane {name} is spanned by dependent points"
            )));
        }
        Ok(Plane5 {
            name,
            vectors,
            space,
        })
    }

    fn from_pattern(pattern: &PlanePattern, frame: &[RP5Vec<S>; 6]) -> Result<Self> {
        Plane5::new(pattern.name, pattern.spanning_vectors(frame))
    }

    pub fn subspace(&self) -> &Subspace<S> {
        &self.space
    }

    pub fn contains(&self, v: &[S], tol: f64) -> bool {
        self.space.contains(v, tol)
    }

    pub fn residual(&self, v: &[S]) -> f64 {
        self.space.residual(v)
    }
}

/// A complex plane `span{v₀, v₁, v₂}`, `v = re + i·im`, stored as the real
/// 6-dimensional subspace of `ℝ¹²` spanned by `(re, im)` and `(-im, re)`.
#[derive(Debug, Clone)]
pub struct ComplexPlane5<S> {
    pub name: &'static str,
    pub vectors: [(RP5Vec<S>, RP5Vec<S>); 3],
    realified: Subspace<S>,
}

impl<S: Scalar> ComplexPlane5<S> {
    pub fn new(name: &'static str, vectors: [(RP5Vec<S>, RP5Vec<S>); 3]) -> Result<Self> {
        let mut rows: Vec<Vec<S>> = Vec::with_capacity(6);
        for (re, im) in &vectors {
            rows.push(re.iter().chain(im.iter()).cloned().collect());
            rows.push(
                im.iter()
                    .map(|v| -v.clone())
                    .chain(re.iter().cloned())
                    .collect(),
            );
        }
        let realified = Subspace::span(12, &rows, RANK_TOL)?;
        if realified.dim() != 6 {
            return Err(Error::Contract(format!(
                "complex plane {name} is spanned by dependent points"
            )));
        }
        Ok(ComplexPlane5 {
            name,
            vectors,
            realified,
        })
    }

    fn from_pattern(pattern: &ComplexPlanePattern, frame: &[RP5Vec<S>; 6]) -> Result<Self> {
        ComplexPlane5::new(pattern.name, pattern.spanning_vectors(frame))
    }

    fn stack(re: &[S], im: &[S]) -> Vec<S> {
        re.iter().chain(im.iter()).cloned().collect()
    }

    pub fn contains(&self, re: &[S], im: &[S], tol: f64) -> bool {
        self.realified.contains(&Self::stack(re, im), tol)
    }

    pub fn residual(&self, re: &[S], im: &[S]) -> f64 {
        self.realified.residual(&Self::stack(re, im))
    }

    /// The conjugate plane.
    pub fn conjugate(&self) -> Result<Self> {
        let v = self.vectors.clone().map(|(re, im)| (re, im.map(|x| -x)));
        ComplexPlane5::new(self.name, v)
    }
}

fn check_frame<S: Scalar>(frame: &[RP5Vec<S>; 6]) -> Result<()> {
    if rank_of_vectors(frame, RANK_TOL)? < 6 {
        return Err(Error::Contract(
            "frame points of RP⁵ must be independent".into(),
        ));
    }
    Ok(())
}

/// Real focal planes of the congruence relative to the frame `a₀ … a₅`.
pub fn focal_planes<S: Scalar>(
    kind: AlgebraKind,
    frame: &[RP5Vec<S>; 6],
) -> Result<Vec<Plane5<S>>> {
    check_frame(frame)?;
    model(kind)
        .real_foci()
        .iter()
        .map(|f| Plane5::from_pattern(&f.plane, frame))
        .collect()
}

/// Complex-conjugate focal planes (only the complex algebra has any).
pub fn complex_focal_planes<S: Scalar>(
    kind: AlgebraKind,
    frame: &[RP5Vec<S>; 6],
) -> Result<Vec<ComplexPlane5<S>>> {
    check_frame(frame)?;
    model(kind)
        .complex_foci()
        .iter()
        .map(|f| ComplexPlane5::from_pattern(&f.plane, frame))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct MembershipFailure {
    pub sample: usize,
    pub point: Vec<[String; 2]>,
    pub focus: String,
    pub plane: String,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CongruenceReport {
    pub kind: AlgebraKind,
    pub class: CongruenceClass,
    pub samples: usize,
    pub checks: usize,
    pub failures: Vec<MembershipFailure>,
    pub focal_planes: Vec<FocalPlaneSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FocalPlaneSummary {
    pub name: String,
    pub focus: String,
    /// Spanning vectors; complex planes list `(re, im)` pairs flattened.
    pub spanning: Vec<Vec<String>>,
}

fn encode_vec<S: Scalar>(v: &[S]) -> Vec<String> {
    normalize_homogeneous(v)
        .iter()
        .map(|x| x.encode())
        .collect()
}

fn encode_point<S: Scalar>(p: &PointA<S>) -> Vec<[String; 2]> {
    p.coords()
        .iter()
        .map(|c| [c.x.encode(), c.y.encode()])
        .collect()
}

/// Checks that every sampled line of the congruence carries its foci in the
/// focal planes of the standard frame: `x₁ + λx₀ ∈ π` for each real focus
/// and `x₁ ± i·x₀` in the complex planes.
pub fn verify_congruence_membership<S: Scalar>(
    kind: AlgebraKind,
    points: &[PointA<S>],
    tol: f64,
) -> Result<CongruenceReport> {
    let class = classify_congruence(kind)?;
    let frame = standard_frame::<S>();
    let m = model(kind);
    let real = focal_planes(kind, &frame)?;
    let complex = complex_focal_planes(kind, &frame)?;

    let expected: Vec<i64> = m.real_foci().iter().map(|f| f.lambda).collect();
    let found: Vec<Option<Rational>> = class.roots.real.iter().map(|r| r.exact.clone()).collect();
    let found_ints: Vec<Option<i64>> = found
        .iter()
        .map(|r| {
            r.as_ref()
                .filter(|q| q.is_integer())
                .and_then(|q| num_traits::ToPrimitive::to_i64(&q.to_integer()))
        })
        .collect();
    if found_ints != expected.iter().map(|l| Some(*l)).collect::<Vec<_>>() {
        return Err(Error::InternalConsistency(format!(
            "real focal roots {found_ints:?} differ from the model's {expected:?}"
        )));
    }

    let mut failures = Vec::new();
    let mut checks = 0;
    for (idx, p) in points.iter().enumerate() {
        if p.kind() != kind {
            return Err(Error::KindMismatch {
                left: kind,
                right: p.kind(),
            });
        }
        let (x0, x1) = embed_columns(p);
        for (focus, plane) in m.real_foci().iter().zip(&real) {
            let lam = S::from_i64(focus.lambda);
            let f: Vec<S> = x1
                .iter()
                .zip(&x0)
                .map(|(a, b)| a.clone() + lam.clone() * b.clone())
                .collect();
            checks += 1;
            if !plane.contains(&f, tol) {
                failures.push(MembershipFailure {
                    sample: idx,
                    point: encode_point(p),
                    focus: focus_name(focus.lambda, false),
                    plane: plane.name.into(),
                    residual: plane.residual(&f),
                });
            }
        }
        for (focus, plane) in m.complex_foci().iter().zip(&complex) {
            let im: Vec<S> = x0
                .iter()
                .map(|v| S::from_i64(focus.lambda_im) * v.clone())
                .collect();
            checks += 1;
            if !plane.contains(&x1, &im, tol) {
                failures.push(MembershipFailure {
                    sample: idx,
                    point: encode_point(p),
                    focus: focus_name(focus.lambda_im, true),
                    plane: plane.name.into(),
                    residual: plane.residual(&x1, &im),
                });
            }
        }
    }

    let mut summaries: Vec<FocalPlaneSummary> = m
        .real_foci()
        .iter()
        .zip(&real)
        .map(|(f, p)| FocalPlaneSummary {
            name: p.name.into(),
            focus: focus_name(f.lambda, false),
            spanning: p.vectors.iter().map(|v| encode_vec(v)).collect(),
        })
        .collect();
    summaries.extend(m.complex_foci().iter().zip(&complex).map(|(f, p)| {
        FocalPlaneSummary {
            name: p.name.into(),
            focus: focus_name(f.lambda_im, true),
            spanning: p
                .vectors
                .iter()
                .map(|(re, im)| re.iter().chain(im.iter()).map(|x| x.encode()).collect())
                .collect(),
        }
    }));

    Ok(CongruenceReport {
        kind,
        class: class.class,
        samples: points.len(),
        checks,
        failures,
        focal_planes: summaries,
    })
}

fn focus_name(lambda: i64, imaginary: bool) -> String {
    let i = if imaginary { "i" } else { "" };
    match lambda {
        0 => "x1".into(),
        1 => format!("x1 + {}x0", i),
        -1 => format!("x1 - {}x0", i),
        l if l > 0 => format!("x1 + {l}{i}x0"),
        l => format!("x1 - {}{i}x0", -l),
    }
}

/// Rank of all spanning points of the embedded lines; at most 4 when the
/// points lie on one straight `A`-line.
pub fn span_rank<S: Scalar>(points: &[PointA<S>]) -> Result<usize> {
    let mut rows: Vec<RP5Vec<S>> = Vec::with_capacity(2 * points.len());
    for p in points {
        let (x0, x1) = embed_columns(p);
        rows.push(x0);
        rows.push(x1);
    }
    rank_of_vectors(&rows, RANK_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rank;
    use crate::exactlin::Mat;
    use AlgebraKind::*;

    type Q = Rational;

    fn pt(kind: AlgebraKind, c: [(i64, i64); 3]) -> PointA<Q> {
        PointA::from_ints(kind, c).unwrap()
    }

    fn ints(v: [i64; 6]) -> RP5Vec<Q> {
        v.map(<Q as Scalar>::from_i64)
    }

    #[test]
    fn embedding_of_basis_points() {
        let l = embed(&PointA::<Q>::basis(Complex, 0)).unwrap();
        let (p, q) = l.points();
        assert_eq!(p, &ints([1, 0, 0, 0, 0, 0]));
        assert_eq!(q, &ints([0, 1, 0, 0, 0, 0]));
        let l = embed(&PointA::<Q>::basis(Dual, 0)).unwrap();
        assert_eq!(l.points().1, &ints([0, 1, 0, 0, 0, 0]));
    }

    #[test]
    fn second_column_is_the_representation_column() {
        for kind in AlgebraKind::ALL {
            let p = pt(kind, [(1, 2), (-3, 5), (4, -7)]);
            let (x0, x1) = embed_columns(&p);
            let st = p.stacked();
            for r in 0..6 {
                assert_eq!(x0[r], st[(r, 0)], "{kind}");
                assert_eq!(x1[r], st[(r, 1)], "{kind}");
            }
        }
    }

    #[test]
    fn column_formulas() {
        let p = pt(Double, [(1, 2), (3, 4), (5, 6)]);
        let (_, x1) = embed_columns(&p);
        assert_eq!(x1, ints([2, 1, 4, 3, 6, 5]));
        let (_, x1) = embed_columns(&pt(Complex, [(1, 2), (3, 4), (5, 6)]));
        assert_eq!(x1, ints([-2, 1, -4, 3, -6, 5]));
        let (_, x1) = embed_columns(&pt(Dual, [(1, 2), (3, 4), (5, 6)]));
        assert_eq!(x1, ints([0, 1, 0, 3, 0, 5]));
    }

    #[test]
    fn intersections() {
        let e = |i: usize| {
            let mut v = ints([0; 6]);
            v[i] = <Q as Scalar>::from_i64(1);
            v
        };
        let l01 = Line5::new(e(0), e(1)).unwrap();
        assert!(lines_intersect(&l01, &Line5::new(e(0), e(2)).unwrap()).unwrap());
        assert!(!lines_intersect(&l01, &Line5::new(e(2), e(3)).unwrap()).unwrap());
    }

    #[test]
    fn plucker_relations_hold() {
        let l = Line5::new(ints([1, 2, 3, 4, 5, 6]), ints([0, -1, 7, 2, 2, 1])).unwrap();
        assert!(l.plucker_relations().iter().all(num_traits::Zero::is_zero));
        assert_eq!(l.plucker_relations().len(), 15);
        // a generic bivector is not decomposable
        let mut bad = l.clone();
        bad.plucker[plucker_slot(2, 3)] = <Q as Scalar>::from_i64(1000);
        assert!(!bad.satisfies_plucker_relations(0.0));
    }

    #[test]
    fn derived_focal_polynomials_match_the_models() {
        for kind in AlgebraKind::ALL {
            assert_eq!(
                derived_focal_polynomial(kind),
                focal_polynomial(kind),
                "{kind}"
            );
        }
        assert_eq!(focal_polynomial(Double), Poly::from_i64(&[1, 0, -2, 0, 1]));
        assert_eq!(focal_polynomial(Dual), Poly::from_i64(&[0, 0, 0, 0, 1]));
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify_congruence(Double).unwrap().class,
            CongruenceClass::Hyperbolic
        );
        assert_eq!(
            classify_congruence(Dual).unwrap().class,
            CongruenceClass::Parabolic
        );
        let c = classify_congruence(Complex).unwrap();
        assert_eq!(c.class, CongruenceClass::Elliptic);
        assert_eq!(c.roots.complex.len(), 1);
        assert_eq!(c.roots.complex[0].multiplicity, 2);
    }

    #[test]
    fn standard_focal_planes() {
        let frame = standard_frame::<Q>();
        let planes = focal_planes(Double, &frame).unwrap();
        let pi1 = planes.iter().find(|p| p.name == "pi1").unwrap();
        // oracle: u0 = u1, u2 = u3, u4 = u5
        for v in [
            [1, 1, 2, 2, 5, 5],
            [1, 1, 2, 2, 5, 4],
            [0, 0, 3, 3, -1, -1],
            [1, -1, 0, 0, 0, 0],
        ] {
            let eq = v[0] == v[1] && v[2] == v[3] && v[4] == v[5];
            assert_eq!(pi1.contains(&ints(v), 0.0), eq, "{v:?}");
        }
        let pi = &focal_planes(Dual, &frame).unwrap()[0];
        assert!(pi.contains(&ints([0, 1, 0, 3, 0, -2]), 0.0));
        assert!(!pi.contains(&ints([1, 0, 0, 0, 0, 0]), 0.0));
        assert!(focal_planes(Complex, &frame).unwrap().is_empty());
        assert_eq!(complex_focal_planes(Complex, &frame).unwrap().len(), 2);

        let mut dependent = frame.clone();
        dependent[5] = dependent[4].clone();
        assert!(focal_planes(Double, &dependent).is_err());
    }

    #[test]
    fn complex_foci_lie_in_conjugate_planes() {
        let frame = standard_frame::<Q>();
        let planes = complex_focal_planes(Complex, &frame).unwrap();
        let p = pt(Complex, [(1, 2), (3, -1), (0, 4)]);
        let (x0, x1) = embed_columns(&p);
        let neg: Vec<Q> = x0.iter().map(|v| -v.clone()).collect();
        assert!(planes[0].contains(&x1, &x0, 0.0));
        assert!(!planes[0].contains(&x1, &neg, 0.0));
        assert!(planes[1].contains(&x1, &neg, 0.0));
        let conj = planes[0].conjugate().unwrap();
        assert!(conj.contains(&x1, &neg, 0.0));
    }

    #[test]
    fn membership_of_fixed_points() {
        for kind in AlgebraKind::ALL {
            let pts = vec![
                pt(kind, [(1, 0), (2, 3), (-1, 1)]),
                pt(kind, [(2, 1), (0, 1), (5, -3)]),
            ];
            let r = verify_congruence_membership(kind, &pts, 0.0).unwrap();
            assert!(r.failures.is_empty(), "{kind}: {:?}", r.failures);
            assert_eq!(
                r.checks,
                2 * (model(kind).real_foci().len() + model(kind).complex_foci().len())
            );
        }
    }

    #[test]
    fn embedding_adjacency_matches_intersection() {
        let p = pt(Dual, [(1, 0), (0, 0), (0, 0)]);
        let q = pt(Dual, [(1, 0), (0, 1), (0, 0)]);
        let r = pt(Dual, [(1, 0), (1, 0), (0, 0)]);
        let (lp, lq, lr) = (embed(&p).unwrap(), embed(&q).unwrap(), embed(&r).unwrap());
        assert_eq!(lines_intersect(&lp, &lq).unwrap(), p.adjacent(&q).unwrap());
        assert_eq!(lines_intersect(&lp, &lr).unwrap(), p.adjacent(&r).unwrap());
        assert!(!lines_intersect(&lp, &lr).unwrap());
    }

    #[test]
    fn straight_line_spans_a_three_space() {
        for kind in AlgebraKind::ALL {
            let a = pt(kind, [(1, 0), (2, 1), (0, 3)]);
            let b = pt(kind, [(0, 1), (1, 0), (1, 1)]);
            let pts: Vec<PointA<Q>> = [(1, 0, 0, 0), (0, 0, 1, 0), (2, 1, 1, -1), (3, -2, 0, 5)]
                .iter()
                .map(|&(ax, ay, bx, by)| {
                    let c = [0, 1, 2].map(|i| {
                        &(&a.coords()[i] * &A2::from_ints(kind, ax, ay))
                            + &(&b.coords()[i] * &A2::from_ints(kind, bx, by))
                    });
                    PointA::new(c).unwrap()
                })
                .collect();
            assert_eq!(span_rank(&pts).unwrap(), 4, "{kind}");
            // oracle: a point off the line raises the rank
            let mut more = pts.clone();
            more.push(pt(kind, [(0, 0), (0, 0), (1, 0)]));
            let mut rows = vec![];
            for p in &more {
                let (x0, x1) = embed_columns(p);
                rows.push(x0.to_vec());
                rows.push(x1.to_vec());
            }
            assert!(rank(&Mat::from_rows(&rows).unwrap(), 0.0).unwrap() > 4);
        }
    }
}
