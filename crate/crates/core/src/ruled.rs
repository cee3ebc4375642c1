//! Smooth `A`-lines of `AP²` and the ruled 3-folds of `RP⁵` they sweep.
//!
//! A curve `z ↦ (F⁰(z), F¹(z), F²(z))` with `z = t₁ + u·t₂` gives at each
//! parameter a generator `a₀ ∧ a₁` (the embedded point). Everything here is
//! computed from the local jet of that generator: the derivatives of `a₀`,
//! `a₁` along `t₁`, `t₂`, and for the Gauss map the second derivatives.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra2d::{AlgebraKind, A2};
use crate::error::{Error, Result};
use crate::exactlin::{
    common_roots, discriminant, inverse, normalize_homogeneous, rank, rank_of_vectors, ComplexPair,
    Mat, Poly, RealRoot, RootSet, Subspace, CLUSTER_RADIUS, RANK_TOL,
};
use crate::grassmann::{
    columns_of, complex_focal_planes, focal_planes, sine_between, standard_frame, Line5, RP5Vec,
};
use crate::model::{model, SurfaceClass};
use crate::proj_plane::PointA;
use crate::scalar::{scale_of, Scalar};

/// Central-difference step.
pub const FD_STEP: f64 = 1e-5;

/// A polynomial in one algebra variable, coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyA<S> {
    kind: AlgebraKind,
    coeffs: Vec<A2<S>>,
}

impl<S: Scalar> PolyA<S> {
    pub fn new(kind: AlgebraKind, coeffs: Vec<A2<S>>) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| c.kind != kind) {
            return Err(Error::KindMismatch {
                left: kind,
                right: c.kind,
            });
        }
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(PolyA { kind, coeffs })
    }

    pub fn from_ints(kind: AlgebraKind, c: &[(i64, i64)]) -> Self {
        PolyA::new(
            kind,
            c.iter().map(|&(x, y)| A2::from_ints(kind, x, y)).collect(),
        )
        .expect("one kind")
    }

    pub fn constant(c: A2<S>) -> Self {
        PolyA::new(c.kind, vec![c]).expect("one kind")
    }

    pub fn coeffs(&self) -> &[A2<S>] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: &A2<S>) -> A2<S> {
        self.coeffs
            .iter()
            .rev()
            .fold(A2::zero(self.kind), |acc, c| &(&acc * z) + c)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&S::from_i64(k as i64)))
            .collect();
        PolyA::new(self.kind, coeffs).expect("one kind")
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> PolyA<T> {
        PolyA {
            kind: self.kind,
            coeffs: self.coeffs.iter().map(|c| c.map(f)).collect(),
        }
    }
}

/// An algebra-analytic curve with polynomial components.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveA<S> {
    kind: AlgebraKind,
    f: [PolyA<S>; 3],
}

impl<S: Scalar> CurveA<S> {
    pub fn new(f: [PolyA<S>; 3]) -> Result<Self> {
        let kind = f[0].kind;
        if let Some(p) = f.iter().find(|p| p.kind != kind) {
            return Err(Error::KindMismatch {
                left: kind,
                right: p.kind,
            });
        }
        Ok(CurveA { kind, f })
    }

    /// `(1, F¹(z), F²(z))`.
    pub fn affine(f1: PolyA<S>, f2: PolyA<S>) -> Result<Self> {
        CurveA::new([PolyA::constant(A2::one(f1.kind)), f1, f2])
    }

    /// The straight `A`-line `(1, αz + β, γz + δ)`.
    pub fn straight(alpha: A2<S>, beta: A2<S>, gamma: A2<S>, delta: A2<S>) -> Result<Self> {
        let kind = alpha.kind;
        CurveA::affine(
            PolyA::new(kind, vec![beta, alpha])?,
            PolyA::new(kind, vec![delta, gamma])?,
        )
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn components(&self) -> &[PolyA<S>; 3] {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.iter().map(|p| p.degree()).max().unwrap_or(0)
    }

    pub fn is_affine(&self) -> bool {
        self.f[0].coeffs == vec![A2::one(self.kind)]
    }

    pub fn eval_coords(&self, z: &A2<S>) -> [A2<S>; 3] {
        std::array::from_fn(|i| self.f[i].eval(z))
    }

    pub fn eval(&self, z: &A2<S>) -> Result<PointA<S>> {
        if z.kind != self.kind {
            return Err(Error::KindMismatch {
                left: self.kind,
                right: z.kind,
            });
        }
        PointA::new(self.eval_coords(z))
    }

    /// Componentwise formal derivative in `z`.
    pub fn derivative(&self) -> CurveA<S> {
        CurveA {
            kind: self.kind,
            f: std::array::from_fn(|i| self.f[i].derivative()),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> CurveA<T> {
        CurveA {
            kind: self.kind,
            f: std::array::from_fn(|i| self.f[i].map(f)),
        }
    }
}

/// A map from the real parameter plane into coordinate triples of `AP²`
/// with analytic first and second partials.
pub trait PlaneMap<S: Scalar>: Sync {
    fn kind(&self) -> AlgebraKind;

    fn coords(&self, t: &[S; 2]) -> [A2<S>; 3];

    /// `[∂₁, ∂₂]` of the coordinates.
    fn partials(&self, t: &[S; 2]) -> [[A2<S>; 3]; 2];

    /// `[∂₁∂₁, ∂₁∂₂, ∂₂∂₂]`.
    fn second_partials(&self, t: &[S; 2]) -> [[A2<S>; 3]; 3];
}

fn param<S: Scalar>(kind: AlgebraKind, t: &[S; 2]) -> A2<S> {
    A2::new(kind, t[0].clone(), t[1].clone())
}

fn times<S: Scalar>(v: &[A2<S>; 3], k: &A2<S>) -> [A2<S>; 3] {
    std::array::from_fn(|i| &v[i] * k)
}

impl<S: Scalar> PlaneMap<S> for CurveA<S> {
    fn kind(&self) -> AlgebraKind {
        self.kind
    }

    fn coords(&self, t: &[S; 2]) -> [A2<S>; 3] {
        self.eval_coords(&param(self.kind, t))
    }

    // ∂₁ = d/dz, ∂₂ = u·d/dz
    fn partials(&self, t: &[S; 2]) -> [[A2<S>; 3]; 2] {
        let d = self.derivative().eval_coords(&param(self.kind, t));
        let u = A2::unit(self.kind);
        [d.clone(), times(&d, &u)]
    }

    fn second_partials(&self, t: &[S; 2]) -> [[A2<S>; 3]; 3] {
        let d2 = self
            .derivative()
            .derivative()
            .eval_coords(&param(self.kind, t));
        let u = A2::unit(self.kind);
        [d2.clone(), times(&d2, &u), times(&d2, &(&u * &u))]
    }
}

/// `(F⁰, F¹ + δ·z̄, F²)`: smooth as a real map but not algebra-analytic.
#[derive(Debug, Clone)]
pub struct PerturbedCurve<S> {
    pub base: CurveA<S>,
    pub delta: A2<S>,
}

impl<S: Scalar> PlaneMap<S> for PerturbedCurve<S> {
    fn kind(&self) -> AlgebraKind {
        self.base.kind
    }

    fn coords(&self, t: &[S; 2]) -> [A2<S>; 3] {
        let mut c = self.base.coords(t);
        let zbar = param(self.base.kind, t).conjugate();
        c[1] = &c[1] + &(&self.delta * &zbar);
        c
    }

    // ∂₁z̄ = 1, ∂₂z̄ = -u
    fn partials(&self, t: &[S; 2]) -> [[A2<S>; 3]; 2] {
        let [mut p1, mut p2] = self.base.partials(t);
        let u = A2::unit(self.base.kind);
        p1[1] = &p1[1] + &self.delta;
        p2[1] = &p2[1] - &(&self.delta * &u);
        [p1, p2]
    }

    fn second_partials(&self, t: &[S; 2]) -> [[A2<S>; 3]; 3] {
        self.base.second_partials(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Derivatives {
    Analytic,
    FiniteDifference,
}

/// Tolerances and derivative source for generator analysis.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AnalysisConfig {
    pub derivatives: Derivatives,
    pub tol_rank: f64,
    pub tol_membership: f64,
    pub tol_subspace: f64,
    pub cluster_radius: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            derivatives: Derivatives::Analytic,
            tol_rank: RANK_TOL,
            tol_membership: 1e-8,
            tol_subspace: 1e-8,
            cluster_radius: CLUSTER_RADIUS,
        }
    }
}

/// The generator `a₀ ∧ a₁` at a parameter with the derivatives
/// `d[c][i] = ∂ᵢ a_c`.
#[derive(Debug, Clone)]
pub struct GeneratorJet<S> {
    pub kind: AlgebraKind,
    pub t: [S; 2],
    pub a0: RP5Vec<S>,
    pub a1: RP5Vec<S>,
    pub d: [[RP5Vec<S>; 2]; 2],
}

fn central_difference<S: Scalar>(plus: &RP5Vec<S>, minus: &RP5Vec<S>, h: &S) -> RP5Vec<S> {
    let two_h = h.clone() + h.clone();
    std::array::from_fn(|k| (plus[k].clone() - minus[k].clone()) / two_h.clone())
}

fn fd_step<S: Scalar>() -> S {
    S::ratio(1, (1.0 / FD_STEP).round() as i64)
}

fn shifted<S: Scalar>(t: &[S; 2], i: usize, h: &S) -> [S; 2] {
    let mut s = t.clone();
    s[i] = s[i].clone() + h.clone();
    s
}

impl<S: Scalar> GeneratorJet<S> {
    pub fn at(map: &dyn PlaneMap<S>, t: &[S; 2], derivatives: Derivatives) -> Self {
        let kind = map.kind();
        let (a0, a1) = columns_of(kind, &map.coords(t));
        let d = match derivatives {
            Derivatives::Analytic => {
                let p = map.partials(t);
                let c: [(RP5Vec<S>, RP5Vec<S>); 2] =
                    std::array::from_fn(|i| columns_of(kind, &p[i]));
                [
                    [c[0].0.clone(), c[1].0.clone()],
                    [c[0].1.clone(), c[1].1.clone()],
                ]
            }
            Derivatives::FiniteDifference => {
                let h = fd_step::<S>();
                let c: [[RP5Vec<S>; 2]; 2] = std::array::from_fn(|i| {
                    let (p0, p1) = columns_of(kind, &map.coords(&shifted(t, i, &h)));
                    let (m0, m1) = columns_of(kind, &map.coords(&shifted(t, i, &-h.clone())));
                    [
                        central_difference(&p0, &m0, &h),
                        central_difference(&p1, &m1, &h),
                    ]
                });
                [
                    [c[0][0].clone(), c[1][0].clone()],
                    [c[0][1].clone(), c[1][1].clone()],
                ]
            }
        };
        GeneratorJet {
            kind,
            t: t.clone(),
            a0,
            a1,
            d,
        }
    }

    pub fn generator(&self) -> Result<Line5<S>> {
        Line5::new(self.a0.clone(), self.a1.clone())
    }

    /// `a₀, a₁, ∂₁a₀, ∂₂a₀, ∂₁a₁, ∂₂a₁`.
    pub fn vectors(&self) -> [RP5Vec<S>; 6] {
        [
            self.a0.clone(),
            self.a1.clone(),
            self.d[0][0].clone(),
            self.d[0][1].clone(),
            self.d[1][0].clone(),
            self.d[1][1].clone(),
        ]
    }

    /// `a₁ + λa₀`.
    pub fn point(&self, lambda: &S) -> RP5Vec<S> {
        comb(&self.a1, lambda, &self.a0)
    }

    /// `∂ᵢ(a₁ + λa₀)`.
    pub fn point_derivative(&self, i: usize, lambda: &S) -> RP5Vec<S> {
        comb(&self.d[1][i], lambda, &self.d[0][i])
    }

    pub fn to_f64(&self) -> GeneratorJet<f64> {
        let f = |v: &RP5Vec<S>| v.clone().map(|x| x.to_f64());
        GeneratorJet {
            kind: self.kind,
            t: self.t.clone().map(|x| x.to_f64()),
            a0: f(&self.a0),
            a1: f(&self.a1),
            d: [
                [f(&self.d[0][0]), f(&self.d[0][1])],
                [f(&self.d[1][0]), f(&self.d[1][1])],
            ],
        }
    }
}

fn comb<S: Scalar>(base: &RP5Vec<S>, lambda: &S, other: &RP5Vec<S>) -> RP5Vec<S> {
    std::array::from_fn(|k| base[k].clone() + lambda.clone() * other[k].clone())
}

fn generator_quotient_rank<S: Scalar>(jet: &GeneratorJet<S>, tol: f64) -> Result<usize> {
    let gen = Subspace::span(6, &[&jet.a0[..], &jet.a1[..]], tol)?;
    if gen.dim() != 2 {
        return Err(Error::DegenerateSample(
            "generator points are dependent".into(),
        ));
    }
    let q = gen.quotient();
    let projected: Vec<Vec<S>> = jet.d.iter().flatten().map(|v| q.apply(v)).collect();
    rank_of_vectors(&projected, tol)
}

/// `∂ᵢa₀, ∂ᵢa₁` all lie in one 3-space with the generator: the stacked
/// six vectors have rank at most 4.
pub fn check_smoothness<S: Scalar>(jet: &GeneratorJet<S>, tol: f64) -> Result<bool> {
    if generator_quotient_rank(jet, tol)? < 2 {
        return Err(Error::DegenerateSample(
            "the derivatives do not determine the points a2, a3".into(),
        ));
    }
    Ok(rank_of_vectors(&jet.vectors(), tol)? <= 4)
}

/// Rank of `span{a₀, a₁, ∂₁a₀, ∂₂a₀, ∂₁a₁, ∂₂a₁}`.
pub fn tangent_rank<S: Scalar>(jet: &GeneratorJet<S>, tol: f64) -> Result<usize> {
    let r = rank_of_vectors(&jet.vectors(), tol)?;
    if r < 4 {
        return Err(Error::DegenerateSample(format!(
            "tangent span has rank {r}"
        )));
    }
    Ok(r)
}

/// The parameters `λ` of `a₁ + λa₀` at which the tangent subspace is
/// compared with the 3-space of the generator.
pub const TANGENT_PROBES: [i64; 3] = [-1, 0, 1];

#[derive(Debug, Clone, Serialize)]
pub struct TangentProbe {
    pub lambda: i64,
    pub dim: usize,
    /// The point is a focus: its tangent span drops below 4.
    pub focal: bool,
    /// Subspace distance to the generator's 3-space (1 on a dimension
    /// mismatch).
    pub distance: f64,
    /// How far the tangent span sticks out of the 3-space.
    pub excess: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TangentReport {
    pub rank: usize,
    pub probes: Vec<TangentProbe>,
    pub fixed: bool,
}

/// Tangent subspace `span{x, a₀, ∂₁x, ∂₂x}` at `x = a₁ + λa₀` for each
/// probe. At a regular point it must equal the 3-space of the generator;
/// at a focus it drops rank and must lie inside it.
pub fn tangent_along_generator<S: Scalar>(
    jet: &GeneratorJet<S>,
    cfg: &AnalysisConfig,
) -> Result<TangentReport> {
    let rank = tangent_rank(jet, cfg.tol_rank)?;
    let p3 = Subspace::span(6, &jet.vectors(), cfg.tol_rank)?;
    let probes = TANGENT_PROBES
        .iter()
        .map(|&l| {
            let lam = S::from_i64(l);
            let vs = [
                jet.a0.clone(),
                jet.a1.clone(),
                jet.point_derivative(0, &lam),
                jet.point_derivative(1, &lam),
            ];
            let t = Subspace::span(6, &vs, cfg.tol_rank)?;
            let focal = t.dim() < 4;
            let distance = t.distance(&p3);
            let excess = t.excess_over(&p3);
            let consistent = if S::EXACT {
                if focal {
                    t.basis().iter().all(|v| p3.contains(v, 0.0))
                } else {
                    t.same_as(&p3, 0.0)
                }
            } else if focal {
                excess <= cfg.tol_subspace
            } else {
                distance <= cfg.tol_subspace
            };
            Ok(TangentProbe {
                lambda: l,
                dim: t.dim(),
                focal,
                distance,
                excess,
                consistent,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fixed = probes.iter().all(|p| p.consistent);
    Ok(TangentReport {
        rank,
        probes,
        fixed,
    })
}

/// Rank of the differential of `t ↦ span{a₀, a₁, ∂a₀, ∂a₁}`: 2 for a curved
/// `A`-line, 0 along a straight one.
pub fn gauss_map_rank<S: Scalar>(map: &dyn PlaneMap<S>, t: &[S; 2], tol: f64) -> Result<usize> {
    let kind = map.kind();
    let jet = GeneratorJet::at(map, t, Derivatives::Analytic);
    let w = jet.vectors();
    let p3 = Subspace::span(6, &w, tol)?;
    if p3.dim() < 4 {
        return Err(Error::DegenerateSample(format!(
            "tangent span has rank {}",
            p3.dim()
        )));
    }
    let q = p3.quotient();
    let second = map.second_partials(t);
    let sc: Vec<(RP5Vec<S>, RP5Vec<S>)> = second.iter().map(|c| columns_of(kind, c)).collect();
    // ∂ᵢ∂ⱼ a_c with (i, j) → index 0: 11, 1: 12, 2: 22
    let dd = |c: usize, i: usize, j: usize| {
        let (s0, s1) = &sc[i + j];
        if c == 0 {
            s0.clone()
        } else {
            s1.clone()
        }
    };
    let rows: Vec<Vec<S>> = (0..2)
        .map(|i| {
            let derivs = [
                jet.d[0][i].clone(),
                jet.d[1][i].clone(),
                dd(0, i, 0),
                dd(0, i, 1),
                dd(1, i, 0),
                dd(1, i, 1),
            ];
            derivs.iter().flat_map(|v| q.apply(v)).collect()
        })
        .collect();
    if S::EXACT {
        return rank_of_vectors(&rows, 0.0);
    }
    let scale = scale_of(&w.iter().flatten().cloned().collect::<Vec<S>>()).max(scale_of(
        &sc.iter()
            .flat_map(|(a, b)| a.iter().chain(b.iter()))
            .cloned()
            .collect::<Vec<S>>(),
    ));
    let m = Mat::from_rows(&rows)?.to_dmatrix();
    Ok(m.singular_values()
        .iter()
        .filter(|s| **s > tol * scale)
        .count())
}

/// `Ω = A⁻¹ ∂A` for the frame `a₀ … a₅` built from the point, its
/// `A`-derivative and a fixed basis point.
#[derive(Debug, Clone)]
pub struct FrameDerivative<S> {
    pub t: [S; 2],
    pub frame: Mat<S>,
    pub omega: [Mat<S>; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameCheck {
    /// Largest departure of a 2×2 block of `Ω` from the algebra's shape.
    pub form_residual: f64,
    /// Largest `|ω₀⁴|, |ω₀⁵|, |ω₁⁴|, |ω₁⁵|`.
    pub smoothness_residual: f64,
    /// `‖Ω₂ - Ω₁·diag(u)‖`, zero for analytic curves.
    pub analyticity_residual: f64,
    /// `‖∂₁Ω₂ - ∂₂Ω₁ + Ω₁Ω₂ - Ω₂Ω₁‖` by central differences.
    pub structure_residual: f64,
    pub structure_tol: f64,
}

fn frame_matrix<S: Scalar>(kind: AlgebraKind, blocks: [&[A2<S>; 3]; 3]) -> Mat<S> {
    let mut m = Mat::zeros(6, 6);
    for (b, coords) in blocks.iter().enumerate() {
        let (c0, c1) = columns_of(kind, coords);
        for r in 0..6 {
            m[(r, 2 * b)] = c0[r].clone();
            m[(r, 2 * b + 1)] = c1[r].clone();
        }
    }
    m
}

impl<S: Scalar> FrameDerivative<S> {
    pub fn at(map: &dyn PlaneMap<S>, t: &[S; 2]) -> Result<Self> {
        let kind = map.kind();
        let x = map.coords(t);
        let p = map.partials(t);
        let pp = map.second_partials(t);
        let zero: [A2<S>; 3] = std::array::from_fn(|_| A2::zero(kind));
        for e in [2, 1, 0] {
            let basis = PointA::<S>::basis(kind, e);
            let e_coords = basis.coords();
            let frame = frame_matrix(kind, [&x, &p[0], e_coords]);
            let Some(inv) = inverse(&frame, RANK_TOL) else {
                continue;
            };
            // ∂ᵢ of (X, X' = ∂₁X, E)
            let d1 = frame_matrix(kind, [&p[0], &pp[0], &zero]);
            let d2 = frame_matrix(kind, [&p[1], &pp[1], &zero]);
            let omega = [inv.matmul(&d1)?, inv.matmul(&d2)?];
            return Ok(FrameDerivative {
                t: t.clone(),
                frame,
                omega,
            });
        }
        Err(Error::DegenerateSample(
            "point and its derivative do not extend to a frame".into(),
        ))
    }

    /// `ωᵢʲ`: coefficient of `aⱼ` in `daᵢ` along direction `dir`.
    pub fn form(&self, dir: usize, i: usize, j: usize) -> &S {
        &self.omega[dir][(j, i)]
    }

    pub fn check(&self, map: &dyn PlaneMap<S>) -> Result<FrameCheck> {
        let kind = map.kind();
        let s = kind.unit_square() as f64;
        let om: Vec<nalgebra::DMatrix<f64>> = self.omega.iter().map(|m| m.to_dmatrix()).collect();
        let scale = om.iter().map(|m| m.amax()).fold(1.0, f64::max);

        let mut form = 0.0_f64;
        for m in &om {
            for a in 0..3 {
                for b in 0..3 {
                    let (r, c) = (2 * a, 2 * b);
                    form = form
                        .max((m[(r, c)] - m[(r + 1, c + 1)]).abs())
                        .max((m[(r, c + 1)] - s * m[(r + 1, c)]).abs());
                }
            }
        }
        let mut smooth = 0.0_f64;
        for m in &om {
            for i in 0..2 {
                for j in 4..6 {
                    smooth = smooth.max(m[(j, i)].abs());
                }
            }
        }
        let u = A2::<f64>::unit(kind).to_matrix();
        let mut diag_u = nalgebra::DMatrix::<f64>::zeros(6, 6);
        for b in 0..3 {
            diag_u[(2 * b, 2 * b)] = u.a00;
            diag_u[(2 * b, 2 * b + 1)] = u.a01;
            diag_u[(2 * b + 1, 2 * b)] = u.a10;
            diag_u[(2 * b + 1, 2 * b + 1)] = u.a11;
        }
        let analytic = (&om[1] - &om[0] * &diag_u).amax();

        let h = fd_step::<S>();
        let hf = h.to_f64();
        let omega_at = |i: usize, sign: i64| -> Result<nalgebra::DMatrix<f64>> {
            let t = shifted(&self.t, i, &(h.clone() * S::from_i64(sign)));
            Ok(FrameDerivative::at(map, &t)?
                .omega
                .map(|m| m.to_dmatrix())
                .to_vec()
                .swap_remove(1 - i))
        };
        // ∂₁Ω₂ and ∂₂Ω₁
        let d1_om2 = (omega_at(0, 1)? - omega_at(0, -1)?) / (2.0 * hf);
        let d2_om1 = (omega_at(1, 1)? - omega_at(1, -1)?) / (2.0 * hf);
        let structure = (d1_om2 - d2_om1 + &om[0] * &om[1] - &om[1] * &om[0]).amax();

        Ok(FrameCheck {
            form_residual: form / scale,
            smoothness_residual: smooth / scale,
            analyticity_residual: analytic / scale,
            structure_residual: structure / (scale * scale),
            structure_tol: 10.0 * FD_STEP * FD_STEP,
        })
    }
}

/// Real and complex foci of one generator.
#[derive(Debug, Clone, Serialize)]
pub struct GeneratorFoci<S> {
    pub roots: RootSet,
    pub expected: RootSet,
    pub distance: f64,
    /// Discriminant of the common quadratic factor of the minors.
    pub discriminant: Option<f64>,
    #[serde(skip)]
    pub foci: Vec<(S, RP5Vec<S>)>,
}

/// The closed-form focal roots on a generator of the ruled 3-fold.
pub fn expected_generator_roots(kind: AlgebraKind) -> RootSet {
    let m = model(kind);
    RootSet {
        real: m
            .real_foci()
            .iter()
            .map(|f| RealRoot {
                value: f.lambda as f64,
                exact: Some(<crate::scalar::Rational as Scalar>::from_i64(f.lambda)),
                multiplicity: f.surface_multiplicity,
            })
            .collect(),
        complex: m
            .complex_foci()
            .iter()
            .filter(|f| f.lambda_im > 0)
            .map(|f| ComplexPair {
                re: 0.0,
                im: f.lambda_im as f64,
                multiplicity: f.surface_multiplicity,
            })
            .collect(),
    }
}

/// The 2×2 minors of the 4×2 matrix `(∂₁x, ∂₂x)` modulo the generator,
/// `x = a₁ + λa₀`, as polynomials in `λ`.
pub fn focal_minors<S: Scalar>(jet: &GeneratorJet<S>, tol: f64) -> Result<Vec<Poly<S>>> {
    let gen = Subspace::span(6, &[&jet.a0[..], &jet.a1[..]], tol)?;
    if gen.dim() != 2 {
        return Err(Error::DegenerateSample(
            "generator points are dependent".into(),
        ));
    }
    let q = gen.quotient();
    let cols: Vec<Vec<Poly<S>>> = (0..2)
        .map(|i| {
            let c = q.apply(&jet.d[1][i]);
            let l = q.apply(&jet.d[0][i]);
            c.into_iter()
                .zip(l)
                .map(|(c, l)| Poly::linear(c, l))
                .collect()
        })
        .collect();
    let n = cols[0].len();
    let mut minors = Vec::new();
    for r in 0..n {
        for s in r + 1..n {
            minors.push(&(&cols[0][r] * &cols[1][s]) - &(&cols[0][s] * &cols[1][r]));
        }
    }
    Ok(minors)
}

/// Foci `a₁ + λa₀` of a generator from the common roots of the minors,
/// checked against the closed form for the algebra.
pub fn generator_foci<S: Scalar>(
    jet: &GeneratorJet<S>,
    cfg: &AnalysisConfig,
) -> Result<GeneratorFoci<S>> {
    let minors = focal_minors(jet, cfg.tol_rank)?;
    let scale = minors.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let minors: Vec<Poly<S>> = if S::EXACT {
        minors
    } else {
        // drop float noise below the rank tolerance
        minors
            .iter()
            .map(|p| {
                p.map(|c| {
                    if c.to_f64().abs() <= cfg.tol_rank * scale {
                        S::zero()
                    } else {
                        c.clone()
                    }
                })
            })
            .collect()
    };
    if minors.iter().all(|p| p.is_zero()) {
        return Err(Error::DegenerateSample(
            "every point of the generator is focal".into(),
        ));
    }
    let (roots, common) = common_roots(&minors, cfg.cluster_radius)?;
    let expected = expected_generator_roots(jet.kind);
    let distance = roots.distance(&expected);
    if distance > cfg.cluster_radius {
        return Err(Error::InternalConsistency(format!(
            "generic focal roots {:?} differ from the {} closed form {:?}",
            roots, jet.kind, expected
        )));
    }
    let foci = roots
        .real
        .iter()
        .map(|r| {
            let lam = match (&r.exact, S::EXACT) {
                (Some(q), true) => S::from_rational(q),
                _ => S::from_f64(r.value),
            };
            let p = jet.point(&lam);
            (lam, p)
        })
        .collect();
    Ok(GeneratorFoci {
        discriminant: discriminant(&common.monic()).map(|d| d.to_f64()),
        roots,
        expected,
        distance,
        foci,
    })
}

/// Parameters `t = -1 + (2i+1)/n` per axis, shifted by `1/17` and `1/19`
/// off the symmetry lines.
pub fn grid<S: Scalar>(a: usize, b: usize) -> Vec<[S; 2]> {
    let axis = |n: usize, k: usize, off: i64| {
        S::ratio(2 * k as i64 + 1, n as i64) - S::one() + S::ratio(1, off)
    };
    let mut out = Vec::with_capacity(a * b);
    for i in 0..a {
        for j in 0..b {
            out.push([axis(a, i, 17), axis(b, j, 19)]);
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct Membership {
    pub focus: String,
    pub plane: String,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "")]
pub struct SampleReport<S> {
    pub index: usize,
    pub z: [String; 2],
    pub smooth: bool,
    pub rank: usize,
    pub gauss_rank: usize,
    pub tangent: TangentReport,
    pub lambda_roots: RootSet,
    pub oracle_distance: f64,
    pub discriminant: Option<f64>,
    pub memberships: Vec<Membership>,
    /// `rank{f, ∂₁f, ∂₂f}` for each real focus `f`.
    pub focal_curve_ranks: Vec<usize>,
    #[serde(skip)]
    pub generator: Option<Line5<S>>,
    #[serde(skip)]
    pub foci: Vec<(S, RP5Vec<S>)>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case", bound = "")]
pub enum SampleOutcome<S> {
    Ok(SampleReport<S>),
    Degenerate {
        index: usize,
        z: [String; 2],
        reason: String,
    },
    Failed {
        index: usize,
        z: [String; 2],
        reason: String,
    },
}

impl<S> SampleOutcome<S> {
    pub fn report(&self) -> Option<&SampleReport<S>> {
        match self {
            SampleOutcome::Ok(r) => Some(r),
            _ => None,
        }
    }
}

/// A focal curve sampled at the grid parameters (`None` where the sample
/// was rejected).
#[derive(Debug, Clone)]
pub struct FocalCurve<S> {
    pub plane: String,
    pub lambda: f64,
    pub points: Vec<Option<RP5Vec<S>>>,
    pub span_dim: usize,
}

#[derive(Debug, Clone)]
pub struct SurfaceAnalysis<S> {
    pub kind: AlgebraKind,
    pub classification: Option<SurfaceClass>,
    pub expected: SurfaceClass,
    pub samples: Vec<SampleOutcome<S>>,
    pub focal_curves: Vec<FocalCurve<S>>,
    /// Span dimension of all focal points together (6 for a join).
    pub focal_span: Option<usize>,
    pub degenerate: usize,
    pub failures: Vec<String>,
}

impl<S> SurfaceAnalysis<S> {
    pub fn degenerate_fraction(&self) -> f64 {
        if self.samples.is_empty() {
            0.0
        } else {
            self.degenerate as f64 / self.samples.len() as f64
        }
    }

    pub fn classified_as_expected(&self) -> bool {
        self.classification == Some(self.expected)
    }
}

fn encode_z<S: Scalar>(t: &[S; 2]) -> [String; 2] {
    [t[0].encode(), t[1].encode()]
}

fn analyse_sample<S: Scalar>(
    map: &dyn PlaneMap<S>,
    index: usize,
    t: &[S; 2],
    cfg: &AnalysisConfig,
) -> Result<SampleReport<S>> {
    let kind = map.kind();
    let jet = GeneratorJet::at(map, t, cfg.derivatives);
    let smooth = check_smoothness(&jet, cfg.tol_rank)?;
    let tangent = tangent_along_generator(&jet, cfg)?;
    let gauss_rank = gauss_map_rank(map, t, cfg.tol_rank)?;
    let foci = generator_foci(&jet, cfg)?;

    let frame = standard_frame::<S>();
    let planes = focal_planes(kind, &frame)?;
    let m = model(kind);
    let real_foci = m.real_foci();
    let mut memberships = Vec::new();
    let mut focal_curve_ranks = Vec::new();
    for (lam, f) in &foci.foci {
        let lf = lam.to_f64();
        let (focus, plane) = real_foci
            .iter()
            .zip(&planes)
            .min_by(|a, b| {
                ((a.0.lambda as f64) - lf)
                    .abs()
                    .partial_cmp(&((b.0.lambda as f64) - lf).abs())
                    .unwrap()
            })
            .ok_or_else(|| {
                Error::InternalConsistency(format!("real focus λ = {lf} on a {kind} surface"))
            })?;
        let residual = plane.residual(f);
        memberships.push(Membership {
            focus: format!("a1 + ({})a0", focus.lambda),
            plane: plane.name.into(),
            residual,
            passed: plane.contains(f, cfg.tol_membership),
        });
        let df = [jet.point_derivative(0, lam), jet.point_derivative(1, lam)];
        focal_curve_ranks.push(rank_of_vectors(
            &[&f[..], &df[0][..], &df[1][..]],
            cfg.tol_rank,
        )?);
    }
    let cplanes = complex_focal_planes(kind, &frame)?;
    for (focus, plane) in m.complex_foci().iter().zip(&cplanes) {
        let im: Vec<S> = jet
            .a0
            .iter()
            .map(|v| S::from_i64(focus.lambda_im) * v.clone())
            .collect();
        memberships.push(Membership {
            focus: format!("a1 + ({}i)a0", focus.lambda_im),
            plane: plane.name.into(),
            residual: plane.residual(&jet.a1, &im),
            passed: plane.contains(&jet.a1, &im, cfg.tol_membership),
        });
    }

    Ok(SampleReport {
        index,
        z: encode_z(t),
        smooth,
        rank: tangent.rank,
        gauss_rank,
        tangent,
        lambda_roots: foci.roots,
        oracle_distance: foci.distance,
        discriminant: foci.discriminant,
        memberships,
        focal_curve_ranks,
        generator: jet.generator().ok(),
        foci: foci.foci,
    })
}

/// Analyses every grid sample in parallel and classifies the singular locus
/// of the swept 3-fold from the foci that were found.
pub fn singular_locus<S: Scalar>(
    map: &dyn PlaneMap<S>,
    params: &[[S; 2]],
    cfg: &AnalysisConfig,
) -> Result<SurfaceAnalysis<S>> {
    let kind = map.kind();
    let samples: Vec<SampleOutcome<S>> = params
        .par_iter()
        .enumerate()
        .map(|(index, t)| match analyse_sample(map, index, t, cfg) {
            Ok(r) => SampleOutcome::Ok(r),
            Err(Error::DegenerateSample(reason)) => SampleOutcome::Degenerate {
                index,
                z: encode_z(t),
                reason,
            },
            Err(e) => SampleOutcome::Failed {
                index,
                z: encode_z(t),
                reason: e.to_string(),
            },
        })
        .collect();

    let mut failures = Vec::new();
    let mut degenerate = 0;
    for s in &samples {
        match s {
            SampleOutcome::Ok(r) => {
                if !r.smooth {
                    failures.push(format!("sample {}: not smooth", r.index));
                }
                if !r.tangent.fixed {
                    failures.push(format!(
                        "sample {}: tangent subspace moves along the generator",
                        r.index
                    ));
                }
                for m in r.memberships.iter().filter(|m| !m.passed) {
                    failures.push(format!(
                        "sample {}: focus {} off plane {} (residual {:e})",
                        r.index, m.focus, m.plane, m.residual
                    ));
                }
            }
            SampleOutcome::Degenerate { .. } => degenerate += 1,
            SampleOutcome::Failed { index, reason, .. } => {
                failures.push(format!("sample {index}: {reason}"))
            }
        }
    }

    let reports: Vec<&SampleReport<S>> = samples.iter().filter_map(|s| s.report()).collect();
    let (classification, focal_curves, focal_span) = classify(kind, &samples, &reports, cfg)?;
    Ok(SurfaceAnalysis {
        kind,
        classification,
        expected: model(kind).surface_class(),
        samples,
        focal_curves,
        focal_span,
        degenerate,
        failures,
    })
}

type Classified<S> = (Option<SurfaceClass>, Vec<FocalCurve<S>>, Option<usize>);

fn classify<S: Scalar>(
    kind: AlgebraKind,
    samples: &[SampleOutcome<S>],
    reports: &[&SampleReport<S>],
    cfg: &AnalysisConfig,
) -> Result<Classified<S>> {
    if reports.is_empty() {
        return Ok((None, vec![], None));
    }
    let counts: Vec<Vec<usize>> = reports
        .iter()
        .map(|r| r.lambda_roots.real.iter().map(|x| x.multiplicity).collect())
        .collect();
    let same_shape = counts.windows(2).all(|w| w[0] == w[1]);
    if !same_shape {
        return Ok((None, vec![], None));
    }
    let shape = counts[0].clone();
    if shape.is_empty() {
        let all_negative = reports
            .iter()
            .all(|r| r.discriminant.is_some_and(|d| d < 0.0));
        return Ok((
            all_negative.then_some(SurfaceClass::NoRealSingularities),
            vec![],
            None,
        ));
    }

    // focal families ordered by λ
    let planes = focal_planes(kind, &standard_frame::<S>())?;
    let mut curves = Vec::new();
    for (k, _) in shape.iter().enumerate() {
        let points: Vec<Option<RP5Vec<S>>> = samples
            .iter()
            .map(|s| s.report().map(|r| r.foci[k].1.clone()))
            .collect();
        let present: Vec<&RP5Vec<S>> = points.iter().flatten().collect();
        let span_dim = rank_of_vectors(&present, cfg.tol_rank)?;
        let lambda = reports
            .iter()
            .map(|r| r.lambda_roots.real[k].value)
            .sum::<f64>()
            / reports.len() as f64;
        let plane = reports[0]
            .memberships
            .get(k)
            .map(|m| m.plane.clone())
            .unwrap_or_else(|| {
                planes
                    .first()
                    .map(|p| p.name.to_string())
                    .unwrap_or_default()
            });
        curves.push(FocalCurve {
            plane,
            lambda,
            points,
            span_dim,
        });
    }
    let all: Vec<&RP5Vec<S>> = curves
        .iter()
        .flat_map(|c| c.points.iter().flatten())
        .collect();
    let focal_span = rank_of_vectors(&all, cfg.tol_rank)?;
    let planar = curves.iter().all(|c| c.span_dim <= 3);
    let curve_like = reports
        .iter()
        .all(|r| r.focal_curve_ranks.iter().all(|&k| k <= 2));

    let class = match shape.as_slice() {
        [1, 1] if planar && curve_like && focal_span == 6 => Some(SurfaceClass::Join),
        [2] if planar && curve_like => Some(SurfaceClass::PlaneCurveFamily),
        _ => None,
    };
    Ok((class, curves, Some(focal_span)))
}

/// Result of joining matched points of two plane curves.
#[derive(Debug, Clone)]
pub struct JoinReconstruction<S> {
    pub lines: Vec<Option<Line5<S>>>,
    pub warnings: Vec<String>,
    pub plane_dims: [usize; 2],
    /// Rank of all spanning points of the reconstructed lines.
    pub span_rank: usize,
    /// Largest sine distance between an input point and the intersection of
    /// its line with the other curve's plane complement.
    pub round_trip: f64,
}

/// Point of the line `span{p, q}` lying in `plane`, if unique.
pub fn intersect_line_subspace<S: Scalar>(
    line: &Line5<S>,
    plane: &Subspace<S>,
    tol: f64,
) -> Option<RP5Vec<S>> {
    let q = plane.quotient();
    let (p0, p1) = line.points();
    let a = q.apply(p0);
    let b = q.apply(p1);
    let m = Mat::from_cols(&[a, b]).ok()?;
    let r = if m.is_empty() { 0 } else { rank(&m, tol).ok()? };
    if r != 1 {
        return None;
    }
    let ns = crate::exactlin::nullspace(&m, tol);
    let v = ns.first()?;
    Some(std::array::from_fn(|k| {
        v[0].clone() * p0[k].clone() + v[1].clone() * p1[k].clone()
    }))
}

/// Lines through matched points `γ₁(k)`, `γ₂(k)` of two plane curves.
/// Coincident pairs are skipped and a curve collapsing to a point (a cone)
/// is accepted; both produce warnings.
pub fn join_reconstruct<S: Scalar>(
    gamma1: &[Option<RP5Vec<S>>],
    gamma2: &[Option<RP5Vec<S>>],
    tol: f64,
) -> Result<JoinReconstruction<S>> {
    if gamma1.len() != gamma2.len() {
        return Err(Error::Contract(format!(
            "curves sampled at {} and {} parameters",
            gamma1.len(),
            gamma2.len()
        )));
    }
    let mut warnings = Vec::new();
    let span = |g: &[Option<RP5Vec<S>>]| -> Result<Subspace<S>> {
        let pts: Vec<&RP5Vec<S>> = g.iter().flatten().collect();
        Subspace::span(6, &pts, tol)
    };
    let (s1, s2) = (span(gamma1)?, span(gamma2)?);
    for (name, s) in [("first", &s1), ("second", &s2)] {
        match s.dim() {
            0 => {
                return Err(Error::DegenerateInput(format!(
                    "{name} curve has no points"
                )))
            }
            1 => warnings.push(format!(
                "{name} curve is a single point; the join is a cone"
            )),
            2 | 3 => {}
            d => {
                return Err(Error::Contract(format!(
                    "{name} curve spans a {}-space, not a plane",
                    d - 1
                )))
            }
        }
    }
    let both: Vec<&RP5Vec<S>> = gamma1.iter().chain(gamma2).flatten().collect();
    if rank_of_vectors(&both, tol)? != s1.dim() + s2.dim() {
        return Err(Error::Contract("the planes of the two curves meet".into()));
    }

    let mut lines = Vec::with_capacity(gamma1.len());
    let mut round_trip = 0.0_f64;
    for (k, (p, q)) in gamma1.iter().zip(gamma2).enumerate() {
        let (Some(p), Some(q)) = (p, q) else {
            lines.push(None);
            continue;
        };
        match Line5::new(p.clone(), q.clone()) {
            Ok(l) => {
                for (plane, input) in [(&s1, p), (&s2, q)] {
                    match intersect_line_subspace(&l, plane, tol) {
                        Some(x)
                            if S::EXACT && rank_of_vectors(&[&x[..], &input[..]], 0.0)? == 1 => {}
                        Some(x) => round_trip = round_trip.max(sine_between(&x, input)),
                        None => round_trip = f64::INFINITY,
                    }
                }
                lines.push(Some(l));
            }
            Err(_) => {
                warnings.push(format!("sample {k}: matched points coincide, skipped"));
                lines.push(None);
            }
        }
    }
    let pts: Vec<RP5Vec<S>> = lines
        .iter()
        .flatten()
        .flat_map(|l| {
            let (a, b) = l.points();
            [a.clone(), b.clone()]
        })
        .collect();
    let span_rank = if pts.is_empty() {
        0
    } else {
        rank_of_vectors(&pts, tol)?
    };
    Ok(JoinReconstruction {
        lines,
        warnings,
        plane_dims: [s1.dim(), s2.dim()],
        span_rank,
        round_trip,
    })
}

/// Largest Plücker-class distance between reconstructed and original
/// generators over the samples where both exist.
pub fn generator_round_trip<S: Scalar>(
    analysis: &SurfaceAnalysis<S>,
    join: &JoinReconstruction<S>,
) -> f64 {
    analysis
        .samples
        .iter()
        .zip(&join.lines)
        .filter_map(|(s, l)| {
            let g = s.report()?.generator.as_ref()?;
            Some(g.class_distance(l.as_ref()?))
        })
        .fold(0.0, f64::max)
}

/// Normalized focal point for reports.
pub fn encode_point<S: Scalar>(v: &RP5Vec<S>) -> Vec<String> {
    normalize_homogeneous(v)
        .iter()
        .map(|x| x.encode())
        .collect()
}
