//! Per-algebra closed forms behind a common trait, registered by name.
//!
//! Each [`AlgebraModel`] states what the theory predicts for its algebra:
//! the second embedding column, the focal polynomial of the congruence, the
//! foci on a generator and the planes they sweep, and the expected
//! classifications. The generic solvers in [`crate::grassmann`] and
//! [`crate::ruled`] never consult these predictions while computing; they
//! only compare against them afterwards.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::algebra2d::AlgebraKind;
use crate::error::{Error, Result};
use crate::exactlin::Poly;
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CongruenceClass {
    Elliptic,
    Hyperbolic,
    Parabolic,
}

impl fmt::Display for CongruenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CongruenceClass::Elliptic => "elliptic",
            CongruenceClass::Hyperbolic => "hyperbolic",
            CongruenceClass::Parabolic => "parabolic",
        })
    }
}

/// Singular-locus type of the ruled 3-fold swept by a smooth line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceClass {
    NoRealSingularities,
    Join,
    PlaneCurveFamily,
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurfaceClass::NoRealSingularities => "no-real-singularities",
            SurfaceClass::Join => "join",
            SurfaceClass::PlaneCurveFamily => "plane-curve-family",
        })
    }
}

/// The plane spanned by `even·a_{2k} + odd·a_{2k+1}`, `k = 0, 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PlanePattern {
    pub name: &'static str,
    pub even: i64,
    pub odd: i64,
}

impl PlanePattern {
    pub fn spanning_vectors<S: Scalar>(&self, frame: &[[S; 6]; 6]) -> [[S; 6]; 3] {
        std::array::from_fn(|k| {
            std::array::from_fn(|c| {
                S::from_i64(self.even) * frame[2 * k][c].clone()
                    + S::from_i64(self.odd) * frame[2 * k + 1][c].clone()
            })
        })
    }
}

/// Complex plane spanned by `even·a_{2k} + odd·a_{2k+1}` with Gaussian
/// integer coefficients `(re, im)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComplexPlanePattern {
    pub name: &'static str,
    pub even: (i64, i64),
    pub odd: (i64, i64),
}

impl ComplexPlanePattern {
    /// `(real part, imaginary part)` of each spanning vector.
    pub fn spanning_vectors<S: Scalar>(&self, frame: &[[S; 6]; 6]) -> [([S; 6], [S; 6]); 3] {
        let comb = |k: usize, c: usize, (er, or): (i64, i64)| {
            S::from_i64(er) * frame[2 * k][c].clone()
                + S::from_i64(or) * frame[2 * k + 1][c].clone()
        };
        std::array::from_fn(|k| {
            (
                std::array::from_fn(|c| comb(k, c, (self.even.0, self.odd.0))),
                std::array::from_fn(|c| comb(k, c, (self.even.1, self.odd.1))),
            )
        })
    }
}

/// A real focus `a₁ + λ a₀` on every generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RealFocus {
    pub lambda: i64,
    /// Multiplicity as a root of the congruence's focal polynomial.
    pub congruence_multiplicity: usize,
    /// Multiplicity on a generator of the ruled 3-fold of a smooth line.
    pub surface_multiplicity: usize,
    pub plane: PlanePattern,
}

/// A complex focus `a₁ + i·lambda_im·a₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComplexFocus {
    pub lambda_im: i64,
    pub congruence_multiplicity: usize,
    pub surface_multiplicity: usize,
    pub plane: ComplexPlanePattern,
}

pub trait AlgebraModel: Send + Sync + fmt::Debug {
    fn kind(&self) -> AlgebraKind;

    fn name(&self) -> &'static str {
        self.kind().name()
    }

    /// Integer map taking the `(x, y)` block of the first embedding column
    /// to the same block of the second.
    fn second_column_map(&self) -> [[i64; 2]; 2];

    /// Consistency determinant of the congruence's focal system.
    fn focal_polynomial(&self) -> Poly<Rational>;

    fn congruence_class(&self) -> CongruenceClass;

    fn surface_class(&self) -> SurfaceClass;

    fn real_foci(&self) -> Vec<RealFocus>;

    fn complex_foci(&self) -> Vec<ComplexFocus> {
        Vec::new()
    }
}

#[derive(Debug, Default)]
pub struct ComplexModel;

#[derive(Debug, Default)]
pub struct DoubleModel;

#[derive(Debug, Default)]
pub struct DualModel;

const PI_PLUS: PlanePattern = PlanePattern {
    name: "pi1",
    even: 1,
    odd: 1,
};
const PI_MINUS: PlanePattern = PlanePattern {
    name: "pi2",
    even: 1,
    odd: -1,
};
const PI_ODD: PlanePattern = PlanePattern {
    name: "pi",
    even: 0,
    odd: 1,
};

impl AlgebraModel for ComplexModel {
    fn kind(&self) -> AlgebraKind {
        AlgebraKind::Complex
    }

    // x₁ = (-x¹, x⁰, -x³, x², -x⁵, x⁴)
    fn second_column_map(&self) -> [[i64; 2]; 2] {
        [[0, -1], [1, 0]]
    }

    // (1 + λ²)²
    fn focal_polynomial(&self) -> Poly<Rational> {
        Poly::from_i64(&[1, 0, 2, 0, 1])
    }

    fn congruence_class(&self) -> CongruenceClass {
        CongruenceClass::Elliptic
    }

    fn surface_class(&self) -> SurfaceClass {
        SurfaceClass::NoRealSingularities
    }

    fn real_foci(&self) -> Vec<RealFocus> {
        Vec::new()
    }

    // a₁ + i a₀ lies in span{a₀ - i a₁, ...}, a₁ - i a₀ in the conjugate
    fn complex_foci(&self) -> Vec<ComplexFocus> {
        vec![
            ComplexFocus {
                lambda_im: 1,
                congruence_multiplicity: 2,
                surface_multiplicity: 1,
                plane: ComplexPlanePattern {
                    name: "pi1",
                    even: (1, 0),
                    odd: (0, -1),
                },
            },
            ComplexFocus {
                lambda_im: -1,
                congruence_multiplicity: 2,
                surface_multiplicity: 1,
                plane: ComplexPlanePattern {
                    name: "pi2",
                    even: (1, 0),
                    odd: (0, 1),
                },
            },
        ]
    }
}

impl AlgebraModel for DoubleModel {
    fn kind(&self) -> AlgebraKind {
        AlgebraKind::Double
    }

    // x₁ = (x¹, x⁰, x³, x², x⁵, x⁴)
    fn second_column_map(&self) -> [[i64; 2]; 2] {
        [[0, 1], [1, 0]]
    }

    // (1 - λ²)²
    fn focal_polynomial(&self) -> Poly<Rational> {
        Poly::from_i64(&[1, 0, -2, 0, 1])
    }

    fn congruence_class(&self) -> CongruenceClass {
        CongruenceClass::Hyperbolic
    }

    fn surface_class(&self) -> SurfaceClass {
        SurfaceClass::Join
    }

    fn real_foci(&self) -> Vec<RealFocus> {
        vec![
            RealFocus {
                lambda: -1,
                congruence_multiplicity: 2,
                surface_multiplicity: 1,
                plane: PI_MINUS,
            },
            RealFocus {
                lambda: 1,
                congruence_multiplicity: 2,
                surface_multiplicity: 1,
                plane: PI_PLUS,
            },
        ]
    }
}

impl AlgebraModel for DualModel {
    fn kind(&self) -> AlgebraKind {
        AlgebraKind::Dual
    }

    // x₁ = (0, x⁰, 0, x², 0, x⁴)
    fn second_column_map(&self) -> [[i64; 2]; 2] {
        [[0, 0], [1, 0]]
    }

    // λ⁴
    fn focal_polynomial(&self) -> Poly<Rational> {
        Poly::from_i64(&[0, 0, 0, 0, 1])
    }

    fn congruence_class(&self) -> CongruenceClass {
        CongruenceClass::Parabolic
    }

    fn surface_class(&self) -> SurfaceClass {
        SurfaceClass::PlaneCurveFamily
    }

    fn real_foci(&self) -> Vec<RealFocus> {
        vec![RealFocus {
            lambda: 0,
            congruence_multiplicity: 4,
            surface_multiplicity: 2,
            plane: PI_ODD,
        }]
    }
}

/// Name-keyed table of models.
#[derive(Debug, Default)]
pub struct Registry {
    models: BTreeMap<&'static str, Box<dyn AlgebraModel>>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn builtin() -> Self {
        let mut r = Registry::new();
        r.register(Box::new(ComplexModel));
        r.register(Box::new(DoubleModel));
        r.register(Box::new(DualModel));
        r
    }

    pub fn register(&mut self, model: Box<dyn AlgebraModel>) {
        self.models.insert(model.name(), model);
    }

    pub fn get(&self, name: &str) -> Result<&dyn AlgebraModel> {
        self.models
            .get(name.trim().to_ascii_lowercase().as_str())
            .map(|b| b.as_ref())
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown algebra {name:?}; expected one of {}",
                    self.names().join(", ")
                ))
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.models.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn AlgebraModel> {
        self.models.values().map(|b| b.as_ref())
    }
}

pub fn registry() -> &'static Registry {
    static REGISTRY: OnceLock<Registry> = OnceLock::new();
    REGISTRY.get_or_init(Registry::builtin)
}

pub fn model(kind: AlgebraKind) -> &'static dyn AlgebraModel {
    registry()
        .get(kind.name())
        .expect("every algebra kind has a built-in model")
}
