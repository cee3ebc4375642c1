//! Small dense linear algebra and polynomial root finding, exact over the
//! rationals or approximate over `f64`.

pub mod matrix;
pub mod poly;
pub mod roots;
pub mod subspace;

pub use matrix::{
    axpy, det, dot, inverse, norm_f64, normalize_homogeneous, nullspace, rank, rank_of_vectors,
    rref, Mat, Rref, RANK_TOL,
};
pub use poly::{poly_det, square_free, Poly};
pub use roots::{
    common_roots, discriminant, real_roots_with_multiplicity, ComplexPair, RealRoot, RootSet,
    CLUSTER_RADIUS,
};
pub use subspace::{QuotientMap, Subspace};
