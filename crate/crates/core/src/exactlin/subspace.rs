use nalgebra::DMatrix;

use super::matrix::{rref, Mat, Rref};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A linear subspace of `S^n`, kept as a reduced row echelon basis.
///
/// In float mode the basis is first cleaned through an SVD so its dimension
/// is the numerical rank of the spanning set.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<S> {
    ambient: usize,
    reduced: Rref<S>,
}

impl<S: Scalar> Subspace<S> {
    pub fn span<V: AsRef<[S]>>(ambient: usize, vectors: &[V], tol: f64) -> Result<Self> {
        if vectors.iter().any(|v| v.as_ref().len() != ambient) {
            return Err(Error::Contract("ambient dimensions disagree".into()));
        }
        if vectors.is_empty() {
            return Ok(Subspace {
                ambient,
                reduced: Rref {
                    rows: vec![],
                    pivots: vec![],
                    ncols: ambient,
                },
            });
        }
        let m = Mat::from_rows(vectors)?;
        let reduced = if S::EXACT {
            rref(&m, 0.0)
        } else {
            let basis = orthonormal_rows(&m.to_dmatrix(), tol);
            let rows: Vec<Vec<S>> = basis
                .iter()
                .map(|r| r.iter().map(|v| S::from_f64(*v)).collect())
                .collect();
            if rows.is_empty() {
                Rref {
                    rows: vec![],
                    pivots: vec![],
                    ncols: ambient,
                }
            } else {
                rref(&Mat::from_rows(&rows)?, 1e-12)
            }
        };
        Ok(Subspace { ambient, reduced })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.reduced.rank()
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.reduced.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.reduced.pivots
    }

    /// Exact membership in rational mode; otherwise the residual after
    /// orthogonal projection must be at most `tol · ‖v‖`.
    pub fn contains(&self, v: &[S], tol: f64) -> bool {
        self.residual(v) <= if S::EXACT { 0.0 } else { tol }
    }

    /// Relative residual `‖v - Pv‖ / ‖v‖` (0 for `v = 0`). Exact mode
    /// reports 0 or the residual of the exact reduction.
    pub fn residual(&self, v: &[S]) -> f64 {
        assert_eq!(v.len(), self.ambient, "ambient dimension");
        let norm = v.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        if S::EXACT {
            let r = self.reduced.reduce(v);
            if r.iter().all(|x| x.is_zero()) {
                return 0.0;
            }
            return (r.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt() / norm)
                .max(f64::MIN_POSITIVE);
        }
        let q = self.orthonormal();
        let x = nalgebra::DVector::from_iterator(v.len(), v.iter().map(|t| t.to_f64()));
        let proj = match &q {
            Some(q) => q.transpose() * (q * &x),
            None => nalgebra::DVector::zeros(v.len()),
        };
        (x - proj).norm() / norm
    }

    /// Orthonormal basis as rows of a `dim × n` matrix (`None` for `{0}`).
    pub fn orthonormal(&self) -> Option<DMatrix<f64>> {
        if self.dim() == 0 {
            return None;
        }
        let m = DMatrix::from_fn(self.dim(), self.ambient, |i, j| {
            self.reduced.rows[i][j].to_f64()
        });
        let rows = orthonormal_rows(&m, 1e-12);
        Some(DMatrix::from_fn(rows.len(), self.ambient, |i, j| {
            rows[i][j]
        }))
    }

    /// Orthogonal projector onto the subspace as an `n × n` float matrix.
    pub fn projector(&self) -> DMatrix<f64> {
        match self.orthonormal() {
            Some(q) => q.transpose() * q,
            None => DMatrix::zeros(self.ambient, self.ambient),
        }
    }

    /// Sine of the largest principal angle, `‖P₁ - P₂‖₂`; 1 when the
    /// dimensions differ.
    pub fn distance(&self, other: &Subspace<S>) -> f64 {
        if self.dim() != other.dim() || self.ambient != other.ambient {
            return 1.0;
        }
        spectral_norm(&(self.projector() - other.projector()))
    }

    /// `‖(I - P_other) Q_self‖₂`: zero iff `self ⊆ other`.
    pub fn excess_over(&self, other: &Subspace<S>) -> f64 {
        let Some(q) = self.orthonormal() else {
            return 0.0;
        };
        let p = other.projector();
        let eye = DMatrix::<f64>::identity(self.ambient, self.ambient);
        spectral_norm(&((eye - p) * q.transpose()))
    }

    /// Exact equality of subspaces in rational mode (same reduced basis).
    pub fn same_as(&self, other: &Subspace<S>, tol: f64) -> bool {
        if S::EXACT {
            self.reduced == other.reduced
        } else {
            self.distance(other) <= tol
        }
    }

    /// Linear map onto `S^n / self`, see [`QuotientMap`].
    pub fn quotient(&self) -> QuotientMap<S> {
        let free = (0..self.ambient)
            .filter(|c| !self.reduced.pivots.contains(c))
            .collect();
        QuotientMap {
            reduced: self.reduced.clone(),
            free,
        }
    }
}

/// Coordinates on the quotient `S^n / W`: reduce a vector by the echelon
/// basis of `W` and keep the non-pivot coordinates.
#[derive(Debug, Clone)]
pub struct QuotientMap<S> {
    reduced: Rref<S>,
    free: Vec<usize>,
}

impl<S: Scalar> QuotientMap<S> {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        let r = self.reduced.reduce(v);
        self.free.iter().map(|&c| r[c].clone()).collect()
    }
}

fn orthonormal_rows(m: &DMatrix<f64>, tol: f64) -> Vec<Vec<f64>> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let top = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    if top == 0.0 {
        return vec![];
    }
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap()
    });
    idx.into_iter()
        .filter(|&i| svd.singular_values[i] > tol * top)
        .map(|i| v_t.row(i).iter().cloned().collect())
        .collect()
}

fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    fn e(i: usize) -> Vec<Q> {
        let mut v = vec![<Q as Scalar>::from_i64(0); 6];
        v[i] = <Q as Scalar>::from_i64(1);
        v
    }

    fn ints(v: &[i64]) -> Vec<Q> {
        v.iter().map(|x| <Q as Scalar>::from_i64(*x)).collect()
    }

    #[test]
    fn membership() {
        let s = Subspace::span(6, &[e(0), e(1)], 0.0).unwrap();
        assert!(s.contains(&ints(&[1, 1, 0, 0, 0, 0]), 0.0));
        let s0 = Subspace::span(6, &[e(0)], 0.0).unwrap();
        assert!(!s0.contains(&e(1), 0.0));
        let pi1 = Subspace::span(
            6,
            &[
                ints(&[1, 1, 0, 0, 0, 0]),
                ints(&[0, 0, 1, 1, 0, 0]),
                ints(&[0, 0, 0, 0, 1, 1]),
            ],
            0.0,
        )
        .unwrap();
        assert!(pi1.contains(&ints(&[1, 1, 2, 2, 5, 5]), 0.0));
        assert!(!pi1.contains(&ints(&[1, 1, 2, 2, 5, 4]), 0.0));
    }

    #[test]
    fn float_membership_and_distance() {
        let a: Vec<Vec<f64>> = vec![vec![1.0, 2.0, 0.0], vec![0.0, 1.0, 1.0]];
        let b: Vec<Vec<f64>> = vec![vec![1.0, 3.0, 1.0], vec![1.0, 1.0, -1.0]];
        let sa = Subspace::span(3, &a, 1e-8).unwrap();
        let sb = Subspace::span(3, &b, 1e-8).unwrap();
        assert_eq!(sa.dim(), 2);
        assert!(sa.distance(&sb) < 1e-12);
        assert!(sa.contains(&[2.0, 5.0, 1.0], 1e-10));
        assert!(!sa.contains(&[0.0, 0.0, 1.0], 1e-10));
        let line = Subspace::span(3, &[vec![1.0, 2.0, 0.0]], 1e-8).unwrap();
        assert_eq!(sa.distance(&line), 1.0);
        assert!(line.excess_over(&sa) < 1e-12);
        assert!(sa.excess_over(&line) > 0.5);
    }

    #[test]
    fn quotient_kills_the_subspace() {
        let w = Subspace::span(4, &[ints(&[1, 2, 0, 1]), ints(&[0, 1, 1, 1])], 0.0).unwrap();
        let q = w.quotient();
        assert_eq!(q.dim(), 2);
        assert!(q
            .apply(&ints(&[1, 3, 1, 2]))
            .iter()
            .all(|x| x == &<Q as Scalar>::from_i64(0)));
        assert!(q
            .apply(&ints(&[0, 0, 0, 1]))
            .iter()
            .any(|x| x != &<Q as Scalar>::from_i64(0)));
    }
}
