use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default relative rank tolerance in float mode.
pub const RANK_TOL: f64 = 1e-8;

/// Dense row-major matrix. Dimensions here never exceed a dozen or so.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows<R: AsRef<[S]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::Contract("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().cloned())
            .collect();
        Ok(Mat {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols<R: AsRef<[S]>>(cols: &[R]) -> Result<Self> {
        Ok(Mat::from_rows(cols)?.transpose())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<S>> = rows
            .iter()
            .map(|r| r.iter().map(|v| S::from_i64(*v)).collect())
            .collect();
        Mat::from_rows(&rows).expect("rectangular literal")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn matmul(&self, other: &Mat<S>) -> Result<Mat<S>> {
        if self.cols != other.rows {
            return Err(Error::Contract(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::<S>::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|v| v.to_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_f64())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<S> std::ops::Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced row echelon form: nonzero rows only, pivot columns ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Rref<S> {
    pub rows: Vec<Vec<S>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl<S: Scalar> Rref<S> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Subtracts pivot-row multiples so every pivot coordinate of `v` is zero.
    pub fn reduce(&self, v: &[S]) -> Vec<S> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = out[p].clone();
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(row) {
                *o = o.clone() - c.clone() * r.clone();
            }
        }
        out
    }
}

/// Gauss–Jordan elimination. Exact mode pivots on the first nonzero entry;
/// float mode uses partial pivoting and treats entries below
/// `tol · max|m|` as zero.
pub fn rref<S: Scalar>(m: &Mat<S>, tol: f64) -> Rref<S> {
    let mut a = m.to_rows();
    let (nr, nc) = (m.nrows(), m.ncols());
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let pick = if S::EXACT {
            (r..nr).find(|&i| !a[i][c].is_zero())
        } else {
            (r..nr)
                .max_by(|&i, &j| {
                    a[i][c]
                        .to_f64()
                        .abs()
                        .partial_cmp(&a[j][c].to_f64().abs())
                        .unwrap()
                        .then(j.cmp(&i))
                })
                .filter(|&i| !a[i][c].negligible(scale, tol))
        };
        let Some(p) = pick else {
            if !S::EXACT {
                for row in a.iter_mut().skip(r) {
                    row[c] = S::zero();
                }
            }
            continue;
        };
        a.swap(r, p);
        let inv = S::one() / a[r][c].clone();
        for v in a[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v = v.clone() - f.clone() * pv.clone();
            }
            row[c] = S::zero();
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Rref {
        rows: a,
        pivots,
        ncols: nc,
    }
}

/// Exact rank by elimination in rational mode; in float mode the number of
/// singular values above `tol · σ₁`.
pub fn rank<S: Scalar>(m: &Mat<S>, tol: f64) -> Result<usize> {
    if m.is_empty() {
        return Err(Error::Contract("rank of an empty matrix".into()));
    }
    if S::EXACT {
        return Ok(rref(m, 0.0).rank());
    }
    let sv = m.to_dmatrix().singular_values();
    let top = sv.iter().cloned().fold(0.0_f64, f64::max);
    if top == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|s| **s > tol * top).count())
}

/// Rank of a list of vectors.
pub fn rank_of_vectors<S: Scalar, V: AsRef<[S]>>(vectors: &[V], tol: f64) -> Result<usize> {
    rank(&Mat::from_rows(vectors)?, tol)
}

/// Basis of `{x : m x = 0}`, one vector per free column.
pub fn nullspace<S: Scalar>(m: &Mat<S>, tol: f64) -> Vec<Vec<S>> {
    let r = rref(m, tol);
    let free: Vec<usize> = (0..m.ncols()).filter(|c| !r.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); m.ncols()];
            v[f] = S::one();
            for (row, &p) in r.rows.iter().zip(&r.pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

pub fn det<S: Scalar>(m: &Mat<S>) -> Result<S> {
    if m.nrows() != m.ncols() {
        return Err(Error::Contract("determinant of a non-square matrix".into()));
    }
    let n = m.nrows();
    let mut a = m.to_rows();
    let mut d = S::one();
    for c in 0..n {
        let pick = (c..n).max_by(|&i, &j| {
            let (x, y) = (a[i][c].to_f64().abs(), a[j][c].to_f64().abs());
            x.partial_cmp(&y).unwrap().then(j.cmp(&i))
        });
        let p = match pick {
            Some(p) if !a[p][c].is_zero() => p,
            _ => return Ok(S::zero()),
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let pivot = a[c][c].clone();
        d = d * pivot.clone();
        let (top, rest) = a.split_at_mut(c + 1);
        let prow = &top[c];
        for row in rest.iter_mut().take(n - c - 1) {
            let f = row[c].clone() / pivot.clone();
            if f.is_zero() {
                continue;
            }
            for (x, v) in row[c..n].iter_mut().zip(&prow[c..n]) {
                *x = x.clone() - f.clone() * v.clone();
            }
        }
    }
    Ok(d)
}

/// Inverse of a square matrix, or `None` when singular (exactly, or below
/// `tol` relative in float mode).
pub fn inverse<S: Scalar>(m: &Mat<S>, tol: f64) -> Option<Mat<S>> {
    let n = m.nrows();
    if n != m.ncols() {
        return None;
    }
    let mut aug = Mat::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = S::one();
    }
    let r = rref(&aug, tol);
    if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
        return None;
    }
    let rows: Vec<Vec<S>> = r.rows.iter().map(|row| row[n..].to_vec()).collect();
    Mat::from_rows(&rows).ok()
}

/// Divides by the entry of largest absolute value (lowest index on ties).
pub fn normalize_homogeneous<S: Scalar>(v: &[S]) -> Vec<S> {
    let mut best: Option<usize> = None;
    for (i, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        match best {
            Some(b) if v[b].abs() >= x.abs() => {}
            _ => best = Some(i),
        }
    }
    match best {
        Some(b) => {
            let d = v[b].clone();
            v.iter().map(|x| x.clone() / d.clone()).collect()
        }
        None => v.to_vec(),
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn axpy<S: Scalar>(alpha: &S, x: &[S], y: &[S]) -> Vec<S> {
    x.iter()
        .zip(y)
        .map(|(a, b)| alpha.clone() * a.clone() + b.clone())
        .collect()
}

pub fn norm_f64<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    #[test]
    fn small_ranks() {
        assert_eq!(rank(&Mat::<Q>::identity(4), 0.0).unwrap(), 4);
        assert_eq!(
            rank(&Mat::<Q>::from_i64_rows(&[&[1, 2], &[2, 4]]), 0.0).unwrap(),
            1
        );
        assert_eq!(
            rank(&Mat::<f64>::from_i64_rows(&[&[1, 2], &[2, 4]]), RANK_TOL).unwrap(),
            1
        );
        assert!(rank(&Mat::<Q>::zeros(0, 0), 0.0).is_err());
        assert_eq!(rank(&Mat::<f64>::zeros(2, 3), RANK_TOL).unwrap(), 0);
    }

    #[test]
    fn nullspace_annihilates() {
        let m = Mat::<Q>::from_i64_rows(&[&[1, 2, 3, 4], &[2, 4, 7, 9]]);
        let ns = nullspace(&m, 0.0);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for i in 0..2 {
                assert!(num_traits::Zero::is_zero(&dot(m.row(i), v)));
            }
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Mat::<Q>::from_i64_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(det(&m).unwrap(), <Q as Scalar>::from_i64(-2));
        let inv = inverse(&m, 0.0).unwrap();
        assert_eq!(m.matmul(&inv).unwrap(), Mat::identity(2));
        assert!(inverse(&Mat::<Q>::from_i64_rows(&[&[1, 2], &[2, 4]]), 0.0).is_none());
    }

    #[test]
    fn normalization_convention() {
        let v = normalize_homogeneous(&[
            <Q as Scalar>::from_i64(2),
            <Q as Scalar>::from_i64(-4),
            <Q as Scalar>::from_i64(4),
        ]);
        assert_eq!(
            v,
            vec![
                Q::ratio(-1, 2),
                <Q as Scalar>::from_i64(1),
                <Q as Scalar>::from_i64(-1)
            ]
        );
    }
}
