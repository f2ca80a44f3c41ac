//! Dense row-major matrices sized for desk-scale experiments (n <= 64).
//!
//! Everything here is written against `f64` directly. The matrices that show
//! up in this crate are tiny (2x2 up to 21x21 after exterior powers), so the
//! classical unblocked algorithms are both adequate and easy to audit.

use crate::error::Error;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Mat {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Mat {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Build from a flat row-major slice.
    pub fn from_row_major(rows: usize, cols: usize, data: &[f64]) -> Mat {
        assert_eq!(data.len(), rows * cols, "size mismatch");
        Mat {
            rows,
            cols,
            data: data.to_vec(),
        }
    }

    pub fn diagonal(entries: &[f64]) -> Mat {
        let n = entries.len();
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = entries[i];
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Mat {
        let mut m = self.clone();
        for v in &mut m.data {
            *v *= s;
        }
        m
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (v, w) in m.data.iter_mut().zip(&other.data) {
            *v += w;
        }
        m
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (v, w) in m.data.iter_mut().zip(&other.data) {
            *v -= w;
        }
        m
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let mut s = 0.0;
            for j in 0..self.cols {
                s += self[(i, j)] * v[j];
            }
            out[i] = s;
        }
        out
    }

    /// Max-abs entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Operator 1-norm (max absolute column sum).
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0_f64, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// LU decomposition with partial pivoting. Returns (lu, perm, sign) or
    /// None when a pivot degenerates to zero.
    fn lu(&self) -> Option<(Mat, Vec<usize>, f64)> {
        assert!(self.is_square());
        let n = self.rows;
        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let mut p = k;
            let mut max = lu[(k, k)].abs();
            for i in k + 1..n {
                if lu[(i, k)].abs() > max {
                    max = lu[(i, k)].abs();
                    p = i;
                }
            }
            if max == 0.0 || !max.is_finite() {
                return None;
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    lu[(i, j)] -= f * lu[(k, j)];
                }
            }
        }
        Some((lu, perm, sign))
    }

    /// Determinant via LU; 0.0 for numerically singular input.
    pub fn det(&self) -> f64 {
        match self.lu() {
            Some((lu, _, sign)) => {
                let mut d = sign;
                for i in 0..self.rows {
                    d *= lu[(i, i)];
                }
                d
            }
            None => 0.0,
        }
    }

    /// log|det| computed stably (avoids over/underflow of the raw product),
    /// together with the sign of det. Returns None for singular input.
    pub fn log_abs_det(&self) -> Option<(f64, f64)> {
        let (lu, _, mut sign) = self.lu()?;
        let mut log = 0.0;
        for i in 0..self.rows {
            let p = lu[(i, i)];
            if p == 0.0 || !p.is_finite() {
                return None;
            }
            log += p.abs().ln();
            if p < 0.0 {
                sign = -sign;
            }
        }
        Some((log, sign))
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>, Error> {
        let n = self.rows;
        let (lu, perm, _) = self.lu().ok_or(Error::SingularMatrix)?;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = rhs[perm[i]];
            for j in 0..i {
                s -= lu[(i, j)] * y[j];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= lu[(i, j)] * y[j];
            }
            y[i] = s / lu[(i, i)];
        }
        Ok(y)
    }

    pub fn inverse(&self) -> Result<Mat, Error> {
        let n = self.rows;
        let mut inv = Mat::zeros(n, n);
        let (lu, perm, _) = self.lu().ok_or(Error::SingularMatrix)?;
        for c in 0..n {
            let mut y = vec![0.0; n];
            for i in 0..n {
                let mut s = if perm[i] == c { 1.0 } else { 0.0 };
                for j in 0..i {
                    s -= lu[(i, j)] * y[j];
                }
                y[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = y[i];
                for j in i + 1..n {
                    s -= lu[(i, j)] * y[j];
                }
                y[i] = s / lu[(i, i)];
            }
            for i in 0..n {
                inv[(i, c)] = y[i];
            }
        }
        Ok(inv)
    }

    /// Condition number estimate in the 1-norm: ||A||_1 * ||A^-1||_1.
    pub fn cond_one(&self) -> f64 {
        match self.inverse() {
            Ok(inv) => self.norm_one() * inv.norm_one(),
            Err(_) => f64::INFINITY,
        }
    }

    /// Eigenvalues and eigenvectors of a symmetric matrix by the cyclic
    /// Jacobi method. Returns (eigenvalues, eigenvector columns), unsorted.
    pub fn jacobi_symmetric(&self) -> (Vec<f64>, Mat) {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut v = Mat::identity(n);
        for _sweep in 0..64 {
            let mut off = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    off += a[(i, j)] * a[(i, j)];
                }
            }
            if off.sqrt() <= 1e-300 || off.sqrt() <= 1e-15 * a.max_abs() * n as f64 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq.abs() <= 1e-300 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let t = if theta >= 0.0 {
                        1.0 / (theta + (1.0 + theta * theta).sqrt())
                    } else {
                        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let evals = (0..n).map(|i| a[(i, i)]).collect();
        (evals, v)
    }

    /// Singular values, descending, by one-sided Jacobi (columns are rotated
    /// until pairwise orthogonal). Working on the matrix itself rather than
    /// the Gram matrix keeps small singular values accurate.
    pub fn singular_values(&self) -> Vec<f64> {
        self.one_sided_jacobi().0
    }

    /// One-sided Jacobi SVD core: returns (singular values descending,
    /// left singular vectors as columns, in the same order).
    pub fn one_sided_jacobi(&self) -> (Vec<f64>, Mat) {
        let mut a = if self.rows >= self.cols {
            self.clone()
        } else {
            self.transpose()
        };
        let (m, n) = (a.rows, a.cols);
        for _sweep in 0..64 {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let mut app = 0.0;
                    let mut aqq = 0.0;
                    let mut apq = 0.0;
                    for i in 0..m {
                        app += a[(i, p)] * a[(i, p)];
                        aqq += a[(i, q)] * a[(i, q)];
                        apq += a[(i, p)] * a[(i, q)];
                    }
                    if apq.abs() <= 1e-30 || apq.abs() <= 1e-16 * (app * aqq).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let tau = (aqq - app) / (2.0 * apq);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    for i in 0..m {
                        let aip = a[(i, p)];
                        let aiq = a[(i, q)];
                        a[(i, p)] = c * aip - s * aiq;
                        a[(i, q)] = s * aip + c * aiq;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut cols: Vec<(f64, Vec<f64>)> = (0..n)
            .map(|j| {
                let col = a.col(j);
                (norm(&col), col)
            })
            .collect();
        cols.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
        let svals: Vec<f64> = cols.iter().map(|(s, _)| *s).collect();
        let mut u = Mat::zeros(m, n);
        for (j, (s, col)) in cols.iter().enumerate() {
            if *s > 0.0 {
                for i in 0..m {
                    u[(i, j)] = col[i] / s;
                }
            }
        }
        (svals, u)
    }

    /// Numerical rank against a relative singular value threshold.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let sv = self.singular_values();
        let top = sv.first().copied().unwrap_or(0.0);
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > rel_tol * top).count()
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Euclidean norm of a vector.
pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Dot product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Normalize to unit Euclidean norm (no-op for the zero vector).
pub fn unit(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    if n == 0.0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / n).collect()
}

/// Distance between projective points given by representative vectors:
/// the sine of the principal angle, in [0, 1]. Computed as the norm of the
/// orthogonal rejection, which stays accurate for tiny angles where
/// sqrt(1 - cos^2) would cancel away.
pub fn proj_dist(a: &[f64], b: &[f64]) -> f64 {
    let na = norm(a);
    let nb = norm(b);
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    let mut c = dot(a, b) / (na * nb);
    let flip = if c < 0.0 { -1.0 } else { 1.0 };
    c *= flip;
    let rej: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let u = flip * x / na - c * y / nb;
            u * u
        })
        .sum();
    rej.sqrt().min(1.0)
}

/// Gram-Schmidt: orthonormalize the given vectors in order, dropping those
/// that fall below `tol` after projection. Returns the orthonormal set.
pub fn gram_schmidt(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for b in &basis {
            let c = dot(&w, b);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
        let n = norm(&w);
        if n > tol {
            basis.push(w.iter().map(|x| x / n).collect());
        }
    }
    basis
}
