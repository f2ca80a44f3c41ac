//! Dense nonsymmetric eigensolver: Parlett-Reinsch balancing, Householder
//! reduction to Hessenberg form, then implicitly shifted QR with the Francis
//! double shift for complex pairs, followed by back substitution for the
//! eigenvectors. The algorithm structure follows the classical EISPACK
//! balanc/orthes/hqr2 chain (the same lineage as the JAMA port).
//!
//! Matrices here are small (n <= 64 is enforced upstream), so no blocking or
//! workspace reuse is attempted.

use crate::error::Error;
use crate::mat::Mat;

/// Eigenvalues and eigenvectors of a real square matrix.
///
/// Eigenvalues are `re[k] + i*im[k]` in QR deflation order (not sorted).
/// Eigenvectors are packed JAMA-style in the columns of `vectors`: a real
/// eigenvalue `k` owns column `k`; a complex pair occupies two consecutive
/// slots `k` (with `im[k] > 0`) and `k+1` (the conjugate), whose columns hold
/// the real and imaginary parts of the eigenvector.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub vectors: Mat,
}

impl Eigen {
    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    /// Modulus of eigenvalue k.
    pub fn modulus(&self, k: usize) -> f64 {
        self.re[k].hypot(self.im[k])
    }

    /// Real eigenvector for a real eigenvalue, unit length.
    pub fn real_eigenvector(&self, k: usize) -> Option<Vec<f64>> {
        if self.im[k] != 0.0 {
            return None;
        }
        Some(crate::mat::unit(&self.vectors.col(k)))
    }
}

fn cdiv(xr: f64, xi: f64, yr: f64, yi: f64) -> (f64, f64) {
    if yr.abs() > yi.abs() {
        let r = yi / yr;
        let d = yr + r * yi;
        ((xr + r * xi) / d, (xi - r * xr) / d)
    } else {
        let r = yr / yi;
        let d = yi + r * yr;
        ((r * xr + xi) / d, (r * xi - xr) / d)
    }
}

/// Diagonal balancing (Parlett-Reinsch, scaling pass only). Returns the
/// per-row scale factors of the similarity transform.
fn balance(h: &mut Mat) -> Vec<f64> {
    let n = h.rows();
    let mut scale = vec![1.0; n];
    let radix = 2.0_f64;
    let mut done = false;
    let mut sweeps = 0;
    while !done && sweeps < 100 {
        sweeps += 1;
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += h[(j, i)].abs();
                    r += h[(i, j)].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut f = 1.0;
                let mut cc = c;
                let s = c + r;
                let mut g = r / radix;
                while cc < g {
                    f *= radix;
                    cc *= radix * radix;
                }
                g = r * radix;
                while cc >= g {
                    f /= radix;
                    cc /= radix * radix;
                }
                if (cc + r) / f < 0.95 * s {
                    done = false;
                    scale[i] *= f;
                    for j in 0..n {
                        h[(i, j)] /= f;
                    }
                    for j in 0..n {
                        h[(j, i)] *= f;
                    }
                }
            }
        }
    }
    scale
}

/// Householder reduction to upper Hessenberg form, accumulating the
/// orthogonal transform into `v`.
fn orthes(h: &mut Mat, v: &mut Mat) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    let low = 0;
    let high = n - 1;
    let mut ort = vec![0.0; n];

    for m in low + 1..high {
        let mut scale = 0.0;
        for i in m..=high {
            scale += h[(i, m - 1)].abs();
        }
        if scale != 0.0 {
            let mut hh = 0.0;
            for i in (m..=high).rev() {
                ort[i] = h[(i, m - 1)] / scale;
                hh += ort[i] * ort[i];
            }
            let mut g = hh.sqrt();
            if ort[m] > 0.0 {
                g = -g;
            }
            hh -= ort[m] * g;
            ort[m] -= g;

            for j in m..n {
                let mut f = 0.0;
                for i in (m..=high).rev() {
                    f += ort[i] * h[(i, j)];
                }
                f /= hh;
                for i in m..=high {
                    h[(i, j)] -= f * ort[i];
                }
            }
            for i in 0..=high {
                let mut f = 0.0;
                for j in (m..=high).rev() {
                    f += ort[j] * h[(i, j)];
                }
                f /= hh;
                for j in m..=high {
                    h[(i, j)] -= f * ort[j];
                }
            }
            ort[m] *= scale;
            h[(m, m - 1)] = scale * g;
        }
    }

    for m in (low + 1..high).rev() {
        if h[(m, m - 1)] != 0.0 {
            for i in m + 1..=high {
                ort[i] = h[(i, m - 1)];
            }
            for j in m..=high {
                let mut g = 0.0;
                for i in m..=high {
                    g += ort[i] * v[(i, j)];
                }
                g = (g / ort[m]) / h[(m, m - 1)];
                for i in m..=high {
                    v[(i, j)] += g * ort[i];
                }
            }
        }
    }
}

/// QR iteration on a Hessenberg matrix with eigenvector back substitution.
#[allow(clippy::needless_range_loop)]
fn hqr2(h: &mut Mat, v: &mut Mat, d: &mut [f64], e: &mut [f64]) -> Result<(), Error> {
    let nn = h.rows();
    let mut n = nn as isize - 1;
    let low = 0isize;
    let high = nn as isize - 1;
    let eps = f64::EPSILON;
    let mut exshift = 0.0;
    // these persist across iterations of the outer loop, as in the
    // classical Fortran/Java formulation
    let (mut p, mut q, mut r, mut s, mut z) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let (mut w, mut x, mut y): (f64, f64, f64);
    // whole-matrix norm used in the convergence tests
    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }

    let mut iter = 0;
    let mut total_iter = 0;
    let budget = 60 * nn.max(4);
    while n >= low {
        // find a small subdiagonal element
        let mut l = n;
        while l > low {
            s = h[((l - 1) as usize, (l - 1) as usize)].abs() + h[(l as usize, l as usize)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[(l as usize, (l - 1) as usize)].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // one root found
            let nu = n as usize;
            h[(nu, nu)] += exshift;
            d[nu] = h[(nu, nu)];
            e[nu] = 0.0;
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            // two roots found
            let nu = n as usize;
            w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            p = (h[(nu - 1, nu - 1)] - h[(nu, nu)]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            h[(nu, nu)] += exshift;
            h[(nu - 1, nu - 1)] += exshift;
            x = h[(nu, nu)];
            if q >= 0.0 {
                // real pair
                z = if p >= 0.0 { p + z } else { p - z };
                d[nu - 1] = x + z;
                d[nu] = d[nu - 1];
                if z != 0.0 {
                    d[nu] = x - w / z;
                }
                e[nu - 1] = 0.0;
                e[nu] = 0.0;
                x = h[(nu, nu - 1)];
                s = x.abs() + z.abs();
                p = x / s;
                q = z / s;
                r = (p * p + q * q).sqrt();
                p /= r;
                q /= r;
                for j in nu - 1..nn {
                    z = h[(nu - 1, j)];
                    h[(nu - 1, j)] = q * z + p * h[(nu, j)];
                    h[(nu, j)] = q * h[(nu, j)] - p * z;
                }
                for i in 0..=nu {
                    z = h[(i, nu - 1)];
                    h[(i, nu - 1)] = q * z + p * h[(i, nu)];
                    h[(i, nu)] = q * h[(i, nu)] - p * z;
                }
                for i in low as usize..=high as usize {
                    z = v[(i, nu - 1)];
                    v[(i, nu - 1)] = q * z + p * v[(i, nu)];
                    v[(i, nu)] = q * v[(i, nu)] - p * z;
                }
            } else {
                // complex pair
                d[nu - 1] = x + p;
                d[nu] = x + p;
                e[nu - 1] = z;
                e[nu] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            // no convergence yet: form shift
            let nu = n as usize;
            x = h[(nu, nu)];
            y = 0.0;
            w = 0.0;
            if l < n {
                y = h[(nu - 1, nu - 1)];
                w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            }
            // occasional exceptional shift
            if iter == 10 || iter == 20 {
                exshift += x;
                for i in low as usize..=nu {
                    h[(i, i)] -= x;
                }
                s = h[(nu, nu - 1)].abs() + h[(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            iter += 1;
            total_iter += 1;
            if iter > 50 || total_iter > budget {
                return Err(Error::EigenFailure);
            }

            // look for two consecutive small subdiagonal elements
            let mut m = n - 2;
            while m >= l {
                let mu = m as usize;
                z = h[(mu, mu)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[(mu + 1, mu)] + h[(mu, mu + 1)];
                q = h[(mu + 1, mu + 1)] - z - r - s;
                r = h[(mu + 2, mu + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[(mu, mu - 1)].abs() * (q.abs() + r.abs())
                    < eps
                        * (p.abs()
                            * (h[(mu - 1, mu - 1)].abs() + z.abs() + h[(mu + 1, mu + 1)].abs()))
                {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2) as usize..=nu {
                h[(i, i - 2)] = 0.0;
                if i > (m + 2) as usize {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // double QR step over rows l..=n, columns m..=n
            for k in m..=(n - 1) {
                let ku = k as usize;
                let notlast = k != n - 1;
                if k != m {
                    p = h[(ku, ku - 1)];
                    q = h[(ku + 1, ku - 1)];
                    r = if notlast { h[(ku + 2, ku - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != m {
                        h[(ku, ku - 1)] = -s * x;
                    } else if l != m {
                        h[(ku, ku - 1)] = -h[(ku, ku - 1)];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in ku..nn {
                        p = h[(ku, j)] + q * h[(ku + 1, j)];
                        if notlast {
                            p += r * h[(ku + 2, j)];
                            h[(ku + 2, j)] -= p * z;
                        }
                        h[(ku, j)] -= p * x;
                        h[(ku + 1, j)] -= p * y;
                    }
                    let upper = if (n as usize) < ku + 3 {
                        n as usize
                    } else {
                        ku + 3
                    };
                    for i in 0..=upper {
                        p = x * h[(i, ku)] + y * h[(i, ku + 1)];
                        if notlast {
                            p += z * h[(i, ku + 2)];
                            h[(i, ku + 2)] -= p * r;
                        }
                        h[(i, ku)] -= p;
                        h[(i, ku + 1)] -= p * q;
                    }
                    for i in low as usize..=high as usize {
                        p = x * v[(i, ku)] + y * v[(i, ku + 1)];
                        if notlast {
                            p += z * v[(i, ku + 2)];
                            v[(i, ku + 2)] -= p * r;
                        }
                        v[(i, ku)] -= p;
                        v[(i, ku + 1)] -= p * q;
                    }
                }
            }
        }
    }

    // back substitution: eigenvectors of the quasi-triangular form
    if norm == 0.0 {
        return Ok(());
    }
    for n in (0..nn as isize).rev() {
        let nu = n as usize;
        p = d[nu];
        q = e[nu];
        if q == 0.0 {
            // real eigenvector
            let mut l = n;
            h[(nu, nu)] = 1.0;
            if n >= 1 {
                for i in (0..=(n - 1)).rev() {
                    let iu = i as usize;
                    w = h[(iu, iu)] - p;
                    r = 0.0;
                    for j in l as usize..=nu {
                        r += h[(iu, j)] * h[(j, nu)];
                    }
                    if e[iu] < 0.0 {
                        z = w;
                        s = r;
                    } else {
                        l = i;
                        if e[iu] == 0.0 {
                            if w != 0.0 {
                                h[(iu, nu)] = -r / w;
                            } else {
                                h[(iu, nu)] = -r / (eps * norm);
                            }
                        } else {
                            // solve the 2x2 block
                            x = h[(iu, iu + 1)];
                            y = h[(iu + 1, iu)];
                            q = (d[iu] - p) * (d[iu] - p) + e[iu] * e[iu];
                            let t = (x * s - z * r) / q;
                            h[(iu, nu)] = t;
                            if x.abs() > z.abs() {
                                h[(iu + 1, nu)] = (-r - w * t) / x;
                            } else {
                                h[(iu + 1, nu)] = (-s - y * t) / z;
                            }
                        }
                        // overflow control
                        let t = h[(iu, nu)].abs();
                        if (eps * t) * t > 1.0 {
                            for j in iu..=nu {
                                h[(j, nu)] /= t;
                            }
                        }
                    }
                }
            }
        } else if q < 0.0 {
            // complex eigenvector; stored in the last two columns of the pair
            let mut l = n - 1;
            if h[(nu, nu - 1)].abs() > h[(nu - 1, nu)].abs() {
                h[(nu - 1, nu - 1)] = q / h[(nu, nu - 1)];
                h[(nu - 1, nu)] = -(h[(nu, nu)] - p) / h[(nu, nu - 1)];
            } else {
                let (cr, ci) = cdiv(0.0, -h[(nu - 1, nu)], h[(nu - 1, nu - 1)] - p, q);
                h[(nu - 1, nu - 1)] = cr;
                h[(nu - 1, nu)] = ci;
            }
            h[(nu, nu - 1)] = 0.0;
            h[(nu, nu)] = 1.0;
            if n >= 2 {
                for i in (0..=(n - 2)).rev() {
                    let iu = i as usize;
                    let mut ra = 0.0;
                    let mut sa = 0.0;
                    for j in l as usize..=nu {
                        ra += h[(iu, j)] * h[(j, nu - 1)];
                        sa += h[(iu, j)] * h[(j, nu)];
                    }
                    w = h[(iu, iu)] - p;
                    if e[iu] < 0.0 {
                        z = w;
                        r = ra;
                        s = sa;
                    } else {
                        l = i;
                        if e[iu] == 0.0 {
                            let (cr, ci) = cdiv(-ra, -sa, w, q);
                            h[(iu, nu - 1)] = cr;
                            h[(iu, nu)] = ci;
                        } else {
                            x = h[(iu, iu + 1)];
                            y = h[(iu + 1, iu)];
                            let mut vr = (d[iu] - p) * (d[iu] - p) + e[iu] * e[iu] - q * q;
                            let vi = (d[iu] - p) * 2.0 * q;
                            if vr == 0.0 && vi == 0.0 {
                                vr = eps * norm * (w.abs() + q.abs() + x.abs() + y.abs() + z.abs());
                            }
                            let (cr, ci) =
                                cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
                            h[(iu, nu - 1)] = cr;
                            h[(iu, nu)] = ci;
                            if x.abs() > z.abs() + q.abs() {
                                h[(iu + 1, nu - 1)] =
                                    (-ra - w * h[(iu, nu - 1)] + q * h[(iu, nu)]) / x;
                                h[(iu + 1, nu)] = (-sa - w * h[(iu, nu)] - q * h[(iu, nu - 1)]) / x;
                            } else {
                                let (cr, ci) =
                                    cdiv(-r - y * h[(iu, nu - 1)], -s - y * h[(iu, nu)], z, q);
                                h[(iu + 1, nu - 1)] = cr;
                                h[(iu + 1, nu)] = ci;
                            }
                        }
                        // overflow control
                        let t = h[(iu, nu - 1)].abs().max(h[(iu, nu)].abs());
                        if (eps * t) * t > 1.0 {
                            for j in iu..=nu {
                                h[(j, nu - 1)] /= t;
                                h[(j, nu)] /= t;
                            }
                        }
                    }
                }
            }
        }
    }

    // multiply back to eigenvectors of the Hessenberg-reduced matrix
    for j in (low as usize..nn).rev() {
        for i in low as usize..=high as usize {
            z = 0.0;
            for k in low as usize..=j.min(high as usize) {
                z += v[(i, k)] * h[(k, j)];
            }
            v[(i, j)] = z;
        }
    }

    Ok(())
}

/// Full eigendecomposition of a real square matrix.
pub fn decompose(a: &Mat) -> Result<Eigen, Error> {
    assert!(a.is_square(), "eigendecomposition needs a square matrix");
    let n = a.rows();
    if !a.is_finite() {
        return Err(Error::SingularMatrix);
    }
    if n == 0 {
        return Ok(Eigen {
            re: vec![],
            im: vec![],
            vectors: Mat::zeros(0, 0),
        });
    }
    if n == 1 {
        return Ok(Eigen {
            re: vec![a[(0, 0)]],
            im: vec![0.0],
            vectors: Mat::identity(1),
        });
    }

    let mut h = a.clone();
    let scale = balance(&mut h);
    let mut v = Mat::identity(n);
    orthes(&mut h, &mut v);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    hqr2(&mut h, &mut v, &mut d, &mut e)?;
    // undo balancing on the eigenvectors
    for i in 0..n {
        for j in 0..n {
            v[(i, j)] *= scale[i];
        }
    }
    // normalize columns: unit real vectors, jointly unit complex pairs
    let mut j = 0;
    while j < n {
        if e[j] == 0.0 {
            let c = crate::mat::norm(&v.col(j));
            if c > 0.0 {
                for i in 0..n {
                    v[(i, j)] /= c;
                }
            }
            j += 1;
        } else {
            let nr = crate::mat::norm(&v.col(j));
            let ni = crate::mat::norm(&v.col(j + 1));
            let c = nr.hypot(ni);
            if c > 0.0 {
                for i in 0..n {
                    v[(i, j)] /= c;
                    v[(i, j + 1)] /= c;
                }
            }
            j += 2;
        }
    }
    Ok(Eigen {
        re: d,
        im: e,
        vectors: v,
    })
}
