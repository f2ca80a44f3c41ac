//! Constructors for the explicit representation and matrix families used in
//! the experiments: the irreducible SL2 representation on binary forms,
//! Schottky pairs, two reducible negative controls, and the symplectic /
//! orthogonal / G2 one-parameter families, together with the split Cayley
//! algebra and its automorphism check.

use crate::error::Error;
use crate::mat::Mat;
use crate::projlin::{sym_square, ProjMat};
use crate::wordgroup::Representation;

fn binom(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// The irreducible representation of SL2 on degree-(d-1) homogeneous
/// polynomials in u, w: tau_d(g) P = P o g^-1, in the monomial basis
/// u^{d-1}, u^{d-2} w, ..., w^{d-1}.
pub fn tau_d(g: &Mat, d: usize) -> Result<ProjMat, Error> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(Error::BadInput("tau_d expects a 2x2 matrix".into()));
    }
    if d < 2 {
        return Err(Error::BadInput("tau_d needs d >= 2".into()));
    }
    let det = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
    if (det - 1.0).abs() > 1e-10 {
        return Err(Error::BadInput(format!("det must be 1, got {det}")));
    }
    // g^-1 = [[d, -b], [-c, a]] for det 1
    let (al, be) = (g[(1, 1)], -g[(0, 1)]);
    let (ga, de) = (-g[(1, 0)], g[(0, 0)]);
    let n = d - 1; // polynomial degree
    let mut m = Mat::zeros(d, d);
    // image of the basis monomial u^{n-k} w^k is
    // (al u + be w)^{n-k} (ga u + de w)^k, expanded in the same basis
    for k in 0..=n {
        // coefficient of u^{n-j} w^j in the product of the two binomials
        for i in 0..=(n - k) {
            for l in 0..=k {
                let coeff = binom(n - k, i)
                    * al.powi((n - k - i) as i32)
                    * be.powi(i as i32)
                    * binom(k, l)
                    * ga.powi((k - l) as i32)
                    * de.powi(l as i32);
                let j = i + l; // total w-degree
                m[(j, k)] += coeff;
            }
        }
    }
    ProjMat::normalize(&m)
}

/// Rotation by the given angle.
pub fn rotation(theta: f64) -> Mat {
    Mat::from_rows(&[
        vec![theta.cos(), -theta.sin()],
        vec![theta.sin(), theta.cos()],
    ])
}

/// Free rank-2 Schottky pair in SL2: a = diag(mu, 1/mu), b = a conjugated so
/// that its axis makes projective angle theta/2 with the axis of a. theta in
/// {0, pi} is rejected: a full or zero half-turn of the axis collapses b to
/// a^{+-1} and the pair stops being free.
pub fn schottky_sl2(mu: f64, theta: f64) -> Result<Representation, Error> {
    if mu <= 1.0 {
        return Err(Error::BadInput(format!("mu must exceed 1, got {mu}")));
    }
    let t = theta.rem_euclid(2.0 * std::f64::consts::PI);
    if t.abs() < 1e-12 || (t - std::f64::consts::PI).abs() < 1e-12 {
        return Err(Error::BadInput(
            "theta in {0, pi} makes the generators share an axis".into(),
        ));
    }
    let a = Mat::diagonal(&[mu, 1.0 / mu]);
    let r = rotation(theta / 2.0);
    let rinv = rotation(-theta / 2.0);
    let b = r.matmul(&a).matmul(&rinv);
    let a = ProjMat::normalize(&a)?;
    let b = ProjMat::normalize(&b)?;
    Representation::new(vec![a, b], format!("schottky(mu={mu},theta={theta})"))
}

/// Raw SL2 generators of the Schottky pair (used by the block constructions
/// and by tau_d pullbacks, which act on the 2x2 matrices directly).
pub fn schottky_sl2_raw(mu: f64, theta: f64) -> Result<Vec<Mat>, Error> {
    if mu <= 1.0 {
        return Err(Error::BadInput(format!("mu must exceed 1, got {mu}")));
    }
    let t = theta.rem_euclid(2.0 * std::f64::consts::PI);
    if t.abs() < 1e-12 || (t - std::f64::consts::PI).abs() < 1e-12 {
        return Err(Error::BadInput(
            "theta in {0, pi} makes the generators share an axis".into(),
        ));
    }
    let a = Mat::diagonal(&[mu, 1.0 / mu]);
    let r = rotation(theta / 2.0);
    let rinv = rotation(-theta / 2.0);
    let b = r.matmul(&a).matmul(&rinv);
    Ok(vec![a, b])
}

/// tau_d pulled back along a Schottky pair.
pub fn tau_schottky(d: usize, mu: f64, theta: f64) -> Result<Representation, Error> {
    let gens = schottky_sl2_raw(mu, theta)?;
    let images = gens
        .iter()
        .map(|g| tau_d(g, d))
        .collect::<Result<Vec<_>, _>>()?;
    Representation::new(images, format!("tau_{d}-schottky(mu={mu},theta={theta})"))
}

/// Reducible block representation g |-> diag(g, 1) in dimension 3 over a
/// Schottky pair. Its boundary data degenerates onto the plane x3 = 0 and no
/// properly convex domain is preserved.
pub fn reducible_rep(mu: f64, theta: f64) -> Result<Representation, Error> {
    let gens = schottky_sl2_raw(mu, theta)?;
    let images = gens
        .iter()
        .map(|g| {
            let mut m = Mat::identity(3);
            for i in 0..2 {
                for j in 0..2 {
                    m[(i, j)] = g[(i, j)];
                }
            }
            ProjMat::normalize(&m)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Representation::new(images, format!("reducible(mu={mu},theta={theta})"))
}

/// Doubled block representation phi |-> diag(phi, phi) in dimension 6, with
/// phi the symmetric square of a Schottky pair. Every image has
/// lambda_1 = lambda_2, so the top eigenvalue gap is identically 1.
pub fn doubled_rep(mu: f64, theta: f64) -> Result<Representation, Error> {
    let base = schottky_sl2(mu, theta)?;
    let images = base
        .generators()
        .iter()
        .map(|g| {
            let phi = sym_square(g)?;
            let d = phi.dim();
            let mut m = Mat::zeros(2 * d, 2 * d);
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] = phi.mat()[(i, j)];
                    m[(d + i, d + j)] = phi.mat()[(i, j)];
                }
            }
            ProjMat::normalize(&m)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Representation::new(images, format!("doubled(mu={mu},theta={theta})"))
}

/// Explicit one-parameter matrix families in the classical and exceptional
/// groups, built to have pairwise-distinct eigenvalue gap ratios.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFamily {
    /// diag(sigma_1..sigma_n, sigma_1^-1..sigma_n^-1), 2n x 2n.
    Sp,
    /// cosh/sinh blocks with a trailing 1, (2n+1) x (2n+1).
    So,
    /// 7x7 automorphism of the imaginary split octonions; params (t, s).
    G2,
}

/// Build the requested family member. `params` is the sigma vector for
/// Sp/So and (t, s) for G2.
pub fn family_matrix(family: MatrixFamily, params: &[f64]) -> Result<ProjMat, Error> {
    match family {
        MatrixFamily::Sp => {
            let n = params.len();
            if n < 2 {
                return Err(Error::BadInput("sp needs n >= 2 parameters".into()));
            }
            for w in params.windows(2) {
                if w[0] <= w[1] {
                    return Err(Error::BadInput("sp needs strictly decreasing sigma".into()));
                }
            }
            if params[n - 1] <= 1.0 {
                return Err(Error::BadInput("sp needs sigma_n > 1".into()));
            }
            let mut d = params.to_vec();
            d.extend(params.iter().map(|s| 1.0 / s));
            ProjMat::normalize(&Mat::diagonal(&d))
        }
        MatrixFamily::So => {
            let n = params.len();
            if n < 2 {
                return Err(Error::BadInput("so needs n >= 2 parameters".into()));
            }
            for w in params.windows(2) {
                if w[0] <= w[1] {
                    return Err(Error::BadInput("so needs strictly decreasing sigma".into()));
                }
            }
            if params[n - 1] <= 0.0 {
                return Err(Error::BadInput("so needs sigma_n > 0".into()));
            }
            let dim = 2 * n + 1;
            let mut m = Mat::zeros(dim, dim);
            for (k, &s) in params.iter().enumerate() {
                m[(2 * k, 2 * k)] = s.cosh();
                m[(2 * k, 2 * k + 1)] = s.sinh();
                m[(2 * k + 1, 2 * k)] = s.sinh();
                m[(2 * k + 1, 2 * k + 1)] = s.cosh();
            }
            m[(dim - 1, dim - 1)] = 1.0;
            ProjMat::normalize(&m)
        }
        MatrixFamily::G2 => {
            if params.len() != 2 {
                return Err(Error::BadInput("g2 needs exactly (t, s)".into()));
            }
            let (t, s) = (params[0], params[1]);
            ProjMat::normalize(&g2_matrix(t, s))
        }
    }
}

/// The 7x7 one-parameter-pair family of split-octonion automorphisms, acting
/// on the purely imaginary basis (i, j, k, e, ie, je, ke). Hyperbolic blocks
/// couple i<->ie with parameter t, j<->je with s, and k<->ke with s+t; the
/// k-block carries the sign that makes the map multiplicative for the
/// product used by [`octonion_mul`].
pub fn g2_matrix(t: f64, s: f64) -> Mat {
    let u = s + t;
    let mut m = Mat::zeros(7, 7);
    m[(0, 0)] = t.cosh();
    m[(0, 4)] = t.sinh();
    m[(4, 0)] = t.sinh();
    m[(4, 4)] = t.cosh();
    m[(1, 1)] = s.cosh();
    m[(1, 5)] = s.sinh();
    m[(5, 1)] = s.sinh();
    m[(5, 5)] = s.cosh();
    m[(2, 2)] = u.cosh();
    m[(2, 6)] = -u.sinh();
    m[(6, 2)] = -u.sinh();
    m[(6, 6)] = u.cosh();
    m[(3, 3)] = 1.0;
    m
}

/// Split Cayley algebra element in the basis (1, i, j, k, e, ie, je, ke).
/// An element is a quaternion pair a + b e with a = coords[0..4] and
/// b = coords[4..8].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Octonion {
    pub coords: [f64; 8],
}

impl Octonion {
    pub fn zero() -> Octonion {
        Octonion { coords: [0.0; 8] }
    }

    pub fn basis(k: usize) -> Octonion {
        let mut o = Octonion::zero();
        o.coords[k] = 1.0;
        o
    }

    pub fn one() -> Octonion {
        Octonion::basis(0)
    }

    /// Conjugation negates the seven imaginary coordinates.
    pub fn conj(&self) -> Octonion {
        let mut c = *self;
        for k in 1..8 {
            c.coords[k] = -c.coords[k];
        }
        c
    }

    pub fn sub(&self, o: &Octonion) -> Octonion {
        let mut r = *self;
        for k in 0..8 {
            r.coords[k] -= o.coords[k];
        }
        r
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

fn quat_mul(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn quat_conj(a: &[f64; 4]) -> [f64; 4] {
    [a[0], -a[1], -a[2], -a[3]]
}

/// Split Cayley product: (a + b e)(c + d e) = (a c + conj(d) b) + (b conj(c) + d a) e.
pub fn octonion_mul(x: &Octonion, y: &Octonion) -> Octonion {
    let a: [f64; 4] = x.coords[0..4].try_into().unwrap();
    let b: [f64; 4] = x.coords[4..8].try_into().unwrap();
    let c: [f64; 4] = y.coords[0..4].try_into().unwrap();
    let d: [f64; 4] = y.coords[4..8].try_into().unwrap();
    let first = quat_mul(&a, &c);
    let dbar_b = quat_mul(&quat_conj(&d), &b);
    let second = quat_mul(&b, &quat_conj(&c));
    let da = quat_mul(&d, &a);
    let mut coords = [0.0; 8];
    for k in 0..4 {
        coords[k] = first[k] + dbar_b[k];
        coords[4 + k] = second[k] + da[k];
    }
    Octonion { coords }
}

/// Extend a 7x7 map on the imaginary part to all of the algebra (fixing 1)
/// and test multiplicativity on all 64 ordered basis pairs.
pub fn verify_g2(m: &Mat) -> bool {
    if m.rows() != 7 || m.cols() != 7 {
        return false;
    }
    let apply = |o: &Octonion| -> Octonion {
        let mut out = Octonion::zero();
        out.coords[0] = o.coords[0];
        for r in 0..7 {
            let mut s = 0.0;
            for c in 0..7 {
                s += m[(r, c)] * o.coords[c + 1];
            }
            out.coords[r + 1] = s;
        }
        out
    };
    let scale = m.max_abs().max(1.0);
    for x in 0..8 {
        for y in 0..8 {
            let bx = Octonion::basis(x);
            let by = Octonion::basis(y);
            let lhs = apply(&octonion_mul(&bx, &by));
            let rhs = octonion_mul(&apply(&bx), &apply(&by));
            if lhs.sub(&rhs).max_abs() > 1e-8 * scale * scale {
                return false;
            }
        }
    }
    true
}
