//! Projective linear algebra: determinant-normalized matrices, eigenvalue
//! moduli, proximality with attracting data, and the exterior-power and
//! symmetric-square functors.

use crate::eigen;
use crate::error::Error;
use crate::mat::{self, Mat};

/// Largest ambient dimension accepted (keeps everything in comfortable
/// double-precision territory).
pub const MAX_DIM: usize = 64;

/// Relative eigenvalue gap below which an element is not considered proximal.
pub const PROXIMALITY_TOL: f64 = 1e-6;

/// An eigenvalue counts as real when |Im| < this factor times its modulus.
pub const REAL_EIG_TOL: f64 = 1e-8;

/// Moduli within this relative distance are reported as a tied group.
pub const TIE_TOL: f64 = 1e-8;

/// Conditioning cap for operations that consume the full eigenvalue ladder
/// (flags, axis cross-ratios). Scans that only read the top of the spectrum
/// tolerate far worse conditioning, so the cap is not enforced at
/// construction: a long word's image may be astronomically ill-conditioned
/// while its leading eigendata stays accurate.
pub const COND_CAP: f64 = 1e16;

/// A d x d real invertible matrix scaled so |det| = 1, representing an
/// element of PGL_d(R) up to sign.
#[derive(Clone, Debug)]
pub struct ProjMat {
    mat: Mat,
    det_sign: f64,
}

impl ProjMat {
    /// Scale a raw invertible matrix to |det| = 1.
    pub fn normalize(raw: &Mat) -> Result<ProjMat, Error> {
        if !raw.is_square() {
            return Err(Error::BadInput("matrix must be square".into()));
        }
        let d = raw.rows();
        if d < 2 {
            return Err(Error::BadInput("dimension must be at least 2".into()));
        }
        if d > MAX_DIM {
            return Err(Error::BadInput(format!("dimension {d} exceeds {MAX_DIM}")));
        }
        if !raw.is_finite() {
            return Err(Error::SingularMatrix);
        }
        let (log_abs, sign) = raw.log_abs_det().ok_or(Error::SingularMatrix)?;
        if log_abs < -300.0 * std::f64::consts::LN_10 {
            return Err(Error::SingularMatrix);
        }
        let mat = raw.scale((-log_abs / d as f64).exp());
        if !mat.is_finite() {
            return Err(Error::SingularMatrix);
        }
        Ok(ProjMat {
            mat,
            det_sign: sign,
        })
    }

    pub fn identity(d: usize) -> ProjMat {
        ProjMat {
            mat: Mat::identity(d),
            det_sign: 1.0,
        }
    }

    /// Wrap a matrix already known to satisfy |det| = 1 exactly (group
    /// products, functorial images). No numeric renormalization happens:
    /// the determinant of a badly conditioned product cannot be measured
    /// from its entries, while the analytic normalization is exact.
    fn from_normalized(mat: Mat, det_sign: f64) -> Result<ProjMat, Error> {
        if !mat.is_finite() {
            return Err(Error::SingularMatrix);
        }
        Ok(ProjMat { mat, det_sign })
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn det_sign(&self) -> f64 {
        self.det_sign
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn compose(&self, other: &ProjMat) -> Result<ProjMat, Error> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        ProjMat::from_normalized(self.mat.matmul(&other.mat), self.det_sign * other.det_sign)
    }

    pub fn inverse(&self) -> Result<ProjMat, Error> {
        ProjMat::from_normalized(self.mat.inverse()?, self.det_sign)
    }

    pub fn transpose(&self) -> ProjMat {
        ProjMat {
            mat: self.mat.transpose(),
            det_sign: self.det_sign,
        }
    }

    /// Entrywise distance to another element after aligning the projective
    /// sign (both M and -M represent the same element), relative to the
    /// larger max-abs entry so the measure is scale-free.
    pub fn proj_dist(&self, other: &ProjMat) -> f64 {
        let direct = self.mat.sub(&other.mat).max_abs();
        let flipped = self.mat.add(&other.mat).max_abs();
        let scale = self.mat.max_abs().max(other.mat.max_abs()).max(1.0);
        direct.min(flipped) / scale
    }
}

/// Sorted eigenvalue moduli with attracting data.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Moduli, descending.
    pub moduli: Vec<f64>,
    /// Whether the leading eigenvalue is real.
    pub top_real: bool,
    /// Sign of the leading eigenvalue when real.
    pub top_sign: f64,
    /// Unit attracting eigenvector; present iff proximal.
    pub attracting_line: Option<Vec<f64>>,
    /// Unit attracting covector (top eigenvector of the transpose);
    /// present iff the transpose gap criterion holds.
    pub attracting_functional: Option<Vec<f64>>,
    /// Consecutive ratios lambda_i / lambda_{i+1}; ratios of tied moduli
    /// are reported as exactly 1.
    pub gaps: Vec<f64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn lambda(&self, i: usize) -> f64 {
        self.moduli[i - 1]
    }

    /// log(lambda_1 / lambda_2), exactly 0 when the top moduli are tied.
    pub fn log_top_gap(&self) -> f64 {
        self.gaps[0].ln()
    }

    pub fn is_proximal(&self) -> bool {
        self.attracting_line.is_some()
    }
}

/// Eigenvalue moduli of a normalized element, descending, with attracting
/// line/functional when the element is proximal.
pub fn spectrum(g: &ProjMat) -> Result<Spectrum, Error> {
    let eig = eigen::decompose(g.mat())?;
    let d = g.dim();
    // order eigenvalue indices by descending modulus; stable in the original
    // (deflation) order for ties
    let mut idx: Vec<usize> = (0..d).collect();
    idx.sort_by(|&a, &b| eig.modulus(b).partial_cmp(&eig.modulus(a)).unwrap());
    let moduli: Vec<f64> = idx.iter().map(|&k| eig.modulus(k)).collect();
    let gaps: Vec<f64> = (0..d - 1)
        .map(|i| {
            if (moduli[i] - moduli[i + 1]).abs() <= TIE_TOL * moduli[i] {
                1.0
            } else {
                moduli[i] / moduli[i + 1]
            }
        })
        .collect();

    let top = idx[0];
    let top_real = eig.im[top].abs() < REAL_EIG_TOL * eig.modulus(top).max(1e-300);
    let gap_ok = moduli[0] / moduli[1] > 1.0 + PROXIMALITY_TOL;

    let mut top_sign = 0.0;
    let mut attracting_line = None;
    if top_real && gap_ok {
        if let Some(v) = eig.real_eigenvector(top) {
            // recover the sign of the leading eigenvalue from the Rayleigh
            // quotient of the attracting eigenvector
            let av = g.mat().matvec(&v);
            top_sign = mat::dot(&av, &v).signum();
            attracting_line = Some(v);
        }
    } else if top_real {
        let v = eig.real_eigenvector(top);
        if let Some(v) = v {
            let av = g.mat().matvec(&v);
            top_sign = mat::dot(&av, &v).signum();
        }
    }

    // attracting functional: attracting line of the transpose
    let mut attracting_functional = None;
    if gap_ok && top_real {
        let eig_t = eigen::decompose(&g.mat().transpose())?;
        let mut idx_t: Vec<usize> = (0..d).collect();
        idx_t.sort_by(|&a, &b| eig_t.modulus(b).partial_cmp(&eig_t.modulus(a)).unwrap());
        attracting_functional = eig_t.real_eigenvector(idx_t[0]);
    }

    Ok(Spectrum {
        moduli,
        top_real,
        top_sign,
        attracting_line,
        attracting_functional,
        gaps,
    })
}

/// True iff g has a unique eigenvalue of maximal modulus (with a real
/// leading eigenvalue); returns the unit attracting line when proximal.
pub fn is_proximal(g: &ProjMat) -> Result<(bool, Option<Vec<f64>>), Error> {
    let s = spectrum(g)?;
    Ok((s.is_proximal(), s.attracting_line))
}

/// Index set combinations(d, k) in lexicographic order.
fn lex_subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + d - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn binomial(d: usize, k: usize) -> usize {
    let k = k.min(d - k);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (d - i) as u128;
        den *= (i + 1) as u128;
    }
    (num / den) as usize
}

/// Minor of g over the given row and column index sets.
fn minor(g: &Mat, rows: &[usize], cols: &[usize]) -> f64 {
    let k = rows.len();
    if k == 1 {
        return g[(rows[0], cols[0])];
    }
    let mut sub = Mat::zeros(k, k);
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            sub[(i, j)] = g[(r, c)];
        }
    }
    sub.det()
}

/// Matrix of the induced action on the k-th exterior power, in the basis
/// e_{i1} ^ ... ^ e_{ik} ordered lexicographically; |det|-normalized.
pub fn exterior_power(g: &ProjMat, k: usize) -> Result<ProjMat, Error> {
    let d = g.dim();
    if k < 1 || k > d {
        return Err(Error::BadRank(k));
    }
    if k == d {
        // 1x1: the determinant itself (+-1 after normalization)
        return Ok(ProjMat {
            mat: Mat::diagonal(&[g.det_sign()]),
            det_sign: g.det_sign(),
        });
    }
    let subsets = lex_subsets(d, k);
    let n = binomial(d, k);
    if n > MAX_DIM {
        return Err(Error::BadInput(format!(
            "exterior power dimension {n} exceeds {MAX_DIM}"
        )));
    }
    let mut m = Mat::zeros(n, n);
    for (a, rows) in subsets.iter().enumerate() {
        for (b, cols) in subsets.iter().enumerate() {
            m[(a, b)] = minor(g.mat(), rows, cols);
        }
    }
    // det of the k-th exterior power is det(g)^C(d-1, k-1); |det g| = 1
    // keeps the image normalized, and the sign is +-1 by parity
    let sign = if binomial(d - 1, k - 1).is_multiple_of(2) {
        1.0
    } else {
        g.det_sign()
    };
    ProjMat::from_normalized(m, sign)
}

/// Dimension of Sym_d(R).
pub fn sym_dim(d: usize) -> usize {
    d * (d + 1) / 2
}

/// Basis index pairs (i <= j) of Sym_d(R) in lexicographic order. Basis
/// element for i == j is E_ii; for i < j it is E_ij + E_ji.
pub fn sym_basis_pairs(d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(sym_dim(d));
    for i in 0..d {
        for j in i..d {
            out.push((i, j));
        }
    }
    out
}

/// Coordinates of a symmetric matrix in the fixed basis.
pub fn sym_to_vec(x: &Mat) -> Vec<f64> {
    let d = x.rows();
    sym_basis_pairs(d).iter().map(|&(i, j)| x[(i, j)]).collect()
}

/// Symmetric matrix from coordinates in the fixed basis.
pub fn vec_to_sym(d: usize, v: &[f64]) -> Mat {
    let mut x = Mat::zeros(d, d);
    for (idx, &(i, j)) in sym_basis_pairs(d).iter().enumerate() {
        x[(i, j)] = v[idx];
        x[(j, i)] = v[idx];
    }
    x
}

/// Matrix of X |-> g X g^t on Sym_d(R) in the fixed basis; |det|-normalized.
/// This action maps the positive-definite cone into itself.
pub fn sym_square(g: &ProjMat) -> Result<ProjMat, Error> {
    let d = g.dim();
    let n = sym_dim(d);
    if n > MAX_DIM {
        return Err(Error::BadInput(format!(
            "symmetric square dimension {n} exceeds {MAX_DIM}"
        )));
    }
    let pairs = sym_basis_pairs(d);
    let mut m = Mat::zeros(n, n);
    for (col, &(i, j)) in pairs.iter().enumerate() {
        // image of the basis element under X -> g X g^t
        let mut b = Mat::zeros(d, d);
        b[(i, j)] = 1.0;
        b[(j, i)] = 1.0;
        let img = g.mat().matmul(&b).matmul(&g.mat().transpose());
        for (row, &(r, c)) in pairs.iter().enumerate() {
            m[(row, col)] = img[(r, c)];
        }
    }
    // det of the symmetric square is det(g)^(d+1); |det g| = 1 keeps the
    // image normalized
    let sign = if (d + 1).is_multiple_of(2) {
        1.0
    } else {
        g.det_sign()
    };
    ProjMat::from_normalized(m, sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn random_proj(d: usize, rng: &mut Rng) -> ProjMat {
        loop {
            let mut m = Mat::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] = rng.range(-1.0, 1.0);
                }
            }
            if m.det().abs() > 1e-3 {
                return ProjMat::normalize(&m).unwrap();
            }
        }
    }

    #[test]
    fn normalize_identity_and_scalars() {
        let id = ProjMat::normalize(&Mat::identity(3)).unwrap();
        assert!(id.proj_dist(&ProjMat::identity(3)) < 1e-15);

        let two_i = Mat::identity(3).scale(2.0);
        let n = ProjMat::normalize(&two_i).unwrap();
        assert!(n.proj_dist(&ProjMat::identity(3)) < 1e-12);
    }

    #[test]
    fn normalize_diag_4_1() {
        // |det| = 4, scale 1/2; verify det of output by direct multiplication
        let m = Mat::from_rows(&[vec![4.0, 0.0], vec![0.0, 1.0]]);
        let n = ProjMat::normalize(&m).unwrap();
        assert!((n.mat()[(0, 0)] - 2.0).abs() < 1e-12);
        assert!((n.mat()[(1, 1)] - 0.5).abs() < 1e-12);
        let det = n.mat()[(0, 0)] * n.mat()[(1, 1)] - n.mat()[(0, 1)] * n.mat()[(1, 0)];
        assert!((det.abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn normalize_rejects_singular() {
        let m = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(matches!(ProjMat::normalize(&m), Err(Error::SingularMatrix)));
    }

    #[test]
    fn spectrum_of_identity() {
        let s = spectrum(&ProjMat::identity(4)).unwrap();
        for m in &s.moduli {
            assert!((m - 1.0).abs() < 1e-12);
        }
        assert!(!s.is_proximal());
    }

    #[test]
    fn spectrum_planar_rotation() {
        let t = std::f64::consts::FRAC_PI_3;
        let m = Mat::from_rows(&[vec![t.cos(), -t.sin()], vec![t.sin(), t.cos()]]);
        let s = spectrum(&ProjMat::normalize(&m).unwrap()).unwrap();
        assert!((s.moduli[0] - 1.0).abs() < 1e-12);
        assert!((s.moduli[1] - 1.0).abs() < 1e-12);
        assert!(!s.top_real);
        assert!(!s.is_proximal());
    }

    #[test]
    fn proximal_diagonal() {
        let g = ProjMat::normalize(&Mat::diagonal(&[2.0, 1.0, 0.5])).unwrap();
        let (prox, line) = is_proximal(&g).unwrap();
        assert!(prox);
        let l = line.unwrap();
        assert!(l[0].abs() > 1.0 - 1e-9);
        assert!(l[1].abs() < 1e-9 && l[2].abs() < 1e-9);
    }

    #[test]
    fn rotation_not_proximal() {
        let t = std::f64::consts::FRAC_PI_4;
        let m = Mat::from_rows(&[vec![t.cos(), -t.sin()], vec![t.sin(), t.cos()]]);
        let (prox, _) = is_proximal(&ProjMat::normalize(&m).unwrap()).unwrap();
        assert!(!prox);
    }

    #[test]
    fn exterior_square_of_diagonal() {
        let (a, b, c) = (3.0, 2.0, 1.0 / 6.0);
        let g = ProjMat::normalize(&Mat::diagonal(&[a, b, c])).unwrap();
        let e2 = exterior_power(&g, 2).unwrap();
        // basis e1^e2, e1^e3, e2^e3 -> diag(ab, ac, bc)
        let want = [a * b, a * c, b * c];
        for (i, w) in want.iter().enumerate() {
            assert!((e2.mat()[(i, i)] - w).abs() < 1e-9, "entry {i}");
        }
    }

    #[test]
    fn exterior_top_is_det_sign() {
        let g = ProjMat::normalize(&Mat::diagonal(&[2.0, -1.0, 0.5])).unwrap();
        let e = exterior_power(&g, 3).unwrap();
        assert_eq!(e.dim(), 1);
        assert!((e.mat()[(0, 0)] - g.det_sign()).abs() < 1e-12);
    }

    #[test]
    fn exterior_moduli_are_pairwise_products() {
        let mut rng = Rng::new(11);
        for _ in 0..20 {
            let g = random_proj(4, &mut rng);
            let s1 = spectrum(&g).unwrap();
            let e2 = exterior_power(&g, 2).unwrap();
            let s2 = spectrum(&e2).unwrap();
            let mut want: Vec<f64> = Vec::new();
            for i in 0..4 {
                for j in i + 1..4 {
                    want.push(s1.moduli[i] * s1.moduli[j]);
                }
            }
            want.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (g, w) in s2.moduli.iter().zip(&want) {
                assert!((g - w).abs() < 1e-6 * w.max(1.0), "{g} vs {w}");
            }
        }
    }

    #[test]
    fn functoriality_exterior_and_sym() {
        let mut rng = Rng::new(23);
        for _ in 0..20 {
            let g = random_proj(3, &mut rng);
            let h = random_proj(3, &mut rng);
            let gh = g.compose(&h).unwrap();

            let lhs = exterior_power(&gh, 2).unwrap();
            let rhs = exterior_power(&g, 2)
                .unwrap()
                .compose(&exterior_power(&h, 2).unwrap())
                .unwrap();
            assert!(lhs.proj_dist(&rhs) < 1e-8, "exterior functoriality");

            let lhs = sym_square(&gh).unwrap();
            let rhs = sym_square(&g)
                .unwrap()
                .compose(&sym_square(&h).unwrap())
                .unwrap();
            assert!(lhs.proj_dist(&rhs) < 1e-8, "sym square functoriality");
        }
    }

    #[test]
    fn sym_square_identity_and_diagonal() {
        let id = ProjMat::identity(2);
        let s = sym_square(&id).unwrap();
        assert!(s.proj_dist(&ProjMat::identity(3)) < 1e-12);

        let (a, b) = (2.0, 0.5);
        let g = ProjMat::normalize(&Mat::diagonal(&[a, b])).unwrap();
        let sq = sym_square(&g).unwrap();
        let spec = spectrum(&sq).unwrap();
        let mut want = [a * a, (a * b).abs(), b * b];
        want.sort_by(|x, y| y.partial_cmp(x).unwrap());
        for (g, w) in spec.moduli.iter().zip(&want) {
            assert!((g - w).abs() < 1e-9);
        }
    }

    #[test]
    fn sym_square_preserves_psd() {
        let mut rng = Rng::new(5);
        for _ in 0..100 {
            let d = 2 + rng.below(3);
            let g = random_proj(d, &mut rng);
            let s = sym_square(&g).unwrap();
            // random PSD X = B B^t
            let mut b = Mat::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    b[(i, j)] = rng.normal();
                }
            }
            let x = b.matmul(&b.transpose());
            let y = vec_to_sym(d, &s.mat().matvec(&sym_to_vec(&x)));
            let (evals, _) = y.jacobi_symmetric();
            let top = evals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            for ev in evals {
                assert!(ev > -1e-10 * top.max(1.0), "PSD violated: {ev}");
            }
        }
    }

    #[test]
    fn inverse_spectrum_reversed_reciprocal() {
        let mut rng = Rng::new(17);
        for _ in 0..20 {
            let g = random_proj(4, &mut rng);
            let s = spectrum(&g).unwrap();
            let si = spectrum(&g.inverse().unwrap()).unwrap();
            for i in 0..4 {
                let want = 1.0 / s.moduli[3 - i];
                assert!((si.moduli[i] - want).abs() < 1e-7 * want.max(1.0));
            }
        }
    }

    #[test]
    fn conjugation_invariance() {
        let mut rng = Rng::new(29);
        for _ in 0..20 {
            let g = random_proj(4, &mut rng);
            let h = loop {
                let h = random_proj(4, &mut rng);
                if h.mat().cond_one() < 1e3 {
                    break h;
                }
            };
            let conj = h
                .compose(&g)
                .unwrap()
                .compose(&h.inverse().unwrap())
                .unwrap();
            let s = spectrum(&g).unwrap();
            let sc = spectrum(&conj).unwrap();
            for i in 0..4 {
                assert!(
                    (s.moduli[i] - sc.moduli[i]).abs() < 1e-6 * s.moduli[i].max(1.0),
                    "modulus {i}"
                );
            }
        }
    }

    #[test]
    fn moduli_product_is_one() {
        let mut rng = Rng::new(31);
        for _ in 0..50 {
            let d = 2 + rng.below(5);
            let g = random_proj(d, &mut rng);
            let s = spectrum(&g).unwrap();
            let prod: f64 = s.moduli.iter().product();
            assert!((prod - 1.0).abs() < 1e-8, "product {prod}");
        }
    }
}
