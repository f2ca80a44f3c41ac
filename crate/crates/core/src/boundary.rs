//! Boundary-map sampling, eigenvalue-gap certificates, sign lifting, and
//! invariant-domain construction.
//!
//! For a biproximal image of a word w, the boundary pair at the attracting
//! fixed point is (attracting line of rho(w), supporting functional at that
//! line). The functional is the attracting line of the transpose of
//! rho(w)^-1: it annihilates the attracting line and is positive on the rest
//! of the limit set once signs are lifted.
//!
//! Sign lifting is done constructively: the pairing signs eta_i(xi_j)
//! constrain the unknown signs of each xi and eta through a parity relation,
//! which is solved by union-find. An inconsistent parity cycle is exactly
//! the obstruction to a global lift, and is reported with an offending pair.

use crate::error::Error;
use crate::hilbert::ConvexBody;
use crate::lp;
use crate::mat::{self, Mat};
use crate::projlin::spectrum;
use crate::wordgroup::{class_scan, ConjClass, Representation, Word, DEFAULT_BALL_CAP};

/// Transversality floor: samples pairing below this are dropped, not lifted.
pub const LIFT_TOL: f64 = 1e-7;

/// Tangency band for |eta(xi)| at the same sample.
pub const TANGENCY_TOL: f64 = 1e-6;

/// One sampled boundary point.
#[derive(Clone, Debug)]
pub struct BoundarySample {
    /// The group element whose attracting fixed point this is.
    pub word: Word,
    /// Unit representative of the attracting line.
    pub xi: Vec<f64>,
    /// Unit supporting covector at xi.
    pub eta: Vec<f64>,
    /// Signs fixed by a successful lift.
    pub lifted: bool,
}

impl BoundarySample {
    /// Conjugacy-class fingerprint of the sampled element.
    pub fn class(&self) -> ConjClass {
        crate::wordgroup::cyclic_reduce(&self.word)
    }

    pub fn tangency(&self) -> f64 {
        mat::dot(&self.eta, &self.xi).abs()
    }
}

/// Sample the boundary maps over every conjugacy class with cyclic length
/// in [min_len, radius] whose image is biproximal. Samples closer than 1e-8
/// in projective distance are deduplicated.
pub fn sample_boundary(
    rep: &Representation,
    radius: usize,
    min_len: usize,
) -> Result<Vec<BoundarySample>, Error> {
    if min_len < 1 || radius < min_len {
        return Err(Error::BadInput("need radius >= min_len >= 1".into()));
    }
    let classes = class_scan(rep, radius, min_len, DEFAULT_BALL_CAP)?;
    let pairs = crate::parallel::par_map(&classes, |cd| {
        let s_fwd = spectrum(&cd.image)?;
        let s_bwd = spectrum(&cd.inverse_image)?;
        Ok::<_, Error>((s_fwd, s_bwd))
    });
    let mut samples: Vec<BoundarySample> = Vec::new();
    let push_sample =
        |word: Word, xi: Vec<f64>, eta: Vec<f64>, samples: &mut Vec<BoundarySample>| {
            if mat::dot(&eta, &xi).abs() > TANGENCY_TOL {
                // numerically unresolved pair; skip rather than pollute
                return;
            }
            if samples.iter().any(|s| mat::proj_dist(&s.xi, &xi) < 1e-8) {
                return;
            }
            samples.push(BoundarySample {
                word,
                xi,
                eta,
                lifted: false,
            });
        };
    for (cd, pair) in classes.iter().zip(pairs) {
        let (s_fwd, s_bwd) = pair?;
        if !s_fwd.is_proximal() || !s_bwd.is_proximal() {
            continue;
        }
        // the canonical element's attracting pair: the supporting
        // functional at xi is the attracting line of (rho(w)^-1)^t
        if let (Some(xi), Some(eta)) = (&s_fwd.attracting_line, &s_bwd.attracting_functional) {
            push_sample(
                cd.class.canonical().clone(),
                xi.clone(),
                eta.clone(),
                &mut samples,
            );
        }
        // and the mirror pair of the inverse element, so both fixed points
        // of each sampled element land on the sampled boundary
        if let (Some(xi), Some(eta)) = (&s_bwd.attracting_line, &s_fwd.attracting_functional) {
            push_sample(
                cd.class.canonical().inverse(),
                xi.clone(),
                eta.clone(),
                &mut samples,
            );
        }
    }
    if samples.is_empty() {
        return Err(Error::NoProximalElements);
    }
    Ok(samples)
}

/// Verdict of a positive-proximality scan over a Cayley ball.
#[derive(Clone, Debug, PartialEq)]
pub enum ProximalityVerdict {
    /// Some element is proximal and every proximal element has a positive
    /// leading eigenvalue.
    PositivelyProximal,
    /// First enumerated word whose image is proximal with a negative
    /// leading eigenvalue.
    WitnessNegative(crate::wordgroup::Word),
    /// No proximal element in the scanned ball.
    NoProximalFound,
}

/// Scan every ball element up to the radius: does each proximal image have
/// a positive leading eigenvalue? Images are evaluated with memoized prefix
/// products, so each element costs one matrix multiply plus its spectrum.
pub fn positively_proximal_scan(
    rep: &Representation,
    radius: usize,
) -> Result<ProximalityVerdict, Error> {
    if radius < 1 {
        return Err(Error::BadInput("radius must be at least 1".into()));
    }
    let ball = rep.ball_eval(radius, DEFAULT_BALL_CAP)?;
    let spectra = crate::parallel::par_map(&ball.images, spectrum);
    let mut any_proximal = false;
    for (w, s) in ball.words.iter().zip(spectra) {
        let s = s?;
        if s.is_proximal() {
            any_proximal = true;
            if s.top_sign < 0.0 {
                return Ok(ProximalityVerdict::WitnessNegative(w.clone()));
            }
        }
    }
    if any_proximal {
        Ok(ProximalityVerdict::PositivelyProximal)
    } else {
        Ok(ProximalityVerdict::NoProximalFound)
    }
}

/// Eigenvalue-gap certificate: the support line log(l1/l2) >= C * len - c
/// fitted from below over the sampled conjugacy classes.
#[derive(Clone, Debug)]
pub struct GapCertificate {
    /// Support-line slope (the asymptotic lower gap rate).
    pub slope: f64,
    /// Support-line intercept, chosen so the line touches the data.
    pub intercept: f64,
    /// min over samples of log(l1/l2) / len.
    pub min_normalized_gap: f64,
    /// (cyclic length, log top gap) per class.
    pub points: Vec<(usize, f64)>,
}

/// Scan all conjugacy classes up to the radius and fit the maximal-slope
/// support line under the (length, log-gap) cloud. The slope is the final
/// edge of the lower convex hull of per-length minimum gaps; the intercept
/// then makes the line touch the cloud from below.
pub fn gap_certificate(rep: &Representation, radius: usize) -> Result<GapCertificate, Error> {
    if radius < 2 {
        return Err(Error::BadInput("radius must be at least 2".into()));
    }
    let classes = class_scan(rep, radius, 1, DEFAULT_BALL_CAP)?;
    let gaps =
        crate::parallel::par_map(&classes, |cd| spectrum(&cd.image).map(|s| s.log_top_gap()));
    let mut points = Vec::with_capacity(classes.len());
    for (cd, g) in classes.iter().zip(gaps) {
        points.push((cd.class.stable_length(), g?));
    }
    if points.is_empty() {
        return Err(Error::InsufficientData("no classes in range".into()));
    }
    // per-length minimum gaps
    let mut min_at: std::collections::BTreeMap<usize, f64> = std::collections::BTreeMap::new();
    for &(l, g) in &points {
        min_at.entry(l).and_modify(|m| *m = m.min(g)).or_insert(g);
    }
    let floor: Vec<(f64, f64)> = min_at.iter().map(|(&l, &g)| (l as f64, g)).collect();
    let slope = if floor.len() == 1 {
        0.0
    } else {
        // lower convex hull, take the slope of its final edge
        let mut hull: Vec<(f64, f64)> = Vec::new();
        for &p in &floor {
            while hull.len() >= 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                // keep the hull lower-convex
                if (b.1 - a.1) * (p.0 - a.0) >= (p.1 - a.1) * (b.0 - a.0) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        let a = hull[hull.len() - 2];
        let b = hull[hull.len() - 1];
        (b.1 - a.1) / (b.0 - a.0)
    };
    // intercept: smallest c with g >= slope * l - c over all samples
    let intercept = points
        .iter()
        .map(|&(l, g)| slope * l as f64 - g)
        .fold(f64::NEG_INFINITY, f64::max);
    let min_normalized_gap = points
        .iter()
        .map(|&(l, g)| g / l as f64)
        .fold(f64::INFINITY, f64::min);
    Ok(GapCertificate {
        slope,
        intercept,
        min_normalized_gap,
        points,
    })
}

/// Result of a successful sign lift.
#[derive(Clone, Debug)]
pub struct LiftedBoundary {
    pub samples: Vec<BoundarySample>,
    /// Minimum off-diagonal entry of the positivity matrix eta_i(xi_j).
    pub min_offdiag: f64,
    /// Indices of samples dropped for near-tangency, with the partner they
    /// collided with.
    pub dropped: Vec<(usize, usize)>,
}

struct ParityUnionFind {
    parent: Vec<usize>,
    /// Parity of the node relative to its parent (0 same sign, 1 flipped).
    rel: Vec<u8>,
}

impl ParityUnionFind {
    fn new(n: usize) -> ParityUnionFind {
        ParityUnionFind {
            parent: (0..n).collect(),
            rel: vec![0; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, u8) {
        if self.parent[x] == x {
            return (x, 0);
        }
        let (root, p) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.rel[x] ^= p;
        (root, self.rel[x])
    }

    /// Join with the constraint sign(x) * sign(y) = (-1)^parity.
    /// Returns false on conflict.
    fn union(&mut self, x: usize, y: usize, parity: u8) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px ^ py == parity;
        }
        self.parent[rx] = ry;
        self.rel[rx] = px ^ py ^ parity;
        true
    }
}

/// Fix signs so that eta_i(xi_j) > 0 for all i != j. The pairing signs and
/// the unknown per-sample signs form a parity constraint system; if it is
/// consistent the lift exists and the majority vote below just cleans up
/// numerical noise, and if it is inconsistent the offending pair is the
/// measured obstruction.
pub fn lift_boundary(samples: &[BoundarySample]) -> Result<LiftedBoundary, Error> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData("need at least 2 samples".into()));
    }
    // discard near-tangent pairs (keep the earlier sample)
    let mut kept: Vec<usize> = Vec::new();
    let mut dropped: Vec<(usize, usize)> = Vec::new();
    'cand: for j in 0..samples.len() {
        for &i in &kept {
            let p = mat::dot(&samples[i].eta, &samples[j].xi).abs();
            let q = mat::dot(&samples[j].eta, &samples[i].xi).abs();
            if p <= LIFT_TOL || q <= LIFT_TOL {
                dropped.push((j, i));
                continue 'cand;
            }
        }
        kept.push(j);
    }
    if kept.len() < 2 {
        return Err(Error::InsufficientData(
            "fewer than 2 transversal samples".into(),
        ));
    }

    let n = kept.len();
    // nodes: 0..n are xi signs, n..2n are eta signs
    let mut uf = ParityUnionFind::new(2 * n);
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let pairing = mat::dot(&samples[kept[a]].eta, &samples[kept[b]].xi);
            let parity = if pairing > 0.0 { 0 } else { 1 };
            // sign(eta_a) * sign(xi_b) * sign(pairing) must be +1
            if !uf.union(n + a, b, parity) {
                return Err(Error::LiftInconsistent(kept[a], kept[b]));
            }
        }
    }
    // resolve signs relative to the first xi
    let (root0, _) = uf.find(0);
    let mut xi_sign = vec![1.0; n];
    let mut eta_sign = vec![1.0; n];
    for a in 0..n {
        let (r, p) = uf.find(a);
        debug_assert_eq!(r, root0);
        xi_sign[a] = if p == 0 { 1.0 } else { -1.0 };
        let (_, pe) = uf.find(n + a);
        eta_sign[a] = if pe == 0 { 1.0 } else { -1.0 };
    }
    // majority vote per eta over the signed xis (numerical tie-break; it
    // agrees with the parity solution whenever that one is consistent)
    for a in 0..n {
        let mut vote = 0.0;
        for b in 0..n {
            if a == b {
                continue;
            }
            let v = mat::dot(&samples[kept[a]].eta, &samples[kept[b]].xi) * xi_sign[b];
            vote += v.signum();
        }
        if vote != 0.0 {
            eta_sign[a] = vote.signum();
        }
    }

    let mut out: Vec<BoundarySample> = kept
        .iter()
        .enumerate()
        .map(|(a, &idx)| {
            let s = &samples[idx];
            BoundarySample {
                word: s.word.clone(),
                xi: s.xi.iter().map(|x| x * xi_sign[a]).collect(),
                eta: s.eta.iter().map(|x| x * eta_sign[a]).collect(),
                lifted: true,
            }
        })
        .collect();

    // the mean functional must be positive on every lifted xi
    let dim = out[0].xi.len();
    let mut f = vec![0.0; dim];
    for s in &out {
        for (fi, ei) in f.iter_mut().zip(&s.eta) {
            *fi += ei;
        }
    }
    let mean_ok = out.iter().all(|s| mat::dot(&f, &s.xi) > 0.0);
    if !mean_ok {
        // orientation flip: both global signs work for the matrix, pick the
        // one with a positive mean functional
        for s in &mut out {
            for x in s.xi.iter_mut() {
                *x = -*x;
            }
            for e in s.eta.iter_mut() {
                *e = -*e;
            }
        }
    }
    if !out.iter().all(|s| {
        let fx = out.iter().map(|t| mat::dot(&t.eta, &s.xi)).sum::<f64>();
        fx > 0.0
    }) {
        return Err(Error::LiftInconsistent(kept[0], kept[0]));
    }

    // full validation of the positivity matrix
    let mut min_offdiag = f64::INFINITY;
    for (a, sa) in out.iter().enumerate() {
        for (b, sb) in out.iter().enumerate() {
            let v = mat::dot(&sa.eta, &sb.xi);
            if a == b {
                if v.abs() > TANGENCY_TOL {
                    return Err(Error::LiftInconsistent(kept[a], kept[a]));
                }
            } else {
                if v <= 0.0 {
                    return Err(Error::LiftInconsistent(kept[a], kept[b]));
                }
                min_offdiag = min_offdiag.min(v);
            }
        }
    }

    Ok(LiftedBoundary {
        samples: out,
        min_offdiag,
        dropped,
    })
}

/// Build the outer half-space body (from the lifted functionals) and the
/// inner hull body (from the lifted lines). The outer body must pass the
/// properness test; for lifted inputs the hull is checked to sit inside.
pub fn build_domain(samples: &[BoundarySample]) -> Result<(ConvexBody, ConvexBody), Error> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let dim = samples[0].xi.len();
    let hrep: Vec<Vec<f64>> = samples.iter().map(|s| s.eta.clone()).collect();
    let vrep: Vec<Vec<f64>> = samples.iter().map(|s| s.xi.clone()).collect();
    let omega = ConvexBody::new(dim, hrep, vec![], None)?;
    if !omega.is_proper() {
        return Err(Error::ImproperBody(
            "sampled functionals do not cut out a proper body".into(),
        ));
    }
    let hull = ConvexBody::new(dim, vec![], vrep, None)?;
    if samples.iter().all(|s| s.lifted) {
        for (j, s) in samples.iter().enumerate() {
            let margins = omega.margins(&s.xi);
            for (i, &m) in margins.iter().enumerate() {
                if i == j {
                    if m.abs() > TANGENCY_TOL {
                        return Err(Error::ImproperBody(format!(
                            "sample {j} is off its own supporting hyperplane"
                        )));
                    }
                } else if m < -1e-9 {
                    return Err(Error::ImproperBody(format!(
                        "hull point {j} violates half-space {i}"
                    )));
                }
            }
        }
    }
    Ok((omega, hull))
}

/// Boundary-point classification relative to the sampled data.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPointClass {
    /// Only the point's own functional annihilates it.
    pub c1: bool,
    /// The point is not in the convex hull of the other samples.
    pub extreme: bool,
    /// Number of sampled functionals vanishing at the point.
    pub support_count: usize,
}

/// Classify sample i against the rest: a C^1 proxy (unique supporting
/// functional among the samples) and an extreme-point proxy (chart-affine
/// hull membership against the other lifted lines).
pub fn classify_boundary_point(
    samples: &[BoundarySample],
    index: usize,
) -> Result<BoundaryPointClass, Error> {
    if samples.len() < 3 {
        return Err(Error::InsufficientData("need at least 3 samples".into()));
    }
    if index >= samples.len() {
        return Err(Error::BadInput(format!("index {index} out of range")));
    }
    let xi = &samples[index].xi;
    let support_count = samples
        .iter()
        .filter(|s| mat::dot(&s.eta, xi).abs() < TANGENCY_TOL)
        .count();
    let c1 = support_count == 1;

    // chart projection: normalize against the mean functional, then test
    // affine hull membership via the homogenization trick
    let dim = xi.len();
    let mut chart = vec![0.0; dim];
    for s in samples {
        for (c, e) in chart.iter_mut().zip(&s.eta) {
            *c += e;
        }
    }
    let chart = mat::unit(&chart);
    let project = |v: &[f64]| -> Option<Vec<f64>> {
        let c = mat::dot(&chart, v);
        if c.abs() < 1e-12 {
            return None;
        }
        let mut p: Vec<f64> = v.iter().map(|x| x / c).collect();
        p.push(1.0);
        Some(p)
    };
    let Some(q) = project(xi) else {
        return Err(Error::DegenerateChart);
    };
    let others: Vec<Vec<f64>> = samples
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != index)
        .filter_map(|(_, s)| project(&s.xi))
        .collect();
    let extreme = lp::cone_membership(&others, &q).is_none();

    Ok(BoundaryPointClass {
        c1,
        extreme,
        support_count,
    })
}

/// Keep a subsample whose lines are pairwise at least `min_sep` apart in
/// projective distance (first occurrence wins). The classification proxies
/// compare quadratic tangency quantities against fixed tolerances, so they
/// are only meaningful on samples separated well above the square root of
/// the tangency band.
pub fn thin_samples(samples: &[BoundarySample], min_sep: f64) -> Vec<BoundarySample> {
    let mut kept: Vec<BoundarySample> = Vec::new();
    for s in samples {
        if kept.iter().all(|k| mat::proj_dist(&k.xi, &s.xi) >= min_sep) {
            kept.push(s.clone());
        }
    }
    kept
}

/// Numerical rank and orthonormal basis of span{ xi xi^t } inside the
/// symmetric matrices.
pub fn invariant_sym_subspace(samples: &[BoundarySample]) -> Result<(usize, Vec<Mat>), Error> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let d = samples[0].xi.len();
    let cols: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| {
            let v = &s.xi;
            let mut outer = Mat::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    outer[(i, j)] = v[i] * v[j];
                }
            }
            crate::projlin::sym_to_vec(&outer)
        })
        .collect();
    let m = crate::projlin::sym_dim(d);
    let mut stacked = Mat::zeros(m, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for i in 0..m {
            stacked[(i, j)] = c[i];
        }
    }
    let (svals, u) = stacked.one_sided_jacobi();
    let top = svals.first().copied().unwrap_or(0.0);
    let rank = svals.iter().filter(|&&s| s > 1e-8 * top).count();
    let basis = (0..rank)
        .map(|k| crate::projlin::vec_to_sym(d, &u.col(k)))
        .collect();
    Ok((rank, basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{doubled_rep, reducible_rep, tau_schottky};
    use crate::projlin::ProjMat;
    use crate::wordgroup::Word;

    const MU: f64 = 3.0;
    const THETA: f64 = std::f64::consts::FRAC_PI_2;

    fn tau3_rep() -> Representation {
        tau_schottky(3, MU, THETA).unwrap()
    }

    #[test]
    fn positively_proximal_scan_verdicts() {
        // odd-d pullbacks are positively proximal
        let rep = tau3_rep();
        assert_eq!(
            positively_proximal_scan(&rep, 6).unwrap(),
            ProximalityVerdict::PositivelyProximal
        );
        // a negative-trace generator in even dimension yields a witness
        let gens = crate::families::schottky_sl2_raw(MU, THETA).unwrap();
        let a = crate::families::tau_d(&gens[0], 4).unwrap();
        let b = crate::families::tau_d(&gens[1].scale(-1.0), 4).unwrap();
        let neg = Representation::new(vec![a, b], "tau4-neg").unwrap();
        match positively_proximal_scan(&neg, 6).unwrap() {
            ProximalityVerdict::WitnessNegative(w) => {
                // the image of the witness really is negatively proximal
                let s = spectrum(&neg.evaluate(&w).unwrap()).unwrap();
                assert!(s.is_proximal() && s.top_sign < 0.0, "bad witness {w}");
            }
            other => panic!("expected a witness, got {other:?}"),
        }
        // the trivial representation has no proximal elements
        let id = ProjMat::identity(3);
        let trivial = Representation::new(vec![id.clone(), id], "trivial").unwrap();
        assert_eq!(
            positively_proximal_scan(&trivial, 3).unwrap(),
            ProximalityVerdict::NoProximalFound
        );
    }

    #[test]
    fn samples_are_tangent_and_on_the_conic() {
        let rep = tau3_rep();
        let samples = sample_boundary(&rep, 6, 1).unwrap();
        assert!(samples.len() > 20);
        for s in &samples {
            assert!(
                s.tangency() < 1e-8,
                "tangency {} at {}",
                s.tangency(),
                s.word
            );
            // Veronese conic: coordinates (a, b, c) of a perfect square
            // satisfy b^2 - 4 a c = 0
            let disc = s.xi[1] * s.xi[1] - 4.0 * s.xi[0] * s.xi[2];
            assert!(disc.abs() < 1e-7, "discriminant {disc}");
        }
    }

    #[test]
    fn identity_rep_has_no_proximal_elements() {
        let id = ProjMat::identity(3);
        let rep = Representation::new(vec![id.clone(), id], "trivial").unwrap();
        assert!(matches!(
            sample_boundary(&rep, 4, 1),
            Err(Error::NoProximalElements)
        ));
    }

    #[test]
    fn generator_sample_is_monomial_line() {
        // tau_3 of diag(2, 1/2): attracting line of the image of "a" is the
        // last monomial
        let g = Mat::from_rows(&[vec![2.0, 0.0], vec![0.0, 0.5]]);
        let t3 = crate::families::tau_d(&g, 3).unwrap();
        let other =
            crate::families::tau_d(&Mat::from_rows(&[vec![1.0, 1.0], vec![0.5, 1.5]]), 3).unwrap();
        let rep = Representation::new(vec![t3, other], "tau3-pair").unwrap();
        let samples = sample_boundary(&rep, 1, 1).unwrap();
        let a_sample = samples
            .iter()
            .find(|s| s.word == Word::parse("a").unwrap())
            .expect("generator a sampled");
        assert!(a_sample.xi[2].abs() > 1.0 - 1e-9);
        assert!(a_sample.xi[0].abs() < 1e-9 && a_sample.xi[1].abs() < 1e-9);
    }

    #[test]
    fn sampling_is_equivariant() {
        let rep = tau3_rep();
        let samples = sample_boundary(&rep, 4, 1).unwrap();
        let g = &rep.generators()[0];
        let ginv = g.inverse().unwrap();
        for s in samples.iter().take(10) {
            let conj_word = Word::new([1]).concat(&s.word).concat(&Word::new([-1]));
            let conj_class = crate::wordgroup::cyclic_reduce(&conj_word);
            // evaluate the conjugate directly
            let img = rep.evaluate(&conj_word).unwrap();
            let spec = spectrum(&img).unwrap();
            let Some(xi_c) = spec.attracting_line else {
                continue;
            };
            let want_xi = mat::unit(&g.mat().matvec(&s.xi));
            assert!(
                mat::proj_dist(&xi_c, &want_xi) < 1e-6,
                "xi not equivariant at {}",
                conj_class.canonical()
            );
            // eta transforms by the inverse on the right
            let img_inv = rep.evaluate(&conj_word.inverse()).unwrap();
            let spec_inv = spectrum(&img_inv).unwrap();
            let Some(eta_c) = spec_inv.attracting_functional else {
                continue;
            };
            let want_eta = mat::unit(&ginv.mat().transpose().matvec(&s.eta));
            assert!(
                mat::proj_dist(&eta_c, &want_eta) < 1e-6,
                "eta not equivariant at {}",
                conj_class.canonical()
            );
        }
    }

    #[test]
    fn gap_certificate_tau3_positive_slope() {
        let rep = tau3_rep();
        let cert = gap_certificate(&rep, 6).unwrap();
        assert!(cert.slope > 0.5, "slope {}", cert.slope);
        assert!(cert.min_normalized_gap > 0.0);
        // every sampled point is at or above the support line
        for &(l, g) in &cert.points {
            assert!(g >= cert.slope * l as f64 - cert.intercept - 1e-12);
        }
    }

    #[test]
    fn gap_certificate_doubled_rep_zero_slope() {
        let rep = doubled_rep(MU, THETA).unwrap();
        let cert = gap_certificate(&rep, 4).unwrap();
        assert!(cert.slope.abs() < 1e-9, "slope {}", cert.slope);
    }

    #[test]
    fn gap_certificate_reducible_rep_positive() {
        // the reducible block representation is still projective Anosov
        let rep = reducible_rep(MU, THETA).unwrap();
        let cert = gap_certificate(&rep, 6).unwrap();
        assert!(cert.slope > 0.3, "slope {}", cert.slope);
    }

    #[test]
    fn gap_slope_is_conjugation_invariant() {
        let rep = tau3_rep();
        let h = ProjMat::normalize(&Mat::from_rows(&[
            vec![1.0, 0.3, 0.0],
            vec![0.0, 1.0, -0.2],
            vec![0.1, 0.0, 1.0],
        ]))
        .unwrap();
        let conj = rep.conjugated(&h).unwrap();
        let c1 = gap_certificate(&rep, 5).unwrap();
        let c2 = gap_certificate(&conj, 5).unwrap();
        assert!((c1.slope - c2.slope).abs() < 1e-6);
    }

    #[test]
    fn lift_succeeds_on_conic_samples() {
        let rep = tau3_rep();
        let samples = sample_boundary(&rep, 6, 1).unwrap();
        let lifted = lift_boundary(&samples).unwrap();
        assert!(lifted.min_offdiag > 0.0);
        for s in &lifted.samples {
            assert!(s.lifted);
        }
        // positivity matrix: strictly positive off-diagonal
        for (a, sa) in lifted.samples.iter().enumerate() {
            for (b, sb) in lifted.samples.iter().enumerate() {
                let v = mat::dot(&sa.eta, &sb.xi);
                if a == b {
                    assert!(v.abs() < TANGENCY_TOL);
                } else {
                    assert!(v > 0.0);
                }
            }
        }
    }

    #[test]
    fn lift_repairs_a_flipped_sign() {
        let rep = tau3_rep();
        let mut samples = sample_boundary(&rep, 4, 1).unwrap();
        // flip one sample by hand
        for x in samples[1].xi.iter_mut() {
            *x = -*x;
        }
        for e in samples[1].eta.iter_mut() {
            *e = -*e;
        }
        let lifted = lift_boundary(&samples).unwrap();
        assert!(lifted.min_offdiag > 0.0);
    }

    #[test]
    fn lift_fails_for_even_negative_control() {
        // tau_4 with one negative-trace generator: some proximal images have
        // negative leading eigenvalues, and the sign system has no solution
        let gens = crate::families::schottky_sl2_raw(MU, THETA).unwrap();
        let a = crate::families::tau_d(&gens[0], 4).unwrap();
        let neg = gens[1].scale(-1.0);
        let b = crate::families::tau_d(&neg, 4).unwrap();
        let rep = Representation::new(vec![a, b], "tau4-neg").unwrap();
        let samples = sample_boundary(&rep, 5, 1).unwrap();
        match lift_boundary(&samples) {
            Err(Error::LiftInconsistent(_, _)) => {}
            other => panic!("expected LiftInconsistent, got {other:?}"),
        }
    }

    #[test]
    fn build_domain_conic_contains_and_excludes() {
        let rep = tau3_rep();
        let samples = sample_boundary(&rep, 6, 1).unwrap();
        let lifted = lift_boundary(&samples).unwrap();
        let (omega, hull) = build_domain(&lifted.samples).unwrap();
        assert!(omega.is_proper());
        // u^2 + w^2 = (1, 0, 1) is inside the true domain
        assert!(omega.contains_projective(&[1.0, 0.0, 1.0], 1e-12));
        // u^2 - w^2 = (1, 0, -1) is an indefinite form, outside
        assert!(!omega.contains_projective(&[1.0, 0.0, -1.0], 1e-12));
        // hull interior points have positive margins
        let mid: Vec<f64> = (0..3)
            .map(|i| {
                lifted.samples.iter().map(|s| s.xi[i]).sum::<f64>() / lifted.samples.len() as f64
            })
            .collect();
        assert!(omega.contains_projective(&mid, 0.0));
        assert!(!hull.vrep().is_empty());
    }

    #[test]
    fn build_domain_single_sample_improper() {
        let rep = tau3_rep();
        let samples = sample_boundary(&rep, 2, 1).unwrap();
        let one = vec![samples[0].clone()];
        assert!(matches!(build_domain(&one), Err(Error::ImproperBody(_))));
        assert!(matches!(build_domain(&[]), Err(Error::EmptySamples)));
    }

    #[test]
    fn build_domain_reducible_rep_improper() {
        let rep = reducible_rep(MU, THETA).unwrap();
        let samples = sample_boundary(&rep, 6, 1).unwrap();
        // all sampled lines lie in the plane x3 = 0
        for s in &samples {
            assert!(s.xi[2].abs() < 1e-8, "xi out of plane: {:?}", s.xi);
        }
        // lift may or may not fail; the domain is improper either way
        let result = match lift_boundary(&samples) {
            Ok(l) => build_domain(&l.samples),
            Err(_) => build_domain(&samples),
        };
        assert!(matches!(result, Err(Error::ImproperBody(_))));
    }

    #[test]
    fn classify_conic_points_c1_extreme() {
        let rep = tau3_rep();
        let samples = sample_boundary(&rep, 5, 1).unwrap();
        let lifted = lift_boundary(&samples).unwrap();
        // classify geometrically distinct points: the supporting-functional
        // count compares a quadratic tangency against 1e-6, so points must
        // be separated well beyond sqrt of that band
        let distinct = thin_samples(&lifted.samples, 5e-3);
        assert!(distinct.len() >= 20);
        for i in 0..distinct.len() {
            let c = classify_boundary_point(&distinct, i).unwrap();
            assert!(c.c1, "sample {i} not C1");
            assert!(c.extreme, "sample {i} not extreme");
            assert_eq!(c.support_count, 1);
        }
    }

    #[test]
    fn classify_collinear_midpoint_not_extreme() {
        // synthetic: three collinear points with a common functional plus
        // two flanking samples to satisfy the arity requirement
        let mk = |xi: Vec<f64>, eta: Vec<f64>| BoundarySample {
            word: Word::empty(),
            xi: mat::unit(&xi),
            eta: mat::unit(&eta),
            lifted: true,
        };
        let samples = vec![
            mk(vec![1.0, 0.0, 1.0], vec![0.0, 0.0, 1.0]),
            mk(vec![1.0, 0.5, 1.0], vec![0.0, 0.0, 1.0]),
            mk(vec![1.0, 1.0, 1.0], vec![0.0, 0.0, 1.0]),
        ];
        let c = classify_boundary_point(&samples, 1).unwrap();
        assert!(!c.extreme, "midpoint of a segment is not extreme");
    }

    #[test]
    fn classify_square_corner_two_supports() {
        // a square in the chart z = 1: corners (+-1, +-1); the corner
        // (1, 1) is supported by both adjacent edge functionals
        let mk = |xi: Vec<f64>, eta: Vec<f64>| BoundarySample {
            word: Word::empty(),
            xi: mat::unit(&xi),
            eta: mat::unit(&eta),
            lifted: true,
        };
        let samples = vec![
            // corner (1,1) with the edge functional x <= 1 (i.e. z - x >= 0)
            mk(vec![1.0, 1.0, 1.0], vec![-1.0, 0.0, 1.0]),
            // same geometric corner supported by y <= 1
            mk(vec![1.0 + 1e-9, 1.0, 1.0], vec![0.0, -1.0, 1.0]),
            mk(vec![-1.0, 1.0, 1.0], vec![1.0, 0.0, 1.0]),
            mk(vec![-1.0, -1.0, 1.0], vec![0.0, 1.0, 1.0]),
        ];
        let c = classify_boundary_point(&samples, 0).unwrap();
        assert!(!c.c1);
        assert_eq!(c.support_count, 2);
    }

    #[test]
    fn sym_subspace_ranks() {
        // each outer product has rank 1
        let rep = tau3_rep();
        let samples = sample_boundary(&rep, 5, 1).unwrap();
        for s in samples.iter().take(5) {
            let one = vec![s.clone()];
            let (rank, basis) = invariant_sym_subspace(&one).unwrap();
            assert_eq!(rank, 1);
            assert_eq!(basis[0].rank(1e-8), 1);
        }
        // d = 2 Schottky spans all of Sym_2 (dimension 3)
        let rep2 = crate::families::schottky_sl2(MU, THETA).unwrap();
        let s2 = sample_boundary(&rep2, 5, 1).unwrap();
        assert!(s2.len() >= 10);
        let (rank2, _) = invariant_sym_subspace(&s2).unwrap();
        assert_eq!(rank2, 3);
        // tau_3 conic spans the 5-dimensional space of quartic forms
        let (rank3, _) = invariant_sym_subspace(&samples).unwrap();
        assert_eq!(rank3, 5);
    }
}
