//! Hilbert geometry on properly convex bodies.
//!
//! A body is carried as finite half-space data (covectors required positive)
//! and/or a finite point sample, plus a fixed affine chart. Round bodies used
//! as exact oracles may also carry a quadratic form whose positivity cuts the
//! body out exactly; boundary intersections then come from the quadratic
//! formula instead of a polygonal approximation, and stay closed-form.
//!
//! Distances are computed from the cross ratio of the two boundary points of
//! the chord through the arguments. The chart is only a bookkeeping device:
//! the cross ratio of four collinear points does not depend on it.

use crate::error::Error;
use crate::lp;
use crate::mat::{self, Mat};
use crate::projlin::ProjMat;
use crate::rng::Rng;

/// Interior margin below which points are rejected as boundary-grazing.
pub const INTERIOR_TOL: f64 = 1e-12;

/// Relative singular-value threshold for the hrep rank test.
pub const RANK_TOL: f64 = 1e-8;

/// A projective convex body in P(R^d).
#[derive(Clone, Debug)]
pub struct ConvexBody {
    dim: usize,
    hrep: Vec<Vec<f64>>,
    vrep: Vec<Vec<f64>>,
    chart: Vec<f64>,
    /// Optional exact quadric: the body is additionally cut by v^t Q v > 0.
    quadric: Option<Mat>,
    proper: bool,
    witness: Option<Vec<f64>>,
}

impl ConvexBody {
    /// Assemble a body from half-space and/or point data. Covectors and
    /// points are stored unit-normalized. The chart covector is the
    /// normalized sum of the hrep (positive on the body by construction),
    /// falling back to the mean point direction for pure hulls.
    pub fn new(
        dim: usize,
        hrep: Vec<Vec<f64>>,
        vrep: Vec<Vec<f64>>,
        quadric: Option<Mat>,
    ) -> Result<ConvexBody, Error> {
        if hrep.is_empty() && vrep.is_empty() {
            return Err(Error::EmptySamples);
        }
        for f in hrep.iter().chain(vrep.iter()) {
            if f.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: f.len(),
                });
            }
        }
        let hrep: Vec<Vec<f64>> = hrep.iter().map(|f| mat::unit(f)).collect();
        let vrep: Vec<Vec<f64>> = vrep.iter().map(|v| mat::unit(v)).collect();
        let chart = if !hrep.is_empty() {
            let mut c = vec![0.0; dim];
            for f in &hrep {
                for (ci, fi) in c.iter_mut().zip(f) {
                    *ci += fi;
                }
            }
            mat::unit(&c)
        } else {
            let mut c = vec![0.0; dim];
            for v in &vrep {
                for (ci, vi) in c.iter_mut().zip(v) {
                    *ci += vi;
                }
            }
            mat::unit(&c)
        };
        if mat::norm(&chart) == 0.0 {
            return Err(Error::DegenerateChart);
        }
        let (proper, witness) = Self::properness(dim, &hrep, &vrep);
        Ok(ConvexBody {
            dim,
            hrep,
            vrep,
            chart,
            quadric,
            proper,
            witness,
        })
    }

    /// Properness: the half-space cone is salient iff the covectors span
    /// linearly (rank d), and the body has interior iff a strict witness
    /// exists; the witness search is a phase-1 linear program. A pure hull
    /// is proper iff its generating cone is salient, i.e. some functional is
    /// strictly positive on every sample.
    fn properness(dim: usize, hrep: &[Vec<f64>], vrep: &[Vec<f64>]) -> (bool, Option<Vec<f64>>) {
        if !hrep.is_empty() {
            let stacked = Mat::from_rows(hrep);
            if stacked.rank(RANK_TOL) < dim {
                return (false, None);
            }
            match lp::strict_interior_witness(hrep) {
                Some(w) => (true, Some(mat::unit(&w))),
                None => (false, None),
            }
        } else {
            match lp::strict_interior_witness(vrep) {
                Some(_) => {
                    // mean of the samples is interior to the cone they span
                    let mut c = vec![0.0; dim];
                    for v in vrep {
                        for (ci, vi) in c.iter_mut().zip(v) {
                            *ci += vi;
                        }
                    }
                    (true, Some(mat::unit(&c)))
                }
                None => (false, None),
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hrep(&self) -> &[Vec<f64>] {
        &self.hrep
    }

    pub fn vrep(&self) -> &[Vec<f64>] {
        &self.vrep
    }

    pub fn chart(&self) -> &[f64] {
        &self.chart
    }

    pub fn quadric(&self) -> Option<&Mat> {
        self.quadric.as_ref()
    }

    pub fn is_proper(&self) -> bool {
        self.proper
    }

    pub fn witness(&self) -> Option<&[f64]> {
        self.witness.as_deref()
    }

    /// Signed margins of a vector against the half-space data.
    pub fn margins(&self, v: &[f64]) -> Vec<f64> {
        self.hrep.iter().map(|f| mat::dot(f, v)).collect()
    }

    /// Does the projective point [v] lie in the open body? Both lifts are
    /// tried, since the half-space cone is one of the two components.
    pub fn contains_projective(&self, v: &[f64], tol: f64) -> bool {
        let u = mat::unit(v);
        let q_ok = |w: &[f64]| match &self.quadric {
            Some(q) => mat::dot(&q.matvec(w), w) > tol,
            None => true,
        };
        let pos = self.margins(&u).iter().all(|&m| m > tol) && q_ok(&u);
        if pos {
            return true;
        }
        let neg: Vec<f64> = u.iter().map(|x| -x).collect();
        self.margins(&neg).iter().all(|&m| m > tol) && q_ok(&neg)
    }

    /// Image of the body under a projective map.
    pub fn transformed(&self, a: &ProjMat) -> Result<ConvexBody, Error> {
        let inv = a.mat().inverse()?;
        let hrep = self
            .hrep
            .iter()
            .map(|f| {
                // f o A^-1 as a row vector
                (0..self.dim)
                    .map(|j| (0..self.dim).map(|i| f[i] * inv[(i, j)]).sum())
                    .collect()
            })
            .collect();
        let vrep = self.vrep.iter().map(|v| a.mat().matvec(v)).collect();
        let quadric = self
            .quadric
            .as_ref()
            .map(|q| inv.transpose().matmul(q).matmul(&inv));
        ConvexBody::new(self.dim, hrep, vrep, quadric)
    }
}

/// A point of the affine chart: chart(coords) = 1 exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartPoint {
    coords: Vec<f64>,
}

impl ChartPoint {
    pub fn new(body: &ConvexBody, v: &[f64]) -> Result<ChartPoint, Error> {
        let c = mat::dot(body.chart(), v);
        if c.abs() < 1e-14 * mat::norm(v) {
            return Err(Error::DegenerateChart);
        }
        Ok(ChartPoint {
            coords: v.iter().map(|x| x / c).collect(),
        })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Euclidean distance in the chart.
    pub fn chart_dist(&self, other: &ChartPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

fn interior_margin(body: &ConvexBody, p: &ChartPoint) -> f64 {
    let mut m = f64::INFINITY;
    for f in body.hrep() {
        m = m.min(mat::dot(f, p.coords()) / mat::norm(p.coords()));
    }
    if let Some(q) = body.quadric() {
        let v = mat::unit(p.coords());
        m = m.min(mat::dot(&q.matvec(&v), &v));
    }
    m
}

/// Boundary crossing parameters of the line p + t (q - p): the largest
/// crossing at t <= 0 and the smallest at t >= 1, if they exist.
fn chord_params(body: &ConvexBody, p: &ChartPoint, q: &ChartPoint) -> (Option<f64>, Option<f64>) {
    let y: Vec<f64> = q
        .coords()
        .iter()
        .zip(p.coords())
        .map(|(b, a)| b - a)
        .collect();
    let mut t_neg: Option<f64> = None;
    let mut t_pos: Option<f64> = None;
    let mut push = |t: f64| {
        if t <= 0.0 {
            if t_neg.is_none_or(|c| t > c) {
                t_neg = Some(t);
            }
        } else if t >= 1.0 && t_pos.is_none_or(|c| t < c) {
            t_pos = Some(t);
        }
    };
    let scale = mat::norm(&y);
    for f in body.hrep() {
        let den = mat::dot(f, &y);
        if den.abs() < 1e-15 * scale {
            continue;
        }
        push(-mat::dot(f, p.coords()) / den);
    }
    if let Some(qf) = body.quadric() {
        // Q(p + t y) = Q(p) + 2 t B(p, y) + t^2 Q(y)
        let qp = mat::dot(&qf.matvec(p.coords()), p.coords());
        let qy = mat::dot(&qf.matvec(&y), &y);
        let b = mat::dot(&qf.matvec(p.coords()), &y);
        if qy.abs() > 1e-30 {
            let disc = b * b - qp * qy;
            if disc >= 0.0 {
                let s = disc.sqrt();
                push((-b + s) / qy);
                push((-b - s) / qy);
            }
        } else if b.abs() > 1e-30 {
            push(-qp / (2.0 * b));
        }
    }
    (t_neg, t_pos)
}

/// Hilbert distance between interior chart points: half the log of the
/// cross ratio of (boundary, p, q, boundary) along their chord. Returns
/// `f64::INFINITY` when the chord never leaves an improper sampled body.
pub fn hilbert_distance(body: &ConvexBody, p: &ChartPoint, q: &ChartPoint) -> Result<f64, Error> {
    for x in [p, q] {
        let m = interior_margin(body, x);
        if m <= INTERIOR_TOL {
            return Err(Error::PointOutside(m));
        }
    }
    if p.chart_dist(q) < 1e-15 {
        return Ok(0.0);
    }
    // canonical argument order makes the metric exactly symmetric
    let swap = p.coords() > q.coords();
    let (p, q) = if swap { (q, p) } else { (p, q) };
    let (t_neg, t_pos) = chord_params(body, p, q);
    match (t_neg, t_pos) {
        (Some(ta), Some(tb)) => {
            let cr = (tb * (1.0 - ta)) / ((-ta) * (tb - 1.0));
            Ok(0.5 * cr.ln().max(0.0))
        }
        _ => {
            if body.is_proper() {
                Err(Error::DegenerateChart)
            } else {
                Ok(f64::INFINITY)
            }
        }
    }
}

/// Gromov product (p|q)_o = (H(p,o) + H(o,q) - H(p,q)) / 2, clamped at 0.
pub fn gromov_product(
    body: &ConvexBody,
    p: &ChartPoint,
    q: &ChartPoint,
    o: &ChartPoint,
) -> Result<f64, Error> {
    let po = hilbert_distance(body, p, o)?;
    let oq = hilbert_distance(body, o, q)?;
    let pq = hilbert_distance(body, p, q)?;
    if po.is_infinite() || oq.is_infinite() || pq.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok((0.5 * (po + oq - pq)).max(0.0))
}

/// Four-point hyperbolicity defect over every quadruple of the sample:
/// max over base points o and pairings of
/// min{(x|z)_o, (y|z)_o} - (x|y)_o, clamped at 0.
pub fn four_point_delta(body: &ConvexBody, points: &[ChartPoint]) -> Result<f64, Error> {
    let n = points.len();
    if n < 4 {
        return Err(Error::InsufficientData("need at least 4 points".into()));
    }
    let mut dist = vec![vec![0.0_f64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = hilbert_distance(body, &points[i], &points[j])?;
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let mut delta = 0.0_f64;
    for o in 0..n {
        let do_ = &dist[o];
        for x in 0..n {
            if x == o {
                continue;
            }
            for y in x + 1..n {
                if y == o {
                    continue;
                }
                let gxy = do_[x] + do_[y] - dist[x][y];
                for z in y + 1..n {
                    if z == o {
                        continue;
                    }
                    let gxz = do_[x] + do_[z] - dist[x][z];
                    let gyz = do_[y] + do_[z] - dist[y][z];
                    // max over the three pairings equals mid - min
                    let (mut a, mut b, mut c) = (gxy, gxz, gyz);
                    if a > b {
                        std::mem::swap(&mut a, &mut b);
                    }
                    if b > c {
                        std::mem::swap(&mut b, &mut c);
                    }
                    if a > b {
                        std::mem::swap(&mut a, &mut b);
                    }
                    delta = delta.max(0.5 * (b - a));
                }
            }
        }
    }
    Ok(delta)
}

/// Swap the roles of points and covectors through the standard pairing.
pub fn dual_body(body: &ConvexBody) -> Result<ConvexBody, Error> {
    if !body.is_proper() {
        return Err(Error::ImproperBody("cannot dualize".into()));
    }
    if body.vrep().is_empty() && body.hrep().is_empty() {
        return Err(Error::EmptySamples);
    }
    let dual = ConvexBody::new(body.dim(), body.vrep().to_vec(), body.hrep().to_vec(), None)?;
    if !dual.is_proper() && !dual.hrep().is_empty() {
        return Err(Error::ImproperBody("dual properness test failed".into()));
    }
    Ok(dual)
}

/// Result of a translation-length measurement.
#[derive(Clone, Debug)]
pub struct TranslationLength {
    /// Minimum displacement over the sampled interior points.
    pub sampled_min: f64,
    /// Displacement measured at a point of the axis, when both fixed lines
    /// of a biproximal element lie on the sampled boundary.
    pub axis: Option<f64>,
}

/// Minimal displacement of g over sampled interior points, plus the exact
/// axis evaluation when available. The element must map the point sample
/// into the body (checked against the half-space data at 1e-8).
pub fn translation_length(
    body: &ConvexBody,
    g: &ProjMat,
    orbit_samples: usize,
) -> Result<TranslationLength, Error> {
    if g.dim() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: g.dim(),
        });
    }
    // invariance check on the point sample
    for v in body.vrep() {
        let w = mat::unit(&g.mat().matvec(v));
        let pos_bad = body.margins(&w).iter().fold(0.0_f64, |acc, &m| acc.min(m));
        let neg: Vec<f64> = w.iter().map(|x| -x).collect();
        let neg_bad = body
            .margins(&neg)
            .iter()
            .fold(0.0_f64, |acc, &m| acc.min(m));
        let bad = pos_bad.max(neg_bad);
        if bad < -1e-8 {
            return Err(Error::NotPreserved(bad));
        }
    }

    // sample interior points: centroid plus random convex combinations of
    // the point sample (deterministic seed)
    let seeds = interior_samples(body, orbit_samples, 0x5eed);
    let mut sampled_min = f64::INFINITY;
    for x in &seeds {
        let gx_raw = g.mat().matvec(x.coords());
        let gx = ChartPoint::new(body, &gx_raw)?;
        if interior_margin(body, &gx) <= INTERIOR_TOL {
            continue;
        }
        let d = hilbert_distance(body, &gx, x)?;
        sampled_min = sampled_min.min(d);
    }

    // axis evaluation for biproximal elements whose fixed lines lie on the
    // sampled boundary: the chord through the fixed lines must exit the
    // body exactly at them, which makes the cross ratio along the axis
    // exact rather than polyhedrally widened
    let spec = crate::projlin::spectrum(g)?;
    let spec_inv = crate::projlin::spectrum(&g.inverse()?)?;
    let axis = (|| {
        let lp_ = spec.attracting_line.as_ref()?;
        let lm = spec_inv.attracting_line.as_ref()?;
        // both fixed lines must sit on the sampled boundary: some functional
        // (the element's own supporting one) vanishes there to eigensolver
        // accuracy. Merely nearby tangents leave margins of the order of the
        // squared sample separation, far above this gate.
        let vanishing = |line: &[f64]| {
            let u = mat::unit(line);
            let h = body
                .hrep()
                .iter()
                .map(|f| mat::dot(f, &u).abs())
                .fold(f64::INFINITY, f64::min);
            let q = body
                .quadric()
                .map(|qf| mat::dot(&qf.matvec(&u), &u).abs())
                .unwrap_or(f64::INFINITY);
            h.min(q) < 1e-11
        };
        if !vanishing(lp_) || !vanishing(lm) {
            return None;
        }
        let cp = ChartPoint::new(body, lp_).ok()?;
        let cm = ChartPoint::new(body, lm).ok()?;
        let mid: Vec<f64> = cp
            .coords()
            .iter()
            .zip(cm.coords())
            .map(|(a, b)| 0.5 * (a + b))
            .collect();
        let mid = ChartPoint::new(body, &mid).ok()?;
        if interior_margin(body, &mid) <= INTERIOR_TOL {
            return None;
        }
        // the chord through the fixed lines must exit the body exactly at
        // them, making the axis cross ratio exact rather than widened. The
        // endpoints sit at parameters +-1 from the midpoint, so roots are
        // collected on either side of +-0.5 (the interior-point collector
        // would lose a root landing at 1 - eps to rounding).
        let y: Vec<f64> = cp
            .coords()
            .iter()
            .zip(cm.coords())
            .map(|(p, m)| 0.5 * (p - m))
            .collect();
        let mut t_pos = f64::INFINITY;
        let mut t_neg = f64::NEG_INFINITY;
        let mut push = |t: f64| {
            if t > 0.5 {
                t_pos = t_pos.min(t);
            } else if t < -0.5 {
                t_neg = t_neg.max(t);
            }
        };
        let scale = mat::norm(&y);
        for f in body.hrep() {
            let den = mat::dot(f, &y);
            if den.abs() < 1e-15 * scale {
                continue;
            }
            push(-mat::dot(f, mid.coords()) / den);
        }
        if let Some(qf) = body.quadric() {
            let qp = mat::dot(&qf.matvec(mid.coords()), mid.coords());
            let qy = mat::dot(&qf.matvec(&y), &y);
            let b = mat::dot(&qf.matvec(mid.coords()), &y);
            if qy.abs() > 1e-30 {
                let disc = b * b - qp * qy;
                if disc >= 0.0 {
                    let s = disc.sqrt();
                    push((-b + s) / qy);
                    push((-b - s) / qy);
                }
            }
        }
        if !t_pos.is_finite() || !t_neg.is_finite() {
            return None;
        }
        let at = |t: f64| -> Vec<f64> {
            mid.coords()
                .iter()
                .zip(&y)
                .map(|(m, d)| m + t * d)
                .collect()
        };
        if mat::proj_dist(&at(t_pos), lp_) > 1e-10 || mat::proj_dist(&at(t_neg), lm) > 1e-10 {
            return None;
        }
        let gm = ChartPoint::new(body, &g.mat().matvec(mid.coords())).ok()?;
        hilbert_distance(body, &gm, &mid).ok()
    })();

    Ok(TranslationLength { sampled_min, axis })
}

/// Deterministic interior sample: centroid of the point sample plus convex
/// combinations with random weights (or hrep-witness jitter for pure
/// half-space bodies).
pub fn interior_samples(body: &ConvexBody, count: usize, seed: u64) -> Vec<ChartPoint> {
    let mut rng = Rng::new(seed);
    let mut out = Vec::new();
    let source: Vec<Vec<f64>> = if !body.vrep().is_empty() {
        body.vrep().to_vec()
    } else if let Some(w) = body.witness() {
        vec![w.to_vec()]
    } else {
        return out;
    };
    // sign-align the sample so convex combinations stay in one cone half
    let reference = body.chart().to_vec();
    let aligned: Vec<Vec<f64>> = source
        .iter()
        .map(|v| {
            if mat::dot(v, &reference) < 0.0 {
                v.iter().map(|x| -x).collect()
            } else {
                v.clone()
            }
        })
        .collect();
    let centroid: Vec<f64> = (0..body.dim())
        .map(|i| aligned.iter().map(|v| v[i]).sum::<f64>() / aligned.len() as f64)
        .collect();
    if let Ok(c) = ChartPoint::new(body, &centroid) {
        if interior_margin(body, &c) > INTERIOR_TOL {
            out.push(c);
        }
    }
    let mut guard = 0;
    while out.len() < count && guard < 50 * count.max(1) {
        guard += 1;
        let mut v = vec![0.0; body.dim()];
        for s in &aligned {
            let w = rng.uniform();
            for (vi, si) in v.iter_mut().zip(s) {
                *vi += w * si;
            }
        }
        // lean toward the centroid to stay safely interior
        for (vi, ci) in v.iter_mut().zip(&centroid) {
            *vi = 0.5 * *vi + 0.5 * ci;
        }
        if let Ok(c) = ChartPoint::new(body, &v) {
            if interior_margin(body, &c) > 1e-9 {
                out.push(c);
            }
        }
    }
    out
}

/// Location of a query ray relative to the positive hull of a point set.
#[derive(Clone, Debug)]
pub enum HullLocation {
    /// In the hull; carries a Caratheodory witness as (index, weight) pairs.
    Inside(Vec<(usize, f64)>),
    /// Within the tolerance band of the hull boundary.
    Boundary,
    Outside,
}

/// Decide whether `query` lies in the positive hull of `points` by linear
/// feasibility; a basic solution touches at most dim(query) generators.
pub fn hull_membership(points: &[Vec<f64>], query: &[f64]) -> HullLocation {
    let pts: Vec<Vec<f64>> = points.iter().map(|p| mat::unit(p)).collect();
    let q = mat::unit(query);
    match lp::cone_membership(&pts, &q) {
        Some(w) => {
            let witness: Vec<(usize, f64)> = w
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 1e-9)
                .map(|(i, &x)| (i, x))
                .collect();
            HullLocation::Inside(witness)
        }
        None => {
            let residual = lp::cone_membership_residual(&pts, &q);
            if residual <= 1e-6 {
                HullLocation::Boundary
            } else {
                HullLocation::Outside
            }
        }
    }
}

/// The round body cut from the positive-semidefinite cone of 2x2 symmetric
/// matrices: coordinates (x, y, z) represent [[x, y], [y, z]], the interior
/// is xz - y^2 > 0 with x + z > 0, and the chart slice is a Euclidean disk
/// (the Klein model of the hyperbolic plane). Carries `samples` boundary
/// points/tangents and the exact quadric.
pub fn klein_disk(samples: usize) -> ConvexBody {
    let mut hrep = Vec::with_capacity(samples);
    let mut vrep = Vec::with_capacity(samples);
    for k in 0..samples {
        let th = std::f64::consts::TAU * (k as f64) / (samples as f64);
        let (c, s) = (th.cos(), th.sin());
        // boundary point v v^t for v = (c, s); tangent functional u^t X u
        // for the orthogonal u = (-s, c)
        vrep.push(vec![c * c, c * s, s * s]);
        hrep.push(vec![s * s, -2.0 * s * c, c * c]);
    }
    let mut q = Mat::zeros(3, 3);
    q[(0, 2)] = 0.5;
    q[(2, 0)] = 0.5;
    q[(1, 1)] = -1.0;
    ConvexBody::new(3, hrep, vrep, Some(q)).expect("disk body is proper")
}

/// Chart point of the disk body for Klein-model coordinates (a, b) with
/// a^2 + b^2 < 1: the PSD matrix [[1 + a, b], [b, 1 - a]].
pub fn klein_point(body: &ConvexBody, a: f64, b: f64) -> Result<ChartPoint, Error> {
    ChartPoint::new(body, &[1.0 + a, b, 1.0 - a])
}

/// Closed-form Klein-model distance (the oracle for the disk body).
pub fn klein_distance(p: (f64, f64), q: (f64, f64)) -> f64 {
    let dotpq = 1.0 - (p.0 * q.0 + p.1 * q.1);
    let np = 1.0 - (p.0 * p.0 + p.1 * p.1);
    let nq = 1.0 - (q.0 * q.0 + q.1 * q.1);
    (dotpq / (np * nq).sqrt()).acosh()
}
