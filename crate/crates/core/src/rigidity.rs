//! Entropy estimation and eigenvalue-rigidity scans, with the flag
//! machinery and dynamically measured contraction rates that cross-check
//! the spectra.

use crate::error::Error;
use crate::hilbert::{hilbert_distance, interior_samples, ChartPoint, ConvexBody};
use crate::mat::{self, Mat};
use crate::projlin::{exterior_power, spectrum, ProjMat};
use crate::wordgroup::{class_scan, Representation, Word, DEFAULT_BALL_CAP};

/// Threshold grid nudge: thresholds landing within 1e-6 of a sample value
/// are moved up by this amount to keep counts tie-free.
const TIE_NUDGE: f64 = 1e-5;

/// Conjugacy-class counting report for the growth of
/// (1/2) log(lambda_1 / lambda_d).
#[derive(Clone, Debug)]
pub struct EntropyReport {
    pub thresholds: Vec<f64>,
    pub counts: Vec<usize>,
    /// Least-squares slope of log counts over the top half of the grid.
    pub slope_estimate: f64,
    /// The dimension bound d - 2.
    pub bound: f64,
}

/// Class invariant (1/2) log(lambda_1 / lambda_d), computed from the top
/// eigenvalue of the word and of its inverse. Both are top-of-spectrum
/// quantities, so the value stays accurate for long, badly conditioned
/// words where the bottom eigenvalue of a single matrix would not.
pub fn class_displacement(image: &ProjMat, inverse_image: &ProjMat) -> Result<f64, Error> {
    let l1 = spectrum(image)?.moduli[0];
    let l1_inv = spectrum(inverse_image)?.moduli[0];
    Ok(0.5 * (l1 * l1_inv).ln())
}

fn nudge_thresholds(grid: &[f64], values: &[f64]) -> Vec<f64> {
    grid.iter()
        .map(|&r| {
            let mut r = r;
            while values.iter().any(|&v| (v - r).abs() < 1e-6) {
                r += TIE_NUDGE;
            }
            r
        })
        .collect()
}

fn fit_tail_slope(thresholds: &[f64], counts: &[usize]) -> f64 {
    // least squares of log N(r) on r over the upper half of the grid,
    // restricted to thresholds with at least 10 classes
    let usable: Vec<(f64, f64)> = thresholds
        .iter()
        .zip(counts)
        .filter(|&(_, &c)| c >= 10)
        .map(|(&r, &c)| (r, (c as f64).ln()))
        .collect();
    let start = usable.len() / 2;
    let tail = &usable[start..];
    if tail.len() < 2 {
        return f64::NAN;
    }
    let n = tail.len() as f64;
    let sx: f64 = tail.iter().map(|p| p.0).sum();
    let sy: f64 = tail.iter().map(|p| p.1).sum();
    let sxx: f64 = tail.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = tail.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Count conjugacy classes under the displacement thresholds and fit the
/// exponential growth rate.
pub fn entropy_estimate(
    rep: &Representation,
    radius: usize,
    grid: &[f64],
) -> Result<EntropyReport, Error> {
    if radius < 4 {
        return Err(Error::BadInput("radius must be at least 4".into()));
    }
    if grid.len() < 2 {
        return Err(Error::BadInput("grid needs at least 2 thresholds".into()));
    }
    let classes = class_scan(rep, radius, 1, DEFAULT_BALL_CAP)?;
    let values = crate::parallel::par_map(&classes, |cd| {
        class_displacement(&cd.image, &cd.inverse_image)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let thresholds = nudge_thresholds(grid, &values);
    let counts: Vec<usize> = thresholds
        .iter()
        .map(|&r| values.iter().filter(|&&v| v <= r).count())
        .collect();
    let top = *counts.last().unwrap_or(&0);
    if top < 10 {
        return Err(Error::InsufficientData(format!(
            "only {top} classes below the top threshold"
        )));
    }
    let slope_estimate = fit_tail_slope(&thresholds, &counts);
    Ok(EntropyReport {
        thresholds,
        counts,
        slope_estimate,
        bound: rep.dim() as f64 - 2.0,
    })
}

/// Orbit-count variant: counts group elements by Hilbert displacement of a
/// base point inside a supplied invariant body. Cross-validates the
/// conjugacy-class estimator.
pub fn orbit_entropy_estimate(
    rep: &Representation,
    radius: usize,
    body: &ConvexBody,
    grid: &[f64],
) -> Result<EntropyReport, Error> {
    if grid.len() < 2 {
        return Err(Error::BadInput("grid needs at least 2 thresholds".into()));
    }
    let base = interior_samples(body, 1, 7)
        .into_iter()
        .next()
        .ok_or_else(|| Error::InsufficientData("no interior base point".into()))?;
    let ball = rep.ball_eval(radius, DEFAULT_BALL_CAP)?;
    let mut values = Vec::with_capacity(ball.words.len());
    for img in &ball.images {
        let moved = ChartPoint::new(body, &img.mat().matvec(base.coords()))?;
        values.push(hilbert_distance(body, &base, &moved)?);
    }
    let thresholds = nudge_thresholds(grid, &values);
    let counts: Vec<usize> = thresholds
        .iter()
        .map(|&r| values.iter().filter(|&&v| v <= r).count())
        .collect();
    if *counts.last().unwrap_or(&0) < 10 {
        return Err(Error::InsufficientData("too few orbit points".into()));
    }
    let slope_estimate = fit_tail_slope(&thresholds, &counts);
    Ok(EntropyReport {
        thresholds,
        counts,
        slope_estimate,
        bound: rep.dim() as f64 - 2.0,
    })
}

/// A rigidity witness: a class whose top gap ratio differs from the
/// (k+1, k+2) gap ratio.
#[derive(Clone, Debug)]
pub struct RigidityWitness {
    pub word: Word,
    pub top_ratio: f64,
    pub inner_ratio: f64,
}

#[derive(Clone, Debug)]
pub struct RigidityScan {
    pub witnesses: Vec<RigidityWitness>,
    pub max_mismatch: f64,
}

/// Compare lambda_1/lambda_2 against lambda_{k+1}/lambda_{k+2} over all
/// classes up to the radius. Returns every witness with a log-ratio
/// mismatch above 1e-6. Degenerate setups (d = 2 or k + 2 > d) are guarded
/// and return no witnesses.
pub fn rigidity_scan(rep: &Representation, radius: usize, k: usize) -> Result<RigidityScan, Error> {
    let d = rep.dim();
    if d == 2 || k + 2 > d || k < 1 {
        return Ok(RigidityScan {
            witnesses: vec![],
            max_mismatch: 0.0,
        });
    }
    let classes = class_scan(rep, radius, 1, DEFAULT_BALL_CAP)?;
    let spectra = crate::parallel::par_map(&classes, |cd| spectrum(&cd.image));
    let mut witnesses = Vec::new();
    let mut max_mismatch = 0.0_f64;
    for (cd, s) in classes.iter().zip(spectra) {
        let s = s?;
        let top = s.moduli[0] / s.moduli[1];
        let inner = s.moduli[k] / s.moduli[k + 1];
        let mismatch = (top.ln() - inner.ln()).abs();
        max_mismatch = max_mismatch.max(mismatch);
        if mismatch > 1e-6 {
            witnesses.push(RigidityWitness {
                word: cd.class.canonical().clone(),
                top_ratio: top,
                inner_ratio: inner,
            });
        }
    }
    Ok(RigidityScan {
        witnesses,
        max_mismatch,
    })
}

/// Nested eigenvector flag of a loxodromic element, ordered by descending
/// modulus. `basis[0..k]` spans the k-th flag subspace.
#[derive(Clone, Debug)]
pub struct Flag {
    basis: Vec<Vec<f64>>,
}

impl Flag {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthonormal basis of the k-dimensional flag subspace.
    pub fn subspace(&self, k: usize) -> &[Vec<f64>] {
        &self.basis[..k]
    }

    pub fn line(&self) -> &[f64] {
        &self.basis[0]
    }
}

/// Eigenvector flag of an element with d distinct real eigenvalue moduli.
/// The whole ladder is consumed, so badly conditioned elements are refused.
pub fn flag_of(g: &ProjMat) -> Result<Flag, Error> {
    let d = g.dim();
    if g.mat().cond_one() > crate::projlin::COND_CAP {
        return Err(Error::BadInput(format!(
            "condition number exceeds {:e}",
            crate::projlin::COND_CAP
        )));
    }
    let eig = crate::eigen::decompose(g.mat())?;
    for k in 0..d {
        if eig.im[k].abs() > 1e-8 * eig.modulus(k).max(1e-300) {
            return Err(Error::NotLoxodromic("complex eigenvalue".into()));
        }
    }
    let mut idx: Vec<usize> = (0..d).collect();
    idx.sort_by(|&a, &b| eig.modulus(b).partial_cmp(&eig.modulus(a)).unwrap());
    for w in idx.windows(2) {
        let (m0, m1) = (eig.modulus(w[0]), eig.modulus(w[1]));
        if (m0 - m1).abs() <= 1e-6 * m0 {
            return Err(Error::NotLoxodromic(format!("tied moduli {m0} and {m1}")));
        }
    }
    let vectors: Vec<Vec<f64>> = idx.iter().map(|&k| eig.vectors.col(k)).collect();
    let basis = mat::gram_schmidt(&vectors, 1e-10);
    if basis.len() != d {
        return Err(Error::NotLoxodromic("eigenvectors degenerate".into()));
    }
    Ok(Flag { basis })
}

/// Do the three flag pieces span a direct sum R^d? True iff the stacked
/// basis has smallest singular value above 1e-8.
pub fn flag_transversality(
    flags: (&Flag, &Flag, &Flag),
    partition: (usize, usize, usize),
) -> Result<bool, Error> {
    let d = flags.0.dim();
    let (k1, k2, k3) = partition;
    if k1 + k2 + k3 != d || flags.1.dim() != d || flags.2.dim() != d {
        return Err(Error::BadPartition);
    }
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(d);
    rows.extend(flags.0.subspace(k1).iter().cloned());
    rows.extend(flags.1.subspace(k2).iter().cloned());
    rows.extend(flags.2.subspace(k3).iter().cloned());
    let stacked = Mat::from_rows(&rows);
    let sv = stacked.singular_values();
    Ok(*sv.last().unwrap() > 1e-8)
}

/// Measured contraction rates of one loxodromic element.
#[derive(Clone, Debug)]
pub struct DecayRates {
    pub word: Word,
    /// Fitted rate of projective convergence to the attracting line;
    /// the spectral prediction is log(lambda_2 / lambda_1).
    pub line_rate: f64,
    pub line_predicted: f64,
    /// Fitted rate on the exterior square (2-plane convergence); predicted
    /// by log(lambda_3 / lambda_2).
    pub plane_rate: f64,
    pub plane_predicted: f64,
}

/// Fit the mean one-step log contraction over the usable window; the fit
/// must agree between window halves within 5%. The first recorded distance
/// is dropped as transient. Four steps suffice: the one-step ratios
/// converge superexponentially once the secondary eigendirection decays.
fn fit_rate(logs: &[f64]) -> Result<f64, Error> {
    if logs.len() < 2 {
        return Err(Error::NonConvergent("no usable contraction steps".into()));
    }
    let logs = &logs[1..];
    let steps: Vec<f64> = logs.windows(2).map(|w| w[1] - w[0]).collect();
    if steps.len() < 4 {
        return Err(Error::NonConvergent(format!(
            "only {} contraction steps before the noise floor",
            steps.len()
        )));
    }
    let half = steps.len() / 2;
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let m1 = mean(&steps[..half]);
    let m2 = mean(&steps[half..]);
    let m = mean(&steps);
    if (m1 - m2).abs() > 0.05 * m.abs() {
        return Err(Error::NonConvergent(format!(
            "window halves disagree: {m1} vs {m2}"
        )));
    }
    Ok(m)
}

/// Iterate a seed under g, recording log projective distances to the
/// target line until the noise floor.
fn contraction_logs(g: &Mat, seed: &[f64], target: &[f64], max_iter: usize) -> Vec<f64> {
    let mut logs = Vec::new();
    let mut x = mat::unit(seed);
    for _ in 0..max_iter {
        x = mat::unit(&g.matvec(&x));
        let d = mat::proj_dist(&x, target);
        if d < 1e-13 || d == 0.0 {
            break;
        }
        logs.push(d.ln());
    }
    logs
}

/// Wedge coordinates of the span of two vectors, in the lexicographic
/// pair basis used by the exterior square.
fn wedge2(u: &[f64], v: &[f64]) -> Vec<f64> {
    let d = u.len();
    let mut out = Vec::with_capacity(d * (d - 1) / 2);
    for i in 0..d {
        for j in i + 1..d {
            out.push(u[i] * v[j] - u[j] * v[i]);
        }
    }
    out
}

/// Measure both contraction rates of a loxodromic element from a transverse
/// seed flag, alongside the spectral predictions.
pub fn decay_rates(
    g: &ProjMat,
    word: &Word,
    seed: &Flag,
    max_iter: usize,
) -> Result<DecayRates, Error> {
    let target = flag_of(g)?;
    let s = spectrum(g)?;
    let line_predicted = (s.moduli[1] / s.moduli[0]).ln();
    let plane_predicted = (s.moduli[2] / s.moduli[1]).ln();

    let logs1 = contraction_logs(g.mat(), seed.line(), target.line(), max_iter);
    let line_rate = fit_rate(&logs1)?;

    let g2 = exterior_power(g, 2)?;
    let seed_plane = wedge2(&seed.subspace(2)[0], &seed.subspace(2)[1]);
    let target_plane = wedge2(&target.subspace(2)[0], &target.subspace(2)[1]);
    let logs2 = contraction_logs(g2.mat(), &seed_plane, &target_plane, max_iter);
    let plane_rate = fit_rate(&logs2)?;

    Ok(DecayRates {
        word: word.clone(),
        line_rate,
        line_predicted,
        plane_rate,
        plane_predicted,
    })
}

/// Measure decay rates for every loxodromic class up to the radius, seeding
/// each element with the flag of a transverse generator.
pub fn hitchin_xi2_gap(
    rep: &Representation,
    radius: usize,
    max_iter: usize,
) -> Result<Vec<DecayRates>, Error> {
    if rep.dim() < 3 {
        return Err(Error::BadInput("need dimension at least 3".into()));
    }
    let gen_flags: Vec<Option<Flag>> = rep.generators().iter().map(|g| flag_of(g).ok()).collect();
    let classes = class_scan(rep, radius, 1, DEFAULT_BALL_CAP)?;
    let mut out = Vec::new();
    for cd in &classes {
        let Ok(target) = flag_of(&cd.image) else {
            continue;
        };
        // seed with the first generator flag transverse to the target
        let seed = gen_flags.iter().flatten().find(|f| {
            mat::proj_dist(f.line(), target.line()) > 1e-3
                && mat::proj_dist(f.line(), target.basis.last().unwrap()) > 1e-3
        });
        let Some(seed) = seed else { continue };
        match decay_rates(&cd.image, cd.class.canonical(), seed, max_iter) {
            Ok(r) => out.push(r),
            Err(Error::NonConvergent(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    if out.is_empty() {
        return Err(Error::InsufficientData(
            "no loxodromic class produced a stable fit".into(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{family_matrix, tau_d, tau_schottky, MatrixFamily};

    const MU: f64 = 3.0;
    const THETA: f64 = std::f64::consts::FRAC_PI_2;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn entropy_counts_monotone_and_bounded() {
        let rep = tau_schottky(3, MU, THETA).unwrap();
        // the radius-6 displacement range is roughly [2.2, 13.2]; the grid
        // must not saturate or the tail fit flattens
        let report = entropy_estimate(&rep, 6, &grid(2.0, 13.0, 12)).unwrap();
        for w in report.counts.windows(2) {
            assert!(w[0] <= w[1], "counts must be nondecreasing");
        }
        assert!((report.bound - 1.0).abs() < 1e-12);
        assert!(report.slope_estimate.is_finite());
        assert!(report.slope_estimate > 0.0);
        assert!(
            report.slope_estimate <= report.bound - 0.2,
            "slope {} too close to the bound",
            report.slope_estimate
        );
    }

    #[test]
    fn entropy_insufficient_data() {
        let rep = tau_schottky(3, MU, THETA).unwrap();
        // thresholds so low that almost nothing is counted
        let result = entropy_estimate(&rep, 4, &grid(0.01, 0.02, 3));
        assert!(matches!(result, Err(Error::InsufficientData(_))));
    }

    #[test]
    fn entropy_scaling_identity() {
        // N_{tau_d o rho}(r) = N_rho(r / (d-1)) exactly on tie-free grids
        let base = crate::families::schottky_sl2(MU, THETA).unwrap();
        for d in [3usize, 5, 7] {
            let lifted = tau_schottky(d, MU, THETA).unwrap();
            let classes_base = class_scan(&base, 8, 1, DEFAULT_BALL_CAP).unwrap();
            let classes_lift = class_scan(&lifted, 8, 1, DEFAULT_BALL_CAP).unwrap();
            assert_eq!(classes_base.len(), classes_lift.len());
            let vals_base: Vec<f64> = classes_base
                .iter()
                .map(|cd| class_displacement(&cd.image, &cd.inverse_image).unwrap())
                .collect();
            let vals_lift: Vec<f64> = classes_lift
                .iter()
                .map(|cd| class_displacement(&cd.image, &cd.inverse_image).unwrap())
                .collect();
            let factor = (d - 1) as f64;
            for r in grid(2.0, 20.0, 10) {
                // nudge away from both value sets
                let mut r = r;
                while vals_lift.iter().any(|v| (v - r * factor).abs() < 1e-6)
                    || vals_base.iter().any(|v| (v - r).abs() < 1e-6)
                {
                    r += 1e-5;
                }
                let n_lift = vals_lift.iter().filter(|&&v| v <= r * factor).count();
                let n_base = vals_base.iter().filter(|&&v| v <= r).count();
                assert_eq!(n_lift, n_base, "d={d}, r={r}");
            }
        }
    }

    #[test]
    fn entropy_counts_conjugation_invariant() {
        let rep = tau_schottky(3, MU, THETA).unwrap();
        let h = ProjMat::normalize(&Mat::from_rows(&[
            vec![1.0, 0.2, 0.0],
            vec![0.0, 1.0, 0.3],
            vec![-0.1, 0.0, 1.0],
        ]))
        .unwrap();
        let conj = rep.conjugated(&h).unwrap();
        let g = grid(2.0, 20.0, 10);
        let r1 = entropy_estimate(&rep, 5, &g).unwrap();
        let r2 = entropy_estimate(&conj, 5, &g).unwrap();
        assert_eq!(r1.counts, r2.counts);
    }

    #[test]
    fn orbit_estimator_cross_validates() {
        use crate::boundary::{build_domain, lift_boundary, sample_boundary};
        let rep = tau_schottky(3, MU, THETA).unwrap();
        let samples = sample_boundary(&rep, 6, 1).unwrap();
        let lifted = lift_boundary(&samples).unwrap();
        let (omega, _) = build_domain(&lifted.samples).unwrap();
        let class_report = entropy_estimate(&rep, 6, &grid(2.0, 13.0, 12)).unwrap();
        let orbit_report = orbit_entropy_estimate(&rep, 6, &omega, &grid(2.0, 13.0, 12)).unwrap();
        assert!(orbit_report.slope_estimate > 0.0);
        assert!(orbit_report.slope_estimate <= orbit_report.bound);
        // the estimators measure the same growth rate in the limit; at this
        // radius the orbit counter is truncation-biased low (long elements
        // with small displacement are missing from the ball), so only an
        // order-of-magnitude agreement is meaningful
        let ratio = orbit_report.slope_estimate / class_report.slope_estimate;
        assert!(
            (0.15..1.5).contains(&ratio),
            "estimators disagree: class {} orbit {}",
            class_report.slope_estimate,
            orbit_report.slope_estimate
        );
    }

    #[test]
    fn rigidity_scan_fuchsian_locus_clean() {
        let rep = tau_schottky(5, MU, THETA).unwrap();
        let scan = rigidity_scan(&rep, 4, 1).unwrap();
        assert!(
            scan.witnesses.is_empty(),
            "ladder spectra must have equal gap ratios, found {} witnesses (max {})",
            scan.witnesses.len(),
            scan.max_mismatch
        );
    }

    #[test]
    fn rigidity_scan_finds_sp_and_g2_witnesses() {
        // cyclic group generated by the symplectic diagonal
        let sp = family_matrix(MatrixFamily::Sp, &[16.0, 2.0]).unwrap();
        let rep = Representation::new(vec![sp], "sp-cyclic").unwrap();
        let scan = rigidity_scan(&rep, 3, 1).unwrap();
        assert!(!scan.witnesses.is_empty());
        let w = &scan.witnesses[0];
        assert!((w.top_ratio - 8.0).abs() < 1e-6);
        assert!((w.inner_ratio - 4.0).abs() < 1e-6);

        let g2 = family_matrix(MatrixFamily::G2, &[2.0, 0.5]).unwrap();
        let rep = Representation::new(vec![g2], "g2-cyclic").unwrap();
        let scan = rigidity_scan(&rep, 3, 1).unwrap();
        assert!(!scan.witnesses.is_empty());
        let w = &scan.witnesses[0];
        assert!((w.top_ratio.ln() - 0.5).abs() < 1e-6);
        assert!((w.inner_ratio.ln() - 1.5).abs() < 1e-6);
    }

    #[test]
    fn rigidity_scan_guards_degenerate() {
        let rep = crate::families::schottky_sl2(MU, THETA).unwrap();
        let scan = rigidity_scan(&rep, 4, 1).unwrap();
        assert!(scan.witnesses.is_empty());
        let rep3 = tau_schottky(3, MU, THETA).unwrap();
        let scan = rigidity_scan(&rep3, 4, 2).unwrap(); // k + 2 > 3
        assert!(scan.witnesses.is_empty());
    }

    #[test]
    fn flag_of_diagonal() {
        let g = ProjMat::normalize(&Mat::diagonal(&[8.0, 4.0, 2.0, 1.0])).unwrap();
        let f = flag_of(&g).unwrap();
        for k in 0..4 {
            let b = &f.subspace(k + 1)[k];
            assert!(b[k].abs() > 1.0 - 1e-9, "flag {k} not coordinate");
        }
        // inverse flag is reversed
        let fi = flag_of(&g.inverse().unwrap()).unwrap();
        for k in 0..4 {
            let b = &fi.subspace(k + 1)[k];
            assert!(b[3 - k].abs() > 1.0 - 1e-9);
        }
    }

    #[test]
    fn flag_of_tau4_monomials() {
        let g = tau_d(&Mat::diagonal(&[2.0, 0.5]), 4).unwrap();
        let f = flag_of(&g).unwrap();
        // descending moduli order w^3, u w^2, u^2 w, u^3 in the monomial
        // basis (u^3, u^2 w, u w^2, w^3)
        let expect = [3usize, 2, 1, 0];
        for (k, &coord) in expect.iter().enumerate() {
            assert!(
                f.subspace(k + 1)[k][coord].abs() > 1.0 - 1e-9,
                "flag level {k}"
            );
        }
    }

    #[test]
    fn flag_rejects_non_loxodromic() {
        let rot = ProjMat::normalize(&crate::families::rotation(0.7)).unwrap();
        assert!(matches!(flag_of(&rot), Err(Error::NotLoxodromic(_))));
        let tied = ProjMat::normalize(&Mat::diagonal(&[2.0, 2.0, 0.25])).unwrap();
        assert!(matches!(flag_of(&tied), Err(Error::NotLoxodromic(_))));
    }

    #[test]
    fn flag_transversality_cases() {
        let rep = tau_schottky(4, MU, THETA).unwrap();
        let a = flag_of(&rep.generators()[0]).unwrap();
        let b = flag_of(&rep.generators()[1]).unwrap();
        let ab = flag_of(&rep.generators()[0].compose(&rep.generators()[1]).unwrap()).unwrap();
        // pairwise distinct fixed flags are transverse
        assert!(flag_transversality((&a, &b, &ab), (2, 1, 1)).unwrap());
        // the same flag twice overlaps
        assert!(!flag_transversality((&a, &a, &b), (2, 2, 0)).unwrap());
        // attracting/repelling flags of one element are transverse
        let ainv = flag_of(&rep.generators()[0].inverse().unwrap()).unwrap();
        assert!(flag_transversality((&a, &ainv, &b), (2, 2, 0)).unwrap());
        assert!(flag_transversality((&a, &ainv, &b), (1, 3, 0)).unwrap());
        // bad partition
        assert!(matches!(
            flag_transversality((&a, &b, &ab), (2, 2, 2)),
            Err(Error::BadPartition)
        ));
    }

    #[test]
    fn decay_rates_match_ladder() {
        // tau_3 of diag(3, 1/3): both rates are log(1/9)
        let g = tau_d(&Mat::diagonal(&[3.0, 1.0 / 3.0]), 3).unwrap();
        let other = tau_d(&crate::families::schottky_sl2_raw(MU, THETA).unwrap()[1], 3).unwrap();
        let seed = flag_of(&other).unwrap();
        let r = decay_rates(&g, &Word::parse("a").unwrap(), &seed, 60).unwrap();
        let want = (1.0_f64 / 9.0).ln();
        assert!(
            (r.line_rate - want).abs() < 0.02 * want.abs(),
            "{}",
            r.line_rate
        );
        assert!(
            (r.plane_rate - want).abs() < 0.02 * want.abs(),
            "{}",
            r.plane_rate
        );
        assert!((r.line_predicted - want).abs() < 1e-9);
        assert!((r.plane_predicted - want).abs() < 1e-9);
    }

    #[test]
    fn decay_rates_distinct_for_symplectic() {
        let sp = family_matrix(MatrixFamily::Sp, &[16.0, 2.0]).unwrap();
        // a generic transverse seed: a mildly rotated flag
        let mut m = Mat::identity(4);
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] += 0.1 * ((i * 7 + j * 3 + 1) as f64 / 10.0);
            }
        }
        let seed = flag_of(
            &ProjMat::normalize(
                &m.matmul(&Mat::diagonal(&[8.0, 4.0, 2.0, 1.0]))
                    .matmul(&m.inverse().unwrap()),
            )
            .unwrap(),
        )
        .unwrap();
        let r = decay_rates(&sp, &Word::parse("a").unwrap(), &seed, 60).unwrap();
        let want_line = (2.0_f64 / 16.0).ln();
        let want_plane = (0.5_f64 / 2.0).ln();
        assert!((r.line_rate - want_line).abs() < 0.02 * want_line.abs());
        assert!((r.plane_rate - want_plane).abs() < 0.02 * want_plane.abs());
        assert!((r.line_rate - r.plane_rate).abs() > 0.5);
    }

    #[test]
    fn rep_level_rates_within_two_percent() {
        // classes up to length 2: strong enough contractions flooring out
        // within double precision are skipped, and everything that remains
        // must match the spectral prediction
        let rep = tau_schottky(3, MU, THETA).unwrap();
        let rates = hitchin_xi2_gap(&rep, 2, 60).unwrap();
        assert!(rates.len() >= 10, "only {} stable fits", rates.len());
        for r in &rates {
            assert!(
                (r.line_rate - r.line_predicted).abs() < 0.02 * r.line_predicted.abs(),
                "line rate off at {}: {} vs {}",
                r.word,
                r.line_rate,
                r.line_predicted
            );
            assert!(
                (r.plane_rate - r.plane_predicted).abs() < 0.02 * r.plane_predicted.abs(),
                "plane rate off at {}: {} vs {}",
                r.word,
                r.plane_rate,
                r.plane_predicted
            );
        }
    }
}
