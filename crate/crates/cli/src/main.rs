//! Batch driver for representation experiments: spectra, gap certificates,
//! entropy counts, rigidity scans, domain construction, family generation,
//! SVG rendering, and the split-octonion automorphism check.
//!
//! All commands are deterministic: identical inputs and flags produce
//! byte-identical outputs regardless of the worker count.

mod io;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anosov_core::boundary::{build_domain, gap_certificate, lift_boundary, sample_boundary};
use anosov_core::error::Error as CoreError;
use anosov_core::families::{
    doubled_rep, family_matrix, g2_matrix, reducible_rep, schottky_sl2, tau_schottky, verify_g2,
    MatrixFamily,
};
use anosov_core::mat;
use anosov_core::projlin::spectrum;
use anosov_core::rigidity::{entropy_estimate, rigidity_scan};
use anosov_core::wordgroup::{Representation, Word};
use clap::{Args, Parser, Subcommand};

use io::{fmt17, samples_from_csv, samples_to_csv, BodyFile, RepFile};

/// Errors with documented exit codes: 2 parse, 3 eigenvalue failure,
/// 4 budget, 5 improper/inconsistent geometry, 6 unsupported dimension.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Core(CoreError),
    UnsupportedDimension(usize),
    Other(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> CliError {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Core(CoreError::BadInput(_)) => 2,
            CliError::Core(CoreError::EigenFailure) => 3,
            CliError::Core(CoreError::BudgetExceeded(_)) => 4,
            CliError::Core(CoreError::ImproperBody(_)) => 5,
            CliError::Core(CoreError::LiftInconsistent(_, _)) => 5,
            CliError::UnsupportedDimension(_) => 6,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Core(CoreError::EigenFailure) => "eigen_failure",
            CliError::Core(CoreError::BudgetExceeded(_)) => "budget_exceeded",
            CliError::Core(CoreError::ImproperBody(_)) => "improper_body",
            CliError::Core(CoreError::LiftInconsistent(_, _)) => "lift_inconsistent",
            CliError::UnsupportedDimension(_) => "unsupported_dimension",
            CliError::Core(_) => "core",
            CliError::Other(_) => "other",
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::UnsupportedDimension(d) => {
                write!(f, "rendering needs dimension 3 (or --slice); got {d}")
            }
            CliError::Other(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "anosov",
    about = "Spectra, gap certificates, entropy counts, and invariant domains for matrix representations",
    version
)]
struct Cli {
    /// Worker threads for the scans (default: logical cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for randomized choices (reserved; current commands are
    /// deterministic without it).
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RepArg {
    /// Representation JSON file.
    #[arg(long)]
    rep: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue moduli, gaps, and proximality of one word's image.
    /// CSV columns: word, modulus_1..modulus_d, gap_1..gap_{d-1},
    /// proximal, top_sign.
    Spectrum {
        #[command(flatten)]
        rep: RepArg,
        /// Word in the generators, e.g. "aBab"; empty for the identity.
        #[arg(long, default_value = "")]
        word: String,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalue-gap certificate over all conjugacy classes in a ball.
    /// CSV columns: word_length, log_top_gap. JSON: slope, intercept,
    /// min_normalized_gap, classes.
    Gap {
        #[command(flatten)]
        rep: RepArg,
        #[arg(long)]
        radius: usize,
        /// Output base path; writes BASE.csv and BASE.json.
        #[arg(long, default_value = "gap")]
        out: PathBuf,
    },
    /// Conjugacy-class counting under displacement thresholds.
    /// CSV columns: threshold, count. JSON adds slope_estimate and bound.
    Entropy {
        /// Representation JSON file (omit with --check-scaling).
        #[arg(long)]
        rep: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        /// Threshold grid lo:hi:count.
        #[arg(long, default_value = "2:13:12")]
        grid: String,
        /// Verify the exact count identity between a Schottky pair and its
        /// degree-d pullback (needs odd --d).
        #[arg(long, default_value_t = false)]
        check_scaling: bool,
        /// Pullback dimension for --check-scaling.
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 3.0)]
        mu: f64,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        theta: f64,
        #[arg(long, default_value = "entropy")]
        out: PathBuf,
    },
    /// Gap-ratio rigidity scan (lambda_1/lambda_2 vs lambda_{k+1}/lambda_{k+2}).
    /// CSV columns: word, top_ratio, inner_ratio.
    Scan {
        /// Representation JSON file; or use --family for a cyclic group.
        #[arg(long)]
        rep: Option<PathBuf>,
        /// Built-in family: sp, so, or g2 (cyclic group of one matrix).
        #[arg(long)]
        family: Option<String>,
        /// Sigma parameters for sp/so families, comma separated.
        #[arg(long)]
        sigma: Option<String>,
        /// G2 family parameters.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Witness threshold on |log ratio difference|.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value = "scan")]
        out: PathBuf,
    },
    /// Sample boundary maps, lift signs, and build the invariant domain.
    /// Samples CSV columns: word, xi_0..xi_{d-1}, eta_0..eta_{d-1}, lifted.
    Domain {
        #[command(flatten)]
        rep: RepArg,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        #[arg(long, default_value_t = 1)]
        min_len: usize,
        /// Output base path; writes BASE.samples.csv, BASE.omega.json,
        /// BASE.hull.json, BASE.summary.json.
        #[arg(long, default_value = "domain")]
        out: PathBuf,
    },
    /// Write a built-in representation family to a JSON file.
    Families {
        /// tau, schottky, reducible, doubled, sp, so, or g2.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 3.0)]
        mu: f64,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        theta: f64,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long, default_value = "rep.json")]
        out: PathBuf,
    },
    /// Render samples (and optionally a domain) to SVG.
    Render {
        /// Samples CSV produced by the domain command.
        #[arg(long)]
        samples: PathBuf,
        /// Optional domain JSON whose chart is used for the projection.
        #[arg(long)]
        domain: Option<PathBuf>,
        #[arg(long, default_value_t = 800)]
        width: usize,
        #[arg(long, default_value_t = 800)]
        height: usize,
        /// Comma-separated subset of xi_points,eta_lines,hull,omega_outline.
        #[arg(long, default_value = "xi_points,eta_lines,hull,omega_outline")]
        layers: String,
        /// Coordinate triple i,j,k slicing higher-dimensional samples.
        #[arg(long)]
        slice: Option<String>,
        #[arg(long, default_value = "render.svg")]
        out: PathBuf,
    },
    /// Check the G2 family matrix against the split-octonion product.
    VerifyG2 {
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
    },
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Parse(format!(
            "grid must be lo:hi:count, got {spec:?}"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|e| CliError::Parse(format!("bad grid lo: {e}")))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|e| CliError::Parse(format!("bad grid hi: {e}")))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|e| CliError::Parse(format!("bad grid count: {e}")))?;
    if n < 2 || hi <= lo {
        return Err(CliError::Parse("grid needs hi > lo and count >= 2".into()));
    }
    Ok((0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect())
}

fn parse_sigma(spec: &str) -> Result<Vec<f64>, CliError> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|e| CliError::Parse(format!("bad sigma entry {s:?}: {e}")))
        })
        .collect()
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Other(format!("cannot write {}: {e}", path.display())))
}

fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let mut name = base
        .file_name()
        .map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    name.push_str(suffix);
    base.with_file_name(name)
}

fn cyclic_rep_from_flags(
    family: &Option<String>,
    sigma: &Option<String>,
    t: Option<f64>,
    s: Option<f64>,
) -> Result<Option<Representation>, CliError> {
    let Some(family) = family else {
        return Ok(None);
    };
    let m = match family.as_str() {
        "sp" => {
            let sig = parse_sigma(
                sigma
                    .as_deref()
                    .ok_or_else(|| CliError::Parse("sp family needs --sigma".into()))?,
            )?;
            family_matrix(MatrixFamily::Sp, &sig)?
        }
        "so" => {
            let sig = parse_sigma(
                sigma
                    .as_deref()
                    .ok_or_else(|| CliError::Parse("so family needs --sigma".into()))?,
            )?;
            family_matrix(MatrixFamily::So, &sig)?
        }
        "g2" => {
            let t = t.ok_or_else(|| CliError::Parse("g2 family needs --t".into()))?;
            let s = s.ok_or_else(|| CliError::Parse("g2 family needs --s".into()))?;
            family_matrix(MatrixFamily::G2, &[t, s])?
        }
        other => {
            return Err(CliError::Parse(format!(
                "scan family must be sp, so, or g2; got {other:?}"
            )))
        }
    };
    Ok(Some(Representation::new(
        vec![m],
        format!("{family}-cyclic"),
    )?))
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(w) = cli.workers {
        anosov_core::parallel::set_workers(w);
    }
    let _ = cli.seed;
    match cli.command {
        Command::Spectrum { rep, word, out } => {
            let rep = RepFile::load(&rep.rep)?.to_representation()?;
            let w = Word::parse(&word).map_err(|e| CliError::Parse(e.to_string()))?;
            if w.max_generator() > rep.rank() {
                return Err(CliError::Parse(format!(
                    "word uses generator {} beyond rank {}",
                    w.max_generator(),
                    rep.rank()
                )));
            }
            let s = spectrum(&rep.evaluate(&w)?)?;
            let mut row = String::from("word,");
            row.push_str(
                &(1..=s.dim())
                    .map(|i| format!("modulus_{i}"))
                    .collect::<Vec<_>>()
                    .join(","),
            );
            row.push(',');
            row.push_str(
                &(1..s.dim())
                    .map(|i| format!("gap_{i}"))
                    .collect::<Vec<_>>()
                    .join(","),
            );
            row.push_str(",proximal,top_sign\n");
            row.push_str(&format!("\"{}\"", w.to_string_form()));
            for m in &s.moduli {
                row.push(',');
                row.push_str(&fmt17(*m));
            }
            for g in &s.gaps {
                row.push(',');
                row.push_str(&fmt17(*g));
            }
            row.push_str(&format!(
                ",{},{}\n",
                s.is_proximal(),
                if s.top_sign > 0.0 {
                    "+"
                } else if s.top_sign < 0.0 {
                    "-"
                } else {
                    "0"
                }
            ));
            match out {
                Some(p) => write_text(&p, &row)?,
                None => print!("{row}"),
            }
            Ok(())
        }
        Command::Gap { rep, radius, out } => {
            let rep = RepFile::load(&rep.rep)?.to_representation()?;
            let cert = gap_certificate(&rep, radius)?;
            let mut csv = String::from("word_length,log_top_gap\n");
            for &(l, g) in &cert.points {
                csv.push_str(&format!("{l},{}\n", fmt17(g)));
            }
            write_text(&with_suffix(&out, ".csv"), &csv)?;
            let json = serde_json::json!({
                "slope": cert.slope,
                "intercept": cert.intercept,
                "min_normalized_gap": cert.min_normalized_gap,
                "classes": cert.points.len(),
            });
            write_text(
                &with_suffix(&out, ".json"),
                &(serde_json::to_string_pretty(&json).unwrap() + "\n"),
            )?;
            println!(
                "slope: {}\nintercept: {}\nmin_normalized_gap: {}\nclasses: {}",
                fmt17(cert.slope),
                fmt17(cert.intercept),
                fmt17(cert.min_normalized_gap),
                cert.points.len()
            );
            Ok(())
        }
        Command::Entropy {
            rep,
            radius,
            grid,
            check_scaling,
            d,
            mu,
            theta,
            out,
        } => {
            let grid = parse_grid(&grid)?;
            if check_scaling {
                if d % 2 == 0 || d < 3 {
                    return Err(CliError::Parse("--check-scaling needs odd --d >= 3".into()));
                }
                let base = schottky_sl2(mu, theta)?;
                let lifted = tau_schottky(d, mu, theta)?;
                let matches = scaling_counts_match(&base, &lifted, radius, d, &grid)?;
                println!("counts-match: {matches}");
                return Ok(());
            }
            let rep_path = rep.ok_or_else(|| {
                CliError::Parse("entropy needs --rep (or --check-scaling)".into())
            })?;
            let rep = RepFile::load(&rep_path)?.to_representation()?;
            let report = entropy_estimate(&rep, radius, &grid)?;
            let mut csv = String::from("threshold,count\n");
            for (r, c) in report.thresholds.iter().zip(&report.counts) {
                csv.push_str(&format!("{},{c}\n", fmt17(*r)));
            }
            write_text(&with_suffix(&out, ".csv"), &csv)?;
            let json = serde_json::json!({
                "slope_estimate": report.slope_estimate,
                "bound": report.bound,
                "thresholds": report.thresholds,
                "counts": report.counts,
            });
            write_text(
                &with_suffix(&out, ".json"),
                &(serde_json::to_string_pretty(&json).unwrap() + "\n"),
            )?;
            println!(
                "slope_estimate: {}\nbound: {}",
                fmt17(report.slope_estimate),
                fmt17(report.bound)
            );
            Ok(())
        }
        Command::Scan {
            rep,
            family,
            sigma,
            t,
            s,
            radius,
            k,
            tol,
            out,
        } => {
            let representation = match cyclic_rep_from_flags(&family, &sigma, t, s)? {
                Some(r) => r,
                None => {
                    let path =
                        rep.ok_or_else(|| CliError::Parse("scan needs --rep or --family".into()))?;
                    RepFile::load(&path)?.to_representation()?
                }
            };
            let scan = rigidity_scan(&representation, radius, k)?;
            let mut csv = String::from("word,top_ratio,inner_ratio\n");
            let mut shown = 0;
            for w in &scan.witnesses {
                let mismatch = (w.top_ratio.ln() - w.inner_ratio.ln()).abs();
                if mismatch > tol {
                    csv.push_str(&format!(
                        "\"{}\",{},{}\n",
                        w.word.to_string_form(),
                        fmt17(w.top_ratio),
                        fmt17(w.inner_ratio)
                    ));
                    shown += 1;
                }
            }
            write_text(&with_suffix(&out, ".csv"), &csv)?;
            println!(
                "witnesses: {shown}\nmax_mismatch: {}",
                fmt17(scan.max_mismatch)
            );
            Ok(())
        }
        Command::Domain {
            rep,
            radius,
            min_len,
            out,
        } => {
            let rep = RepFile::load(&rep.rep)?.to_representation()?;
            let result = domain_pipeline(&rep, radius, min_len, &out);
            if let Err(e) = &result {
                // machine-readable diagnostic for the negative-control path
                let diag = serde_json::json!({
                    "error": e.to_string(),
                    "kind": e.kind(),
                });
                let diag_path = with_suffix(&out, ".diag.json");
                let _ = write_text(
                    &diag_path,
                    &(serde_json::to_string_pretty(&diag).unwrap() + "\n"),
                );
                eprintln!("{}", serde_json::to_string(&diag).unwrap());
            }
            result
        }
        Command::Families {
            family,
            d,
            mu,
            theta,
            sigma,
            t,
            s,
            out,
        } => {
            let rep = match family.as_str() {
                "tau" => tau_schottky(d, mu, theta)?,
                "schottky" => schottky_sl2(mu, theta)?,
                "reducible" => reducible_rep(mu, theta)?,
                "doubled" => doubled_rep(mu, theta)?,
                "sp" | "so" | "g2" => cyclic_rep_from_flags(&Some(family.clone()), &sigma, t, s)?
                    .expect("family flags checked"),
                other => {
                    return Err(CliError::Parse(format!(
                        "unknown family {other:?} (tau, schottky, reducible, doubled, sp, so, g2)"
                    )))
                }
            };
            RepFile::from_representation(&rep).save(&out)?;
            println!(
                "wrote {} (d = {}, rank = {})",
                out.display(),
                rep.dim(),
                rep.rank()
            );
            Ok(())
        }
        Command::Render {
            samples,
            domain,
            width,
            height,
            layers,
            slice,
            out,
        } => {
            if !(64..=8192).contains(&width) || !(64..=8192).contains(&height) {
                return Err(CliError::Parse("width/height must be in [64, 8192]".into()));
            }
            let text = std::fs::read_to_string(&samples)
                .map_err(|e| CliError::Parse(format!("cannot read samples: {e}")))?;
            let mut sample_list = samples_from_csv(&text)?;
            let dim = sample_list.first().map_or(3, |s| s.xi.len());
            if dim != 3 {
                let Some(slice) = slice else {
                    return Err(CliError::UnsupportedDimension(dim));
                };
                let idx: Vec<usize> = slice
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse()
                            .map_err(|e| CliError::Parse(format!("bad slice index: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if idx.len() != 3 || idx.iter().any(|&i| i >= dim) {
                    return Err(CliError::Parse("slice needs three in-range indices".into()));
                }
                for s in &mut sample_list {
                    s.xi = idx.iter().map(|&i| s.xi[i]).collect();
                    s.eta = idx.iter().map(|&i| s.eta[i]).collect();
                }
            }
            let chart: Vec<f64> = match domain {
                Some(p) => {
                    let body = BodyFile::load(&p)?;
                    if body.chart.len() == 3 {
                        body.chart
                    } else {
                        mean_eta_chart(&sample_list)
                    }
                }
                None => mean_eta_chart(&sample_list),
            };
            let spec = render::RenderSpec {
                width,
                height,
                layers: layers
                    .split(',')
                    .map(render::Layer::parse)
                    .collect::<Result<Vec<_>, _>>()?,
            };
            let svg = render::render_svg(&sample_list, &chart, &spec)?;
            write_text(&out, &svg)?;
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::VerifyG2 { t, s } => {
            let m = g2_matrix(t, s);
            let ok = verify_g2(&m);
            println!("multiplicative: {ok}");
            let spec = spectrum(&family_matrix(MatrixFamily::G2, &[t, s])?)?;
            println!(
                "moduli: {}",
                spec.moduli
                    .iter()
                    .map(|m| fmt17(*m))
                    .collect::<Vec<_>>()
                    .join(",")
            );
            Ok(())
        }
    }
}

fn mean_eta_chart(samples: &[anosov_core::boundary::BoundarySample]) -> Vec<f64> {
    let d = samples.first().map_or(3, |s| s.eta.len());
    let mut c = vec![0.0; d];
    for s in samples {
        for (ci, ei) in c.iter_mut().zip(&s.eta) {
            *ci += ei;
        }
    }
    if mat::norm(&c) < 1e-12 {
        c = vec![0.0; d];
        c[0] = 1.0;
    }
    mat::unit(&c)
}

/// Exact integer identity between the displacement counts of a Schottky
/// pair and its degree-d pullback, on a tie-free grid.
fn scaling_counts_match(
    base: &Representation,
    lifted: &Representation,
    radius: usize,
    d: usize,
    grid: &[f64],
) -> Result<bool, CliError> {
    use anosov_core::rigidity::class_displacement;
    use anosov_core::wordgroup::{class_scan, DEFAULT_BALL_CAP};
    let cb = class_scan(base, radius, 1, DEFAULT_BALL_CAP)?;
    let cl = class_scan(lifted, radius, 1, DEFAULT_BALL_CAP)?;
    if cb.len() != cl.len() {
        return Ok(false);
    }
    let vb = cb
        .iter()
        .map(|cd| class_displacement(&cd.image, &cd.inverse_image))
        .collect::<Result<Vec<_>, _>>()?;
    let vl = cl
        .iter()
        .map(|cd| class_displacement(&cd.image, &cd.inverse_image))
        .collect::<Result<Vec<_>, _>>()?;
    let factor = (d - 1) as f64;
    for &r0 in grid {
        let mut r = r0;
        while vl.iter().any(|v| (v - r * factor).abs() < 1e-6)
            || vb.iter().any(|v| (v - r).abs() < 1e-6)
        {
            r += 1e-5;
        }
        let n_lift = vl.iter().filter(|&&v| v <= r * factor).count();
        let n_base = vb.iter().filter(|&&v| v <= r).count();
        if n_lift != n_base {
            return Ok(false);
        }
    }
    Ok(true)
}

fn domain_pipeline(
    rep: &Representation,
    radius: usize,
    min_len: usize,
    out: &Path,
) -> Result<(), CliError> {
    let samples = sample_boundary(rep, radius, min_len)?;
    let lifted = lift_boundary(&samples)?;
    write_text(
        &with_suffix(out, ".samples.csv"),
        &samples_to_csv(&lifted.samples),
    )?;
    let (omega, hull) = build_domain(&lifted.samples)?;
    BodyFile::from_body(&omega).save(&with_suffix(out, ".omega.json"))?;
    BodyFile::from_body(&hull).save(&with_suffix(out, ".hull.json"))?;

    // stability diagnostic: largest chart movement of the sampled limit set
    // between the previous radius and this one
    let drift = if radius > min_len {
        match sample_boundary(rep, radius - 1, min_len) {
            Ok(prev) => {
                let drift = lifted
                    .samples
                    .iter()
                    .map(|s| {
                        prev.iter()
                            .map(|p| mat::proj_dist(&p.xi, &s.xi))
                            .fold(f64::INFINITY, f64::min)
                    })
                    .fold(0.0_f64, f64::max);
                Some(drift)
            }
            Err(_) => None,
        }
    } else {
        None
    };
    let summary = serde_json::json!({
        "samples": lifted.samples.len(),
        "dropped_near_tangent": lifted.dropped.len(),
        "min_offdiagonal_pairing": lifted.min_offdiag,
        "omega_proper": omega.is_proper(),
        "hull_points": hull.vrep().len(),
        "radius_drift": drift,
    });
    write_text(
        &with_suffix(out, ".summary.json"),
        &(serde_json::to_string_pretty(&summary).unwrap() + "\n"),
    )?;
    println!(
        "samples: {}\nmin_offdiagonal_pairing: {}\nomega_proper: {}",
        lifted.samples.len(),
        fmt17(lifted.min_offdiag),
        omega.is_proper()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
