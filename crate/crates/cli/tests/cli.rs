//! End-to-end checks of the command-line interface: output shapes, exit
//! codes, determinism, and the SVG structure.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_anosov"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("anosov-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("spawn");
    assert!(
        out.status.success(),
        "command {:?} failed:\n{}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn make_tau3(path: &Path) {
    run_ok(&[
        "families",
        "--family",
        "tau",
        "--d",
        "3",
        "--mu",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
}

#[test]
fn spectrum_of_generator_and_identity() {
    let rep = tmp("tau3.json");
    make_tau3(&rep);
    // generator a sits over diag(2, 1/2): moduli 4, 1, 1/4
    let out = run_ok(&["spectrum", "--rep", rep.to_str().unwrap(), "--word", "a"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("4.0000000000000000e0"), "{text}");
    assert!(text.contains("2.5000000000000000e-1"), "{text}");
    assert!(text.contains("true,+"), "{text}");
    // the empty word and a cancelling word give all-ones moduli
    for w in ["", "aA"] {
        let out = run_ok(&["spectrum", "--rep", rep.to_str().unwrap(), "--word", w]);
        let text = String::from_utf8(out.stdout).unwrap();
        let ones = text.matches("1.0000000000000000e0").count();
        assert!(ones >= 3, "word {w:?}: {text}");
        assert!(text.contains("false"), "identity is not proximal");
    }
}

#[test]
fn spectrum_parse_error_exit_code() {
    let rep = tmp("tau3-err.json");
    make_tau3(&rep);
    let out = bin()
        .args(["spectrum", "--rep", rep.to_str().unwrap(), "--word", "a!b"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // a word beyond the rank is also a parse error
    let out = bin()
        .args(["spectrum", "--rep", rep.to_str().unwrap(), "--word", "az"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gap_on_doubled_rep_is_flat() {
    let rep = tmp("doubled.json");
    run_ok(&[
        "families",
        "--family",
        "doubled",
        "--mu",
        "3",
        "--out",
        rep.to_str().unwrap(),
    ]);
    let base = tmp("gap-doubled");
    let out = run_ok(&[
        "gap",
        "--rep",
        rep.to_str().unwrap(),
        "--radius",
        "4",
        "--out",
        base.to_str().unwrap(),
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("slope: 0.0000000000000000e0"),
        "doubled slope must be exactly flat: {text}"
    );
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp("gap-doubled.json")).unwrap()).unwrap();
    assert_eq!(json["slope"].as_f64().unwrap(), 0.0);
}

#[test]
fn scan_sp_family_reports_the_witness() {
    let base = tmp("scan-sp");
    let out = run_ok(&[
        "scan",
        "--family",
        "sp",
        "--sigma",
        "16,2",
        "--k",
        "1",
        "--out",
        base.to_str().unwrap(),
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("witnesses:"), "{text}");
    let csv = std::fs::read_to_string(tmp("scan-sp.csv")).unwrap();
    assert!(
        csv.contains("8.0000000000000000e0,4.0000000000000000e0"),
        "expected the 8 vs 4 witness row:\n{csv}"
    );
}

#[test]
fn entropy_scaling_check() {
    let out = run_ok(&[
        "entropy",
        "--check-scaling",
        "--d",
        "3",
        "--radius",
        "6",
        "--grid",
        "2:12:6",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("counts-match: true"), "{text}");
}

#[test]
fn domain_pipeline_and_render() {
    let rep = tmp("tau3-dom.json");
    make_tau3(&rep);
    let base = tmp("dom");
    run_ok(&[
        "domain",
        "--rep",
        rep.to_str().unwrap(),
        "--radius",
        "5",
        "--out",
        base.to_str().unwrap(),
    ]);
    let samples_csv = tmp("dom.samples.csv");
    let omega = tmp("dom.omega.json");
    assert!(samples_csv.exists() && omega.exists() && tmp("dom.hull.json").exists());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp("dom.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["omega_proper"], serde_json::Value::Bool(true));
    assert!(summary["min_offdiagonal_pairing"].as_f64().unwrap() > 0.0);

    // render: well-formed XML with one group per requested layer
    let svg_path = tmp("dom.svg");
    run_ok(&[
        "render",
        "--samples",
        samples_csv.to_str().unwrap(),
        "--domain",
        omega.to_str().unwrap(),
        "--out",
        svg_path.to_str().unwrap(),
    ]);
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.ends_with("</svg>\n"));
    for layer in ["xi_points", "eta_lines", "hull", "omega_outline"] {
        assert_eq!(
            svg.matches(&format!("<g id=\"{layer}\">")).count(),
            1,
            "layer {layer}"
        );
    }
    assert_eq!(svg.matches("<g id=").count(), 4);
    // balanced tags
    assert_eq!(svg.matches("<g ").count(), svg.matches("</g>").count());
}

#[test]
fn domain_improper_control_exits_5_with_diagnostic() {
    let rep = tmp("reducible.json");
    run_ok(&[
        "families",
        "--family",
        "reducible",
        "--mu",
        "3",
        "--out",
        rep.to_str().unwrap(),
    ]);
    let base = tmp("dom-bad");
    let out = bin()
        .args([
            "domain",
            "--rep",
            rep.to_str().unwrap(),
            "--radius",
            "5",
            "--out",
            base.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(5),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let diag: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp("dom-bad.diag.json")).unwrap()).unwrap();
    let kind = diag["kind"].as_str().unwrap();
    assert!(
        kind == "improper_body" || kind == "lift_inconsistent",
        "kind {kind}"
    );
    // stderr carries the same machine-readable line
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("\"kind\""), "{stderr}");
}

#[test]
fn reducible_samples_render_collinear() {
    // the boundary image of the block representation is a projective line;
    // every rendered dot must lie on it
    let rep = tmp("reducible-r.json");
    run_ok(&[
        "families",
        "--family",
        "reducible",
        "--mu",
        "3",
        "--out",
        rep.to_str().unwrap(),
    ]);
    let base = tmp("dom-line");
    let _ = bin()
        .args([
            "domain",
            "--rep",
            rep.to_str().unwrap(),
            "--radius",
            "5",
            "--out",
            base.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    // even though the domain fails, samples are still written
    let csv_path = tmp("dom-line.samples.csv");
    if csv_path.exists() {
        let text = std::fs::read_to_string(&csv_path).unwrap();
        for line in text.lines().skip(1) {
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() >= 4 {
                let x3: f64 = parts[3].parse().unwrap();
                assert!(x3.abs() < 1e-6, "sample off the line: {line}");
            }
        }
    }
}

#[test]
fn ball_budget_exit_code() {
    let rep = tmp("tau3-budget.json");
    make_tau3(&rep);
    // a radius-20 rank-2 ball has ~5e9 words, far over the element cap
    let out = bin()
        .args([
            "gap",
            "--rep",
            rep.to_str().unwrap(),
            "--radius",
            "20",
            "--out",
            tmp("budget").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn verify_g2_command() {
    let out = run_ok(&["verify-g2", "--t", "1", "--s", "0.5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("multiplicative: true"), "{text}");
    assert!(text.contains("moduli:"), "{text}");
}

#[test]
fn outputs_are_deterministic() {
    let rep = tmp("tau3-det.json");
    make_tau3(&rep);
    let b1 = tmp("det1");
    let b2 = tmp("det2");
    for (base, workers) in [(&b1, "1"), (&b2, "4")] {
        run_ok(&[
            "gap",
            "--rep",
            rep.to_str().unwrap(),
            "--radius",
            "5",
            "--workers",
            workers,
            "--out",
            base.to_str().unwrap(),
        ]);
    }
    let c1 = std::fs::read(tmp("det1.csv")).unwrap();
    let c2 = std::fs::read(tmp("det2.csv")).unwrap();
    assert_eq!(c1, c2, "CSV output depends on worker count");
    let j1 = std::fs::read(tmp("det1.json")).unwrap();
    let j2 = std::fs::read(tmp("det2.json")).unwrap();
    assert_eq!(j1, j2, "JSON output depends on worker count");
}

#[test]
fn render_empty_samples_is_valid_svg() {
    let csv = tmp("empty.csv");
    std::fs::write(&csv, "word,xi_0,xi_1,xi_2,eta_0,eta_1,eta_2,lifted\n").unwrap();
    let svg_path = tmp("empty.svg");
    run_ok(&[
        "render",
        "--samples",
        csv.to_str().unwrap(),
        "--out",
        svg_path.to_str().unwrap(),
    ]);
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg.matches("<g id=").count(), 4);
    assert_eq!(svg.matches("<circle").count(), 0);
}

#[test]
fn render_rejects_unsupported_dimension() {
    // d = 4 samples without a slice: exit 6
    let csv = tmp("d4.csv");
    std::fs::write(
        &csv,
        "word,xi_0,xi_1,xi_2,xi_3,eta_0,eta_1,eta_2,eta_3,lifted\n\
         a,1.0,0.0,0.0,0.0,0.0,0.0,0.0,1.0,false\n",
    )
    .unwrap();
    let out = bin()
        .args([
            "render",
            "--samples",
            csv.to_str().unwrap(),
            "--out",
            tmp("d4.svg").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(6));
    // with a slice it renders
    run_ok(&[
        "render",
        "--samples",
        csv.to_str().unwrap(),
        "--slice",
        "0,1,2",
        "--out",
        tmp("d4-sliced.svg").to_str().unwrap(),
    ]);
}
