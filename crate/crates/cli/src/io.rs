//! File formats: representation JSON, convex-body JSON, and the boundary
//! sample CSV. All floating point output is printed at 17 significant
//! digits so identical inputs give byte-identical files.

use std::collections::BTreeMap;
use std::path::Path;

use anosov_core::boundary::BoundarySample;
use anosov_core::hilbert::ConvexBody;
use anosov_core::mat::Mat;
use anosov_core::projlin::ProjMat;
use anosov_core::wordgroup::{Representation, Word};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// 17 significant digits, fixed locale.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// On-disk representation: single-letter generator names mapped to flat
/// row-major d x d matrices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepFile {
    pub d: usize,
    pub generators: BTreeMap<String, Vec<f64>>,
    #[serde(default)]
    pub label: String,
}

impl RepFile {
    pub fn from_representation(rep: &Representation) -> RepFile {
        let mut generators = BTreeMap::new();
        for (i, g) in rep.generators().iter().enumerate() {
            let name = ((b'a' + i as u8) as char).to_string();
            generators.insert(name, g.mat().data().to_vec());
        }
        RepFile {
            d: rep.dim(),
            generators,
            label: rep.label().to_string(),
        }
    }

    pub fn to_representation(&self) -> Result<Representation, CliError> {
        if self.generators.is_empty() {
            return Err(CliError::Parse("no generators in file".into()));
        }
        // letters must be consecutive lowercase starting at 'a'
        let mut gens = Vec::new();
        for (i, (name, data)) in self.generators.iter().enumerate() {
            let want = ((b'a' + i as u8) as char).to_string();
            if *name != want {
                return Err(CliError::Parse(format!(
                    "generator names must be consecutive lowercase letters; expected {want}, found {name}"
                )));
            }
            if data.len() != self.d * self.d {
                return Err(CliError::Parse(format!(
                    "generator {name} has {} entries, expected {}",
                    data.len(),
                    self.d * self.d
                )));
            }
            let m = Mat::from_row_major(self.d, self.d, data);
            gens.push(ProjMat::normalize(&m).map_err(|e| CliError::Parse(e.to_string()))?);
        }
        Representation::new(gens, self.label.clone()).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<RepFile, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Parse(format!("bad representation file: {e}")))
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let text =
            serde_json::to_string_pretty(self).map_err(|e| CliError::Other(e.to_string()))?;
        std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Other(format!("cannot write {}: {e}", path.display())))
    }
}

/// On-disk convex body: half-space covectors, point sample, chart.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BodyFile {
    pub d: usize,
    pub hrep: Vec<Vec<f64>>,
    pub vrep: Vec<Vec<f64>>,
    pub chart: Vec<f64>,
}

impl BodyFile {
    pub fn from_body(body: &ConvexBody) -> BodyFile {
        BodyFile {
            d: body.dim(),
            hrep: body.hrep().to_vec(),
            vrep: body.vrep().to_vec(),
            chart: body.chart().to_vec(),
        }
    }

    pub fn load(path: &Path) -> Result<BodyFile, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("bad body file: {e}")))
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let text =
            serde_json::to_string_pretty(self).map_err(|e| CliError::Other(e.to_string()))?;
        std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Other(format!("cannot write {}: {e}", path.display())))
    }
}

/// Samples CSV: word, xi components, eta components, lifted flag.
pub fn samples_to_csv(samples: &[BoundarySample]) -> String {
    let d = samples.first().map_or(0, |s| s.xi.len());
    let mut out = String::from("word");
    for i in 0..d {
        out.push_str(&format!(",xi_{i}"));
    }
    for i in 0..d {
        out.push_str(&format!(",eta_{i}"));
    }
    out.push_str(",lifted\n");
    for s in samples {
        out.push_str(&s.word.to_string_form());
        for v in &s.xi {
            out.push(',');
            out.push_str(&fmt17(*v));
        }
        for v in &s.eta {
            out.push(',');
            out.push_str(&fmt17(*v));
        }
        out.push(',');
        out.push_str(if s.lifted { "true" } else { "false" });
        out.push('\n');
    }
    out
}

pub fn samples_from_csv(text: &str) -> Result<Vec<BoundarySample>, CliError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Parse("empty samples file".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 4 || cols[0] != "word" || cols[cols.len() - 1] != "lifted" {
        return Err(CliError::Parse("bad samples header".into()));
    }
    let d = (cols.len() - 2) / 2;
    let mut samples = Vec::new();
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 2 * d + 2 {
            return Err(CliError::Parse(format!("bad sample row {}", ln + 2)));
        }
        let word = Word::parse(parts[0]).map_err(|e| CliError::Parse(e.to_string()))?;
        let parse = |s: &str| -> Result<f64, CliError> {
            s.parse()
                .map_err(|e| CliError::Parse(format!("bad number {s:?}: {e}")))
        };
        let xi = parts[1..1 + d]
            .iter()
            .map(|s| parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        let eta = parts[1 + d..1 + 2 * d]
            .iter()
            .map(|s| parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        let lifted = parts[1 + 2 * d] == "true";
        samples.push(BoundarySample {
            word,
            xi,
            eta,
            lifted,
        });
    }
    Ok(samples)
}
