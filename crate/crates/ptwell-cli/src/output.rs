//! CSV and manifest serialization. Floats carry 12 significant digits,
//! newlines are LF, and nothing in any output depends on wall-clock time or
//! scheduling, so repeated runs are byte-identical.

use crate::CliError;
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

/// 12 significant digits, locale-free.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn fmt_opt_f64(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// A CSV table under construction.
pub struct Csv {
    lines: Vec<String>,
    columns: usize,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        Self {
            lines: vec![header.to_string()],
            columns: header.split(',').count(),
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        debug_assert_eq!(fields.len(), self.columns);
        self.lines.push(fields.join(","));
    }

    pub fn rows(&self) -> usize {
        self.lines.len() - 1
    }

    pub fn write_to(&self, path: &Path) -> Result<(), CliError> {
        let mut data = self.lines.join("\n");
        data.push('\n');
        write_bytes(path, data.as_bytes())
    }

    pub fn print(&self) {
        let mut out = std::io::stdout().lock();
        for line in &self.lines {
            let _ = writeln!(out, "{line}");
        }
    }
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, bytes)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Machine-readable run record, written next to the data files on success
/// and on partial failure. Field order is fixed and no timestamps are
/// included, keeping reruns byte-identical.
#[derive(Serialize)]
pub struct Manifest {
    pub artifact: ArtifactInfo,
    pub command: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub seeds: Seeds,
    pub tolerances: Tolerances,
    pub outputs: Vec<OutputFile>,
    pub notes: Vec<String>,
}

#[derive(Serialize)]
pub struct ArtifactInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Serialize)]
pub struct Seeds {
    pub census_rng: u64,
}

#[derive(Serialize)]
pub struct Tolerances {
    pub newton_residual: f64,
    pub state_residual: f64,
    pub im_mu: f64,
    pub pt_defect: f64,
    pub bdg_stability: f64,
    pub ep_bisection: f64,
}

#[derive(Serialize)]
pub struct OutputFile {
    pub file: String,
    pub rows: usize,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Self {
            artifact: ArtifactInfo {
                name: "ptwell",
                version: env!("CARGO_PKG_VERSION"),
            },
            command: command.to_string(),
            parameters: BTreeMap::new(),
            seeds: Seeds {
                census_rng: ptwell::nonlinear::CensusConfig::default().rng_seed,
            },
            tolerances: Tolerances {
                newton_residual: 1e-12,
                state_residual: ptwell::model::STATE_RESIDUAL_TOL,
                im_mu: ptwell::spectrum::IM_TOL,
                pt_defect: ptwell::spectrum::PT_DEFECT_TOL,
                bdg_stability: ptwell::stability::STABILITY_TOL,
                ep_bisection: ptwell::spectrum::EP_BISECTION_TOL,
            },
            outputs: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn param_f64(&mut self, key: &str, value: f64) -> &mut Self {
        self.parameters
            .insert(key.to_string(), serde_json::json!(value));
        self
    }

    pub fn param_usize(&mut self, key: &str, value: usize) -> &mut Self {
        self.parameters
            .insert(key.to_string(), serde_json::json!(value));
        self
    }

    pub fn param_list(&mut self, key: &str, values: &[f64]) -> &mut Self {
        self.parameters
            .insert(key.to_string(), serde_json::json!(values));
        self
    }

    pub fn output(&mut self, path: &Path, rows: usize) -> &mut Self {
        // record the name relative to the manifest so reruns into different
        // directories stay byte-identical
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        self.outputs.push(OutputFile { file: name, rows });
        self
    }

    pub fn note(&mut self, text: String) -> &mut Self {
        self.notes.push(text);
        self
    }

    /// Writes `manifest.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join("manifest.json");
        let mut data = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Io(format!("manifest serialization: {e}")))?;
        data.push('\n');
        write_bytes(&path, data.as_bytes())?;
        Ok(path)
    }
}

/// Directory that holds an output file, for manifest placement.
pub fn parent_dir(path: &Path) -> PathBuf {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}
