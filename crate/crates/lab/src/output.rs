//! CSV files and the run manifest.
//!
//! CSV: header line, comma separated, LF endings, floats as `{:.16e}`
//! (17 significant digits, parses back to the same `f64`).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use fschro_core::{ComplexField, ObservableRecord};
use sha2::{Digest, Sha256};

use crate::error::{LabError, Result};

pub const DENSITY_HEADER: &str = "x,re_u,im_u,density";
pub const ENERGY_HEADER: &str = "t,mass,energy,hs_part,potential_part";
pub const SWEEP_HEADER: &str = "epsilon,sup_norm_p,final_mass,final_energy,final_composite_norm,window_mass,n_maxima";

pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Rows of floats under `header`.
pub fn table<'a>(header: &str, rows: impl IntoIterator<Item = &'a [f64]>) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| float(*v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn density_csv(u: &ComplexField) -> String {
    let grid = u.grid();
    let rows: Vec<[f64; 4]> = u
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| [grid.node(j), v.re, v.im, v.norm_sqr()])
        .collect();
    table(DENSITY_HEADER, rows.iter().map(|r| &r[..]))
}

pub fn energy_csv(records: &[ObservableRecord]) -> String {
    let rows: Vec<[f64; 5]> = records
        .iter()
        .map(|r| [r.t, r.mass, r.energy, r.hs_part, r.potential_part])
        .collect();
    table(ENERGY_HEADER, rows.iter().map(|r| &r[..]))
}

/// `density_t0.0428_eps0.05.csv`
pub fn density_file_name(t: f64, epsilon: f64) -> String {
    format!("density_t{t:.4}_eps{epsilon}.csv")
}

pub fn energy_file_name(epsilon: f64) -> String {
    format!("energy_eps{epsilon}.csv")
}

/// Collects written files under one output directory.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(|e| LabError::io(&root, e))?;
        Ok(Self {
            root,
            written: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Writes `contents` to `root/relative`, creating parent directories.
    pub fn write(&mut self, relative: impl AsRef<Path>, contents: &str) -> Result<PathBuf> {
        let path = self.root.join(relative.as_ref());
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| LabError::io(parent, e))?;
        }
        fs::write(&path, contents).map_err(|e| LabError::io(&path, e))?;
        self.written.push(relative.as_ref().to_path_buf());
        Ok(path)
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    /// Writes `manifest.txt`: config hash, canonical config, creation time
    /// and the SHA-256 of every file written so far.
    pub fn write_manifest(&mut self, command: &str, config_hash: &str, canonical_config: &str) -> Result<PathBuf> {
        let created = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let mut text = String::new();
        let _ = writeln!(text, "command = {command}");
        let _ = writeln!(text, "config_hash = {config_hash}");
        let _ = writeln!(text, "created_unix = {created}");
        text.push_str("\n[config]\n");
        text.push_str(canonical_config);
        text.push_str("\n[files]\n");
        for relative in &self.written {
            let path = self.root.join(relative);
            let bytes = fs::read(&path).map_err(|e| LabError::io(&path, e))?;
            let _ = writeln!(text, "{}  {}", hex::encode(Sha256::digest(&bytes)), relative.display());
        }
        let path = self.root.join("manifest.txt");
        fs::write(&path, text).map_err(|e| LabError::io(&path, e))?;
        Ok(path)
    }
}
