use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

use crate::config::Units;

/// The one place a run writes files. Each artifact is written to a
/// temporary sibling and renamed, so a reader never sees a partial file.
pub struct OutputDir {
    root: PathBuf,
}

impl OutputDir {
    pub fn create(root: &Path) -> anyhow::Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("creating output directory {}", root.display()))?;
        Ok(Self { root: root.to_path_buf() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write_bytes(&self, name: &str, bytes: &[u8]) -> anyhow::Result<PathBuf> {
        let target = self.path(name);
        let tmp = self.path(&format!(".{name}.tmp"));
        fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
        fs::rename(&tmp, &target).with_context(|| format!("renaming to {}", target.display()))?;
        Ok(target)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> anyhow::Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_bytes(name, text.as_bytes())
    }

    /// `R1,R2` header, one row per vertex.
    pub fn write_vertices_csv(&self, name: &str, vertices: &[[f64; 2]]) -> anyhow::Result<PathBuf> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["R1", "R2"])?;
        for v in vertices {
            w.write_record([v[0].to_string(), v[1].to_string()])?;
        }
        let bytes = w.into_inner().context("flushing csv")?;
        self.write_bytes(name, &bytes)
    }
}

pub fn scale_points(points: &[[f64; 2]], units: Units) -> Vec<[f64; 2]> {
    let k = units.scale();
    points.iter().map(|p| [p[0] * k, p[1] * k]).collect()
}
