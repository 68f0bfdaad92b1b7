//! On-disk cache of instance reports, keyed by a hash of the instance and
//! the options that influence the result.

use std::path::PathBuf;

use sha2::{Digest, Sha256};

use crate::io::{format_graph, format_poset};
use crate::report::{InstanceReport, ReportOptions, SCHEMA};
use polycay::{Graph, Poset};

pub const CACHE_ENV: &str = "POLYCAY_CACHE_DIR";

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(Self::new)
    }

    pub fn key(p: &Poset, g: &Graph, opts: &ReportOptions) -> String {
        let mut h = Sha256::new();
        h.update(SCHEMA.as_bytes());
        h.update(format_poset(p).as_bytes());
        h.update(format_graph(g).as_bytes());
        h.update(
            format!(
                "kmax={:?} toric={} points={} monomials={}",
                opts.kmax, opts.toric_degree, opts.limits.max_points, opts.limits.max_monomials
            )
            .as_bytes(),
        );
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored report, if present and readable.
    pub fn get(&self, key: &str) -> Option<InstanceReport> {
        let text = std::fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn put(&self, key: &str, report: &InstanceReport) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let mut stored = report.clone();
        stored.timings_ms = None;
        let text = serde_json::to_string(&stored).map_err(std::io::Error::other)?;
        let tmp = self.dir.join(format!("{key}.tmp"));
        std::fs::write(&tmp, text)?;
        std::fs::rename(tmp, self.path(key))
    }
}
