//! Line-oriented CSV reports with a `#` header block echoing the configuration.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use gls_core::SimpleFunctionF64;

use crate::config::CampaignConfig;
use crate::HarnessError;

pub const TRIALS_FILE: &str = "trials.csv";
pub const SUMMARY_FILE: &str = "summary.csv";

/// Per-trial table, summary, and any pairs worth keeping as reproducible files.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub header: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub summary: Vec<(String, String)>,
    pub pairs: Vec<(String, SimpleFunctionF64)>,
    pub violations: usize,
    /// Whether violations decide the exit status.
    pub asserting: bool,
    pub wall_time_s: f64,
}

impl VerificationReport {
    pub fn new(config: &CampaignConfig, columns: Vec<&'static str>) -> Self {
        Self {
            header: config.echo(),
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
            pairs: Vec::new(),
            violations: 0,
            asserting: false,
            wall_time_s: 0.0,
        }
    }

    fn header_block(&self) -> String {
        let mut out = String::from("# gls report\n");
        for (k, v) in &self.header {
            let _ = writeln!(out, "# {k}={v}");
        }
        out
    }

    /// Deterministic per-trial body: header block, column line, rows.
    pub fn trials_csv(&self) -> String {
        let mut out = self.header_block();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Summary as `key,value` lines; the last line carries the wall time.
    pub fn summary_csv(&self) -> String {
        let mut out = self.header_block();
        out.push_str("key,value\n");
        for (k, v) in &self.summary {
            let _ = writeln!(out, "{k},{v}");
        }
        let _ = writeln!(out, "wall_time_s,{:.6}", self.wall_time_s);
        out
    }

    pub fn summary_value(&self, key: &str) -> Option<&str> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Writes `trials.csv`, `summary.csv` and one function file per stored pair member.
    pub fn write_to(&self, dir: &Path) -> Result<(), HarnessError> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(TRIALS_FILE), self.trials_csv())?;
        fs::write(dir.join(SUMMARY_FILE), self.summary_csv())?;
        for (name, f) in &self.pairs {
            let mut text = String::from("# weight value\n");
            text.push_str(&f.to_file_string());
            fs::write(dir.join(format!("{name}.txt")), text)?;
        }
        Ok(())
    }
}
