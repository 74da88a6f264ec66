//! `report.json` and `profile.csv` writers.

use std::io::Write;
use std::path::{Path, PathBuf};

use bmoalab::spaces::VanishingProfile;
use serde::Serialize;
use serde_json::Value;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
}

impl From<&bmoalab::Error> for ErrorInfo {
    fn from(e: &bmoalab::Error) -> Self {
        use bmoalab::Error::*;
        let kind = match e {
            Parameter(_) => "parameter",
            Domain { .. } => "domain",
            NotSelfMap { .. } => "not-self-map",
            Integrand { .. } => "integrand",
            Divergence(_) => "divergence",
            Containment { .. } => "containment",
            StepUnderflow { .. } => "step-underflow",
            InvalidGenerator(_) => "invalid-generator",
            InvalidRegion { .. } => "invalid-region",
            HigherOrderZero(_) => "higher-order-zero",
            Path(_) => "path",
        };
        ErrorInfo { kind, message: e.to_string() }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub tool_version: &'static str,
    pub command: &'static str,
    pub config: Value,
    /// Seconds.
    pub wall_time: f64,
    pub results: Value,
    pub warnings: Vec<String>,
    pub error: Option<ErrorInfo>,
}

pub fn write_report(dir: &Path, report: &Report) -> std::io::Result<PathBuf> {
    let path = dir.join("report.json");
    let mut text = serde_json::to_string_pretty(report).map_err(std::io::Error::other)?;
    text.push('\n');
    std::fs::write(&path, text)?;
    Ok(path)
}

/// Seventeen significant digits.
fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_profiles(path: &Path, profiles: &[VanishingProfile]) -> std::io::Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    w.write_all(b"center_angle,k,param,value\r\n")?;
    for p in profiles {
        let angle = p.center_angle.map(sci).unwrap_or_default();
        for (k, param, value) in p.rows() {
            write!(w, "{angle},{k},{},{}\r\n", sci(param), sci(value))?;
        }
    }
    w.flush()
}

/// First set to `profile.csv`, later sets to `profile-<name>.csv`.
pub fn write_profile_sets(dir: &Path, sets: &[(String, Vec<VanishingProfile>)]) -> std::io::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for (i, (name, profiles)) in sets.iter().enumerate() {
        let file = if i == 0 { "profile.csv".to_string() } else { format!("profile-{name}.csv") };
        let path = dir.join(file);
        write_profiles(&path, profiles)?;
        out.push(path);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let p = VanishingProfile::new("ray", vec![2, 3, 4], vec![0.25, 0.125, 0.0625], vec![1.0, 0.5, 0.25], vec![0.0; 3])
            .with_angle(0.5);
        let dir = std::env::temp_dir().join(format!("bmoalab-csv-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("p.csv");
        write_profiles(&path, &[p]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.split("\r\n").collect();
        assert_eq!(lines[0], "center_angle,k,param,value");
        assert_eq!(lines[1], "5.0000000000000000e-1,2,2.5000000000000000e-1,1.0000000000000000e0");
        assert_eq!(lines.len(), 5);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
