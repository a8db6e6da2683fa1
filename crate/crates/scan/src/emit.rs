//! Bit-stable CSV and JSON emission.
//!
//! Field order is fixed, rows are sorted by modulus (scans already produce
//! them that way), and floats carry 12 significant digits in CSV. JSON
//! reports embed the full configuration, tool version, and threshold-rule
//! tags, and parse back equal to the in-memory report.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::baseline::BaselineReport;
use crate::conditions::ConditionsReport;
use crate::corollary3::Corollary3Report;
use crate::density::DensityCurve;
use crate::ford::DivisorDensityReport;
use crate::matthews::MatthewsReport;
use crate::report::FiveOrderRow;
use crate::theorem1::Theorem1Report;
use crate::theorem2::Theorem2Report;
use crate::theorem4::Theorem4Report;
use crate::ScanError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

impl OutputFormat {
    fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }
    fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "both" => Ok(OutputFormat::Both),
            other => Err(format!("unknown format {other:?} (expected csv|json|both)")),
        }
    }
}

/// 12 significant digits, scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.11e}")
}

fn write_file(path: PathBuf, contents: String) -> Result<PathBuf, ScanError> {
    fs::write(&path, contents)?;
    Ok(path)
}

fn write_json<T: Serialize>(dir: &Path, stem: &str, value: &T) -> Result<PathBuf, ScanError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_file(dir.join(format!("{stem}_report.json")), text)
}

fn density_csv(curve: &DensityCurve) -> String {
    let mut out = String::from("bucket_lo,bucket_hi,population,exceptions,fraction\n");
    for b in &curve.buckets {
        let fraction = if b.population == 0 {
            0.0
        } else {
            b.exceptions as f64 / b.population as f64
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            b.lo,
            b.hi,
            b.population,
            b.exceptions,
            fmt_f64(fraction)
        ));
    }
    out
}

fn five_order_csv(rows: &[FiveOrderRow]) -> String {
    let mut out = String::from("modulus,ord_a,ord_b,ord_ab,ord_a2b,ord_ab2,threshold,max_ord\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.modulus,
            r.orders[0],
            r.orders[1],
            r.orders[2],
            r.orders[3],
            r.orders[4],
            fmt_f64(r.threshold),
            r.max_order
        ));
    }
    out
}

fn ensure_dir(dir: &Path) -> Result<(), ScanError> {
    fs::create_dir_all(dir)?;
    Ok(())
}

pub fn emit_theorem1(
    report: &Theorem1Report,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, ScanError> {
    ensure_dir(dir)?;
    let mut files = Vec::new();
    if format.json() {
        files.push(write_json(dir, &report.scan, report)?);
    }
    if format.csv() {
        files.push(write_file(
            dir.join(format!("{}_exceptions.csv", report.scan)),
            five_order_csv(&report.exceptions),
        )?);
        files.push(write_file(
            dir.join(format!("{}_density.csv", report.scan)),
            density_csv(&report.curve),
        )?);
    }
    Ok(files)
}

pub fn emit_theorem4(
    report: &Theorem4Report,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, ScanError> {
    ensure_dir(dir)?;
    let mut files = Vec::new();
    if format.json() {
        files.push(write_json(dir, &report.scan, report)?);
    }
    if format.csv() {
        files.push(write_file(
            dir.join(format!("{}_exceptions.csv", report.scan)),
            five_order_csv(&report.exceptions),
        )?);
        files.push(write_file(
            dir.join(format!("{}_density.csv", report.scan)),
            density_csv(&report.curve),
        )?);
    }
    Ok(files)
}

pub fn emit_theorem2(
    report: &Theorem2Report,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, ScanError> {
    ensure_dir(dir)?;
    let mut files = Vec::new();
    if format.json() {
        files.push(write_json(dir, &report.scan, report)?);
    }
    if format.csv() {
        let mut out = String::from("modulus");
        for base in &report.config.bases {
            out.push_str(&format!(",ord_{base}"));
        }
        out.push_str(",threshold,max_ord\n");
        for r in &report.exceptions {
            out.push_str(&r.modulus.to_string());
            for d in &r.base_orders {
                out.push_str(&format!(",{d}"));
            }
            out.push_str(&format!(",{},{}\n", fmt_f64(r.threshold), r.max_order));
        }
        files.push(write_file(
            dir.join(format!("{}_exceptions.csv", report.scan)),
            out,
        )?);
        files.push(write_file(
            dir.join(format!("{}_density.csv", report.scan)),
            density_csv(&report.curve),
        )?);
    }
    Ok(files)
}

pub fn emit_conditions(
    report: &ConditionsReport,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, ScanError> {
    ensure_dir(dir)?;
    let mut files = Vec::new();
    if format.json() {
        files.push(write_json(dir, &report.scan, report)?);
    }
    if format.csv() {
        for (name, curve) in [
            ("smooth", &report.smooth),
            ("squarefree", &report.squarefree),
            ("orders", &report.orders),
        ] {
            files.push(write_file(
                dir.join(format!("{}_{name}_density.csv", report.scan)),
                density_csv(curve),
            )?);
        }
    }
    Ok(files)
}

pub fn emit_matthews(
    report: &MatthewsReport,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, ScanError> {
    ensure_dir(dir)?;
    let mut files = Vec::new();
    if format.json() {
        files.push(write_json(dir, &report.scan, report)?);
    }
    if format.csv() {
        let mut out = String::from("y,count\n");
        for p in &report.points {
            out.push_str(&format!("{},{}\n", fmt_f64(p.y), p.count));
        }
        files.push(write_file(
            dir.join(format!("{}_counts.csv", report.scan)),
            out,
        )?);
    }
    Ok(files)
}

pub fn emit_corollary3(
    report: &Corollary3Report,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, ScanError> {
    ensure_dir(dir)?;
    let mut files = Vec::new();
    if format.json() {
        files.push(write_json(dir, &report.scan, report)?);
    }
    if format.csv() {
        let mut out = String::from("modulus,witness_a,m,n\n");
        for w in &report.witnesses {
            out.push_str(&format!("{},{},{},{}\n", w.modulus, w.value, w.m, w.n));
        }
        files.push(write_file(
            dir.join(format!("{}_witnesses.csv", report.scan)),
            out,
        )?);
        let mut out = String::from("modulus,ord_2,ord_3,ord_5,ord_7,ord_11,threshold,max_ord\n");
        for r in &report.exceptions {
            out.push_str(&r.modulus.to_string());
            for d in &r.base_orders {
                out.push_str(&format!(",{d}"));
            }
            out.push_str(&format!(",{},{}\n", fmt_f64(r.threshold), r.max_order));
        }
        files.push(write_file(
            dir.join(format!("{}_exceptions.csv", report.scan)),
            out,
        )?);
        files.push(write_file(
            dir.join(format!("{}_density.csv", report.scan)),
            density_csv(&report.curve),
        )?);
    }
    Ok(files)
}

pub fn emit_baseline(
    report: &BaselineReport,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, ScanError> {
    ensure_dir(dir)?;
    let mut files = Vec::new();
    if format.json() {
        files.push(write_json(dir, &report.scan, report)?);
    }
    if format.csv() {
        files.push(write_file(
            dir.join(format!("{}_density.csv", report.scan)),
            density_csv(&report.curve),
        )?);
    }
    Ok(files)
}

pub fn emit_divisor_density(
    report: &DivisorDensityReport,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, ScanError> {
    ensure_dir(dir)?;
    let mut files = Vec::new();
    if format.json() || format.csv() {
        files.push(write_json(dir, &report.scan, report)?);
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScanConfig;
    use crate::runner::RunnerOpts;

    #[test]
    fn fmt_f64_has_twelve_significant_digits() {
        assert_eq!(fmt_f64(0.75), "7.50000000000e-1");
        assert_eq!(fmt_f64(123.456), "1.23456000000e2");
    }

    #[test]
    fn five_order_schema_is_exact() {
        let rows = vec![FiveOrderRow {
            modulus: 11,
            orders: [10, 5, 10, 5, 10],
            threshold: 0.5,
            threshold_variant: None,
            max_order: 10,
        }];
        let csv = five_order_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "modulus,ord_a,ord_b,ord_ab,ord_a2b,ord_ab2,threshold,max_ord"
        );
        assert_eq!(
            lines.next().unwrap(),
            "11,10,5,10,5,10,5.00000000000e-1,10"
        );
        assert!(lines.next().is_none());
        // Empty list leaves the header only.
        assert_eq!(
            five_order_csv(&[]).lines().count(),
            1
        );
    }

    #[test]
    fn theorem1_report_round_trips_and_emits() {
        let dir = tempfile::tempdir().unwrap();
        let config = ScanConfig::new(500, vec![2, 3]);
        let report =
            crate::theorem1::scan_theorem1(2, 3, &config, &RunnerOpts::with_threads(1)).unwrap();
        let parsed: Theorem1Report =
            serde_json::from_str(&serde_json::to_string_pretty(&report).unwrap()).unwrap();
        assert_eq!(parsed, report);
        let files = emit_theorem1(&report, dir.path(), OutputFormat::Both).unwrap();
        assert_eq!(files.len(), 3);
        let density = fs::read_to_string(dir.path().join("scan-thm1_density.csv")).unwrap();
        assert!(density.starts_with("bucket_lo,bucket_hi,population,exceptions,fraction\n"));
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let config = ScanConfig::new(500, vec![2, 3]);
        let report =
            crate::theorem1::scan_theorem1(2, 3, &config, &RunnerOpts::with_threads(1)).unwrap();
        let err = emit_theorem1(
            &report,
            Path::new("/proc/nonexistent-dir/for-sure"),
            OutputFormat::Both,
        )
        .unwrap_err();
        assert!(matches!(err, ScanError::Io(_)));
    }
}
