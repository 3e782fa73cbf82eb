//! JSON and CSV file formats. Files always hold `f64` values.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::continuity::ExperimentRecord;
use crate::convex::Polytope;
use crate::error::{Error, Result};
use crate::gaussian::{Atom, SphereMeasure};
use crate::scalar::{Real, Vec3};
use crate::solver::{SolverReport, TraceEntry};

fn vector<T: Real>(dim: usize, coords: &[f64], index: usize) -> Result<Vec3<T>> {
    if coords.len() != dim {
        return Err(Error::DimensionMismatch { left: dim, right: coords.len() });
    }
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let cast: Vec<T> = coords.iter().map(|c| T::lit(*c)).collect();
    Vec3::from_slice(&cast).ok_or(Error::UnsupportedDimension(dim))
}

fn coords<T: Real>(v: Vec3<T>, dim: usize) -> Vec<f64> {
    v.to_vec(dim).into_iter().map(|c| c.to_f64_lossy()).collect()
}

/// `{"dim": n, "normals": [[...], ...], "support_numbers": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyFile {
    pub dim: usize,
    pub normals: Vec<Vec<f64>>,
    pub support_numbers: Vec<f64>,
}

impl BodyFile {
    pub fn from_polytope<T: Real>(body: &Polytope<T>) -> Self {
        Self {
            dim: body.dim(),
            normals: body.normals().iter().map(|u| coords(*u, body.dim())).collect(),
            support_numbers: body.support_numbers().iter().map(|h| h.to_f64_lossy()).collect(),
        }
    }

    /// Builds the Wulff shape; normals must be unit vectors.
    pub fn to_polytope<T: Real>(&self) -> Result<Polytope<T>> {
        if self.normals.len() != self.support_numbers.len() {
            return Err(Error::InvalidInput(format!(
                "{} normals but {} support numbers",
                self.normals.len(),
                self.support_numbers.len()
            )));
        }
        let normals = self.normals.iter().enumerate().map(|(i, c)| vector(self.dim, c, i)).collect::<Result<_>>()?;
        let h = self.support_numbers.iter().map(|h| T::lit(*h)).collect();
        Polytope::wulff(self.dim, normals, h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomFile {
    pub u: Vec<f64>,
    pub mass: f64,
}

/// `{"dim": n, "atoms": [{"u": [...], "mass": m}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    pub dim: usize,
    pub atoms: Vec<AtomFile>,
}

impl MeasureFile {
    pub fn from_measure<T: Real>(mu: &SphereMeasure<T>) -> Self {
        Self {
            dim: mu.dim(),
            atoms: mu
                .atoms()
                .iter()
                .map(|a| AtomFile { u: coords(a.direction, mu.dim()), mass: a.mass.to_f64_lossy() })
                .collect(),
        }
    }

    pub fn to_measure<T: Real>(&self) -> Result<SphereMeasure<T>> {
        let atoms = self
            .atoms
            .iter()
            .enumerate()
            .map(|(i, a)| Ok(Atom { direction: vector(self.dim, &a.u, i)?, mass: T::lit(a.mass) }))
            .collect::<Result<_>>()?;
        SphereMeasure::discrete(self.dim, atoms)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceFile {
    pub residual: f64,
    pub gauss_volume: f64,
    pub max_radial: f64,
}

/// Solver report with its full iteration trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub p: f64,
    pub solution: BodyFile,
    pub residual: f64,
    pub gauss_volume: f64,
    pub iterations: usize,
    pub branch_note: String,
    pub trace: Vec<TraceFile>,
}

impl ReportFile {
    pub fn from_report<T: Real>(report: &SolverReport<T>, p: T) -> Self {
        Self {
            p: p.to_f64_lossy(),
            solution: BodyFile::from_polytope(&report.solution),
            residual: report.residual.to_f64_lossy(),
            gauss_volume: report.gauss_volume.to_f64_lossy(),
            iterations: report.iterations,
            branch_note: report.branch_note.clone(),
            trace: report.trace.iter().map(trace_file).collect(),
        }
    }

    pub fn to_report<T: Real>(&self) -> Result<SolverReport<T>> {
        Ok(SolverReport {
            solution: self.solution.to_polytope()?,
            residual: T::lit(self.residual),
            gauss_volume: T::lit(self.gauss_volume),
            iterations: self.iterations,
            branch_note: self.branch_note.clone(),
            trace: self
                .trace
                .iter()
                .map(|t| TraceEntry {
                    residual: T::lit(t.residual),
                    gauss_volume: T::lit(t.gauss_volume),
                    max_radial: T::lit(t.max_radial),
                })
                .collect(),
        })
    }
}

fn trace_file<T: Real>(t: &TraceEntry<T>) -> TraceFile {
    TraceFile {
        residual: t.residual.to_f64_lossy(),
        gauss_volume: t.gauss_volume.to_f64_lossy(),
        max_radial: t.max_radial.to_f64_lossy(),
    }
}

fn default_seed() -> u64 {
    1
}

/// Input of the continuity commands.
///
/// `p` is the exponent of the measure family, or `p0` of the exponent
/// family; `schedule` holds the perturbation sizes or the exponents `p_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub body: BodyFile,
    pub p: f64,
    pub schedule: Vec<f64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub resolution: Option<usize>,
    #[serde(default)]
    pub residual_tol: Option<f64>,
    #[serde(default)]
    pub analytic_jacobian: bool,
}

/// One CSV row; the field order is the column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecordRow {
    pub index: usize,
    pub delta_or_p: f64,
    pub weak_distance: f64,
    pub hausdorff_distance: f64,
    pub gauss_volume: f64,
    pub max_radial: f64,
    pub iterations: usize,
}

pub const CSV_HEADER: [&str; 7] =
    ["index", "delta_or_p", "weak_distance", "hausdorff_distance", "gauss_volume", "max_radial", "iterations"];

impl<T: Real> From<&ExperimentRecord<T>> for RecordRow {
    fn from(r: &ExperimentRecord<T>) -> Self {
        Self {
            index: r.index,
            delta_or_p: r.parameter.to_f64_lossy(),
            weak_distance: r.weak_distance.to_f64_lossy(),
            hausdorff_distance: r.hausdorff_distance.to_f64_lossy(),
            gauss_volume: r.gauss_volume.to_f64_lossy(),
            max_radial: r.max_radial.to_f64_lossy(),
            iterations: r.iterations,
        }
    }
}

/// Aggregate view of an experiment run, written next to the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub records: usize,
    pub final_record: Option<RecordRow>,
    pub min_hausdorff_distance: Option<f64>,
    pub max_hausdorff_distance: Option<f64>,
    pub min_weak_distance: Option<f64>,
    pub max_weak_distance: Option<f64>,
    pub min_gauss_volume: Option<f64>,
    pub max_max_radial: Option<f64>,
    pub min_support: Option<f64>,
    pub total_iterations: usize,
}

fn fold(values: impl Iterator<Item = f64>, f: fn(f64, f64) -> f64) -> Option<f64> {
    values.reduce(f)
}

impl ExperimentSummary {
    pub fn from_records<T: Real>(records: &[ExperimentRecord<T>]) -> Self {
        let rows: Vec<RecordRow> = records.iter().map(RecordRow::from).collect();
        Self {
            records: rows.len(),
            final_record: rows.last().copied(),
            min_hausdorff_distance: fold(rows.iter().map(|r| r.hausdorff_distance), f64::min),
            max_hausdorff_distance: fold(rows.iter().map(|r| r.hausdorff_distance), f64::max),
            min_weak_distance: fold(rows.iter().map(|r| r.weak_distance), f64::min),
            max_weak_distance: fold(rows.iter().map(|r| r.weak_distance), f64::max),
            min_gauss_volume: fold(rows.iter().map(|r| r.gauss_volume), f64::min),
            max_max_radial: fold(rows.iter().map(|r| r.max_radial), f64::max),
            min_support: fold(records.iter().map(|r| r.min_support.to_f64_lossy()), f64::min),
            total_iterations: rows.iter().map(|r| r.iterations).sum(),
        }
    }
}

/// Writes the record table; an empty slice gives a header-only CSV.
pub fn write_records_csv<T: Real, W: Write>(records: &[ExperimentRecord<T>], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(RecordRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `records` as CSV to `csv_path` and the summary as JSON to
/// `summary_path`.
pub fn emit_report<T: Real>(records: &[ExperimentRecord<T>], csv_path: &Path, summary_path: &Path) -> Result<()> {
    write_records_csv(records, BufWriter::new(File::create(csv_path)?))?;
    write_json(summary_path, &ExperimentSummary::from_records(records))
}

pub fn read_json<D: serde::de::DeserializeOwned>(path: &Path) -> Result<D> {
    let file = File::open(path)?;
    Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_csv_for_empty_run() {
        let mut buf = Vec::new();
        write_records_csv::<f64, _>(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), CSV_HEADER.join(",") + "\n");
    }

    #[test]
    fn body_round_trip_keeps_full_precision() {
        let body = Polytope::<f64>::regular_polygon(7, 1.234567890123456).unwrap();
        let file = BodyFile::from_polytope(&body);
        let text = serde_json::to_string(&file).unwrap();
        let back: BodyFile = serde_json::from_str(&text).unwrap();
        let rebuilt: Polytope<f64> = back.to_polytope().unwrap();
        assert_eq!(rebuilt.support_numbers(), body.support_numbers());
        assert_eq!(rebuilt.normals(), body.normals());
    }

    #[test]
    fn rejects_non_unit_normal() {
        let file = BodyFile {
            dim: 2,
            normals: vec![vec![2.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]],
            support_numbers: vec![1.0; 4],
        };
        assert!(matches!(file.to_polytope::<f64>(), Err(Error::NotUnit { .. })));
    }
}
