//! Record and summary files written by experiment runs.

use gmink::continuity::run_measure_continuity;
use gmink::io::{emit_report, read_json, write_json, BodyFile, ExperimentSummary, MeasureFile, CSV_HEADER};
use gmink::gaussian::lp_surface_measure;
use gmink::solver::SolverConfig;
use gmink::{GaussianContext, Polytope, SphereMeasure};

fn run(seed: u64) -> Vec<gmink::continuity::ExperimentRecord<f64>> {
    let c = GaussianContext::new(2).unwrap();
    let k0 = Polytope::cube(2, 1.4).unwrap();
    let schedule: Vec<f64> = (0..8).map(|i| 0.1 * 0.5f64.powi(i)).collect();
    run_measure_continuity(&c, &k0, 1.0, &schedule, &SolverConfig::default(), seed).unwrap()
}

#[test]
fn eight_records_give_eight_rows_and_a_consistent_summary() {
    let dir = tempfile::tempdir().unwrap();
    let (csv_path, summary_path) = (dir.path().join("records.csv"), dir.path().join("summary.json"));
    let records = run(3);
    emit_report(&records, &csv_path, &summary_path).unwrap();

    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), CSV_HEADER.to_vec());
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 8);
    let hausdorff: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();

    let summary: ExperimentSummary = read_json(&summary_path).unwrap();
    assert_eq!(summary.records, 8);
    assert_eq!(summary.min_hausdorff_distance, hausdorff.iter().copied().reduce(f64::min));
    assert_eq!(summary.max_hausdorff_distance, hausdorff.iter().copied().reduce(f64::max));
    assert_eq!(summary.final_record.unwrap().index, 7);
    assert_eq!(summary.total_iterations, rows.iter().map(|r| r[6].parse::<usize>().unwrap()).sum::<usize>());
}

#[test]
fn seeded_runs_write_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for name in ["a", "b"] {
        let csv_path = dir.path().join(format!("{name}.csv"));
        emit_report(&run(9), &csv_path, &dir.path().join(format!("{name}.json"))).unwrap();
        texts.push(std::fs::read(&csv_path).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn body_and_measure_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let c = GaussianContext::new(2).unwrap();
    let k = Polytope::<f64>::regular_polygon(9, 1.3).unwrap();
    let mu = lp_surface_measure(&c, &k, 1.5).unwrap();
    let (body_path, measure_path) = (dir.path().join("body.json"), dir.path().join("measure.json"));
    write_json(&body_path, &BodyFile::from_polytope(&k)).unwrap();
    write_json(&measure_path, &MeasureFile::from_measure(&mu)).unwrap();
    let k2: Polytope<f64> = read_json::<BodyFile>(&body_path).unwrap().to_polytope().unwrap();
    let mu2: SphereMeasure<f64> = read_json::<MeasureFile>(&measure_path).unwrap().to_measure().unwrap();
    assert_eq!(k2.support_numbers(), k.support_numbers());
    assert_eq!(mu2.masses(), mu.masses());
    assert!(std::fs::read_to_string(&body_path).unwrap().ends_with("}\n"));
}
