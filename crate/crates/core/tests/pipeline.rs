use std::fs;
use std::path::PathBuf;

use zdense_core::modsearch::SearchMode;
use zdense_core::pipeline::*;
use zdense_core::repkit::genus2_seed;

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("zdense-test-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

#[test]
fn trivial_statuses() {
    let run = run_pipeline(&PipelineConfig::new(FieldChoice::QSqrt2, 7), None).unwrap();
    assert!(matches!(&run.status, RunStatus::Failed { error } if error.contains("G2")));
    assert!(run.steps.is_empty());

    let run = run_pipeline(&PipelineConfig::new(FieldChoice::Rationals, 4), None).unwrap();
    assert!(matches!(&run.status, RunStatus::Failed { error } if error.contains("no known seed")));

    let run = run_pipeline(&PipelineConfig::new(FieldChoice::QSqrt2, 2), None).unwrap();
    assert_eq!(run.status, RunStatus::Dense);
    assert_eq!(run.steps.len(), 2);
    assert_eq!(run.status.exit_code(), 0);
}

#[test]
fn rational_three_stops_before_bending() {
    let run = run_pipeline(&PipelineConfig::new(FieldChoice::Rationals, 3), None).unwrap();
    let names: Vec<&str> = run.steps.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["seed", "tau", "descend", "integralize", "certify"]);
    assert!(matches!(run.status, RunStatus::Failed { .. }));
}

#[test]
fn rational_five_needs_cover() {
    let dir = scratch_dir("q5");
    let run = run_pipeline(&PipelineConfig::new(FieldChoice::Rationals, 5), Some(&dir)).unwrap();
    let RunStatus::NeedCover { eta } = &run.status else { panic!("unexpected status {:?}", run.status) };
    assert_eq!(eta.mode, SearchMode::OneSplit);
    assert_eq!(run.status.exit_code(), 2);
    assert!(run.closure_classes.windows(2).all(|w| w[0] != w[1]));
    let report = verify_run(&dir);
    assert!(report.ok(), "{:?}", report.failures());
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn determinism_tampering_and_gaps() {
    let config = PipelineConfig::new(FieldChoice::QSqrt2, 2);
    let (d1, d2) = (scratch_dir("det1"), scratch_dir("det2"));
    let r1 = run_pipeline(&config, Some(&d1)).unwrap();
    let r2 = run_pipeline(&config, Some(&d2)).unwrap();
    assert_eq!(r1.steps, r2.steps);
    assert!(verify_run(&d1).ok());

    // Perturb one matrix entry of the seed.
    let seed_path = PipelineRun::artifacts_dir(&d1).join(&r1.steps[0].artifact);
    let mut v: serde_json::Value = serde_json::from_slice(&fs::read(&seed_path).unwrap()).unwrap();
    v["rep"]["generators"][0][0][0][0] = serde_json::json!("12345");
    fs::write(&seed_path, serde_json::to_vec_pretty(&v).unwrap()).unwrap();
    let report = verify_run(&d1);
    assert!(!report.ok());
    assert!(report.failures().iter().any(|c| c.check == "relator and determinant"));

    fs::remove_file(PipelineRun::artifacts_dir(&d2).join(&r2.steps[1].artifact)).unwrap();
    let report = verify_run(&d2);
    assert!(report.failures().iter().any(|c| c.detail.contains("missing artifact") && c.detail.contains("certify")));
    let _ = fs::remove_dir_all(&d1);
    let _ = fs::remove_dir_all(&d2);
}

#[test]
fn injected_seed() {
    let dir = scratch_dir("seed");
    fs::create_dir_all(&dir).unwrap();
    let seed_file = dir.join("seed.json");
    fs::write(&seed_file, serde_json::to_vec(&genus2_seed().unwrap().to_json()).unwrap()).unwrap();
    let mut config = PipelineConfig::new(FieldChoice::QSqrt2, 2);
    config.seed_rep = Some(seed_file);
    let run_dir = dir.join("run");
    let run = run_pipeline(&config, Some(&run_dir)).unwrap();
    assert_eq!(run.status, RunStatus::Dense);
    let report = verify_run(&run_dir);
    assert!(report.ok(), "{:?}", report.failures());
    assert!(!report.checks.iter().any(|c| c.check == "builtin seed"));
    let _ = fs::remove_dir_all(&dir);
}
