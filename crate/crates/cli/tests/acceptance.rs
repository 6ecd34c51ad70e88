//! Acceptance suite: one test per criterion, each printing its own pass/fail
//! line. Criteria 1-11 drive the library runners directly; criterion 12 runs
//! the built binary twice and compares every CSV byte for byte.

use reeb_lab::verify::{self, CriterionOutcome};
use std::collections::BTreeMap;
use std::process::Command;

const SEED: u64 = 7;

fn assert_outcome(outcome: CriterionOutcome) {
    println!("{}", outcome.status_line());
    assert!(
        outcome.passed,
        "criterion {} failed: {}",
        outcome.id, outcome.details
    );
}

#[test]
fn acceptance_01_line_class_equality() {
    assert_outcome(verify::criterion_1());
}

#[test]
fn acceptance_02_disk_page_equality() {
    assert_outcome(verify::criterion_2());
}

#[test]
fn acceptance_03_flow_crossing_fidelity() {
    assert_outcome(verify::criterion_3());
}

#[test]
fn acceptance_04_contact_condition_audit() {
    assert_outcome(verify::criterion_4(SEED));
}

#[test]
fn acceptance_05_action_shift_traversal() {
    assert_outcome(verify::criterion_5(SEED));
}

#[test]
fn acceptance_06_slab_volume() {
    assert_outcome(verify::criterion_6(SEED));
}

#[test]
fn acceptance_07_delta_bar_round_trip() {
    assert_outcome(verify::criterion_7(SEED));
}

#[test]
fn acceptance_08_conormal_straightening() {
    assert_outcome(verify::criterion_8());
}

#[test]
fn acceptance_09_weyl_law_diagnostics() {
    assert_outcome(verify::criterion_9());
}

#[test]
fn acceptance_10_disjoint_union_rule() {
    assert_outcome(verify::criterion_10(SEED));
}

#[test]
fn acceptance_11_calabi_suite() {
    assert_outcome(verify::criterion_11(SEED));
}

fn csv_files(dir: &std::path::Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "csv") {
            out.insert(
                path.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&path).unwrap(),
            );
        }
    }
    out
}

#[test]
fn acceptance_12_verify_all_is_deterministic() {
    let bin = env!("CARGO_BIN_EXE_reeblab");
    let tmp = tempfile::tempdir().unwrap();
    let dirs = [tmp.path().join("run1"), tmp.path().join("run2")];
    for dir in &dirs {
        let status = Command::new(bin)
            .args(["verify-all", "--seed", &SEED.to_string(), "--out"])
            .arg(dir)
            .status()
            .expect("spawn reeblab");
        assert!(status.success(), "verify-all exited nonzero");
    }
    let first = csv_files(&dirs[0]);
    let second = csv_files(&dirs[1]);
    assert!(!first.is_empty(), "verify-all produced no CSV artifacts");
    assert_eq!(
        first.keys().collect::<Vec<_>>(),
        second.keys().collect::<Vec<_>>(),
        "artifact sets differ between runs"
    );
    for (name, bytes) in &first {
        assert_eq!(
            bytes, &second[name],
            "artifact {name} differs between identical runs"
        );
    }
    println!(
        "criterion 12 [PASS] verify-all determinism: {} CSV artifacts byte-identical",
        first.len()
    );
}
