//! Cross-module run invariants: archive hypervolume growth and selection
//! size.

use arm_moo::dataset::generate_synthetic;
use arm_moo::moead::{run_moead, MoeadParams};
use arm_moo::nsga3::{run_nsga3, Nsga3Params};
use arm_moo::quality::hypervolume_3d;
use arm_moo::rule::Variant;

/// Objectives are nonnegative under maximization, so a slightly negative
/// reference works for raw-space hypervolume.
const RAW_REFERENCE: [f64; 3] = [-0.01, -0.01, -0.01];

fn assert_archive_hv_monotone(snapshots: &[Vec<[f64; 3]>]) {
    let mut previous = 0.0;
    for (generation, snapshot) in snapshots.iter().enumerate() {
        let hv = hypervolume_3d(snapshot, RAW_REFERENCE).unwrap();
        assert!(
            hv >= previous - 1e-12,
            "archive hypervolume dropped at generation {generation}: {hv} < {previous}"
        );
        previous = hv;
    }
}

#[test]
fn nsga3_archive_hypervolume_never_decreases() {
    let db = generate_synthetic(150, 8, 0.35, 42).unwrap();
    let params = Nsga3Params {
        population_size: 16,
        generations: 40,
        reference_divisions: 5,
        seed: 8,
        record_archive_snapshots: true,
        ..Nsga3Params::default()
    };
    let result = run_nsga3(&db, Variant::V1, &params).unwrap();
    let snapshots = result.archive_snapshots.unwrap();
    assert_eq!(snapshots.len(), 41);
    assert_archive_hv_monotone(&snapshots);

    // Selection keeps the population at exactly N each generation.
    for generation in &result.per_generation_objectives {
        assert_eq!(generation.len(), 16);
    }
}

#[test]
fn moead_archive_hypervolume_never_decreases() {
    let db = generate_synthetic(150, 8, 0.35, 43).unwrap();
    let params = MoeadParams {
        generations: 40,
        weight_divisions: 3,
        neighborhood_size: 4,
        seed: 9,
        record_archive_snapshots: true,
        ..MoeadParams::default()
    };
    let result = run_moead(&db, Variant::V2, &params).unwrap();
    assert_archive_hv_monotone(&result.archive_snapshots.unwrap());
}
