//! Quality indicators: exact 3-D hypervolume, IGD, reference-front
//! approximation, and the HV/IGD comparison ratio.
//!
//! Indicators run in a normalized space derived from the reference front's
//! per-objective bounds; without it, the unbounded lift scale would swamp
//! the hypervolume.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::TransactionDatabase;
use crate::error::{Error, Result};
use crate::nsga3::{divisions_for_at_least, run_nsga3, Nsga3Params};
use crate::run::dominates_max;
use crate::rule::Variant;
use crate::variation::{InitChoice, VariationParams};

/// Hypervolume reference point in normalized space: slightly below the
/// origin so boundary solutions still contribute volume.
pub const NORMALIZED_HV_REFERENCE: [f64; 3] = [-0.01, -0.01, -0.01];

/// Where a reference front came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrontProvenance {
    #[serde(rename = "oracle-exact")]
    OracleExact,
    #[serde(rename = "big-run-approx")]
    BigRunApprox,
}

/// A reference ("true") Pareto front with its normalization bounds.
#[derive(Clone, Debug)]
pub struct FrontApproximation {
    points: Vec<[f64; 3]>,
    provenance: FrontProvenance,
    bounds: [(f64, f64); 3],
    degenerate: [bool; 3],
}

impl FrontApproximation {
    /// Filters the input down to its distinct non-dominated points and
    /// derives per-objective bounds.
    pub fn new(points: Vec<[f64; 3]>, provenance: FrontProvenance) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyReferenceFront);
        }
        if points.iter().flatten().any(|v| v.is_nan()) {
            return Err(Error::NaNObjective);
        }
        let mut kept: Vec<[f64; 3]> = Vec::new();
        for candidate in &points {
            if kept.contains(candidate)
                || points.iter().any(|other| dominates_max(other, candidate))
            {
                continue;
            }
            kept.push(*candidate);
        }
        let mut bounds = [(f64::INFINITY, f64::NEG_INFINITY); 3];
        for point in &kept {
            for axis in 0..3 {
                bounds[axis].0 = bounds[axis].0.min(point[axis]);
                bounds[axis].1 = bounds[axis].1.max(point[axis]);
            }
        }
        let degenerate = [
            bounds[0].1 <= bounds[0].0,
            bounds[1].1 <= bounds[1].0,
            bounds[2].1 <= bounds[2].0,
        ];
        Ok(FrontApproximation {
            points: kept,
            provenance,
            bounds,
            degenerate,
        })
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn provenance(&self) -> FrontProvenance {
        self.provenance
    }

    pub fn bounds(&self) -> [(f64, f64); 3] {
        self.bounds
    }

    pub fn degenerate_axes(&self) -> [bool; 3] {
        self.degenerate
    }

    /// Affine map into [0,1] per objective; degenerate axes pin to 0.5.
    pub fn normalize(&self, value: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for axis in 0..3 {
            let (lo, hi) = self.bounds[axis];
            out[axis] = if self.degenerate[axis] {
                0.5
            } else {
                (value[axis] - lo) / (hi - lo)
            };
        }
        out
    }

    pub fn normalized_points(&self) -> Vec<[f64; 3]> {
        self.points.iter().map(|&p| self.normalize(p)).collect()
    }
}

/// Approximates the true front by one large NSGA-III run (population 500,
/// 500 generations, pc 0.9, pm 0.1) and returns its cumulative archive.
pub fn approximate_true_front(
    db: &TransactionDatabase,
    variant: Variant,
    seed: u64,
) -> Result<FrontApproximation> {
    let population_size = 500;
    let params = Nsga3Params {
        population_size,
        generations: 500,
        reference_divisions: divisions_for_at_least(population_size),
        seed,
        variation: VariationParams {
            crossover_prob: 0.9,
            mutation_prob: 0.1,
            init: InitChoice::Auto.resolve(db),
            ..VariationParams::default()
        },
        record_populations: false,
        record_archive_snapshots: false,
    };
    let result = run_nsga3(db, variant, &params)?;
    FrontApproximation::new(result.archive_objective_values(), FrontProvenance::BigRunApprox)
}

/// IGD formula over two point sets already living in the same space: mean
/// over reference points of the Euclidean distance to the nearest solution.
pub fn igd_raw(solutions: &[[f64; 3]], reference_points: &[[f64; 3]]) -> Result<f64> {
    if solutions.is_empty() {
        return Err(Error::EmptySolutionSet);
    }
    if reference_points.is_empty() {
        return Err(Error::EmptyReferenceFront);
    }
    if solutions.iter().flatten().any(|v| v.is_nan()) {
        return Err(Error::NaNObjective);
    }
    let total: f64 = reference_points
        .iter()
        .map(|z| {
            solutions
                .iter()
                .map(|a| {
                    let mut sq = 0.0;
                    for axis in 0..3 {
                        let d = z[axis] - a[axis];
                        sq += d * d;
                    }
                    sq.sqrt()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / reference_points.len() as f64)
}

/// Mean distance from each reference point to its nearest solution, in the
/// space normalized by the reference front's bounds.
pub fn igd(solutions: &[[f64; 3]], reference: &FrontApproximation) -> Result<f64> {
    let normalized_solutions: Vec<[f64; 3]> =
        solutions.iter().map(|&p| reference.normalize(p)).collect();
    igd_raw(&normalized_solutions, &reference.normalized_points())
}

/// 2-D staircase of mutually non-dominated (x, y) points, maximization.
struct Staircase {
    points: Vec<(f64, f64)>,
}

impl Staircase {
    fn new() -> Self {
        Staircase { points: Vec::new() }
    }

    fn insert(&mut self, x: f64, y: f64) {
        if self.points.iter().any(|&(px, py)| px >= x && py >= y) {
            return;
        }
        self.points.retain(|&(px, py)| !(px <= x && py <= y));
        self.points.push((x, y));
        self.points.sort_by(|a, b| b.0.total_cmp(&a.0));
    }

    /// Union area over the reference corner; points are sorted by x
    /// descending, so y runs ascending.
    fn area(&self, ref_x: f64, ref_y: f64) -> f64 {
        let mut area = 0.0;
        let mut prev_y = ref_y;
        for &(x, y) in &self.points {
            area += (x - ref_x) * (y - prev_y);
            prev_y = y;
        }
        area
    }
}

/// Exact hypervolume of a 3-D point set (maximization) over a reference
/// point, by a dimension sweep along the third objective. Dominated and
/// duplicate points contribute nothing.
pub fn hypervolume_3d(points: &[[f64; 3]], reference: [f64; 3]) -> Result<f64> {
    if points.is_empty() {
        return Ok(0.0);
    }
    if points.iter().flatten().any(|v| v.is_nan()) {
        return Err(Error::NaNObjective);
    }
    for point in points {
        for axis in 0..3 {
            if point[axis] < reference[axis] {
                return Err(Error::PointBelowReference { axis });
            }
        }
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[b][2]
            .total_cmp(&points[a][2])
            .then(points[b][1].total_cmp(&points[a][1]))
            .then(points[b][0].total_cmp(&points[a][0]))
    });

    let mut staircase = Staircase::new();
    let mut volume = 0.0;
    let mut prev_z = points[order[0]][2];
    for &idx in &order {
        let [x, y, z] = points[idx];
        volume += staircase.area(reference[0], reference[1]) * (prev_z - z);
        staircase.insert(x, y);
        prev_z = z;
    }
    volume += staircase.area(reference[0], reference[1]) * (prev_z - reference[2]);
    Ok(volume)
}

/// Ratio of mean hypervolume to mean IGD over runs; +infinity when the mean
/// IGD is zero (rendered as "inf" in reports).
pub fn hv_igd_ratio(runs: &[(f64, f64)]) -> f64 {
    assert!(!runs.is_empty(), "ratio needs at least one run");
    let mean_hv = runs.iter().map(|r| r.0).sum::<f64>() / runs.len() as f64;
    let mean_igd = runs.iter().map(|r| r.1).sum::<f64>() / runs.len() as f64;
    if mean_igd == 0.0 {
        f64::INFINITY
    } else {
        mean_hv / mean_igd
    }
}

/// Per-run indicator bundle against a reference front.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FrontIndicators {
    pub hypervolume: f64,
    pub igd: f64,
    /// Solutions that fell outside the reference bounds and were clamped
    /// into the unit box before the hypervolume computation.
    pub clamped_points: usize,
}

/// Normalizes a front by the reference bounds and computes both indicators.
/// IGD sees the unclamped normalized points; HV sees them clamped to [0,1]
/// against the shifted origin reference.
pub fn front_indicators(
    solutions: &[[f64; 3]],
    reference: &FrontApproximation,
) -> Result<FrontIndicators> {
    let igd_value = igd(solutions, reference)?;
    let mut clamped_points = 0usize;
    let clamped: Vec<[f64; 3]> = solutions
        .iter()
        .map(|&p| {
            let mut out = reference.normalize(p);
            let mut clamped_any = false;
            for value in &mut out {
                if *value < 0.0 {
                    *value = 0.0;
                    clamped_any = true;
                } else if *value > 1.0 {
                    *value = 1.0;
                    clamped_any = true;
                }
            }
            if clamped_any {
                clamped_points += 1;
            }
            out
        })
        .collect();
    let hypervolume = hypervolume_3d(&clamped, NORMALIZED_HV_REFERENCE)?;
    Ok(FrontIndicators {
        hypervolume,
        igd: igd_value,
        clamped_points,
    })
}

/// Writes a front file: header `o1,o2,o3`, one raw maximization vector per
/// row, in round-tripping decimal form.
pub fn write_front_csv(path: &Path, points: &[[f64; 3]]) -> Result<()> {
    let mut out = String::from("o1,o2,o3\n");
    for point in points {
        out.push_str(&format!("{},{},{}\n", point[0], point[1], point[2]));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Reads a front file written by [`write_front_csv`].
pub fn read_front_csv(path: &Path) -> Result<Vec<[f64; 3]>> {
    let text = std::fs::read_to_string(path)?;
    let malformed = |line: usize| Error::MalformedFrontFile {
        path: path.to_path_buf(),
        line,
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| malformed(1))?;
    if header.trim_end() != "o1,o2,o3" {
        return Err(malformed(1));
    }
    let mut points = Vec::new();
    for (idx, line) in lines {
        let mut values = [0.0f64; 3];
        let mut fields = line.split(',');
        for value in &mut values {
            let field = fields.next().ok_or_else(|| malformed(idx + 1))?;
            *value = field.parse().map_err(|_| malformed(idx + 1))?;
        }
        if fields.next().is_some() {
            return Err(malformed(idx + 1));
        }
        points.push(values);
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reference(points: Vec<[f64; 3]>) -> FrontApproximation {
        FrontApproximation::new(points, FrontProvenance::OracleExact).unwrap()
    }

    #[test]
    fn front_approximation_filters_dominated_and_duplicate_points() {
        let front = reference(vec![
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.5, 0.5, 0.0],
            [0.4, 0.4, 0.0], // dominated
            [1.0, 0.0, 0.0], // duplicate
        ]);
        assert_eq!(front.points().len(), 3);
        assert_eq!(front.bounds()[0], (0.0, 1.0));
        assert!(front.degenerate_axes()[2]);
        assert_eq!(front.normalize([0.3, 0.3, 0.3]), [0.3, 0.3, 0.5]);
    }

    #[test]
    fn empty_reference_rejected() {
        assert!(matches!(
            FrontApproximation::new(vec![], FrontProvenance::OracleExact),
            Err(Error::EmptyReferenceFront)
        ));
    }

    #[test]
    fn igd_zero_when_sets_coincide() {
        let z = reference(vec![[1.0, 0.0, 0.5], [0.0, 1.0, 0.5]]);
        let a = [[1.0, 0.0, 0.5], [0.0, 1.0, 0.5]];
        assert_eq!(igd(&a, &z).unwrap(), 0.0);
    }

    #[test]
    fn igd_hand_case() {
        // Reference corners (0,0,0) and (1,1,1) with one solution at the
        // origin: mean nearest distance (0 + sqrt(3)) / 2.
        let z = [[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]];
        let a = [[0.0, 0.0, 0.0]];
        let value = igd_raw(&a, &z).unwrap();
        assert!((value - 3.0_f64.sqrt() / 2.0).abs() <= 1e-12);
    }

    #[test]
    fn igd_never_increases_when_adding_solutions() {
        let z = reference(vec![[1.0, 0.0, 0.2], [0.0, 1.0, 0.8], [0.6, 0.6, 0.5]]);
        let base = vec![[0.9, 0.1, 0.3]];
        let more = vec![[0.9, 0.1, 0.3], [0.1, 0.9, 0.7]];
        assert!(igd(&more, &z).unwrap() <= igd(&base, &z).unwrap());
    }

    #[test]
    fn igd_rejects_empty_solutions() {
        let z = reference(vec![[1.0, 0.0, 0.0]]);
        assert!(matches!(igd(&[], &z), Err(Error::EmptySolutionSet)));
    }

    #[test]
    fn igd_matches_all_pairs_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            let a: Vec<[f64; 3]> = (0..8)
                .map(|_| [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()])
                .collect();
            let z: Vec<[f64; 3]> = (0..12)
                .map(|_| [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()])
                .collect();
            let mut total = 0.0;
            for zp in &z {
                let mut best = f64::INFINITY;
                for ap in &a {
                    let d = ((zp[0] - ap[0]).powi(2)
                        + (zp[1] - ap[1]).powi(2)
                        + (zp[2] - ap[2]).powi(2))
                    .sqrt();
                    if d < best {
                        best = d;
                    }
                }
                total += best;
            }
            let expected = total / z.len() as f64;
            assert_eq!(igd_raw(&a, &z).unwrap(), expected);
        }
    }

    #[test]
    fn hv_unit_box() {
        let hv = hypervolume_3d(&[[1.0, 1.0, 1.0]], [0.0, 0.0, 0.0]).unwrap();
        assert_eq!(hv, 1.0);
    }

    #[test]
    fn hv_two_box_case() {
        let hv = hypervolume_3d(&[[1.0, 0.5, 0.5], [0.5, 1.0, 1.0]], [0.0, 0.0, 0.0]).unwrap();
        assert!((hv - 0.625).abs() <= 1e-12);
    }

    #[test]
    fn hv_ignores_duplicates_and_dominated_points() {
        let base = hypervolume_3d(&[[1.0, 0.5, 0.5], [0.5, 1.0, 1.0]], [0.0; 3]).unwrap();
        let noisy = hypervolume_3d(
            &[
                [1.0, 0.5, 0.5],
                [0.5, 1.0, 1.0],
                [1.0, 0.5, 0.5],
                [0.4, 0.4, 0.4],
            ],
            [0.0; 3],
        )
        .unwrap();
        assert!((base - noisy).abs() <= 1e-15);
    }

    #[test]
    fn hv_monotone_under_superset_and_domination() {
        let small = hypervolume_3d(&[[0.5, 0.5, 0.5]], [0.0; 3]).unwrap();
        let bigger = hypervolume_3d(&[[0.5, 0.5, 0.5], [0.9, 0.2, 0.2]], [0.0; 3]).unwrap();
        assert!(bigger >= small);
        let dominated = hypervolume_3d(&[[0.4, 0.4, 0.4]], [0.0; 3]).unwrap();
        assert!(small >= dominated);
    }

    #[test]
    fn hv_rejects_points_below_reference() {
        assert!(matches!(
            hypervolume_3d(&[[0.5, -0.1, 0.5]], [0.0; 3]),
            Err(Error::PointBelowReference { axis: 1 })
        ));
    }

    /// Inclusion-exclusion over at most three boxes.
    fn hv_by_inclusion_exclusion(points: &[[f64; 3]], reference: [f64; 3]) -> f64 {
        fn volume(corner: &[f64; 3], reference: [f64; 3]) -> f64 {
            (0..3)
                .map(|i| (corner[i] - reference[i]).max(0.0))
                .product()
        }
        fn meet(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
            [a[0].min(b[0]), a[1].min(b[1]), a[2].min(b[2])]
        }
        match points {
            [] => 0.0,
            [a] => volume(a, reference),
            [a, b] => {
                volume(a, reference) + volume(b, reference) - volume(&meet(a, b), reference)
            }
            [a, b, c] => {
                volume(a, reference) + volume(b, reference) + volume(c, reference)
                    - volume(&meet(a, b), reference)
                    - volume(&meet(a, c), reference)
                    - volume(&meet(b, c), reference)
                    + volume(&meet(&meet(a, b), c), reference)
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn hv_matches_inclusion_exclusion_on_small_fronts() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..200 {
            let k = rng.gen_range(1..=3);
            let points: Vec<[f64; 3]> = (0..k)
                .map(|_| [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()])
                .collect();
            let exact = hypervolume_3d(&points, [0.0; 3]).unwrap();
            let expected = hv_by_inclusion_exclusion(&points, [0.0; 3]);
            assert!(
                (exact - expected).abs() <= 1e-12,
                "sweep {exact} vs inclusion-exclusion {expected} on {points:?}"
            );
        }
    }

    #[test]
    fn hv_close_to_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..5 {
            let points: Vec<[f64; 3]> = (0..12)
                .map(|_| [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()])
                .collect();
            let exact = hypervolume_3d(&points, [0.0; 3]).unwrap();
            let samples = 100_000;
            let mut hits = 0usize;
            for _ in 0..samples {
                let p = [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()];
                if points
                    .iter()
                    .any(|q| q[0] >= p[0] && q[1] >= p[1] && q[2] >= p[2])
                {
                    hits += 1;
                }
            }
            let estimate = hits as f64 / samples as f64;
            let stderr = (estimate * (1.0 - estimate) / samples as f64).sqrt();
            assert!(
                (exact - estimate).abs() <= 4.0 * stderr.max(1e-4),
                "exact {exact} vs mc {estimate} (se {stderr})"
            );
        }
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(hv_igd_ratio(&[(2.0, 1.0), (4.0, 1.0)]), 3.0);
        assert!(hv_igd_ratio(&[(1.0, 0.0), (1.0, 0.0)]).is_infinite());
        assert_eq!(hv_igd_ratio(&[(3.0, 2.0)]), 1.5);
    }

    #[test]
    fn front_csv_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("front.csv");
        let points = vec![[0.123456789012345, 7.25, 0.1], [1.0, 2.0, 3.0000000001]];
        write_front_csv(&path, &points).unwrap();
        let loaded = read_front_csv(&path).unwrap();
        assert_eq!(points, loaded);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("o1,o2,o3\n"));
    }

    #[test]
    fn front_csv_rejects_garbage() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "o1,o2,o3\n1.0,2.0\n").unwrap();
        assert!(matches!(
            read_front_csv(&path),
            Err(Error::MalformedFrontFile { line: 2, .. })
        ));
        std::fs::write(&path, "wrong,header,row\n").unwrap();
        assert!(matches!(
            read_front_csv(&path),
            Err(Error::MalformedFrontFile { line: 1, .. })
        ));
    }

    #[test]
    fn indicators_clamp_out_of_bounds_points() {
        let z = reference(vec![[1.0, 0.0, 0.0], [0.0, 1.0, 1.0]]);
        // Second solution exceeds the reference bounds on axis 0.
        let solutions = [[1.0, 0.0, 0.0], [2.0, 0.5, 0.5]];
        let result = front_indicators(&solutions, &z).unwrap();
        assert_eq!(result.clamped_points, 1);
        assert!(result.hypervolume > 0.0);
        assert!(result.igd >= 0.0);
    }
}
