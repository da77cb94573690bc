//! Seeded benchmark harness: runs selection strategies over identical
//! sampled ideals, with deterministic fan-out across a worker pool, and
//! the distribution statistics behind the `benchmark` and `stats`
//! subcommands.

use crate::error::Result;
use crate::groebner::{buchberger, PairUpdateMode, RunLimits, SelectionStrategy};
use crate::ideal_gen::{sample_ideal, DistributionSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One run of one strategy on one sampled ideal; a CSV row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleResult {
    pub seed_index: u64,
    pub strategy: String,
    pub additions: u64,
    pub basis_size: usize,
    pub deg_max: u32,
    pub dimension: i32,
}

/// Aggregate over one strategy's per-sample counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub spec: String,
    pub strategy: String,
    pub samples: usize,
    pub mean_additions: f64,
    pub std_additions: f64,
    pub percentiles: BTreeMap<String, u64>,
    #[serde(skip)]
    pub counts: Vec<u64>,
}

impl BenchmarkReport {
    pub fn from_counts(spec: &DistributionSpec, strategy: &str, counts: Vec<u64>) -> Self {
        let (mean, std) = mean_std(&counts);
        let mut sorted = counts.clone();
        sorted.sort_unstable();
        let mut percentiles = BTreeMap::new();
        for (name, q) in [("p10", 0.10), ("p50", 0.50), ("p90", 0.90), ("p99", 0.99)] {
            percentiles.insert(name.to_string(), percentile(&sorted, q));
        }
        Self {
            spec: spec.to_string(),
            strategy: strategy.to_string(),
            samples: counts.len(),
            mean_additions: mean,
            std_additions: std,
            percentiles,
            counts,
        }
    }
}

pub fn mean_std(counts: &[u64]) -> (f64, f64) {
    if counts.is_empty() {
        return (0.0, 0.0);
    }
    let n = counts.len() as f64;
    let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / n;
    let var = counts
        .iter()
        .map(|&c| (c as f64 - mean).powi(2))
        .sum::<f64>()
        / n;
    (mean, var.sqrt())
}

fn percentile(sorted: &[u64], q: f64) -> u64 {
    if sorted.is_empty() {
        return 0;
    }
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx]
}

/// Runs every strategy on the same `samples` ideals drawn from `spec`
/// with per-sample seeds `seed + index`. Work fans out across the rayon
/// pool; rows come back in (seed_index, strategy) order regardless of
/// worker count.
pub fn run_benchmark(
    spec: &DistributionSpec,
    strategies: &[SelectionStrategy],
    samples: u64,
    seed: u64,
    mode: PairUpdateMode,
) -> Result<(Vec<SampleResult>, Vec<BenchmarkReport>)> {
    let field = spec.field();
    let rows: Vec<Vec<SampleResult>> = (0..samples)
        .into_par_iter()
        .map(|index| {
            let sample = sample_ideal(spec, seed.wrapping_add(index));
            strategies
                .iter()
                .map(|&strategy| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index));
                    let (_, stats) = buchberger(
                        &sample.generators,
                        field,
                        strategy,
                        mode,
                        &mut rng,
                        RunLimits::default(),
                    )
                    .expect("sampled generators are valid");
                    SampleResult {
                        seed_index: index,
                        strategy: strategy.name().to_string(),
                        additions: stats.additions,
                        basis_size: stats.basis_size,
                        deg_max: stats.deg_max,
                        dimension: stats.dimension,
                    }
                })
                .collect()
        })
        .collect();
    let rows: Vec<SampleResult> = rows.into_iter().flatten().collect();

    let reports = strategies
        .iter()
        .map(|&strategy| {
            let counts: Vec<u64> = rows
                .iter()
                .filter(|r| r.strategy == strategy.name())
                .map(|r| r.additions)
                .collect();
            BenchmarkReport::from_counts(spec, strategy.name(), counts)
        })
        .collect();
    Ok((rows, reports))
}

/// Dimension histogram over `samples` ideals, computed from Degree
/// runs. Unit ideals land in the `-1` sentinel bucket.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DimensionStats {
    pub spec: String,
    pub samples: u64,
    /// dimension -> count; key "-1" is the unit-ideal sentinel.
    pub dimension_counts: BTreeMap<i32, u64>,
}

pub fn dimension_stats(spec: &DistributionSpec, samples: u64, seed: u64) -> Result<DimensionStats> {
    let (rows, _) = run_benchmark(spec, &[SelectionStrategy::Degree], samples, seed, PairUpdateMode::GebauerMoller)?;
    let mut counts: BTreeMap<i32, u64> = BTreeMap::new();
    for r in &rows {
        *counts.entry(r.dimension).or_default() += 1;
    }
    Ok(DimensionStats {
        spec: spec.to_string(),
        samples,
        dimension_counts: counts,
    })
}

/// Mean additions under Degree selection for each (d, s) cell of a
/// grid, at fixed n and flavor.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridCell {
    pub d: u32,
    pub s: usize,
    pub mean_additions: f64,
}

pub fn difficulty_grid(
    base: &DistributionSpec,
    degrees: &[u32],
    generators: &[usize],
    samples: u64,
    seed: u64,
) -> Result<Vec<GridCell>> {
    let mut cells = vec![];
    for &d in degrees {
        for &s in generators {
            let mut spec = base.clone();
            spec.d = d;
            spec.s = s;
            let (_, reports) = run_benchmark(
                &spec,
                &[SelectionStrategy::Degree],
                samples,
                seed,
                PairUpdateMode::GebauerMoller,
            )?;
            cells.push(GridCell {
                d,
                s,
                mean_additions: reports[0].mean_additions,
            });
        }
    }
    Ok(cells)
}

/// CSV with the fixed column set used by the CLI.
pub fn rows_to_csv(rows: &[SampleResult]) -> String {
    let mut out = String::from("seed_index,strategy,additions,basis_size,deg_max,dimension\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.seed_index, r.strategy, r.additions, r.basis_size, r.deg_max, r.dimension
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_sample_report_is_that_run() {
        let spec: DistributionSpec = "3-5-10 weighted".parse().unwrap();
        let (rows, reports) = run_benchmark(
            &spec,
            &[SelectionStrategy::Degree],
            1,
            7,
            PairUpdateMode::GebauerMoller,
        )
        .unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(reports[0].mean_additions, rows[0].additions as f64);
        assert_eq!(reports[0].std_additions, 0.0);
    }

    #[test]
    fn report_self_consistent_with_rows() {
        let spec: DistributionSpec = "3-5-5 weighted".parse().unwrap();
        let (rows, reports) = run_benchmark(
            &spec,
            &[SelectionStrategy::Degree, SelectionStrategy::First],
            50,
            1,
            PairUpdateMode::GebauerMoller,
        )
        .unwrap();
        for rep in &reports {
            let counts: Vec<u64> = rows
                .iter()
                .filter(|r| r.strategy == rep.strategy)
                .map(|r| r.additions)
                .collect();
            let (mean, std) = mean_std(&counts);
            assert_eq!(rep.mean_additions, mean);
            assert_eq!(rep.std_additions, std);
        }
    }

    #[test]
    fn deterministic_across_runs() {
        let spec: DistributionSpec = "3-5-5 weighted".parse().unwrap();
        let run = || {
            let (rows, _) = run_benchmark(
                &spec,
                &SelectionStrategy::ALL,
                20,
                3,
                PairUpdateMode::GebauerMoller,
            )
            .unwrap();
            rows_to_csv(&rows)
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn rows_come_back_in_seed_order() {
        let spec: DistributionSpec = "3-5-5 weighted".parse().unwrap();
        let (rows, _) = run_benchmark(
            &spec,
            &[SelectionStrategy::Degree, SelectionStrategy::Normal],
            10,
            0,
            PairUpdateMode::GebauerMoller,
        )
        .unwrap();
        let indices: Vec<u64> = rows.iter().map(|r| r.seed_index).collect();
        let mut expected = vec![];
        for i in 0..10 {
            expected.push(i);
            expected.push(i);
        }
        assert_eq!(indices, expected);
    }
}
