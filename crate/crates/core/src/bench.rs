//! Benchmark grids and their machine-readable output.
//!
//! A grid runs every `(algorithm, kernel, minimum support)` cell a fixed
//! number of times. Counters must be identical across repetitions; runtime
//! is averaged.
//!
//! CSV columns, in order:
//!
//! ```text
//! dataset,algorithm,early_stopping,minsup_abs,minsup_rel,num_candidates,
//! num_expanded,ratio,num_frequent,num_comparisons,runtime_ms_mean,runtime_ms_per_run
//! ```
//!
//! `ratio` is `num_candidates / num_expanded` rounded half-up to two decimals
//! with integer arithmetic, empty when nothing was expanded.
//! `runtime_ms_per_run` joins the per-repetition timings with `;`.
//!
//! The structured form is JSON, one object per record, each carrying
//! `"format_version": 1`.

use serde::{Deserialize, Serialize};

use crate::dataset::{resolve_minsup, SupportThreshold, TransactionDb};
use crate::error::{Error, Result};
use crate::search::{mine, Algorithm, MiningResult, Scheme};

pub const FORMAT_VERSION: u32 = 1;

pub const CSV_HEADER: &str = "dataset,algorithm,early_stopping,minsup_abs,minsup_rel,num_candidates,num_expanded,ratio,num_frequent,num_comparisons,runtime_ms_mean,runtime_ms_per_run";

pub const DEFAULT_REPETITIONS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub dataset: String,
    pub algorithms: Vec<Algorithm>,
    pub es_variants: Vec<bool>,
    pub min_sups: Vec<SupportThreshold>,
    pub repetitions: usize,
}

impl BenchConfig {
    /// All algorithms, both kernels, default repetitions.
    pub fn new(dataset: impl Into<String>, min_sups: Vec<SupportThreshold>) -> Self {
        Self {
            dataset: dataset.into(),
            algorithms: Algorithm::ALL.to_vec(),
            es_variants: vec![false, true],
            min_sups,
            repetitions: DEFAULT_REPETITIONS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::InvalidArgument("no algorithm selected".into()));
        }
        if self.es_variants.is_empty() {
            return Err(Error::InvalidArgument("no kernel variant selected".into()));
        }
        if self.min_sups.is_empty() {
            return Err(Error::InvalidArgument("no minimum support given".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidArgument("repetitions must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub format_version: u32,
    pub dataset: String,
    pub algorithm: Algorithm,
    pub early_stopping: bool,
    pub minsup_abs: u32,
    pub minsup_rel: f64,
    pub num_candidates: u64,
    pub num_expanded: u64,
    pub num_frequent: u64,
    pub num_comparisons: u64,
    pub runtime_ms_mean: f64,
    pub runtime_ms_per_run: Vec<f64>,
}

impl MetricsRecord {
    /// Builds a record from repeated runs of one cell. All runs must agree
    /// on every counter.
    pub fn from_runs(
        dataset: &str,
        n_transactions: usize,
        min_sup: u32,
        scheme: Scheme,
        runs: &[MiningResult],
    ) -> Result<Self> {
        let first = runs
            .first()
            .ok_or_else(|| Error::InvalidArgument("no runs to summarise".into()))?;
        if let Some(bad) = runs
            .iter()
            .position(|r| r.metrics.counters() != first.metrics.counters())
        {
            return Err(Error::InvalidArgument(format!(
                "cell {scheme} minsup={min_sup}: counters of repetition {} differ from repetition 0",
                bad
            )));
        }
        let per_run: Vec<f64> = runs
            .iter()
            .map(|r| r.metrics.runtime.as_secs_f64() * 1e3)
            .collect();
        let mean = per_run.iter().sum::<f64>() / per_run.len() as f64;
        let m = &first.metrics;
        Ok(Self {
            format_version: FORMAT_VERSION,
            dataset: dataset.to_string(),
            algorithm: scheme.algorithm,
            early_stopping: scheme.early_stopping,
            minsup_abs: min_sup,
            minsup_rel: if n_transactions == 0 {
                0.0
            } else {
                f64::from(min_sup) / n_transactions as f64
            },
            num_candidates: m.num_candidates,
            num_expanded: m.num_expanded,
            num_frequent: m.num_frequent,
            num_comparisons: m.num_comparisons,
            runtime_ms_mean: mean,
            runtime_ms_per_run: per_run,
        })
    }

    pub fn scheme(&self) -> Scheme {
        Scheme::new(self.algorithm, self.early_stopping)
    }

    pub fn ratio(&self) -> String {
        ratio_2dp(self.num_candidates, self.num_expanded)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    pub fn csv_row(&self) -> String {
        let per_run: Vec<String> = self.runtime_ms_per_run.iter().map(|t| format!("{t:.3}")).collect();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{:.3},{}",
            csv_field(&self.dataset),
            self.algorithm.key(),
            self.early_stopping,
            self.minsup_abs,
            self.minsup_rel,
            self.num_candidates,
            self.num_expanded,
            self.ratio(),
            self.num_frequent,
            self.num_comparisons,
            self.runtime_ms_mean,
            per_run.join(";"),
        )
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `num / den` rounded half-up to two decimals using integers only.
pub fn ratio_2dp(num: u64, den: u64) -> String {
    if den == 0 {
        return String::new();
    }
    let scaled = (u128::from(num) * 200 + u128::from(den)) / (u128::from(den) * 2);
    format!("{}.{:02}", scaled / 100, scaled % 100)
}

pub fn to_csv(records: &[MetricsRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

pub fn to_json(records: &[MetricsRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

/// Runs the whole grid. Rows come out in grid order: minimum support, then
/// algorithm, then kernel variant.
pub fn run_bench(db: &TransactionDb, config: &BenchConfig) -> Result<Vec<MetricsRecord>> {
    config.validate()?;
    let mut records = Vec::new();
    for &spec in &config.min_sups {
        let min_sup = resolve_minsup(spec, db.len())?;
        for &alg in &config.algorithms {
            for &es in &config.es_variants {
                let scheme = Scheme::new(alg, es);
                let runs = (0..config.repetitions)
                    .map(|_| mine(db, min_sup, scheme))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| {
                        Error::InvalidArgument(format!("cell {scheme} minsup={min_sup}: {e}"))
                    })?;
                records.push(MetricsRecord::from_runs(
                    &config.dataset,
                    db.len(),
                    min_sup,
                    scheme,
                    &runs,
                )?);
            }
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::fixtures::*;

    #[test]
    fn ratio_formatting() {
        assert_eq!(ratio_2dp(15, 10), "1.50");
        assert_eq!(ratio_2dp(2, 3), "0.67");
        assert_eq!(ratio_2dp(1, 8), "0.13"); // 0.125 rounds up
        assert_eq!(ratio_2dp(5, 0), "");
        assert_eq!(ratio_2dp(u64::MAX, 1), format!("{}.00", u64::MAX));
    }

    #[test]
    fn running_example_grid() {
        let mut config = BenchConfig::new("example", vec![SupportThreshold::Absolute(3)]);
        config.repetitions = 2;
        let records = run_bench(&running_example(), &config).unwrap();
        assert_eq!(records.len(), 6);
        for r in &records {
            assert_eq!((r.num_candidates, r.num_expanded, r.num_frequent), (15, 10, 15));
            assert_eq!(r.ratio(), "1.50");
            assert_eq!(r.runtime_ms_per_run.len(), 2);
        }
        for pair in records.chunks(2) {
            assert!(!pair[0].early_stopping && pair[1].early_stopping);
            assert!(pair[1].num_comparisons <= pair[0].num_comparisons);
        }
        let csv = to_csv(&records);
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.lines().nth(1).unwrap().starts_with("example,eclat,false,3,0.3,15,10,1.50,15,"));
    }

    #[test]
    fn counters_do_not_depend_on_repetitions() {
        let db = running_example();
        let mut one = BenchConfig::new("t", vec![SupportThreshold::Absolute(2)]);
        one.repetitions = 1;
        let mut ten = one.clone();
        ten.repetitions = 10;
        let a = run_bench(&db, &one).unwrap();
        let b = run_bench(&db, &ten).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(
                (x.num_candidates, x.num_expanded, x.num_frequent, x.num_comparisons),
                (y.num_candidates, y.num_expanded, y.num_frequent, y.num_comparisons)
            );
        }
    }

    #[test]
    fn json_round_trip() {
        let mut config = BenchConfig::new("t", vec![SupportThreshold::Relative(0.3)]);
        config.repetitions = 1;
        let records = run_bench(&running_example(), &config).unwrap();
        let back: Vec<MetricsRecord> = serde_json::from_str(&to_json(&records)).unwrap();
        assert_eq!(back, records);
        assert!(records[0].to_json().contains("\"format_version\": 1"));
        assert!(records[0].to_json().contains("\"algorithm\": \"eclat\""));
    }

    #[test]
    fn runtimes_survive_json_exactly() {
        let mut config = BenchConfig::new("t", vec![SupportThreshold::Absolute(3)]);
        config.repetitions = 1;
        let mut record = run_bench(&running_example(), &config).unwrap().remove(0);
        record.runtime_ms_mean = 0.014542;
        record.runtime_ms_per_run = vec![0.014542, 1.0 / 3.0];
        let back: MetricsRecord = serde_json::from_str(&record.to_json()).unwrap();
        assert_eq!(back, record);
    }

    #[test]
    fn invalid_configs() {
        let db = running_example();
        let mut c = BenchConfig::new("t", vec![]);
        assert!(run_bench(&db, &c).is_err());
        c.min_sups = vec![SupportThreshold::Absolute(3)];
        c.repetitions = 0;
        assert!(run_bench(&db, &c).is_err());
        c.repetitions = 1;
        c.algorithms.clear();
        assert!(run_bench(&db, &c).is_err());
    }
}
