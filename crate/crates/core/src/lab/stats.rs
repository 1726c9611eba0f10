//! Correlation and bucket statistics over analysis rows.

use std::collections::BTreeMap;

use super::{AnalysisRow, TimeMetric};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("no bucket is populated in both row sets")]
    NoOverlappingBuckets,
    #[error("row `{program} {input}` has no {metric} value")]
    MissingTime {
        program: String,
        input: String,
        metric: TimeMetric,
    },
}

/// Magnitude classes of `mems`, each closed below and open above.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bucket {
    Under1K,
    From1K,
    From10K,
    From100K,
    From1M,
    Over10M,
}

impl Bucket {
    pub const ALL: [Bucket; 6] = [
        Bucket::Under1K,
        Bucket::From1K,
        Bucket::From10K,
        Bucket::From100K,
        Bucket::From1M,
        Bucket::Over10M,
    ];

    pub fn of(mems: u64) -> Bucket {
        match mems {
            0..=999 => Bucket::Under1K,
            1_000..=9_999 => Bucket::From1K,
            10_000..=99_999 => Bucket::From10K,
            100_000..=999_999 => Bucket::From100K,
            1_000_000..=9_999_999 => Bucket::From1M,
            _ => Bucket::Over10M,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Bucket::Under1K => "<1K",
            Bucket::From1K => "1K-10K",
            Bucket::From10K => "10K-100K",
            Bucket::From100K => "100K-1M",
            Bucket::From1M => "1M-10M",
            Bucket::Over10M => ">10M",
        }
    }

    pub fn from_label(s: &str) -> Option<Bucket> {
        Bucket::ALL.into_iter().find(|b| b.label() == s)
    }

    /// `[lo, hi)`; `hi` is `None` for the last bucket.
    pub fn bounds(self) -> (u64, Option<u64>) {
        match self {
            Bucket::Under1K => (0, Some(1_000)),
            Bucket::From1K => (1_000, Some(10_000)),
            Bucket::From10K => (10_000, Some(100_000)),
            Bucket::From100K => (100_000, Some(1_000_000)),
            Bucket::From1M => (1_000_000, Some(10_000_000)),
            Bucket::Over10M => (10_000_000, None),
        }
    }
}

impl std::fmt::Display for Bucket {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Sample Pearson correlation, computed in two passes.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(StatsError::DegenerateInput(format!(
            "need at least 2 points, got {}",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::DegenerateInput("constant series".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Conventional wording for the strength of `|r|`.
pub fn strength(r: f64) -> &'static str {
    match r.abs() {
        a if a >= 0.9 => "Very strong",
        a if a >= 0.7 => "Strong",
        a if a >= 0.5 => "Moderate",
        a if a >= 0.3 => "Weak",
        _ => "Negligible",
    }
}

fn times(rows: &[&AnalysisRow], metric: TimeMetric) -> Result<Vec<f64>, StatsError> {
    rows.iter()
        .map(|r| {
            r.time(metric).ok_or_else(|| StatsError::MissingTime {
                program: r.program.clone(),
                input: r.input.clone(),
                metric,
            })
        })
        .collect()
}

/// r(mems, time) over the given rows.
pub fn correlate(rows: &[&AnalysisRow], metric: TimeMetric) -> Result<f64, StatsError> {
    let xs: Vec<f64> = rows.iter().map(|r| r.mems as f64).collect();
    pearson(&xs, &times(rows, metric)?)
}

/// r(n, time) over the given rows.
pub fn correlate_size(rows: &[&AnalysisRow], metric: TimeMetric) -> Result<f64, StatsError> {
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    pearson(&xs, &times(rows, metric)?)
}

pub fn correlate_within_program(
    rows: &[AnalysisRow],
    program: &str,
    metric: TimeMetric,
) -> Result<f64, StatsError> {
    let mine: Vec<&AnalysisRow> = rows.iter().filter(|r| r.program == program).collect();
    correlate(&mine, metric)
}

/// r(mems, time) over every row regardless of program.
pub fn correlate_across_programs(
    rows: &[AnalysisRow],
    metric: TimeMetric,
) -> Result<f64, StatsError> {
    let all: Vec<&AnalysisRow> = rows.iter().collect();
    correlate(&all, metric)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BucketSpeedup {
    pub bucket: Bucket,
    pub rows_a: usize,
    pub rows_b: usize,
    pub mean_a: f64,
    pub mean_b: f64,
    /// `mean_a / mean_b`
    pub ratio: f64,
}

pub fn group_by_bucket(rows: &[AnalysisRow]) -> BTreeMap<Bucket, Vec<&AnalysisRow>> {
    let mut out: BTreeMap<Bucket, Vec<&AnalysisRow>> = BTreeMap::new();
    for r in rows {
        out.entry(r.bucket).or_default().push(r);
    }
    out
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Mean time per bucket in `a` against `b`, for buckets populated in both.
pub fn bucket_speedup(
    a: &[AnalysisRow],
    b: &[AnalysisRow],
    metric: TimeMetric,
) -> Result<Vec<BucketSpeedup>, StatsError> {
    let (ga, gb) = (group_by_bucket(a), group_by_bucket(b));
    let mut out = Vec::new();
    for (bucket, ra) in &ga {
        let Some(rb) = gb.get(bucket) else { continue };
        let (ta, tb) = (times(ra, metric)?, times(rb, metric)?);
        let (mean_a, mean_b) = (mean(&ta), mean(&tb));
        out.push(BucketSpeedup {
            bucket: *bucket,
            rows_a: ra.len(),
            rows_b: rb.len(),
            mean_a,
            mean_b,
            ratio: mean_a / mean_b,
        });
    }
    if out.is_empty() {
        return Err(StatsError::NoOverlappingBuckets);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynexec::Source;

    fn row(program: &str, mems: u64, steps: u64) -> AnalysisRow {
        AnalysisRow {
            program: program.into(),
            n: mems as i64,
            input: mems.to_string(),
            source: Source::Interpreter,
            path_len: 0,
            mems,
            time_ms: None,
            steps: Some(steps),
            bucket: Bucket::of(mems),
        }
    }

    #[test]
    fn pearson_fixtures() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let line: Vec<f64> = xs.iter().map(|x| 3.0 * x + 1.0).collect();
        assert!((pearson(&xs, &line).unwrap() - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert!((pearson(&xs, &neg).unwrap() + 1.0).abs() < 1e-12);
        // Means 2.5 and 2.75; sxy = 6.5, sxx = 5, syy = 8.75.
        let r = pearson(&xs, &[1.0, 2.0, 3.0, 5.0]).unwrap();
        assert!((r - 6.5 / (5.0f64 * 8.75).sqrt()).abs() < 1e-12);
        assert!(matches!(
            pearson(&[1.0], &[2.0]),
            Err(StatsError::DegenerateInput(_))
        ));
        assert!(matches!(
            pearson(&[1.0, 1.0], &[2.0, 3.0]),
            Err(StatsError::DegenerateInput(_))
        ));
        assert!(matches!(
            pearson(&[1.0, 2.0], &[2.0]),
            Err(StatsError::LengthMismatch(2, 1))
        ));
    }

    #[test]
    fn buckets_are_closed_open() {
        assert_eq!(Bucket::of(0), Bucket::Under1K);
        assert_eq!(Bucket::of(999), Bucket::Under1K);
        assert_eq!(Bucket::of(1_000), Bucket::From1K);
        assert_eq!(Bucket::of(9_999_999), Bucket::From1M);
        assert_eq!(Bucket::of(10_000_000), Bucket::Over10M);
        assert_eq!(Bucket::of(u64::MAX), Bucket::Over10M);
        for b in Bucket::ALL {
            assert_eq!(Bucket::from_label(b.label()), Some(b));
            assert_eq!(Bucket::of(b.bounds().0), b);
        }
    }

    #[test]
    fn within_program_needs_variation() {
        let rows = vec![row("p", 5, 9), row("p", 5, 9)];
        assert!(matches!(
            correlate_within_program(&rows, "p", TimeMetric::Steps),
            Err(StatsError::DegenerateInput(_))
        ));
        let rows = vec![row("p", 5, 9), row("p", 6, 11), row("q", 1, 100)];
        let r = correlate_within_program(&rows, "p", TimeMetric::Steps).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn speedup_ratios() {
        let a = vec![row("p", 10, 128), row("p", 5000, 7)];
        let b = vec![row("p", 20, 100), row("q", 2_000_000, 1)];
        let s = bucket_speedup(&a, &b, TimeMetric::Steps).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].bucket, Bucket::Under1K);
        assert!((s[0].ratio - 1.28).abs() < 1e-12);
        let same = bucket_speedup(&a, &a, TimeMetric::Steps).unwrap();
        assert!(same.iter().all(|x| x.ratio == 1.0));
        let far = vec![row("q", 50_000, 1)];
        assert_eq!(
            bucket_speedup(&a, &far, TimeMetric::Steps),
            Err(StatsError::NoOverlappingBuckets)
        );
    }
}
