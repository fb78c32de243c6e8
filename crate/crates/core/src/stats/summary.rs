//! Small numerical helpers for aggregating replicas.

use serde::Serialize;

/// Pairwise (cascade) summation; error grows like `log n` rather than `n`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let (left, right) = values.split_at(values.len() / 2);
    pairwise_sum(left) + pairwise_sum(right)
}

pub fn mean(values: &[f64]) -> f64 {
    pairwise_sum(values) / values.len() as f64
}

/// Mean and sample standard deviation (zero for a single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    let m = mean(values);
    if n < 2 {
        return (m, 0.0);
    }
    let squares: Vec<f64> = values.iter().map(|x| (x - m) * (x - m)).collect();
    (m, (pairwise_sum(&squares) / (n - 1) as f64).sqrt())
}

/// Standard error of the mean.
pub fn std_error(values: &[f64]) -> f64 {
    mean_std(values).1 / (values.len() as f64).sqrt()
}

/// Pearson correlation.
pub fn correlation(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let (mx, my) = (mean(x), mean(y));
    let cross: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).collect();
    let sx: Vec<f64> = x.iter().map(|a| (a - mx) * (a - mx)).collect();
    let sy: Vec<f64> = y.iter().map(|b| (b - my) * (b - my)).collect();
    pairwise_sum(&cross) / (pairwise_sum(&sx) * pairwise_sum(&sy)).sqrt()
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a − F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut sup = 0.0_f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    sup
}

/// One-sample Kolmogorov–Smirnov statistic against a continuous CDF.
pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Wilson score interval for a binomial proportion at `z` standard errors.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let center = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Per-step mean and spread of a statistic recorded on a common schedule
/// across replicas.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordedMean {
    pub steps: Vec<u64>,
    pub mean: Vec<f64>,
    /// Sample standard deviation across replicas.
    pub std: Vec<f64>,
    pub replicas: usize,
}

impl RecordedMean {
    /// Aggregates `rows[replica][record]`.
    pub fn from_rows(steps: Vec<u64>, rows: &[Vec<f64>]) -> Self {
        let mut mean = Vec::with_capacity(steps.len());
        let mut std = Vec::with_capacity(steps.len());
        let mut column = Vec::with_capacity(rows.len());
        for r in 0..steps.len() {
            column.clear();
            column.extend(rows.iter().map(|row| row[r]));
            let (m, s) = mean_std(&column);
            mean.push(m);
            std.push(s);
        }
        Self {
            steps,
            mean,
            std,
            replicas: rows.len(),
        }
    }

    pub fn std_error(&self, record: usize) -> f64 {
        self.std[record] / (self.replicas as f64).sqrt()
    }
}
