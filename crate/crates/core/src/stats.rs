//! Sample statistics and goodness-of-fit tests used by the estimators and
//! the acceptance checks.

use statrs::distribution::{ChiSquared, ContinuousCDF};

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance; zero for fewer than two samples.
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

pub fn std_error(xs: &[f64]) -> f64 {
    (variance(xs) / xs.len() as f64).sqrt()
}

/// Nearest-rank quantile of an ascending-sorted sample: the element at rank
/// `ceil(p * N)` (1-based), clamped to the sample.
pub fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let rank = ((p * n as f64).ceil() as usize).clamp(1, n);
    sorted[rank - 1]
}

/// `|mean_a - mean_b| <= k * sqrt(se_a^2 + se_b^2)`.
pub fn means_agree(mean_a: f64, se_a: f64, mean_b: f64, se_b: f64, k: f64) -> bool {
    (mean_a - mean_b).abs() <= k * (se_a * se_a + se_b * se_b).sqrt()
}

/// Pearson correlation; zero when either sample is constant.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let (ma, mb) = (mean(a), mean(b));
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        0.0
    } else {
        sab / (saa * sbb).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquareTest {
    pub fn passes(&self, significance: f64) -> bool {
        self.p_value >= significance
    }
}

fn chi_square_from(observed: &[f64], expected: &[f64], dof: usize) -> ChiSquareTest {
    let statistic: f64 = observed
        .iter()
        .zip(expected)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let p_value = if dof == 0 {
        1.0
    } else {
        1.0 - ChiSquared::new(dof as f64).expect("positive dof").cdf(statistic)
    };
    ChiSquareTest { statistic, dof, p_value }
}

/// Merges adjacent cells from the right until every expected count is at
/// least `min_expected`.
fn merge_cells(mut observed: Vec<f64>, mut expected: Vec<f64>, min_expected: f64) -> (Vec<f64>, Vec<f64>) {
    while expected.len() > 1 && *expected.last().unwrap() < min_expected {
        let (o, e) = (observed.pop().unwrap(), expected.pop().unwrap());
        *observed.last_mut().unwrap() += o;
        *expected.last_mut().unwrap() += e;
    }
    let mut i = 0;
    while i + 1 < expected.len() {
        if expected[i] < min_expected {
            observed[i + 1] += observed[i];
            expected[i + 1] += expected[i];
            observed.remove(i);
            expected.remove(i);
        } else {
            i += 1;
        }
    }
    (observed, expected)
}

/// Chi-square test of positive integer samples against
/// `Pr{T >= k} = (1 - p)^{k-1}`, `k = 1, 2, …`.
pub fn geometric_gof(samples: &[u64], p: f64) -> ChiSquareTest {
    if p >= 1.0 {
        // degenerate law: every sample must be exactly 1
        let ok = samples.iter().all(|&s| s == 1);
        return ChiSquareTest {
            statistic: if ok { 0.0 } else { f64::INFINITY },
            dof: 0,
            p_value: if ok { 1.0 } else { 0.0 },
        };
    }
    let n = samples.len() as f64;
    let max = samples.iter().copied().max().unwrap_or(1).max(1) as usize;
    let mut observed = vec![0.0; max + 1];
    for &s in samples {
        observed[s as usize] += 1.0;
    }
    let mut obs = Vec::with_capacity(max + 1);
    let mut exp = Vec::with_capacity(max + 1);
    for (k, &o) in observed.iter().enumerate().skip(1) {
        obs.push(o);
        exp.push(n * p * (1.0 - p).powi(k as i32 - 1));
    }
    // upper tail T > max is an empty cell
    obs.push(0.0);
    exp.push(n * (1.0 - p).powi(max as i32));
    let (obs, exp) = merge_cells(obs, exp, 5.0);
    let dof = obs.len().saturating_sub(1);
    chi_square_from(&obs, &exp, dof)
}

/// Chi-square test of samples against an exponential law with the given
/// mean, using `bins` equiprobable cells.
pub fn exponential_gof(samples: &[f64], mean: f64, bins: usize) -> ChiSquareTest {
    let n = samples.len() as f64;
    let mut observed = vec![0.0; bins];
    for &x in samples {
        // CDF value in [0, 1) maps to its equiprobable cell
        let u = 1.0 - (-x / mean).exp();
        let cell = ((u * bins as f64) as usize).min(bins - 1);
        observed[cell] += 1.0;
    }
    let expected = vec![n / bins as f64; bins];
    chi_square_from(&observed, &expected, bins - 1)
}

/// Chi-square test of homogeneity between two samples of nonnegative
/// integers (e.g. synchronous spread times from two engines).
pub fn two_sample_discrete(a: &[u64], b: &[u64]) -> ChiSquareTest {
    let max = a.iter().chain(b).copied().max().unwrap_or(0) as usize;
    let mut ca = vec![0.0; max + 1];
    let mut cb = vec![0.0; max + 1];
    for &x in a {
        ca[x as usize] += 1.0;
    }
    for &x in b {
        cb[x as usize] += 1.0;
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let total = na + nb;
    // pool cells so that every expected count is at least 5 in both rows
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for i in 0..=max {
        acc.0 += ca[i];
        acc.1 += cb[i];
        let pooled = acc.0 + acc.1;
        if pooled * na.min(nb) / total >= 5.0 {
            cells.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 + acc.1 > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => cells.push(acc),
        }
    }
    let mut statistic = 0.0;
    for &(oa, ob) in &cells {
        let pooled = oa + ob;
        let ea = pooled * na / total;
        let eb = pooled * nb / total;
        statistic += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
    }
    let dof = cells.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        1.0 - ChiSquared::new(dof as f64).unwrap().cdf(statistic)
    };
    ChiSquareTest { statistic, dof, p_value }
}
