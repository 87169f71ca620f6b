//! Small statistics helpers for the Monte-Carlo suites.

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn sample_sd(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64).sqrt()
}

/// 95% normal-approximation half width for the mean.
pub fn ci_half(xs: &[f64]) -> f64 {
    1.96 * sample_sd(xs) / (xs.len() as f64).sqrt()
}

/// Ratio of means with its delta-method standard error for paired samples.
pub fn ratio_of_means(num: &[f64], den: &[f64]) -> (f64, f64) {
    assert_eq!(num.len(), den.len());
    let t = num.len() as f64;
    let (a, b) = (mean(num), mean(den));
    let ratio = a / b;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    let mut cov = 0.0;
    for (&x, &y) in num.iter().zip(den) {
        var_a += (x - a) * (x - a);
        var_b += (y - b) * (y - b);
        cov += (x - a) * (y - b);
    }
    let denom = (t - 1.0).max(1.0);
    var_a /= denom;
    var_b /= denom;
    cov /= denom;
    let rel = (var_a / (a * a) + var_b / (b * b) - 2.0 * cov / (a * b)).max(0.0);
    let se = ratio.abs() * (rel / t).sqrt();
    (ratio, se)
}

/// One-sided test statistic for E[num] >= bound * E[den] on paired samples:
/// returns (mean difference, its standard error) for d = num - bound * den.
pub fn paired_lower_bound(num: &[f64], den: &[f64], bound: f64) -> (f64, f64) {
    assert_eq!(num.len(), den.len());
    let diffs: Vec<f64> = num.iter().zip(den).map(|(&x, &y)| x - bound * y).collect();
    (mean(&diffs), sample_sd(&diffs) / (diffs.len() as f64).sqrt())
}
