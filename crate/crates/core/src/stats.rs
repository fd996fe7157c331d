//! Small statistics helpers shared by the estimators, the harness, and the tests:
//! binomial bands, a chi-square statistic with the one critical value the
//! verification suites use, and a two-parameter least-squares fit.

/// z such that P(|N(0,1)| <= z) = 0.99. Used for the 99% confidence intervals
/// reported by crossing estimates and experiment summaries.
pub const Z_99: f64 = 2.575_829_303_548_901;

/// Upper 0.001 quantile of chi-square with 3 degrees of freedom. The uniformity
/// checks over 4 categories (spanning trees of the 2x2 box, shift offsets) test at
/// significance 0.001 against this value.
pub const CHI2_DF3_ALPHA_001: f64 = 16.266;

/// Standard deviation of a Bernoulli(p) frequency estimate over n trials.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    (p * (1.0 - p) / n as f64).sqrt()
}

/// True when `observed` lies within `k` binomial standard deviations of `expected`,
/// with the sigma evaluated at the expected rate.
pub fn within_k_sigma(observed: f64, expected: f64, n: u64, k: f64) -> bool {
    (observed - expected).abs() <= k * binomial_sigma(expected, n)
}

/// Pearson chi-square statistic. `expected` entries must be positive.
pub fn chi_square(observed: &[u64], expected: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected.len());
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            debug_assert!(e > 0.0);
            let d = o as f64 - e;
            d * d / e
        })
        .sum()
}

/// Least squares fit of y = a + b*x. Returns (a, b). Needs at least two distinct x.
pub fn least_squares(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return None;
    }
    let b = (n * sxy - sx * sy) / denom;
    let a = (sy - b * sx) / n;
    Some((a, b))
}
