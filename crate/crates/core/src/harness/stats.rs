//! Summary statistics and trend tests.

use statrs::distribution::{Binomial, ContinuousCDF, DiscreteCDF, StudentsT};

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean; zero for fewer than two samples.
pub fn standard_error(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Ordinary least squares fit `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Standard error of the slope.
    pub slope_se: f64,
    pub n: usize,
}

impl LinearFit {
    /// One-sided p-value for `slope > 0` (`increasing`) or `slope < 0`.
    pub fn p_value(&self, increasing: bool) -> f64 {
        if self.n < 3 {
            return 1.0;
        }
        if self.slope_se == 0.0 {
            let right = if increasing {
                self.slope > 0.0
            } else {
                self.slope < 0.0
            };
            return if right { 0.0 } else { 1.0 };
        }
        let t = self.slope / self.slope_se;
        let dist = StudentsT::new(0.0, 1.0, (self.n - 2) as f64).expect("n >= 3");
        if increasing {
            1.0 - dist.cdf(t)
        } else {
            dist.cdf(t)
        }
    }
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let (mx, my) = (mean(xs), mean(ys));
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    let slope_se = if n > 2 && sxx > 0.0 {
        (sse / (n - 2) as f64 / sxx).sqrt()
    } else {
        0.0
    };
    LinearFit {
        slope,
        intercept,
        r_squared,
        slope_se,
        n,
    }
}

/// One-sided sign test: probability of at least `successes` heads in
/// `trials` fair coin flips.
pub fn sign_test_p(successes: u64, trials: u64) -> f64 {
    if trials == 0 || successes == 0 {
        return 1.0;
    }
    let b = Binomial::new(0.5, trials).expect("valid parameters");
    1.0 - b.cdf(successes - 1)
}

/// Direction a metric is expected to move as the swept value grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    NonDecreasing,
    NonIncreasing,
}

/// Outcome of [`trend_test`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrendReport {
    /// Per-trial series whose fitted slope points the expected way.
    pub agreeing: u64,
    /// Per-trial series whose fitted slope points the other way.
    pub opposing: u64,
    /// Sign-test p-value for "more agreeing than opposing series".
    pub p_value: f64,
    /// Slope of the pooled fit over every observation.
    pub pooled: LinearFit,
    pub passed: bool,
}

/// Monotone trend check over repeated series.
///
/// `series[t][i]` is trial `t` observed at sweep point `xs[i]`. Each trial
/// gets its own least squares slope; the trend holds at level `alpha` when
/// the sign test on agreeing versus opposing slopes rejects the fair-coin
/// hypothesis, or when every series is flat. Flat series (zero slope) count
/// for neither side.
pub fn trend_test(
    xs: &[f64],
    series: &[Vec<f64>],
    direction: Direction,
    alpha: f64,
) -> TrendReport {
    let increasing = direction == Direction::NonDecreasing;
    let (mut agreeing, mut opposing) = (0u64, 0u64);
    let (mut px, mut py) = (Vec::new(), Vec::new());
    for ys in series {
        let fit = linear_fit(xs, ys);
        let slope = if increasing { fit.slope } else { -fit.slope };
        // Slopes within rounding of zero are flat.
        if slope > 1e-12 {
            agreeing += 1;
        } else if slope < -1e-12 {
            opposing += 1;
        }
        px.extend_from_slice(xs);
        py.extend_from_slice(ys);
    }
    let p_value = sign_test_p(agreeing, agreeing + opposing);
    let pooled = linear_fit(&px, &py);
    let passed = (agreeing + opposing == 0) || p_value < alpha;
    TrendReport {
        agreeing,
        opposing,
        p_value,
        pooled,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_statistics() {
        let xs = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        assert_eq!(mean(&xs), 5.0);
        // Sample variance 32/7.
        assert!((standard_error(&xs) - (32.0 / 7.0 / 8.0f64).sqrt()).abs() < 1e-12);
        assert_eq!(standard_error(&[3.0]), 0.0);
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [3.0, 5.0, 7.0, 9.0];
        let fit = linear_fit(&xs, &ys);
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.intercept - 1.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit.p_value(true), 0.0);
    }

    #[test]
    fn sign_test_values() {
        // P(X >= 9 | n = 10) = 11 / 1024.
        assert!((sign_test_p(9, 10) - 11.0 / 1024.0).abs() < 1e-12);
        assert_eq!(sign_test_p(0, 10), 1.0);
        assert!((sign_test_p(5, 10) - 638.0 / 1024.0).abs() < 1e-12);
    }

    #[test]
    fn trend_detection() {
        let xs = [1.0, 2.0, 3.0];
        let down: Vec<Vec<f64>> = (0..20).map(|t| vec![3.0 + t as f64, 2.0, 1.0]).collect();
        assert!(trend_test(&xs, &down, Direction::NonIncreasing, 0.05).passed);
        assert!(!trend_test(&xs, &down, Direction::NonDecreasing, 0.05).passed);
        let flat = vec![vec![1.0, 1.0, 1.0]; 5];
        assert!(trend_test(&xs, &flat, Direction::NonDecreasing, 0.05).passed);
    }
}
