//! Label size reports and log-log regression.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeReport {
    pub class: String,
    pub count: usize,
    pub total: usize,
    pub max: usize,
    pub mean: f64,
    pub p50: usize,
    pub p90: usize,
    pub p99: usize,
}

fn percentile(sorted: &[usize], p: usize) -> usize {
    if sorted.is_empty() {
        return 0;
    }
    let rank = (p * sorted.len()).div_ceil(100).max(1);
    sorted[rank - 1]
}

impl SizeReport {
    pub fn from_sizes(class: &str, sizes: &[usize]) -> Self {
        let mut sorted = sizes.to_vec();
        sorted.sort_unstable();
        let total: usize = sorted.iter().sum();
        SizeReport {
            class: class.to_string(),
            count: sorted.len(),
            total,
            max: sorted.last().copied().unwrap_or(0),
            mean: if sorted.is_empty() { 0.0 } else { total as f64 / sorted.len() as f64 },
            p50: percentile(&sorted, 50),
            p90: percentile(&sorted, 90),
            p99: percentile(&sorted, 99),
        }
    }

    pub fn to_kv(&self) -> String {
        format!(
            "class={} count={} total={} max={} mean={:.1} p50={} p90={} p99={}",
            self.class, self.count, self.total, self.max, self.mean, self.p50, self.p90, self.p99
        )
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_and_percentiles() {
        let r = SizeReport::from_sizes("vertex", &[5, 1, 3, 2, 4]);
        assert_eq!((r.total, r.max, r.p50, r.p99), (15, 5, 3, 5));
        assert_eq!(r.count, 5);
        assert_eq!(SizeReport::from_sizes("x", &[]).max, 0);
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<_> = [2.0f64, 4.0, 8.0, 16.0].iter().map(|&x| (x, 3.0 * x.sqrt())).collect();
        assert!((loglog_slope(&pts) - 0.5).abs() < 1e-9);
    }
}
