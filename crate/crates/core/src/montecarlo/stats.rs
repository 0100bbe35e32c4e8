use serde::Serialize;

/// Mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

impl Estimate {
    /// Distance from `target` in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.mean - target) / self.stderr
    }

    pub fn within(&self, target: f64, n_sigma: f64) -> bool {
        (self.mean - target).abs() <= n_sigma * self.stderr
    }
}

/// Delete-one jackknife of the sample mean.
///
/// Panics on fewer than two samples.
pub fn jackknife_mean(samples: &[f64]) -> Estimate {
    let n = samples.len();
    assert!(n >= 2, "jackknife needs at least two samples");
    let nf = n as f64;
    let total: f64 = samples.iter().sum();
    let leave_one_out: Vec<f64> = samples.iter().map(|x| (total - x) / (nf - 1.0)).collect();
    let centre = leave_one_out.iter().sum::<f64>() / nf;
    let spread: f64 = leave_one_out.iter().map(|t| (t - centre).powi(2)).sum();
    Estimate { mean: total / nf, stderr: ((nf - 1.0) / nf * spread).sqrt() }
}
