use super::HarnessError;

/// Mean and sample (n - 1) standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub mean: f64,
    pub std_dev: f64,
}

pub fn mean(values: &[f64]) -> Result<f64, HarnessError> {
    if values.is_empty() {
        return Err(HarnessError::InsufficientData { needed: 1, got: 0 });
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Single-pass Welford accumulation. Needs at least two values.
pub fn sample_stats(values: &[f64]) -> Result<SampleStats, HarnessError> {
    if values.len() < 2 {
        return Err(HarnessError::InsufficientData {
            needed: 2,
            got: values.len(),
        });
    }
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &x) in values.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    let var = m2 / (values.len() - 1) as f64;
    Ok(SampleStats {
        mean,
        std_dev: var.max(0.0).sqrt(),
    })
}
