use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use super::ScoringError;

/// Summary statistics of one group of scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGroup")]
pub struct GroupStats {
    n: u64,
    mean: f64,
    #[serde(rename = "std_dev")]
    sd: f64,
}

#[derive(Deserialize)]
struct RawGroup {
    n: u64,
    mean: f64,
    #[serde(alias = "sd")]
    std_dev: f64,
}

impl TryFrom<RawGroup> for GroupStats {
    type Error = ScoringError;

    fn try_from(raw: RawGroup) -> Result<Self, Self::Error> {
        GroupStats::new(raw.n, raw.mean, raw.std_dev)
    }
}

impl GroupStats {
    pub fn new(n: u64, mean: f64, sd: f64) -> Result<Self, ScoringError> {
        if n < 2 {
            return Err(ScoringError::InvalidGroup(format!(
                "n must be at least 2, got {n}"
            )));
        }
        if !mean.is_finite() {
            return Err(ScoringError::InvalidGroup(format!(
                "mean must be finite, got {mean}"
            )));
        }
        if !sd.is_finite() || sd < 0.0 {
            return Err(ScoringError::InvalidGroup(format!(
                "sd must be finite and non-negative, got {sd}"
            )));
        }
        Ok(GroupStats { n, mean, sd })
    }

    /// Sample mean and Bessel-corrected standard deviation.
    pub fn from_samples(samples: &[f64]) -> Result<Self, ScoringError> {
        let n = samples.len();
        if n < 2 {
            return Err(ScoringError::InvalidGroup(format!(
                "need at least 2 samples, got {n}"
            )));
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let ss: f64 = samples.iter().map(|x| (x - mean).powi(2)).sum();
        GroupStats::new(n as u64, mean, (ss / (n - 1) as f64).sqrt())
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sd(&self) -> f64 {
        self.sd
    }

    fn var(&self) -> f64 {
        self.sd * self.sd
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TTestVariant {
    /// Equal-variance Student t.
    #[default]
    Pooled,
    /// Welch t with Welch–Satterthwaite degrees of freedom.
    Welch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub variant: TTestVariant,
    pub t: f64,
    pub df: f64,
    /// Two-tailed p-value.
    pub p_value: f64,
}

/// Two-sample t statistic of `a - b`.
pub fn two_sample_t(
    a: &GroupStats,
    b: &GroupStats,
    variant: TTestVariant,
) -> Result<TTestResult, ScoringError> {
    let (se, df) = match variant {
        TTestVariant::Pooled => {
            let df = a.nf() + b.nf() - 2.0;
            let pooled = ((a.nf() - 1.0) * a.var() + (b.nf() - 1.0) * b.var()) / df;
            ((pooled * (1.0 / a.nf() + 1.0 / b.nf())).sqrt(), df)
        }
        TTestVariant::Welch => {
            let va = a.var() / a.nf();
            let vb = b.var() / b.nf();
            let df = (va + vb).powi(2) / (va * va / (a.nf() - 1.0) + vb * vb / (b.nf() - 1.0));
            ((va + vb).sqrt(), df)
        }
    };
    if se == 0.0 || !se.is_finite() {
        return Err(ScoringError::DegenerateVariance);
    }
    let t = (a.mean - b.mean) / se;
    let dist =
        StudentsT::new(0.0, 1.0, df).map_err(|e| ScoringError::InvalidGroup(e.to_string()))?;
    let p_value = (2.0 * dist.cdf(-t.abs())).min(1.0);
    Ok(TTestResult {
        variant,
        t,
        df,
        p_value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
}

impl ConfidenceInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.lower..=self.upper).contains(&x)
    }
}

/// Normal-approximation interval `mean ± z * sd / sqrt(n)`.
pub fn mean_confidence_interval(
    g: &GroupStats,
    level: f64,
) -> Result<ConfidenceInterval, ScoringError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(ScoringError::InvalidLevel(level));
    }
    let z = z_critical(level);
    let half = z * g.sd / g.nf().sqrt();
    Ok(ConfidenceInterval {
        level,
        lower: g.mean - half,
        upper: g.mean + half,
    })
}

/// Two-sided standard normal critical value for `level` in (0, 1).
pub fn z_critical(level: f64) -> f64 {
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    unit.inverse_cdf(0.5 + level / 2.0)
}
