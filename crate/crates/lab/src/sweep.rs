use std::fmt::Write as _;

use regretlab_core::engine::{slope_fit, SlopeFit};
use serde::Serialize;

use crate::config::{instantiate, ConfigFile, SweepAxis};
use crate::error::{LabError, LabResult};
use crate::montecarlo::run_batch;
use crate::report::Summary;

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub value: f64,
    pub horizon: usize,
    pub summary: Summary,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeReport {
    pub config_digest: String,
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    /// `(T, mean regret)` pairs in sweep order.
    pub points: Vec<(f64, f64)>,
}

/// One Monte Carlo batch per sweep value, all under the file's seed.
pub fn run_sweep(cfg: &ConfigFile, digest: &str, workers: usize) -> LabResult<SweepResult> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| LabError::Config("sweep requires a [sweep] section".into()))?;
    let mut points = Vec::with_capacity(sweep.values.len());
    for &value in &sweep.values {
        let exp = match sweep.axis {
            SweepAxis::Horizon => cfg.experiment(Some(value as usize), None)?,
            SweepAxis::Alpha => cfg.experiment(None, Some(value))?,
        };
        let instance = instantiate(&exp)?;
        let batch = run_batch(&instance, workers)?;
        points.push(SweepPoint {
            value,
            horizon: exp.params.horizon(),
            summary: Summary::new(digest, exp.params, &batch.stats)?,
        });
    }
    Ok(SweepResult { axis: sweep.axis, points })
}

impl SweepResult {
    /// `T,mean_regret,std,n` (or `alpha,...` for a threshold sweep).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(match self.axis {
            SweepAxis::Horizon => "T,mean_regret,std,n\n",
            SweepAxis::Alpha => "alpha,mean_regret,std,n\n",
        });
        for p in &self.points {
            let s = &p.summary;
            match self.axis {
                SweepAxis::Horizon => writeln!(out, "{},{},{},{}", p.horizon, s.mean, s.std, s.n),
                SweepAxis::Alpha => writeln!(out, "{},{},{},{}", p.value, s.mean, s.std, s.n),
            }
            .unwrap();
        }
        out
    }

    /// Log-log fit of mean regret against `T`; only for horizon sweeps.
    pub fn slope(&self, digest: &str) -> LabResult<Option<SlopeReport>> {
        if self.axis != SweepAxis::Horizon {
            return Ok(None);
        }
        let points: Vec<(f64, f64)> = self.points.iter().map(|p| (p.horizon as f64, p.summary.mean)).collect();
        let SlopeFit { slope, intercept, max_residual } = slope_fit(&points)?;
        Ok(Some(SlopeReport {
            config_digest: digest.to_owned(),
            slope,
            intercept,
            max_residual,
            points,
        }))
    }
}
