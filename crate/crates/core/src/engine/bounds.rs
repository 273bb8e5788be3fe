use alloc::format;

use crate::{Error, Result};

/// High-probability regret guarantee for Accounts:
/// `P(R >= (alpha + 7) sqrt(T K ln K)) <= 1000 K sqrt(alpha) exp(-sqrt(alpha) ln K / 8)`
/// for every `alpha > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    pub threshold: f64,
    /// The bound as stated; usually far above 1 at small `K`.
    pub bound_raw: f64,
    /// `bound_raw` clamped to `[0, 1]`.
    pub bound: f64,
    /// The threshold exceeds `T`, which regret never does.
    pub trivially_satisfied: bool,
}

pub fn tail_bound(arms: usize, horizon: usize, alpha: f64) -> Result<TailBound> {
    if alpha.is_nan() || alpha <= 1.0 || alpha.is_infinite() {
        return Err(Error::argument(format!("tail bound requires alpha > 1, got {alpha}")));
    }
    if arms < 2 || horizon < 1 {
        return Err(Error::argument("tail bound requires K >= 2 and T >= 1"));
    }
    let k = arms as f64;
    let lnk = libm::log(k);
    let threshold = (alpha + 7.0) * libm::sqrt(horizon as f64 * k * lnk);
    let root = libm::sqrt(alpha);
    let bound_raw = 1000.0 * k * root * libm::exp(-root * lnk / 8.0);
    Ok(TailBound {
        threshold,
        bound_raw,
        bound: bound_raw.clamp(0.0, 1.0),
        trivially_satisfied: threshold > horizon as f64,
    })
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual in log space.
    pub max_residual: f64,
}

pub fn slope_fit(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 3 {
        return Err(Error::argument("slope fit needs at least 3 points"));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite())) {
        return Err(Error::argument("slope fit needs positive finite coordinates"));
    }
    let n = points.len() as f64;
    let (mut sx, mut sy) = (0.0, 0.0);
    for &(x, y) in points {
        sx += libm::log(x);
        sy += libm::log(y);
    }
    let (mx, my) = (sx / n, sy / n);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in points {
        let dx = libm::log(x) - mx;
        sxx += dx * dx;
        sxy += dx * (libm::log(y) - my);
    }
    if sxx == 0.0 {
        return Err(Error::argument("slope fit needs at least two distinct x values"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = points
        .iter()
        .map(|&(x, y)| libm::fabs(libm::log(y) - (intercept + slope * libm::log(x))))
        .fold(0.0, f64::max);
    Ok(SlopeFit {
        slope,
        intercept,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn bound_near_alpha_one() {
        let b = tail_bound(2, 1000, 1.0 + 1e-9).unwrap();
        let lnk = core::f64::consts::LN_2;
        assert!((b.threshold - 8.0 * libm::sqrt(2000.0 * lnk)).abs() < 1e-6);
        assert!((b.threshold - 297.9).abs() < 0.05);
        assert!((b.bound_raw - 2000.0 * libm::exp(-lnk / 8.0)).abs() < 1e-5);
        assert!((b.bound_raw - 1834.0).abs() < 1.0);
        assert_eq!(b.bound, 1.0);
        assert!(!b.trivially_satisfied);
    }

    #[test]
    fn trivially_satisfied_when_threshold_exceeds_horizon() {
        assert!(tail_bound(2, 100, 2.0).unwrap().trivially_satisfied);
        assert!(!tail_bound(2, 1_000_000, 2.0).unwrap().trivially_satisfied);
    }

    #[test]
    fn rejects_small_alpha() {
        for a in [1.0, 0.5, -3.0, f64::NAN] {
            assert!(matches!(tail_bound(2, 100, a), Err(Error::Argument(_))));
        }
    }

    #[test]
    fn decreasing_past_the_turning_point() {
        for k in [2usize, 3, 5, 10, 100] {
            let lnk = libm::log(k as f64);
            let start = (16.0 / lnk) * (16.0 / lnk);
            let mut prev = f64::INFINITY;
            for i in 0..200 {
                let alpha = start * (1.0 + 0.05 * i as f64);
                let b = tail_bound(k, 1000, alpha).unwrap().bound_raw;
                assert!(b < prev, "K = {k}, alpha = {alpha}");
                prev = b;
            }
        }
    }

    #[test]
    fn exact_power_laws() {
        for (c, e) in [(1.0, 0.75), (3.0, 0.5), (0.2, 0.0)] {
            let pts: Vec<(f64, f64)> = (10..17)
                .map(|p| {
                    let x = libm::pow(2.0, p as f64);
                    (x, c * libm::pow(x, e))
                })
                .collect();
            let fit = slope_fit(&pts).unwrap();
            assert!((fit.slope - e).abs() < 1e-9);
            assert!((fit.intercept - libm::log(c)).abs() < 1e-9);
            assert!(fit.max_residual < 1e-9);
        }
    }

    #[test]
    fn slope_fit_errors() {
        assert!(slope_fit(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(slope_fit(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).is_err());
        assert!(slope_fit(&[(-1.0, 1.0), (2.0, 1.0), (3.0, 1.0)]).is_err());
        assert!(slope_fit(&[(2.0, 1.0), (2.0, 3.0), (2.0, 1.0)]).is_err());
    }
}
