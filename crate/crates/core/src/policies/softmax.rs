//! Exponential-weights map, its potential, and the sliding exploration barrier.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

fn check_inputs(z: &[f64], eta: f64) -> Result<()> {
    if z.is_empty() {
        return Err(Error::argument("empty score vector"));
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::argument(format!("learning rate must be positive, got {eta}")));
    }
    if z.iter().any(|x| !x.is_finite()) {
        return Err(Error::argument("score vector has non-finite entries"));
    }
    Ok(())
}

fn min_of(z: &[f64]) -> f64 {
    z.iter().copied().fold(f64::INFINITY, f64::min)
}

/// `f_j(z) = exp(-eta z_j) / sum_l exp(-eta z_l)`.
///
/// Evaluated after subtracting `min_l z_l`, so every exponent is `<= 0` and the
/// denominator is at least 1.
pub fn softmax_f(z: &[f64], eta: f64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; z.len()];
    softmax_into(z, eta, &mut out)?;
    Ok(out)
}

pub fn softmax_into(z: &[f64], eta: f64, out: &mut [f64]) -> Result<()> {
    check_inputs(z, eta)?;
    debug_assert_eq!(z.len(), out.len());
    let m = min_of(z);
    let mut total = 0.0;
    for (o, &zj) in out.iter_mut().zip(z) {
        *o = libm::exp(-eta * (zj - m));
        total += *o;
    }
    out.iter_mut().for_each(|o| *o /= total);
    Ok(())
}

/// `Phi_j(z) = z_j + (1/eta) ln sum_l exp(-eta z_l)`, i.e. `(1/eta) ln(1/f_j(z))`.
pub fn potential_phi(z: &[f64], arm: usize, eta: f64) -> Result<f64> {
    check_inputs(z, eta)?;
    if arm >= z.len() {
        return Err(Error::argument(format!("arm index {arm} out of range")));
    }
    let m = min_of(z);
    let total: f64 = z.iter().map(|&zl| libm::exp(-eta * (zl - m))).sum();
    Ok((z[arm] - m) + libm::log(total) / eta)
}

/// Barrier exponent used unless overridden.
pub const DEFAULT_BARRIER_EXPONENT: f64 = 1.5;

/// `g(x) = max(eta, 1 / (K (1 + x/theta)^s))`, the minimum exploration rate
/// granted to an arm whose account holds `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Barrier {
    pub eta: f64,
    pub theta: f64,
    pub arms: usize,
    pub exponent: f64,
}

impl Barrier {
    pub fn new(eta: f64, theta: f64, arms: usize) -> Result<Self> {
        Self::with_exponent(eta, theta, arms, DEFAULT_BARRIER_EXPONENT)
    }

    pub fn with_exponent(eta: f64, theta: f64, arms: usize, exponent: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite() && theta > 0.0 && theta.is_finite()) {
            return Err(Error::argument("barrier needs positive finite eta and theta"));
        }
        if arms < 2 {
            return Err(Error::argument("barrier needs at least 2 arms"));
        }
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(Error::argument("barrier exponent must be positive"));
        }
        Ok(Self { eta, theta, arms, exponent })
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::argument(format!("barrier argument must be >= 0, got {x}")));
        }
        Ok(self.eval(x))
    }

    /// Unchecked evaluation for callers that maintain `x >= 0` themselves.
    pub(crate) fn eval(&self, x: f64) -> f64 {
        let slope = 1.0 / (self.arms as f64 * libm::pow(1.0 + x / self.theta, self.exponent));
        self.eta.max(slope)
    }

    /// Smallest account value at which the barrier sits on its floor `eta`.
    pub fn plateau_start(&self) -> f64 {
        let x = self.theta * (libm::pow(self.eta * self.arms as f64, -1.0 / self.exponent) - 1.0);
        x.max(0.0)
    }
}

/// `g` with the default exponent; see [`Barrier`].
pub fn barrier_g(x: f64, eta: f64, theta: f64, arms: usize) -> Result<f64> {
    Barrier::new(eta, theta, arms)?.value(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn uniform_at_zero() {
        for k in 2..6 {
            let p = softmax_f(&vec![0.0; k], 0.7).unwrap();
            for x in p {
                assert!((x - 1.0 / k as f64).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn two_thirds_one_third() {
        let p = softmax_f(&[0.0, core::f64::consts::LN_2], 1.0).unwrap();
        assert!((p[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((p[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(softmax_f(&[0.0, f64::NAN], 1.0).is_err());
        assert!(softmax_f(&[0.0, f64::INFINITY], 1.0).is_err());
        assert!(softmax_f(&[0.0, 1.0], 0.0).is_err());
        assert!(potential_phi(&[0.0, 1.0], 2, 1.0).is_err());
    }

    #[test]
    fn potential_examples() {
        let eta = 0.05;
        for k in 2..6 {
            let phi = potential_phi(&vec![0.0; k], 0, eta).unwrap();
            assert!((phi - libm::log(k as f64) / eta).abs() < 1e-12);
        }
        let phi = potential_phi(&[0.0, 0.0], 1, 1.0).unwrap();
        assert!((phi - core::f64::consts::LN_2).abs() < 1e-15);
        let phi = potential_phi(&[0.0, 1e6], 0, 1.0).unwrap();
        assert!((0.0..1e-12).contains(&phi));
    }

    #[test]
    fn potential_is_log_inverse_softmax() {
        let z = [3.0, 1.0, 7.5];
        let eta = 0.3;
        let p = softmax_f(&z, eta).unwrap();
        for (j, pj) in p.iter().enumerate() {
            let phi = potential_phi(&z, j, eta).unwrap();
            assert!((phi - libm::log(1.0 / pj) / eta).abs() < 1e-12);
        }
    }

    #[test]
    fn barrier_examples() {
        let (eta, theta, k) = (0.01, 100.0, 4);
        // x = 0 with eta <= 1/K
        assert_eq!(barrier_g(0.0, eta, theta, k).unwrap(), 0.25);
        // (1 + 3)^{3/2} = 8
        assert!((barrier_g(3.0 * theta, eta, theta, k).unwrap() - 1.0 / 32.0).abs() < 1e-15);
        assert_eq!(barrier_g(1e12, eta, theta, k).unwrap(), eta);
        assert!(barrier_g(-1.0, eta, theta, k).is_err());
        assert!(barrier_g(f64::NAN, eta, theta, k).is_err());
    }

    #[test]
    fn plateau_point() {
        let b = Barrier::new(0.01, 100.0, 4).unwrap();
        let a = b.plateau_start();
        let expected = 100.0 * (libm::pow(0.04, -2.0 / 3.0) - 1.0);
        assert!((a - expected).abs() < 1e-9);
        assert!((b.eval(a) - 0.01).abs() < 1e-12);
        assert_eq!(b.eval(a * 1.0001), 0.01);
        assert!(b.eval(a * 0.99) > 0.01);
    }

    proptest! {
        #[test]
        fn normalized_and_shift_invariant(
            z in proptest::collection::vec(-50.0f64..50.0, 2..8),
            shift in -1e3f64..1e3,
            eta in 0.001f64..3.0,
        ) {
            let p = softmax_f(&z, eta).unwrap();
            let sum: f64 = p.iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
            prop_assert!(p.iter().all(|&x| x > 0.0));
            let shifted: Vec<f64> = z.iter().map(|x| x + shift).collect();
            let q = softmax_f(&shifted, eta).unwrap();
            for (a, b) in p.iter().zip(&q) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }

        #[test]
        fn potential_nonnegative(
            z in proptest::collection::vec(0.0f64..1e4, 2..8),
            eta in 0.001f64..1.0,
        ) {
            for j in 0..z.len() {
                prop_assert!(potential_phi(&z, j, eta).unwrap() >= -1e-9);
            }
        }

        #[test]
        fn barrier_monotone(
            x in 0.0f64..1e6,
            dy in 0.0f64..1e6,
            k in 2usize..10,
            t in 1usize..100_000,
        ) {
            let lnk = libm::log(k as f64);
            let eta = libm::sqrt(lnk / (t * k) as f64);
            let theta = libm::sqrt((t * k) as f64 * lnk);
            let b = Barrier::new(eta, theta, k).unwrap();
            let gx = b.value(x).unwrap();
            let gy = b.value(x + dy).unwrap();
            prop_assert!(gx >= gy && gy >= eta);
            prop_assert!(gx <= eta.max(1.0 / k as f64));
        }
    }
}
