//! Small numerical helpers shared by the engine and the solver.

/// Neumaier-compensated running sum.
///
/// Summation order still matters for the last bit, so callers that need
/// reproducibility must feed values in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

pub fn compensated_sum(values: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.extend(values.iter().copied());
    acc.value()
}

/// True when `p` is a probability vector: finite, strictly positive entries
/// summing to one within `tol`.
pub fn is_strict_distribution(p: &[f64], tol: f64) -> bool {
    !p.is_empty()
        && p.iter().all(|&x| x.is_finite() && x > 0.0)
        && libm::fabs(compensated_sum(p) - 1.0) <= tol
}
