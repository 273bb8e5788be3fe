use alloc::vec;
use alloc::vec::Vec;

use super::game::PayoffMatrix;
use crate::{Error, Result};

/// Largest duality gap accepted as a certified value.
pub const GAP_TARGET: f64 = 1e-6;

const PIVOT_EPS: f64 = 1e-12;

/// Mixed strategies with the bounds they certify.
///
/// `lower <= value <= upper`: the adversary mix holds every gambler strategy
/// to at least `lower`, the gambler mix holds every adversary to at most
/// `upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct GameSolution {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
    pub gambler: Vec<f64>,
    pub adversary: Vec<f64>,
}

/// Best-response bounds for the mixes `x` (rows) and `y` (columns).
pub fn certify(matrix: &PayoffMatrix, x: &[f64], y: &[f64]) -> (f64, f64) {
    let mut upper = f64::NEG_INFINITY;
    for j in 0..matrix.cols() {
        let v: f64 = (0..matrix.rows()).map(|i| x[i] * matrix.get(i, j)).sum();
        upper = upper.max(v);
    }
    let lower = (0..matrix.rows())
        .map(|i| matrix.row(i).iter().zip(y).map(|(m, q)| m * q).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    (lower, upper)
}

fn normalize(v: &mut [f64]) {
    for x in v.iter_mut() {
        *x = x.max(0.0);
    }
    let s: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= s;
    }
}

fn solution(matrix: &PayoffMatrix, mut gambler: Vec<f64>, mut adversary: Vec<f64>) -> GameSolution {
    normalize(&mut gambler);
    normalize(&mut adversary);
    let (lower, upper) = certify(matrix, &gambler, &adversary);
    GameSolution {
        value: 0.5 * (lower + upper),
        lower,
        upper,
        gap: upper - lower,
        gambler,
        adversary,
    }
}

/// Value of the zero-sum game where rows minimize, solved by the simplex
/// method with Bland's rule. Fails with a numeric error when the certified
/// gap exceeds [`GAP_TARGET`].
pub fn game_value(matrix: &PayoffMatrix) -> Result<GameSolution> {
    let (m, n) = (matrix.rows(), matrix.cols());
    // Shift so every entry is at least 1; the value shifts by the same amount.
    let min = matrix.entries().iter().copied().fold(f64::INFINITY, f64::min);
    let shift = 1.0 - min;

    // max sum(x') s.t. M'^T x' <= 1, x' >= 0. Columns: x' (m), slacks (n), rhs.
    let width = m + n + 1;
    let mut tab = vec![0.0; (n + 1) * width];
    for j in 0..n {
        let row = &mut tab[j * width..(j + 1) * width];
        for (i, cell) in row[..m].iter_mut().enumerate() {
            *cell = matrix.get(i, j) + shift;
        }
        row[m + j] = 1.0;
        row[width - 1] = 1.0;
    }
    for i in 0..m {
        tab[n * width + i] = -1.0;
    }
    let mut basis: Vec<usize> = (m..m + n).collect();

    loop {
        let obj = &tab[n * width..];
        let Some(enter) = (0..m + n).find(|&c| obj[c] < -PIVOT_EPS) else {
            break;
        };
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..n {
            let a = tab[r * width + enter];
            if a > PIVOT_EPS {
                let ratio = tab[r * width + width - 1] / a;
                let better = match leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < lratio - PIVOT_EPS || (ratio <= lratio + PIVOT_EPS && basis[r] < basis[lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // The feasible region is bounded since every shifted entry is positive.
        let (pr, _) = leave.ok_or_else(|| Error::State("simplex: unbounded direction".into()))?;
        let pivot = tab[pr * width + enter];
        for c in 0..width {
            tab[pr * width + c] /= pivot;
        }
        let pivot_row: Vec<f64> = tab[pr * width..(pr + 1) * width].to_vec();
        for r in 0..=n {
            if r == pr {
                continue;
            }
            let factor = tab[r * width + enter];
            if factor != 0.0 {
                for (c, p) in pivot_row.iter().enumerate() {
                    tab[r * width + c] -= factor * p;
                }
            }
        }
        basis[pr] = enter;
    }

    let mut x = vec![0.0; m];
    for (r, &b) in basis.iter().enumerate() {
        if b < m {
            x[b] = tab[r * width + width - 1];
        }
    }
    let y: Vec<f64> = (0..n).map(|j| tab[n * width + m + j]).collect();
    let sol = solution(matrix, x, y);
    if sol.gap.is_nan() || sol.gap > GAP_TARGET {
        return Err(Error::Numeric { gap: sol.gap, target: GAP_TARGET });
    }
    Ok(sol)
}

/// Approximate solution by multiplicative-weights self-play with averaged
/// iterates. Independent of the simplex path; the gap shrinks like
/// `sqrt(ln(rows + cols) / iterations)`.
pub fn self_play(matrix: &PayoffMatrix, iterations: usize) -> GameSolution {
    let (m, n) = (matrix.rows(), matrix.cols());
    let (lo, hi) = matrix
        .entries()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let range = (hi - lo).max(f64::MIN_POSITIVE);
    let iters = iterations.max(1);
    let eta_row = libm::sqrt(8.0 * libm::log(m as f64 + 1.0) / iters as f64);
    let eta_col = libm::sqrt(8.0 * libm::log(n as f64 + 1.0) / iters as f64);

    let mut row_loss = vec![0.0; m];
    let mut col_gain = vec![0.0; n];
    let mut x_avg = vec![0.0; m];
    let mut y_avg = vec![0.0; n];
    let mut x = vec![0.0; m];
    let mut y = vec![0.0; n];
    for _ in 0..iters {
        weights_into(&row_loss, eta_row, &mut x);
        let neg: Vec<f64> = col_gain.iter().map(|g| -g).collect();
        weights_into(&neg, eta_col, &mut y);
        for i in 0..m {
            let v: f64 = matrix.row(i).iter().zip(&y).map(|(a, b)| a * b).sum();
            row_loss[i] += (v - lo) / range;
            x_avg[i] += x[i];
        }
        for j in 0..n {
            let v: f64 = (0..m).map(|i| x[i] * matrix.get(i, j)).sum();
            col_gain[j] += (v - lo) / range;
            y_avg[j] += y[j];
        }
    }
    solution(matrix, x_avg, y_avg)
}

fn weights_into(losses: &[f64], eta: f64, out: &mut [f64]) {
    let min = losses.iter().copied().fold(f64::INFINITY, f64::min);
    let mut total = 0.0;
    for (o, l) in out.iter_mut().zip(losses) {
        *o = libm::exp(-eta * (l - min));
        total += *o;
    }
    for o in out.iter_mut() {
        *o /= total;
    }
}
