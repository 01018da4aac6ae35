use serde::{Deserialize, Serialize};

use crate::classes::{Hypothesis, HypothesisClass};
use crate::error::{Error, Result};

/// Additive tolerance of the minimax certificate.
pub const GAME_TOLERANCE: f64 = 1e-6;

const PIVOT_EPS: f64 = 1e-12;

/// Minimax solution of the disagreement game against `f_hat`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameSolution {
    /// Mixed strategy over the class, in class order.
    pub d: Vec<f64>,
    /// Maximizing distribution over domain points.
    pub p: Vec<f64>,
    pub value: f64,
    /// `max_x loss(D, x) - min_h loss(h, P)`.
    pub gap: f64,
}

impl GameSolution {
    /// Expected disagreement of `D` with `f_hat` at every point.
    pub fn point_losses(&self, class: &HypothesisClass, f_hat: &Hypothesis) -> Vec<f64> {
        (0..f_hat.domain_size())
            .map(|x| {
                class
                    .iter()
                    .zip(&self.d)
                    .filter(|(h, _)| h.label(x) != f_hat.label(x))
                    .map(|(_, w)| w)
                    .sum()
            })
            .collect()
    }
}

/// Maximizes `c.w` subject to `a w <= b`, `w >= 0`, for `b >= 0`, by the
/// tableau simplex method with Bland's rule. Returns the primal solution,
/// the dual solution and the optimum.
pub fn simplex_max(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let rows = a.len();
    let cols = c.len();
    if b.len() != rows || a.iter().any(|r| r.len() != cols) {
        return Err(Error::Argument("inconsistent LP dimensions".into()));
    }
    if b.iter().any(|&v| v < 0.0) {
        return Err(Error::Argument("simplex_max needs b >= 0".into()));
    }
    let width = cols + rows + 1;
    let mut t = vec![vec![0.0; width]; rows + 1];
    for i in 0..rows {
        t[i][..cols].copy_from_slice(&a[i]);
        t[i][cols + i] = 1.0;
        t[i][width - 1] = b[i];
    }
    for j in 0..cols {
        t[rows][j] = -c[j];
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    loop {
        let Some(enter) = (0..cols + rows).find(|&j| t[rows][j] < -PIVOT_EPS) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for i in 0..rows {
            if t[i][enter] > PIVOT_EPS {
                let r = t[i][width - 1] / t[i][enter];
                leave = match leave {
                    None => Some(i),
                    Some(l) => {
                        let rl = t[l][width - 1] / t[l][enter];
                        if r < rl - PIVOT_EPS || ((r - rl).abs() <= PIVOT_EPS && basis[i] < basis[l]) {
                            Some(i)
                        } else {
                            Some(l)
                        }
                    }
                };
            }
        }
        let Some(l) = leave else {
            return Err(Error::Contract("linear program is unbounded".into()));
        };
        let pv = t[l][enter];
        for v in t[l].iter_mut() {
            *v /= pv;
        }
        let pivot_row = t[l].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != l {
                let f = row[enter];
                if f != 0.0 {
                    for (v, p) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * p;
                    }
                }
            }
        }
        basis[l] = enter;
    }
    let mut w = vec![0.0; cols];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < cols {
            w[bv] = t[i][width - 1];
        }
    }
    let y = (0..rows).map(|i| t[rows][cols + i]).collect();
    Ok((w, y, t[rows][width - 1]))
}

/// Solves `min_{D in Delta(F)} max_x P_{h~D}[h(x) != f_hat(x)]`.
///
/// With payoff shifted by one the game has positive value, so
/// `max sum(w)` s.t. `sum_h (A[h][x] + 1) w_h <= 1` gives `D = w / sum(w)`
/// and value `1 / sum(w) - 1`; the dual gives the maximizing `P`.
pub fn solve_soa_game(class: &HypothesisClass, f_hat: &Hypothesis) -> Result<GameSolution> {
    if class.is_empty() {
        return Err(Error::Argument("game over an empty class".into()));
    }
    if f_hat.domain_size() != class.domain_size() {
        return Err(Error::Domain("f_hat and the class have different domains".into()));
    }
    let n = class.domain_size();
    let loss = |h: &Hypothesis, x: usize| (h.label(x) != f_hat.label(x)) as u8 as f64;
    if n == 0 {
        let mut d = vec![0.0; class.len()];
        d[0] = 1.0;
        return Ok(GameSolution {
            d,
            p: Vec::new(),
            value: 0.0,
            gap: 0.0,
        });
    }
    let a: Vec<Vec<f64>> = (0..n)
        .map(|x| class.iter().map(|h| loss(h, x) + 1.0).collect())
        .collect();
    let (w, y, total) = simplex_max(&a, &vec![1.0; n], &vec![1.0; class.len()])?;
    if !(total > 0.0) {
        return Err(Error::Contract("game LP has a nonpositive optimum".into()));
    }
    let d: Vec<f64> = w.iter().map(|v| v / total).collect();
    let ysum: f64 = y.iter().sum();
    let p: Vec<f64> = y.iter().map(|v| v.max(0.0) / ysum).collect();
    let value = 1.0 / total - 1.0;
    let row_max = (0..n)
        .map(|x| class.iter().zip(&d).map(|(h, w)| w * loss(h, x)).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    let col_min = class
        .iter()
        .map(|h| (0..n).map(|x| p[x] * loss(h, x)).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    let gap = row_max - col_min;
    if gap.abs() > GAME_TOLERANCE || (row_max - value).abs() > GAME_TOLERANCE {
        return Err(Error::Contract(format!(
            "best-response check failed: max {row_max}, min {col_min}, value {value}"
        )));
    }
    Ok(GameSolution { d, p, value, gap })
}
