//! Minimax game against an improper hypothesis and the sampled cover.

use private_littlestone::classes::{make_thresholds, Hypothesis};
use private_littlestone::learners::build_cover;
use private_littlestone::Result;

/// `(game value, cover members, vertex bound)`.
pub fn run_example() -> Result<(f64, usize, f64)> {
    let class = make_thresholds(6)?;
    // not a threshold: two sign changes
    let f_hat = Hypothesis::from_signs(&[-1, 1, -1, 1, 1, 1])?;
    let cover = build_cover(&class, &f_hat, 0.2, 1, 1.0)?;
    Ok((cover.game.value, cover.hypotheses.len(), cover.vertex_bound(&f_hat)))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let (v, n, b) = run_example()?;
    println!("game value {v:.4}; cover of {n} members with worst-point loss {b:.4}");
    Ok(())
}
