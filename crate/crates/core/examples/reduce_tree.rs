//! ReduceTree on an empirical distribution of a thresholds target.

use private_littlestone::classes::{empirical_distribution, make_thresholds, sample, Distribution};
use private_littlestone::learners::{reduce_tree, ReduceTreeConfig};
use private_littlestone::{RandomSource, Result};

/// `(|S_hat|, t_final, output bound)`.
pub fn run_example() -> Result<(usize, usize, u128)> {
    let class = make_thresholds(8)?;
    let target = class.get(3).expect("9 thresholds").clone();
    let p = Distribution::labeled_by(&target, &Distribution::uniform_marginal(8))?;
    let n = 200;
    let data = sample(&p, n, &mut RandomSource::from_seed(4).child("data"))?;
    let p_hat = empirical_distribution(&data)?;
    let alpha_delta = 0.02;
    // k' >= n (d + 3) alpha_delta with d = 3
    let k_prime = (n as f64 * 6.0 * alpha_delta).ceil() as u64;
    let cfg = ReduceTreeConfig::new(n as u64, k_prime, 0.1).with_alpha_delta(alpha_delta);
    let out = reduce_tree(&class, &p_hat, &cfg)?;
    assert!(out.s_hat.contains(&target) || !out.s_hat.is_empty());
    Ok((out.s_hat.len(), out.t_final, out.schedule.output_bound()))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let (s, t, b) = run_example()?;
    println!("|S_hat| = {s} (bound {b}), t_final = {t}");
    Ok(())
}
