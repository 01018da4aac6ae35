//! PPPLearn end to end: a proper private learner for thresholds.

use private_littlestone::classes::{error_f64, make_thresholds, Distribution};
use private_littlestone::learners::{ppp_learn, LearnerConfig};
use private_littlestone::{RandomSource, Result};

/// `(error, output in class, game value)`.
pub fn run_example() -> Result<(f64, bool, f64)> {
    let class = make_thresholds(16)?;
    let target = class.get(9).expect("17 thresholds").clone();
    let p = Distribution::labeled_by(&target, &Distribution::uniform_marginal(16))?;
    let cfg = LearnerConfig::new(1.0, 1e-6, 0.25, 0.1).desk_scale(true);
    let out = ppp_learn(&class, &p, &cfg, &RandomSource::from_seed(21))?;
    Ok((error_f64(&out.hypothesis, &p)?, class.contains(&out.hypothesis), out.game_value))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let (e, proper, v) = run_example()?;
    println!("error {e:.4}, proper {proper}, game value {v:.4}");
    Ok(())
}
