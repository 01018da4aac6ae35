//! PolyPriLearn with desk-scale constants.

use private_littlestone::classes::{error_f64, make_thresholds, Distribution};
use private_littlestone::learners::{poly_pri_learn, LearnerConfig};
use private_littlestone::{RandomSource, Result};

/// `(error of the output, chunks, samples)`.
pub fn run_example() -> Result<(f64, usize, u64)> {
    let class = make_thresholds(8)?;
    let target = class.get(5).expect("9 thresholds").clone();
    let p = Distribution::labeled_by(&target, &Distribution::uniform_marginal(8))?;
    let cfg = LearnerConfig::new(1.0, 1e-6, 0.25, 0.1).desk_scale(true);
    let out = poly_pri_learn(&class, &p, &cfg, &RandomSource::from_seed(8))?;
    let h = out.hypothesis()?;
    Ok((error_f64(h, &p)?, out.chunks.len(), out.plan.samples))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let (e, m, n) = run_example()?;
    println!("error {e:.4} from {m} chunks ({n} samples)");
    Ok(())
}
