//! A seeded experiment with a per-trial CSV and an accuracy curve.

use private_littlestone::cli::{run_experiment, ClassSource, DistSpec, ExperimentSpec, LearnerKind};
use private_littlestone::learners::LearnerConfig;
use private_littlestone::Result;

/// `(success rate, per-trial CSV, curve CSV)`.
pub fn run_example() -> Result<(f64, String, String)> {
    let spec = ExperimentSpec {
        class: ClassSource::parse("thresholds:8")?,
        distribution: DistSpec::parse("random")?,
        learner: LearnerKind::Ppp,
        config: LearnerConfig::new(1.0, 1e-6, 0.25, 0.1).desk_scale(true),
        trials: 10,
        seed: 2024,
        output: None,
        curve: vec![0.5, 0.25],
    };
    let r = run_experiment(&spec)?;
    Ok((r.aggregate.success_rate, r.trials_csv(), r.curve_csv()))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let (rate, trials, curve) = run_example()?;
    println!("success rate {rate}\n\n{trials}\n{curve}");
    Ok(())
}
