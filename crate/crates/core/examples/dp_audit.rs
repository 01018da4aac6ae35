//! Exhaustive privacy audits of the mechanisms, with a broken control.

use private_littlestone::cli::{dp_audit, AuditInstance};
use private_littlestone::Result;

/// `(mechanism, passed)` per audit; the last one must fail.
pub fn run_example() -> Result<Vec<(String, bool)>> {
    let inst = AuditInstance {
        candidates: 3,
        max_score: 2,
        universe: 2,
        n: 3,
        ell: 1,
        m: 2,
        ..AuditInstance::default()
    };
    let mut out = Vec::new();
    for (mech, delta) in [
        ("exponential", 0.0),
        ("counting", 0.0),
        ("generic_learner", 0.0),
        ("sparse_selection", 1e-3),
    ] {
        let r = dp_audit(mech, &inst, 1.0, delta)?;
        out.push((r.mechanism, r.passed));
    }
    let broken = AuditInstance {
        sensitivity: 0.5,
        ..inst
    };
    let r = dp_audit("counting", &broken, 1.0, 0.0)?;
    out.push((r.mechanism, r.passed));
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    for (m, ok) in run_example()? {
        println!("{m:40} {}", if ok { "private" } else { "VIOLATED" });
    }
    Ok(())
}
