//! Littlestone and VC dimensions of the built-in classes, with a shattered
//! tree for thresholds.

use private_littlestone::classes::{make_all_functions, make_negpt, make_thresholds};
use private_littlestone::dimensions::{ldim, ldim_witness, vcdim, verify_shattered};
use private_littlestone::Result;

/// `(name, ldim, vc)` per class.
pub fn run_example() -> Result<Vec<(String, i32, i32)>> {
    let mut rows = Vec::new();
    for (name, class) in [
        ("thresholds:16", make_thresholds(16)?),
        ("negpt:8", make_negpt(8)?),
        ("all:3", make_all_functions(3)?),
    ] {
        rows.push((name.to_string(), ldim(&class)?, vcdim(&class)));
    }
    let t = make_thresholds(16)?;
    let tree = ldim_witness(&t)?.expect("thresholds on 16 points have Ldim 4");
    assert!(verify_shattered(&t, &tree));
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    for (name, l, v) in run_example()? {
        println!("{name:14} ldim {l}  vc {v}");
    }
    Ok(())
}
