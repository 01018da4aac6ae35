//! SOA classifiers of restricted classes and the tilde closure.

use private_littlestone::classes::{make_random, restrict, ConstraintSet, Label};
use private_littlestone::dimensions::ldim;
use private_littlestone::structure::{soa, tilde_class};
use private_littlestone::Result;

/// `(ldim F, ldim tilde F, |F|, |tilde F|)` for a random class on 4 points.
pub fn run_example() -> Result<(i32, i32, usize, usize)> {
    let class = make_random(4, 7, 11)?;
    let d = ldim(&class)?;
    let tilde = tilde_class(&class, (d + 1) as u64)?;
    let sub = restrict(&class, &ConstraintSet::new(vec![(0, Label::Pos)]))?;
    if !sub.is_empty() {
        println!("soa after x0 -> +1: {:?}", soa(&sub)?);
    }
    Ok((d, ldim(&tilde)?, class.len(), tilde.len()))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let (d, dt, n, nt) = run_example()?;
    println!("ldim {d} over {n} hypotheses; tilde class ldim {dt} over {nt}");
    Ok(())
}
