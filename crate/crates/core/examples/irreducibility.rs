//! k-irreducibility and reducing witnesses.

use private_littlestone::classes::make_thresholds;
use private_littlestone::structure::{find_reducing_witness, irreducibility_order, is_k_irreducible};
use private_littlestone::Result;

/// Irreducibility order of thresholds on 8 points and whether the witness
/// one level above it verifies.
pub fn run_example() -> Result<(Option<u32>, bool)> {
    let class = make_thresholds(8)?;
    let order = irreducibility_order(&class)?;
    let k = order.map(|o| o as u64 + 1).unwrap_or(1);
    assert!(!is_k_irreducible(&class, k)?);
    let w = find_reducing_witness(&class, k)?.expect("class is not k-irreducible");
    Ok((order, w.verify(&class)?))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let (order, ok) = run_example()?;
    println!("irreducibility order {order:?}, witness verifies: {ok}");
    Ok(())
}
