//! Sparse selection over users' small sets.

use private_littlestone::dp::{selection_error, sparse_selection, Selection, SparseSelectionParams};
use private_littlestone::{RandomSource, Result};

/// `(selected element, error, guarantee)`.
pub fn run_example() -> Result<(Option<u32>, usize, f64)> {
    let m = 60;
    // 40 users hold element 7, the rest hold singletons of their own
    let sets: Vec<Vec<u32>> = (0..m)
        .map(|i| if i < 40 { vec![7, 100 + i] } else { vec![100 + i] })
        .collect();
    let params = SparseSelectionParams::new(2, 1.0, 1e-6, 0.1)?;
    let sel = sparse_selection(&sets, &params, &mut RandomSource::from_seed(3).child("select"))?;
    let err = selection_error(&sets, &sel);
    let element = match sel {
        Selection::Element(e) => Some(e),
        Selection::Bottom => None,
    };
    Ok((element, err, params.error_guarantee(m as usize)))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let (e, err, g) = run_example()?;
    println!("selected {e:?} with error {err}, guarantee {g:.1}");
    Ok(())
}
