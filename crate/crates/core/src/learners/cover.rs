use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classes::{Hypothesis, HypothesisClass, Label};
use crate::dp::sample_index;
use crate::error::{Error, Result};
use crate::learners::game::{solve_soa_game, GameSolution};
use crate::rng::RandomSource;

/// Redraws allowed before the cover is declared broken.
pub const COVER_MAX_ATTEMPTS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    /// Distinct members of the draw.
    pub hypotheses: HypothesisClass,
    /// The `m` i.i.d. draws, with repetition, in draw order.
    pub draws: Vec<Hypothesis>,
    pub alpha: f64,
    /// Draw that passed verification, counting from 1.
    pub attempts: u32,
    /// `sup_x |E_D[disagree] - (1/m) sum disagree|` of the accepted draw.
    pub deviation: f64,
    pub game: GameSolution,
}

impl Cover {
    /// `max_x (1/m) sum_j 1[h_j(x) != f_hat(x)]` over the multiset; bounds
    /// the average disagreement under every distribution on the domain.
    pub fn vertex_bound(&self, f_hat: &Hypothesis) -> f64 {
        multiset_losses(&self.draws, f_hat)
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// `ceil(c0 d* / alpha^2)`.
pub fn cover_size(alpha: f64, d_star: usize, c0: f64) -> Result<usize> {
    if !(alpha > 0.0 && alpha <= 1.0) || !(c0 > 0.0) {
        return Err(Error::Argument(format!("cover needs alpha in (0,1] and c0 > 0, got {alpha}, {c0}")));
    }
    Ok((c0 * d_star.max(1) as f64 / (alpha * alpha)).ceil().max(1.0) as usize)
}

fn multiset_losses(draws: &[Hypothesis], f_hat: &Hypothesis) -> Vec<f64> {
    let m = draws.len() as f64;
    (0..f_hat.domain_size())
        .map(|x| draws.iter().filter(|h| h.label(x) != f_hat.label(x)).count() as f64 / m)
        .collect()
}

/// Seed depending only on the class, `f_hat`, `alpha` and the attempt.
fn cover_seed(class: &HypothesisClass, f_hat: &Hypothesis, alpha: f64, attempt: u32) -> u64 {
    let mut h = Sha256::new();
    h.update(b"cover");
    for f in class.fingerprint() {
        h.update([b'|']);
        h.update(f.labels().iter().map(|&l| (l == Label::Pos) as u8).collect::<Vec<_>>());
    }
    h.update([b'#']);
    h.update(f_hat.labels().iter().map(|&l| (l == Label::Pos) as u8).collect::<Vec<_>>());
    h.update(alpha.to_bits().to_le_bytes());
    h.update(attempt.to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// A small subset of `class` whose uniform mixture tracks the minimax
/// strategy against `f_hat` within `alpha` at every point. Deterministic in
/// `(class, f_hat, alpha, d_star, c0)`.
pub fn build_cover(
    class: &HypothesisClass,
    f_hat: &Hypothesis,
    alpha: f64,
    d_star: usize,
    c0: f64,
) -> Result<Cover> {
    let m = cover_size(alpha, d_star, c0)?;
    build_cover_sized(class, f_hat, alpha, m)
}

pub fn build_cover_sized(class: &HypothesisClass, f_hat: &Hypothesis, alpha: f64, m: usize) -> Result<Cover> {
    if m == 0 {
        return Err(Error::Argument("cover size must be at least 1".into()));
    }
    let game = solve_soa_game(class, f_hat)?;
    let expected = game.point_losses(class, f_hat);
    for attempt in 1..=COVER_MAX_ATTEMPTS {
        let mut rng = RandomSource::from_seed(cover_seed(class, f_hat, alpha, attempt));
        let draws: Vec<Hypothesis> = (0..m)
            .map(|_| class.hypotheses()[sample_index(&game.d, &mut rng)].clone())
            .collect();
        let deviation = multiset_losses(&draws, f_hat)
            .iter()
            .zip(&expected)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if deviation <= alpha {
            return Ok(Cover {
                hypotheses: HypothesisClass::new(class.domain_size(), draws.iter().cloned())?,
                draws,
                alpha,
                attempts: attempt,
                deviation,
                game,
            });
        }
    }
    Err(Error::Contract(format!(
        "{COVER_MAX_ATTEMPTS} cover draws all deviated by more than {alpha}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::make_thresholds;

    #[test]
    fn member_cover_is_itself() {
        let c = make_thresholds(6).unwrap();
        let f = c.get(4).unwrap().clone();
        let cover = build_cover(&c, &f, 0.25, 1, 1.0).unwrap();
        assert_eq!(cover.hypotheses.len(), 1);
        assert!(cover.hypotheses.contains(&f));
        assert_eq!(cover.draws.len(), 16);
    }

    #[test]
    fn deterministic() {
        let c = make_thresholds(5).unwrap();
        let f = Hypothesis::from_signs(&[-1, 1, -1, 1, 1]).unwrap();
        let a = build_cover(&c, &f, 0.2, 1, 1.0).unwrap();
        let b = build_cover(&c, &f, 0.2, 1, 1.0).unwrap();
        assert_eq!(a, b);
        assert!(a.vertex_bound(&f) <= a.game.value + a.alpha + 1e-9);
    }
}
