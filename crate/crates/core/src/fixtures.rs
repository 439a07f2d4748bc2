//! Seeded generators and small example games shared by the test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{Coalition, Game};
use crate::rational::{rat, Rational};
use crate::value::{GeneralLinearValueMap, PayoffVector, SymmetricValueProfile};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `p ∈ [−20, 20]` and `q ∈ [1, 12]`.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-20..=20), rng.gen_range(1..=12))
}

pub fn random_rationals(rng: &mut impl Rng, len: usize) -> Vec<Rational> {
    (0..len).map(|_| random_rational(rng)).collect()
}

pub fn random_game(rng: &mut impl Rng, n: usize) -> Game {
    Game::from_fn(n, |_| random_rational(rng)).expect("valid player count")
}

/// Three players; worth 1 exactly when player 0 is joined by 1 or 2.
pub fn glove_game() -> Game {
    Game::from_fn(3, |c| {
        let pair = c.contains(0) && (c.contains(1) || c.contains(2));
        rat(pair as i64, 1)
    })
    .expect("three players")
}

/// Worth 1 exactly for coalitions holding a strict majority.
pub fn majority_game(n: usize) -> Game {
    Game::from_fn(n, |c| rat((2 * c.size() > n) as i64, 1)).expect("valid player count")
}

pub fn random_general_map(rng: &mut impl Rng, n: usize) -> GeneralLinearValueMap {
    GeneralLinearValueMap::from_fn(n, |_: Coalition| PayoffVector(random_rationals(rng, n)))
        .expect("valid player count")
}

pub fn random_symmetric_profile(rng: &mut impl Rng, n: usize) -> SymmetricValueProfile {
    let alpha = random_rationals(rng, n);
    let beta = random_rationals(rng, n - 1);
    SymmetricValueProfile::new(n, alpha, beta).expect("valid player count")
}

/// Random `β`, with `α` fixed by efficiency.
pub fn random_efficient_profile(rng: &mut impl Rng, n: usize) -> SymmetricValueProfile {
    let beta = random_rationals(rng, n - 1);
    let mut alpha: Vec<Rational> = beta
        .iter()
        .enumerate()
        .map(|(idx, b)| {
            let a = idx as i64 + 1;
            (rat(1, 1) - b * rat(n as i64 - a, 1)) / rat(a, 1)
        })
        .collect();
    alpha.push(rat(1, n as i64));
    SymmetricValueProfile::new(n, alpha, beta).expect("valid player count")
}
