//! Coalitions, TU games, the unanimity basis and Harsanyi dividends.
//!
//! Players are `0..n` and a coalition is a bitmask over them. A game stores
//! the worth of every nonempty coalition at index `bits - 1`; the empty
//! coalition is worth zero and is not stored.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

pub const MIN_PLAYERS: usize = 2;
/// Largest player count a coalition bitmask may address.
pub const MAX_PLAYERS: usize = 30;
/// Largest player count for which a full worth table is materialised.
pub const MAX_GAME_PLAYERS: usize = 24;
/// Largest player count for generated H-orthonormal bases.
pub const MAX_BASIS_PLAYERS: usize = 5;

pub(crate) fn check_players(n: usize, max: usize) -> Result<()> {
    if (MIN_PLAYERS..=max).contains(&n) {
        Ok(())
    } else {
        Err(Error::PlayerCount {
            n,
            min: MIN_PLAYERS,
            max,
        })
    }
}

pub(crate) fn same_players(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::PlayerMismatch { left, right })
    }
}

/// A nonempty or empty subset of the players `0..n`, as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition {
    bits: u32,
    n: usize,
}

impl Coalition {
    pub fn new(bits: u32, n: usize) -> Result<Self> {
        check_players(n, MAX_PLAYERS)?;
        if u64::from(bits) >= 1u64 << n {
            return Err(Error::CoalitionOutOfRange {
                bits: bits.into(),
                n,
            });
        }
        Ok(Coalition { bits, n })
    }

    pub fn from_players(players: &[usize], n: usize) -> Result<Self> {
        check_players(n, MAX_PLAYERS)?;
        let mut bits = 0u32;
        for &p in players {
            if p >= n {
                return Err(Error::PlayerOutOfRange { player: p, n });
            }
            bits |= 1 << p;
        }
        Ok(Coalition { bits, n })
    }

    pub fn grand(n: usize) -> Result<Self> {
        check_players(n, MAX_PLAYERS)?;
        Ok(Coalition {
            bits: full_mask(n),
            n,
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, player: usize) -> bool {
        player < self.n && self.bits & (1 << player) != 0
    }

    pub fn is_subset_of(&self, other: &Coalition) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn players(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.contains(i))
    }

    /// All nonempty coalitions in increasing bitmask order.
    pub fn all_nonempty(n: usize) -> impl Iterator<Item = Coalition> {
        (1..=full_mask(n)).map(move |bits| Coalition { bits, n })
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let players: Vec<String> = self.players().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", players.join(","))
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    ((1u64 << n) - 1) as u32
}

/// Number of nonempty coalitions, `2^n - 1`.
pub fn coalition_count(n: usize) -> usize {
    (1usize << n) - 1
}

/// A TU game given by the worth of every nonempty coalition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    n: usize,
    worths: Vec<Rational>,
}

impl Game {
    pub fn new(n: usize, worths: Vec<Rational>) -> Result<Self> {
        check_players(n, MAX_GAME_PLAYERS)?;
        if worths.len() != coalition_count(n) {
            return Err(Error::WrongLength {
                expected: coalition_count(n),
                found: worths.len(),
            });
        }
        Ok(Game { n, worths })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Game::new(n, vec![Rational::zero(); coalition_count(n)])
    }

    pub fn from_fn(n: usize, mut worth: impl FnMut(Coalition) -> Rational) -> Result<Self> {
        check_players(n, MAX_GAME_PLAYERS)?;
        let worths = Coalition::all_nonempty(n).map(&mut worth).collect();
        Ok(Game { n, worths })
    }

    /// The unanimity game `u_A`: worth 1 on every superset of `A`, else 0.
    pub fn unanimity(n: usize, carrier: Coalition) -> Result<Self> {
        check_players(n, MAX_GAME_PLAYERS)?;
        if carrier.is_empty() {
            return Err(Error::EmptyCoalition);
        }
        if carrier.n() != n || u64::from(carrier.bits()) >= 1u64 << n {
            return Err(Error::CoalitionOutOfRange {
                bits: carrier.bits().into(),
                n,
            });
        }
        Game::from_fn(n, |c| {
            if carrier.is_subset_of(&c) {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn worths(&self) -> &[Rational] {
        &self.worths
    }

    pub fn worth(&self, coalition: &Coalition) -> Rational {
        self.worth_bits(coalition.bits())
    }

    /// Worth by raw bitmask; the empty coalition is worth zero.
    pub fn worth_bits(&self, bits: u32) -> Rational {
        match bits {
            0 => Rational::zero(),
            b => self.worths[b as usize - 1].clone(),
        }
    }

    pub(crate) fn worth_ref(&self, bits: u32) -> Option<&Rational> {
        (bits != 0).then(|| &self.worths[bits as usize - 1])
    }

    pub fn grand_worth(&self) -> Rational {
        self.worth_bits(full_mask(self.n))
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: &Rational, other: &Game, b: &Rational) -> Result<Game> {
        same_players(self.n, other.n)?;
        let worths = self
            .worths
            .iter()
            .zip(&other.worths)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(Game { n: self.n, worths })
    }

    /// Relabels players: player `i` of `self` becomes player `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Game> {
        if perm.len() != self.n {
            return Err(Error::WrongLength {
                expected: self.n,
                found: perm.len(),
            });
        }
        let mut worths = vec![Rational::zero(); self.worths.len()];
        for c in Coalition::all_nonempty(self.n) {
            let image: u32 = c.players().map(|i| 1u32 << perm[i]).sum();
            worths[image as usize - 1] = self.worth(&c);
        }
        Ok(Game { n: self.n, worths })
    }

    /// Parses the JSON game format:
    /// `{ "n": 3, "coalitions": [ { "players": [0, 1], "worth": "1/2" }, ... ] }`.
    ///
    /// Unlisted coalitions are worth zero. Worths are `"p/q"` strings or JSON
    /// numbers, the latter converted exactly from their decimal text.
    pub fn from_json(text: &str) -> Result<Game> {
        let fmt = |m: &str| Error::GameFormat(m.to_string());
        let root: Value = serde_json::from_str(text).map_err(|e| fmt(&e.to_string()))?;
        let n = root
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| fmt("`n` must be a nonnegative integer"))? as usize;
        check_players(n, MAX_GAME_PLAYERS)?;
        let entries = root
            .get("coalitions")
            .and_then(Value::as_array)
            .ok_or_else(|| fmt("`coalitions` must be an array"))?;

        let mut worths = vec![Rational::zero(); coalition_count(n)];
        let mut seen = BTreeSet::new();
        for entry in entries {
            let players = entry
                .get("players")
                .and_then(Value::as_array)
                .ok_or_else(|| fmt("each coalition needs a `players` array"))?;
            let mut list = Vec::with_capacity(players.len());
            for p in players {
                let p = p
                    .as_u64()
                    .ok_or_else(|| fmt("players must be nonnegative integers"))?;
                list.push(p as usize);
            }
            let distinct: BTreeSet<usize> = list.iter().copied().collect();
            if distinct.len() != list.len() {
                return Err(fmt("player listed twice in one coalition"));
            }
            let coalition = Coalition::from_players(&list, n)?;
            if coalition.is_empty() {
                return Err(Error::EmptyCoalition);
            }
            if !seen.insert(coalition.bits()) {
                return Err(Error::DuplicateCoalition(distinct.into_iter().collect()));
            }
            let worth = match entry.get("worth") {
                Some(Value::String(s)) => parse_rational(s)?,
                Some(Value::Number(num)) => parse_rational(&num.to_string())?,
                _ => return Err(fmt("`worth` must be a \"p/q\" string or a number")),
            };
            worths[coalition.bits() as usize - 1] = worth;
        }
        Game::new(n, worths)
    }
}

/// Harsanyi dividends of a game, indexed like [`Game`] worths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DividendVector {
    n: usize,
    dividends: Vec<Rational>,
}

impl DividendVector {
    pub fn new(n: usize, dividends: Vec<Rational>) -> Result<Self> {
        check_players(n, MAX_GAME_PLAYERS)?;
        if dividends.len() != coalition_count(n) {
            return Err(Error::WrongLength {
                expected: coalition_count(n),
                found: dividends.len(),
            });
        }
        Ok(DividendVector { n, dividends })
    }

    /// The dividend vector of `u_A`.
    pub fn indicator(n: usize, carrier: Coalition) -> Result<Self> {
        if carrier.is_empty() {
            return Err(Error::EmptyCoalition);
        }
        let mut d = vec![Rational::zero(); coalition_count(n)];
        d[carrier.bits() as usize - 1] = Rational::from_integer(1.into());
        DividendVector::new(n, d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.dividends
    }

    pub fn get(&self, coalition: &Coalition) -> &Rational {
        &self.dividends[coalition.bits() as usize - 1]
    }

    pub fn dot(&self, other: &DividendVector) -> Result<Rational> {
        same_players(self.n, other.n)?;
        Ok(self
            .dividends
            .iter()
            .zip(&other.dividends)
            .filter(|(x, y)| !x.is_zero() && !y.is_zero())
            .map(|(x, y)| x * y)
            .sum())
    }

    /// Nonzero dividends with their coalitions.
    pub fn support(&self) -> impl Iterator<Item = (Coalition, &Rational)> {
        let n = self.n;
        self.dividends
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(move |(i, d)| {
                (
                    Coalition {
                        bits: i as u32 + 1,
                        n,
                    },
                    d,
                )
            })
    }
}

fn padded(values: &[Rational]) -> Vec<Rational> {
    let mut full = Vec::with_capacity(values.len() + 1);
    full.push(Rational::zero());
    full.extend_from_slice(values);
    full
}

/// Harsanyi dividends by the fast Möbius transform over the subset lattice,
/// `O(2^n · n)` rational operations.
pub fn dividends(game: &Game) -> DividendVector {
    let mut f = padded(&game.worths);
    for bit in 0..game.n {
        let step = 1usize << bit;
        for mask in 0..f.len() {
            if mask & step != 0 {
                let lower = f[mask ^ step].clone();
                f[mask] -= lower;
            }
        }
    }
    f.remove(0);
    DividendVector {
        n: game.n,
        dividends: f,
    }
}

/// Dividends by direct inclusion–exclusion,
/// `h(A) = Σ_{B ⊆ A} (−1)^{|A|−|B|} v(B)`. `O(3^n)`; kept as a cross-check.
pub fn dividends_by_inclusion_exclusion(game: &Game) -> DividendVector {
    let dividends = Coalition::all_nonempty(game.n)
        .map(|a| {
            let mut acc = Rational::zero();
            let mut sub = a.bits();
            loop {
                if let Some(w) = game.worth_ref(sub) {
                    if (a.bits() ^ sub).count_ones() % 2 == 0 {
                        acc += w;
                    } else {
                        acc -= w;
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & a.bits();
            }
            acc
        })
        .collect();
    DividendVector {
        n: game.n,
        dividends,
    }
}

/// Inverse of [`dividends`]: `v = Σ_A h(A)·u_A` via the subset zeta transform.
pub fn from_dividends(d: &DividendVector) -> Game {
    let mut f = padded(&d.dividends);
    for bit in 0..d.n {
        let step = 1usize << bit;
        for mask in 0..f.len() {
            if mask & step != 0 {
                let lower = f[mask ^ step].clone();
                f[mask] += lower;
            }
        }
    }
    f.remove(0);
    Game { n: d.n, worths: f }
}

/// `⟨g, h⟩_H = Σ_A h_g(A)·h_h(A)`.
pub fn harsanyi_inner(g: &Game, h: &Game) -> Result<Rational> {
    same_players(g.n, h.n)?;
    dividends(g).dot(&dividends(h))
}

/// Pythagorean triples `(p, q, r)` with `p² + q² = r²`, giving exact
/// rotations with cosine `p/r` and sine `q/r`.
pub const PYTHAGOREAN_TRIPLES: [(i64, i64, i64); 5] = [
    (3, 4, 5),
    (5, 12, 13),
    (8, 15, 17),
    (7, 24, 25),
    (20, 21, 29),
];

/// Exact plane rotation of basis rows `i` and `j` by the angle with
/// `cos = p/r`, `sin = q/r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rotation {
    pub i: usize,
    pub j: usize,
    pub p: i64,
    pub q: i64,
    pub r: i64,
}

/// Signed permutation followed by a sequence of rotations, applied to the
/// unanimity basis. Row `k` of the result starts as `sign[k]·u_{perm[k]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisRecipe {
    pub permutation: Vec<usize>,
    pub negate: Vec<bool>,
    pub rotations: Vec<Rotation>,
}

impl BasisRecipe {
    pub fn identity(dim: usize) -> Self {
        BasisRecipe {
            permutation: (0..dim).collect(),
            negate: vec![false; dim],
            rotations: Vec::new(),
        }
    }
}

/// A basis of the game space that is orthonormal for the Harsanyi inner
/// product, with every coefficient rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HOrthonormalBasis {
    n: usize,
    vectors: Vec<Game>,
    provenance: String,
}

impl HOrthonormalBasis {
    pub fn unanimity(n: usize) -> Result<Self> {
        HOrthonormalBasis::from_recipe(n, &BasisRecipe::identity(coalition_count(n)), "unanimity")
    }

    pub fn from_recipe(n: usize, recipe: &BasisRecipe, provenance: &str) -> Result<Self> {
        check_players(n, MAX_BASIS_PLAYERS)?;
        let dim = coalition_count(n);
        let invalid = |m: String| Error::InvalidBasis(m);
        if recipe.permutation.len() != dim || recipe.negate.len() != dim {
            return Err(invalid(format!("recipe must cover {dim} rows")));
        }
        let distinct: BTreeSet<usize> = recipe.permutation.iter().copied().collect();
        if distinct.len() != dim || distinct.iter().any(|&k| k >= dim) {
            return Err(invalid("permutation is not a bijection".into()));
        }

        let mut rows: Vec<Vec<Rational>> = recipe
            .permutation
            .iter()
            .zip(&recipe.negate)
            .map(|(&k, &neg)| {
                let mut row = vec![Rational::zero(); dim];
                row[k] = Rational::from_integer(if neg { -1 } else { 1 }.into());
                row
            })
            .collect();

        for rot in &recipe.rotations {
            if rot.i == rot.j || rot.i >= dim || rot.j >= dim {
                return Err(invalid(format!(
                    "bad rotation rows {} and {}",
                    rot.i, rot.j
                )));
            }
            if rot.r == 0 || rot.p * rot.p + rot.q * rot.q != rot.r * rot.r {
                return Err(invalid(format!(
                    "({}, {}, {}) is not a Pythagorean triple",
                    rot.p, rot.q, rot.r
                )));
            }
            let c = Rational::new(BigInt::from(rot.p), BigInt::from(rot.r));
            let s = Rational::new(BigInt::from(rot.q), BigInt::from(rot.r));
            let (ri, rj) = (rows[rot.i].clone(), rows[rot.j].clone());
            rows[rot.i] = ri.iter().zip(&rj).map(|(x, y)| &c * x - &s * y).collect();
            rows[rot.j] = ri.iter().zip(&rj).map(|(x, y)| &s * x + &c * y).collect();
        }

        let vectors = rows
            .into_iter()
            .map(|row| DividendVector::new(n, row).map(|d| from_dividends(&d)))
            .collect::<Result<Vec<_>>>()?;
        Ok(HOrthonormalBasis {
            n,
            vectors,
            provenance: provenance.to_string(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vectors(&self) -> &[Game] {
        &self.vectors
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Pairwise Harsanyi inner products of the basis vectors.
    pub fn gram_matrix(&self) -> Vec<Vec<Rational>> {
        let divs: Vec<DividendVector> = self.vectors.iter().map(dividends).collect();
        divs.iter()
            .map(|x| divs.iter().map(|y| x.dot(y).expect("same n")).collect())
            .collect()
    }

    /// Checks that the Gram matrix is exactly the identity.
    pub fn validate(&self) -> Result<()> {
        if self.vectors.len() != coalition_count(self.n) {
            return Err(Error::InvalidBasis(format!(
                "expected {} vectors, found {}",
                coalition_count(self.n),
                self.vectors.len()
            )));
        }
        for (k, row) in self.gram_matrix().iter().enumerate() {
            for (l, entry) in row.iter().enumerate() {
                let expected = if k == l { 1 } else { 0 };
                if *entry != Rational::from_integer(expected.into()) {
                    return Err(Error::InvalidBasis(format!(
                        "⟨v_{k}, v_{l}⟩_H = {entry}, expected {expected}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Seed-derived recipe: a random signed permutation followed by between one
/// and `2·dim` random Pythagorean rotations.
pub fn random_basis_recipe(n: usize, seed: u64) -> Result<BasisRecipe> {
    check_players(n, MAX_BASIS_PLAYERS)?;
    let dim = coalition_count(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut permutation: Vec<usize> = (0..dim).collect();
    permutation.shuffle(&mut rng);
    let negate = (0..dim).map(|_| rng.gen_bool(0.5)).collect();
    let count = rng.gen_range(1..=2 * dim);
    let rotations = (0..count)
        .map(|_| {
            let i = rng.gen_range(0..dim);
            let j = (i + rng.gen_range(1..dim)) % dim;
            let (mut p, mut q, r) =
                PYTHAGOREAN_TRIPLES[rng.gen_range(0..PYTHAGOREAN_TRIPLES.len())];
            if rng.gen_bool(0.5) {
                std::mem::swap(&mut p, &mut q);
            }
            if rng.gen_bool(0.5) {
                q = -q;
            }
            Rotation { i, j, p, q, r }
        })
        .collect();
    Ok(BasisRecipe {
        permutation,
        negate,
        rotations,
    })
}

pub fn random_h_orthonormal_basis(n: usize, seed: u64) -> Result<HOrthonormalBasis> {
    let recipe = random_basis_recipe(n, seed)?;
    let provenance = format!(
        "seed {seed}: signed permutation then {} Pythagorean rotations",
        recipe.rotations.len()
    );
    HOrthonormalBasis::from_recipe(n, &recipe, &provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, rat};

    fn c(players: &[usize], n: usize) -> Coalition {
        Coalition::from_players(players, n).unwrap()
    }

    #[test]
    fn coalition_basics() {
        let a = c(&[0, 2], 3);
        assert_eq!(a.bits(), 0b101);
        assert_eq!(a.size(), 2);
        assert!(a.contains(2) && !a.contains(1));
        assert!(a.is_subset_of(&Coalition::grand(3).unwrap()));
        assert_eq!(a.to_string(), "{0,2}");
        assert!(Coalition::new(8, 3).is_err());
        assert!(Coalition::new(1, 31).is_err());
        assert!(Coalition::from_players(&[3], 3).is_err());
        assert_eq!(Coalition::all_nonempty(4).count(), 15);
    }

    #[test]
    fn unanimity_examples() {
        let u = Game::unanimity(2, c(&[0], 2)).unwrap();
        assert_eq!(u.worths(), &[int(1), int(0), int(1)]);

        let u = Game::unanimity(4, Coalition::grand(4).unwrap()).unwrap();
        for coal in Coalition::all_nonempty(4) {
            let expected = if coal.size() == 4 { 1 } else { 0 };
            assert_eq!(u.worth(&coal), int(expected));
        }

        let u = Game::unanimity(3, c(&[0, 1], 3)).unwrap();
        let winners: Vec<u32> = Coalition::all_nonempty(3)
            .filter(|k| u.worth(k) == int(1))
            .map(|k| k.bits())
            .collect();
        assert_eq!(winners, vec![0b011, 0b111]);
    }

    #[test]
    fn unanimity_rejects_bad_carriers() {
        assert_eq!(
            Game::unanimity(3, Coalition::new(0, 3).unwrap()),
            Err(Error::EmptyCoalition)
        );
        assert!(Game::unanimity(3, c(&[3], 4)).is_err());
    }

    #[test]
    fn glove_game_dividends() {
        let g = fixtures::glove_game();
        let oracle = dividends_by_inclusion_exclusion(&g);
        let fast = dividends(&g);
        assert_eq!(fast, oracle);
        for coal in Coalition::all_nonempty(3) {
            let expected = match coal.bits() {
                0b011 | 0b101 => int(1),
                0b111 => int(-1),
                _ => int(0),
            };
            assert_eq!(fast.get(&coal), &expected, "{coal}");
        }
        assert_eq!(from_dividends(&fast), g);
    }

    #[test]
    fn additive_game_dividends() {
        let mut rng = fixtures::rng(7);
        for n in 2..=5 {
            let weights: Vec<Rational> = (0..n)
                .map(|_| fixtures::random_rational(&mut rng))
                .collect();
            let g =
                Game::from_fn(n, |coal| coal.players().map(|i| weights[i].clone()).sum()).unwrap();
            let d = dividends_by_inclusion_exclusion(&g);
            assert_eq!(d, dividends(&g));
            for coal in Coalition::all_nonempty(n) {
                let expected = if coal.size() == 1 {
                    weights[coal.players().next().unwrap()].clone()
                } else {
                    int(0)
                };
                assert_eq!(d.get(&coal), &expected);
            }
        }
    }

    #[test]
    fn zero_dividends_give_zero_game() {
        let d = DividendVector::new(3, vec![int(0); 7]).unwrap();
        assert_eq!(from_dividends(&d), Game::zero(3).unwrap());
    }

    #[test]
    fn indicator_dividends_give_unanimity() {
        for carrier in Coalition::all_nonempty(4) {
            let d = DividendVector::indicator(4, carrier).unwrap();
            assert_eq!(from_dividends(&d), Game::unanimity(4, carrier).unwrap());
        }
    }

    #[test]
    fn harsanyi_inner_examples() {
        let a = c(&[0], 3);
        let b = c(&[1, 2], 3);
        let ua = Game::unanimity(3, a).unwrap();
        let ub = Game::unanimity(3, b).unwrap();
        assert_eq!(harsanyi_inner(&ua, &ua).unwrap(), int(1));
        assert_eq!(harsanyi_inner(&ua, &ub).unwrap(), int(0));
        let v = ua.combine(&int(2), &ub, &int(3)).unwrap();
        assert_eq!(harsanyi_inner(&v, &v).unwrap(), int(13));
        let other = Game::zero(4).unwrap();
        assert!(matches!(
            harsanyi_inner(&ua, &other),
            Err(Error::PlayerMismatch { .. })
        ));
    }

    #[test]
    fn harsanyi_norm_is_positive_definite() {
        let mut rng = fixtures::rng(11);
        for n in 2..=5 {
            for _ in 0..10 {
                let g = fixtures::random_game(&mut rng, n);
                let sq: Rational = dividends(&g).as_slice().iter().map(|x| x * x).sum();
                let norm = harsanyi_inner(&g, &g).unwrap();
                assert_eq!(norm, sq);
                assert_eq!(norm.is_zero(), g == Game::zero(n).unwrap());
            }
            assert_eq!(
                harsanyi_inner(&Game::zero(n).unwrap(), &Game::zero(n).unwrap()).unwrap(),
                int(0)
            );
        }
    }

    #[test]
    fn identity_recipe_is_unanimity_basis() {
        let basis = HOrthonormalBasis::unanimity(3).unwrap();
        for (k, carrier) in Coalition::all_nonempty(3).enumerate() {
            assert_eq!(basis.vectors()[k], Game::unanimity(3, carrier).unwrap());
        }
        basis.validate().unwrap();
    }

    #[test]
    fn signed_permutation_basis_is_orthonormal() {
        let recipe = BasisRecipe {
            permutation: vec![6, 0, 3, 1, 5, 2, 4],
            negate: vec![true, false, true, false, false, true, false],
            rotations: vec![],
        };
        HOrthonormalBasis::from_recipe(3, &recipe, "perm")
            .unwrap()
            .validate()
            .unwrap();
    }

    #[test]
    fn single_rotation_gram_is_identity() {
        let mut recipe = BasisRecipe::identity(3);
        recipe.rotations.push(Rotation {
            i: 0,
            j: 2,
            p: 3,
            q: 4,
            r: 5,
        });
        let basis = HOrthonormalBasis::from_recipe(2, &recipe, "3-4-5").unwrap();
        let gram = basis.gram_matrix();
        for (k, row) in gram.iter().enumerate() {
            for (l, entry) in row.iter().enumerate() {
                let expected = if k == l { int(1) } else { int(0) };
                assert_eq!(
                    harsanyi_inner(&basis.vectors()[k], &basis.vectors()[l]).unwrap(),
                    expected
                );
                assert_eq!(entry, &expected);
            }
        }
        // v_0 = (3/5)u_{0} - (4/5)u_{0,1}
        assert_eq!(basis.vectors()[0].worth_bits(0b11), rat(-1, 5));
    }

    #[test]
    fn recipe_validation() {
        let mut recipe = BasisRecipe::identity(3);
        recipe.rotations.push(Rotation {
            i: 0,
            j: 1,
            p: 1,
            q: 1,
            r: 1,
        });
        assert!(HOrthonormalBasis::from_recipe(2, &recipe, "").is_err());
        let mut recipe = BasisRecipe::identity(3);
        recipe.permutation[0] = 1;
        assert!(HOrthonormalBasis::from_recipe(2, &recipe, "").is_err());
        assert!(random_h_orthonormal_basis(6, 0).is_err());
        assert!(random_h_orthonormal_basis(1, 0).is_err());
    }

    #[test]
    fn random_bases_are_orthonormal_and_deterministic() {
        for n in 2..=4 {
            for seed in 0..5 {
                let basis = random_h_orthonormal_basis(n, seed).unwrap();
                basis.validate().unwrap();
                assert_eq!(basis, random_h_orthonormal_basis(n, seed).unwrap());
            }
        }
    }

    #[test]
    fn permute_relabels_players() {
        let g = fixtures::glove_game();
        let p = g.permute(&[2, 0, 1]).unwrap();
        // player 0 (the left glove) is now player 2
        assert_eq!(p.worth(&c(&[2, 0], 3)), int(1));
        assert_eq!(p.worth(&c(&[0, 1], 3)), int(0));
    }

    #[test]
    fn json_parsing() {
        let g = Game::from_json(
            r#"{ "n": 3, "coalitions": [
                { "players": [0, 1], "worth": "1/2" },
                { "players": [2], "worth": 0.1 },
                { "players": [0, 1, 2], "worth": 3 } ] }"#,
        )
        .unwrap();
        assert_eq!(g.worth(&c(&[1, 0], 3)), rat(1, 2));
        assert_eq!(g.worth(&c(&[2], 3)), rat(1, 10));
        assert_eq!(g.grand_worth(), int(3));
        assert_eq!(g.worth(&c(&[0], 3)), int(0));
    }

    #[test]
    fn json_errors() {
        let dup = r#"{ "n": 3, "coalitions": [
            { "players": [0, 1], "worth": 1 }, { "players": [1, 0], "worth": 2 } ] }"#;
        assert_eq!(
            Game::from_json(dup),
            Err(Error::DuplicateCoalition(vec![0, 1]))
        );
        for bad in [
            "not json",
            r#"{ "coalitions": [] }"#,
            r#"{ "n": 3 }"#,
            r#"{ "n": 1, "coalitions": [] }"#,
            r#"{ "n": 3, "coalitions": [ { "players": [], "worth": 1 } ] }"#,
            r#"{ "n": 3, "coalitions": [ { "players": [3], "worth": 1 } ] }"#,
            r#"{ "n": 3, "coalitions": [ { "players": [0], "worth": "x" } ] }"#,
            r#"{ "n": 3, "coalitions": [ { "players": [0], "worth": true } ] }"#,
            r#"{ "n": 3, "coalitions": [ { "players": [0, 0], "worth": 1 } ] }"#,
        ] {
            assert!(Game::from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn json_numbers_are_exact() {
        let g = Game::from_json(
            r#"{ "n": 2, "coalitions": [ { "players": [0], "worth": 0.30000000000000000001 } ] }"#,
        )
        .unwrap();
        assert_eq!(
            g.worth(&c(&[0], 2)),
            parse_rational("30000000000000000001/100000000000000000000").unwrap()
        );
    }
}
