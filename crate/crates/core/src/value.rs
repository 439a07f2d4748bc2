//! Linear value maps: symmetric profiles, general maps and brute-force oracles.
//!
//! A symmetric linear value map is pinned down by what it pays on each
//! unanimity game `u_A`: `alpha[a]` to every member of `A` and `beta[a]` to
//! every non-member, where `a = |A|`. On `u_N` there are no non-members, so
//! only `alpha[n]` exists.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::asymptotics::so_epsilon_closed;
use crate::error::{Error, Result};
use crate::game::{
    check_players, coalition_count, dividends, full_mask, same_players, Coalition, Game,
    MAX_GAME_PLAYERS,
};
use crate::rational::{exact, factorial, parse_rational, pow, rat, recip, Rational};

/// Player cap for the permutation-enumeration Shapley oracle.
pub const SHAPLEY_ORACLE_MAX_PLAYERS: usize = 8;
/// Player cap for the definition-sum Banzhaf oracle.
pub const BANZHAF_ORACLE_MAX_PLAYERS: usize = 20;
/// Player cap for the definition-sum solidarity oracle.
pub const SOLIDARITY_ORACLE_MAX_PLAYERS: usize = 12;
/// Largest `n` accepted for closed-form symmetric profiles.
pub const MAX_PROFILE_PLAYERS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueKind {
    /// Shapley value.
    Sh,
    /// Equal division.
    Ed,
    /// Banzhaf value.
    Bz,
    /// Equal-surplus division.
    Esd,
    /// Solidarity value.
    So,
}

impl ValueKind {
    pub const ALL: [ValueKind; 5] = [
        ValueKind::Sh,
        ValueKind::Ed,
        ValueKind::Bz,
        ValueKind::Esd,
        ValueKind::So,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            ValueKind::Sh => "sh",
            ValueKind::Ed => "ed",
            ValueKind::Bz => "bz",
            ValueKind::Esd => "esd",
            ValueKind::So => "so",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ValueKind::Sh => "Sh",
            ValueKind::Ed => "ED",
            ValueKind::Bz => "Bz",
            ValueKind::Esd => "ESD",
            ValueKind::So => "So",
        }
    }
}

impl FromStr for ValueKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ValueKind::ALL
            .into_iter()
            .find(|k| k.token() == s)
            .ok_or_else(|| Error::UnknownTarget(s.to_string()))
    }
}

/// A named solution or a member `F^ε` of the egalitarian Shapley family.
///
/// Parsed from the tokens `sh`, `ed`, `bz`, `esd`, `so` and `f:<p>/<q>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Named(ValueKind),
    Egalitarian(Rational),
}

impl Target {
    pub fn profile(&self, n: usize) -> Result<SymmetricValueProfile> {
        match self {
            Target::Named(kind) => named_profile(*kind, n),
            Target::Egalitarian(eps) => egalitarian_shapley(eps, n),
        }
    }

    pub fn token(&self) -> String {
        match self {
            Target::Named(kind) => kind.token().to_string(),
            Target::Egalitarian(eps) => format!("f:{eps}"),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(eps) = s.strip_prefix("f:") {
            return parse_rational(eps)
                .map(Target::Egalitarian)
                .map_err(|_| Error::UnknownTarget(s.to_string()));
        }
        s.parse().map(Target::Named)
    }
}

/// One payoff per player.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PayoffVector(#[serde(serialize_with = "exact::seq")] pub Vec<Rational>);

impl PayoffVector {
    pub fn zero(n: usize) -> Self {
        PayoffVector(vec![Rational::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn total(&self) -> Rational {
        self.0.iter().sum()
    }

    pub fn dot(&self, other: &PayoffVector) -> Rational {
        self.0.iter().zip(&other.0).map(|(x, y)| x * y).sum()
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: &Rational, other: &PayoffVector, b: &Rational) -> PayoffVector {
        PayoffVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }

    fn add_scaled(&mut self, scale: &Rational, other: &PayoffVector) {
        for (x, y) in self.0.iter_mut().zip(&other.0) {
            *x += scale * y;
        }
    }
}

/// Compressed form of a symmetric linear value map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetricValueProfile {
    n: usize,
    #[serde(serialize_with = "exact::seq")]
    alpha: Vec<Rational>,
    #[serde(serialize_with = "exact::seq")]
    beta: Vec<Rational>,
}

impl SymmetricValueProfile {
    /// `alpha` has `n` entries (sizes `1..=n`), `beta` has `n − 1` (sizes `1..n`).
    pub fn new(n: usize, alpha: Vec<Rational>, beta: Vec<Rational>) -> Result<Self> {
        check_players(n, MAX_PROFILE_PLAYERS)?;
        if alpha.len() != n {
            return Err(Error::WrongLength {
                expected: n,
                found: alpha.len(),
            });
        }
        if beta.len() != n - 1 {
            return Err(Error::WrongLength {
                expected: n - 1,
                found: beta.len(),
            });
        }
        Ok(SymmetricValueProfile { n, alpha, beta })
    }

    pub fn zero(n: usize) -> Result<Self> {
        SymmetricValueProfile::new(n, vec![Rational::zero(); n], vec![Rational::zero(); n - 1])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Payoff to a member of `A` on `u_A`, `|A| = size`.
    pub fn alpha(&self, size: usize) -> &Rational {
        &self.alpha[size - 1]
    }

    /// Payoff to a non-member of `A` on `u_A`, `|A| = size < n`.
    pub fn beta(&self, size: usize) -> &Rational {
        &self.beta[size - 1]
    }

    pub fn alphas(&self) -> &[Rational] {
        &self.alpha
    }

    pub fn betas(&self) -> &[Rational] {
        &self.beta
    }

    /// `a·α_a + (n−a)·β_a = 1` for every `a < n` and `n·α_n = 1`.
    pub fn is_efficient(&self) -> bool {
        let one = Rational::one();
        (1..=self.n).all(|a| self.stratum_total(a) == one)
    }

    /// Total payoff on `u_A` for `|A| = size`.
    pub fn stratum_total(&self, size: usize) -> Rational {
        let n = self.n;
        let mut total = self.alpha(size) * Rational::from_integer(BigInt::from(size));
        if size < n {
            total += self.beta(size) * Rational::from_integer(BigInt::from(n - size));
        }
        total
    }

    pub fn payoff_on_unanimity(&self, carrier: &Coalition) -> PayoffVector {
        let a = carrier.size();
        PayoffVector(
            (0..self.n)
                .map(|i| {
                    if carrier.contains(i) {
                        self.alpha(a).clone()
                    } else {
                        self.beta(a).clone()
                    }
                })
                .collect(),
        )
    }

    /// `a·self + b·other`.
    pub fn combine(
        &self,
        a: &Rational,
        other: &SymmetricValueProfile,
        b: &Rational,
    ) -> Result<SymmetricValueProfile> {
        same_players(self.n, other.n)?;
        let mix = |x: &[Rational], y: &[Rational]| -> Vec<Rational> {
            x.iter().zip(y).map(|(x, y)| a * x + b * y).collect()
        };
        Ok(SymmetricValueProfile {
            n: self.n,
            alpha: mix(&self.alpha, &other.alpha),
            beta: mix(&self.beta, &other.beta),
        })
    }

    pub fn minus(&self, other: &SymmetricValueProfile) -> Result<SymmetricValueProfile> {
        self.combine(&Rational::one(), other, &-Rational::one())
    }

    pub fn plus(&self, other: &SymmetricValueProfile) -> Result<SymmetricValueProfile> {
        self.combine(&Rational::one(), other, &Rational::one())
    }

    pub fn scaled(&self, k: &Rational) -> SymmetricValueProfile {
        SymmetricValueProfile {
            n: self.n,
            alpha: self.alpha.iter().map(|x| k * x).collect(),
            beta: self.beta.iter().map(|x| k * x).collect(),
        }
    }

    /// Expands to the payoff vector on every unanimity game.
    pub fn to_general(&self) -> Result<GeneralLinearValueMap> {
        check_players(self.n, MAX_GAME_PLAYERS)?;
        GeneralLinearValueMap::from_fn(self.n, |c| self.payoff_on_unanimity(&c))
    }
}

/// Closed-form profile of a named solution.
pub fn named_profile(kind: ValueKind, n: usize) -> Result<SymmetricValueProfile> {
    check_players(n, MAX_PROFILE_PLAYERS)?;
    let sizes = 1..=n;
    let equal = recip(n as u64);
    let (alpha, beta): (Vec<Rational>, Vec<Rational>) = match kind {
        ValueKind::Sh => (
            sizes.map(|a| recip(a as u64)).collect(),
            vec![Rational::zero(); n - 1],
        ),
        ValueKind::Ed => (vec![equal.clone(); n], vec![equal; n - 1]),
        ValueKind::Bz => (
            sizes.map(|a| pow(&rat(1, 2), a as u32 - 1)).collect(),
            vec![Rational::zero(); n - 1],
        ),
        ValueKind::Esd => {
            let mut alpha = vec![equal.clone(); n];
            let mut beta = vec![equal; n - 1];
            alpha[0] = Rational::one();
            beta[0] = Rational::zero();
            (alpha, beta)
        }
        ValueKind::So => {
            // β_a = ε_a/n from the closed form, α_a from efficiency.
            let beta: Vec<Rational> = (1..n)
                .map(|a| so_epsilon_closed(a, n).map(|e| e * &equal))
                .collect::<Result<_>>()?;
            let mut alpha: Vec<Rational> = beta
                .iter()
                .enumerate()
                .map(|(idx, b)| {
                    let a = idx as i64 + 1;
                    (Rational::one() - b * rat(n as i64 - a, 1)) / rat(a, 1)
                })
                .collect();
            alpha.push(equal);
            (alpha, beta)
        }
    };
    SymmetricValueProfile::new(n, alpha, beta)
}

/// Profile of `F^ε = (1 − ε)·Sh + ε·ED`.
pub fn egalitarian_shapley(eps: &Rational, n: usize) -> Result<SymmetricValueProfile> {
    let sh = named_profile(ValueKind::Sh, n)?;
    let ed = named_profile(ValueKind::Ed, n)?;
    sh.combine(&(Rational::one() - eps), &ed, eps)
}

/// `Ψ(g) = Σ_A h_g(A)·Ψ(u_A)`.
pub fn evaluate(profile: &SymmetricValueProfile, game: &Game) -> Result<PayoffVector> {
    same_players(profile.n, game.n())?;
    let n = profile.n;
    let mut out = PayoffVector::zero(n);
    for (carrier, h) in dividends(game).support() {
        let a = carrier.size();
        if a == n {
            let share = h * profile.alpha(n);
            out.0.iter_mut().for_each(|x| *x += &share);
            continue;
        }
        let inside = h * profile.alpha(a);
        let outside = h * profile.beta(a);
        for (i, x) in out.0.iter_mut().enumerate() {
            *x += if carrier.contains(i) {
                &inside
            } else {
                &outside
            };
        }
    }
    Ok(out)
}

/// An arbitrary linear value map, given by its payoff vector on every
/// unanimity game (indexed by `bits − 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralLinearValueMap {
    n: usize,
    action: Vec<PayoffVector>,
}

impl GeneralLinearValueMap {
    pub fn new(n: usize, action: Vec<PayoffVector>) -> Result<Self> {
        check_players(n, MAX_GAME_PLAYERS)?;
        if action.len() != coalition_count(n) {
            return Err(Error::WrongLength {
                expected: coalition_count(n),
                found: action.len(),
            });
        }
        if let Some(bad) = action.iter().find(|p| p.len() != n) {
            return Err(Error::WrongLength {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(GeneralLinearValueMap { n, action })
    }

    pub fn from_fn(n: usize, f: impl FnMut(Coalition) -> PayoffVector) -> Result<Self> {
        check_players(n, MAX_GAME_PLAYERS)?;
        GeneralLinearValueMap::new(n, Coalition::all_nonempty(n).map(f).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Ψ(u_A)`.
    pub fn on_unanimity(&self, carrier: &Coalition) -> &PayoffVector {
        &self.action[carrier.bits() as usize - 1]
    }

    pub fn actions(&self) -> &[PayoffVector] {
        &self.action
    }

    /// `a·self + b·other`.
    pub fn combine(
        &self,
        a: &Rational,
        other: &GeneralLinearValueMap,
        b: &Rational,
    ) -> Result<GeneralLinearValueMap> {
        same_players(self.n, other.n)?;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(x, y)| x.combine(a, y, b))
            .collect();
        Ok(GeneralLinearValueMap { n: self.n, action })
    }

    pub fn minus(&self, other: &GeneralLinearValueMap) -> Result<GeneralLinearValueMap> {
        self.combine(&Rational::one(), other, &-Rational::one())
    }

    /// Value on an arbitrary game by linearity over its dividends.
    pub fn evaluate(&self, game: &Game) -> Result<PayoffVector> {
        same_players(self.n, game.n())?;
        let mut out = PayoffVector::zero(self.n);
        for (carrier, h) in dividends(game).support() {
            out.add_scaled(h, self.on_unanimity(&carrier));
        }
        Ok(out)
    }
}

/// Recovers `(α_a, β_a)` from a general map after checking, for every size,
/// that members all receive one payoff and non-members another, identically
/// across all coalitions of that size.
pub fn profile_from_general(map: &GeneralLinearValueMap) -> Result<SymmetricValueProfile> {
    let n = map.n;
    let mut alpha = vec![None::<(Coalition, usize, Rational)>; n];
    let mut beta = vec![None::<(Coalition, usize, Rational)>; n];
    for carrier in Coalition::all_nonempty(n) {
        let a = carrier.size();
        let payoff = map.on_unanimity(&carrier);
        for i in 0..n {
            let slot = if carrier.contains(i) {
                &mut alpha[a - 1]
            } else {
                &mut beta[a - 1]
            };
            match slot {
                None => *slot = Some((carrier, i, payoff.0[i].clone())),
                Some((ref_c, ref_i, value)) if *value != payoff.0[i] => {
                    return Err(Error::NotSymmetric {
                        size: a,
                        reference: (*ref_c, *ref_i),
                        witness: (carrier, i),
                    });
                }
                Some(_) => {}
            }
        }
    }
    let take = |v: Vec<Option<(Coalition, usize, Rational)>>, len: usize| -> Vec<Rational> {
        v.into_iter()
            .take(len)
            .map(|s| s.expect("every size occurs").2)
            .collect()
    };
    SymmetricValueProfile::new(n, take(alpha, n), take(beta, n - 1))
}

fn check_oracle(oracle: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::OracleCap { oracle, n, cap });
    }
    Ok(())
}

/// Shapley value by averaging marginal contributions over all `n!` orders.
pub fn shapley_oracle(game: &Game) -> Result<PayoffVector> {
    let n = game.n();
    check_oracle("Shapley", n, SHAPLEY_ORACLE_MAX_PLAYERS)?;
    let mut sums = PayoffVector::zero(n);
    for order in (0..n).permutations(n) {
        let mut before = 0u32;
        let mut prev = Rational::zero();
        for i in order {
            let with = before | (1 << i);
            let worth = game.worth_bits(with);
            sums.0[i] += &worth - &prev;
            before = with;
            prev = worth;
        }
    }
    let count = Rational::from_integer(factorial(n as u64));
    Ok(PayoffVector(
        sums.0.into_iter().map(|s| s / &count).collect(),
    ))
}

/// Banzhaf value from its definition, `2^{1−n}·Σ_{C ⊆ N∖{i}} (v(C∪i) − v(C))`.
pub fn banzhaf_oracle(game: &Game) -> Result<PayoffVector> {
    let n = game.n();
    check_oracle("Banzhaf", n, BANZHAF_ORACLE_MAX_PLAYERS)?;
    let scale = pow(&rat(1, 2), n as u32 - 1);
    let full = full_mask(n);
    let payoffs = (0..n)
        .map(|i| {
            let bit = 1u32 << i;
            let others = full & !bit;
            let mut total = Rational::zero();
            let mut sub = others;
            loop {
                total += game.worth_bits(sub | bit) - game.worth_bits(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & others;
            }
            total * &scale
        })
        .collect();
    Ok(PayoffVector(payoffs))
}

/// Solidarity value from its definition: each member of `S` is credited with
/// the average marginal contribution `A^v(S)` over the members of `S`,
/// weighted by `(n−s)!(s−1)!/n!`.
pub fn solidarity_oracle(game: &Game) -> Result<PayoffVector> {
    let n = game.n();
    check_oracle("solidarity", n, SOLIDARITY_ORACLE_MAX_PLAYERS)?;
    let n_fact = factorial(n as u64);
    let weight: Vec<Rational> = (1..=n as u64)
        .map(|s| Rational::new(factorial(n as u64 - s) * factorial(s - 1), n_fact.clone()))
        .collect();
    let mut out = PayoffVector::zero(n);
    for s in Coalition::all_nonempty(n) {
        let size = s.size();
        let worth = game.worth(&s);
        let marginal_sum: Rational = s
            .players()
            .map(|j| &worth - game.worth_bits(s.bits() & !(1 << j)))
            .sum();
        let credit = marginal_sum / rat(size as i64, 1) * &weight[size - 1];
        for i in s.players() {
            out.0[i] += &credit;
        }
    }
    Ok(out)
}
