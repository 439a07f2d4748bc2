//! Inner product on linear value maps and best approximation on the
//! egalitarian Shapley line `F^ε = (1 − ε)·Sh + ε·ED`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::asymptotics::h_n;
use crate::error::{Error, Result};
use crate::game::{check_players, dividends, same_players, Coalition, HOrthonormalBasis};
use crate::rational::{binomial_rat, exact, pow, rat, recip, Rational};
use crate::value::{
    egalitarian_shapley, named_profile, GeneralLinearValueMap, SymmetricValueProfile, ValueKind,
    MAX_PROFILE_PLAYERS,
};

/// Player cap for the coalition-by-coalition inner product on profiles.
pub const DIRECT_INNER_MAX_PLAYERS: usize = 12;

fn size_rat(k: usize) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

/// `⟨p, q⟩_L` from the stratum closed form:
/// `Σ_{a<n} C(n,a)·[a·α_a α'_a + (n−a)·β_a β'_a] + n·α_n α'_n`.
pub fn inner_l(p: &SymmetricValueProfile, q: &SymmetricValueProfile) -> Result<Rational> {
    same_players(p.n(), q.n())?;
    let n = p.n();
    let mut total = size_rat(n) * p.alpha(n) * q.alpha(n);
    for a in 1..n {
        let stratum =
            size_rat(a) * p.alpha(a) * q.alpha(a) + size_rat(n - a) * p.beta(a) * q.beta(a);
        total += binomial_rat(n as u64, a as u64) * stratum;
    }
    Ok(total)
}

/// `⟨p, p⟩_L`.
pub fn norm_sq(p: &SymmetricValueProfile) -> Rational {
    inner_l(p, p).expect("same profile")
}

/// `⟨p, q⟩_L` summed coalition by coalition; verification path for the
/// closed form.
pub fn inner_l_direct(p: &SymmetricValueProfile, q: &SymmetricValueProfile) -> Result<Rational> {
    same_players(p.n(), q.n())?;
    check_players(p.n(), DIRECT_INNER_MAX_PLAYERS)?;
    Ok(Coalition::all_nonempty(p.n())
        .map(|c| p.payoff_on_unanimity(&c).dot(&q.payoff_on_unanimity(&c)))
        .sum())
}

/// `⟨p, q⟩_L = Σ_A ⟨p(u_A), q(u_A)⟩` for arbitrary linear maps.
pub fn inner_l_general(p: &GeneralLinearValueMap, q: &GeneralLinearValueMap) -> Result<Rational> {
    same_players(p.n(), q.n())?;
    Ok(p.actions()
        .iter()
        .zip(q.actions())
        .map(|(x, y)| x.dot(y))
        .sum())
}

/// `Σ_k ⟨p(v_k), q(v_k)⟩` over an H-orthonormal basis, with each `p(v_k)`
/// evaluated by linearity from the dividends of `v_k`.
pub fn inner_l_in_basis(
    p: &GeneralLinearValueMap,
    q: &GeneralLinearValueMap,
    basis: &HOrthonormalBasis,
) -> Result<Rational> {
    same_players(p.n(), q.n())?;
    same_players(p.n(), basis.n())?;
    basis.validate()?;
    let mut total = Rational::zero();
    for v in basis.vectors() {
        debug_assert_eq!(dividends(v).n(), p.n());
        total += p.evaluate(v)?.dot(&q.evaluate(v)?);
    }
    Ok(total)
}

fn check_profile_n(n: usize) {
    assert!(
        (2..=MAX_PROFILE_PLAYERS).contains(&n),
        "player count {n} outside 2..={MAX_PROFILE_PLAYERS}"
    );
}

/// `D_n = Σ_a C(n,a)·(1/a − 1/n) = ‖ED − Sh‖²_L`.
pub fn d_n(n: usize) -> Rational {
    check_profile_n(n);
    let inv_n = recip(n as u64);
    (1..=n)
        .map(|a| binomial_rat(n as u64, a as u64) * (recip(a as u64) - &inv_n))
        .sum()
}

/// `D_n = H_n − (2^n − 1)/n`.
pub fn d_n_via_harmonic(n: usize) -> Rational {
    check_profile_n(n);
    h_n(n) - (pow(&rat(2, 1), n as u32) - Rational::one()) / size_rat(n)
}

/// `ED − Sh`, the direction of the line.
pub fn line_direction(n: usize) -> SymmetricValueProfile {
    let ed = named_profile(ValueKind::Ed, n).expect("valid player count");
    let sh = named_profile(ValueKind::Sh, n).expect("valid player count");
    ed.minus(&sh).expect("same n")
}

/// `Ψ − Sh`.
pub fn deviation_from_shapley(target: &SymmetricValueProfile) -> SymmetricValueProfile {
    let sh = named_profile(ValueKind::Sh, target.n()).expect("valid player count");
    target.minus(&sh).expect("same n")
}

/// `ε* = ⟨ED − Sh, Ψ − Sh⟩_L / D_n`. Efficiency is not required.
pub fn epsilon_star(target: &SymmetricValueProfile) -> Rational {
    let n = target.n();
    let numerator = inner_l(&line_direction(n), &deviation_from_shapley(target)).expect("same n");
    numerator / d_n(n)
}

/// `1 + (2 − 2·(3/2)^{n−1})/D_n`.
pub fn closed_form_eps_bz(n: usize) -> Rational {
    check_profile_n(n);
    Rational::one() + (rat(2, 1) - rat(2, 1) * pow(&rat(3, 2), n as u32 - 1)) / d_n(n)
}

/// `1 − (n − 1)/D_n`.
pub fn closed_form_eps_esd(n: usize) -> Rational {
    check_profile_n(n);
    Rational::one() - size_rat(n - 1) / d_n(n)
}

/// `Φ⊥(Ψ) = Ψ − F^{ε*(Ψ)}`.
pub fn residual_profile(target: &SymmetricValueProfile) -> SymmetricValueProfile {
    let fit = egalitarian_shapley(&epsilon_star(target), target.n()).expect("valid player count");
    target.minus(&fit).expect("same n")
}

/// Best fit of one target by the egalitarian Shapley line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectionReport {
    pub n: usize,
    pub target: String,
    #[serde(serialize_with = "exact::one")]
    pub eps_star: Rational,
    #[serde(serialize_with = "exact::one")]
    pub dist_sq: Rational,
    #[serde(serialize_with = "exact::one")]
    pub proj_sq: Rational,
    #[serde(serialize_with = "exact::one")]
    pub resid_sq: Rational,
    #[serde(serialize_with = "exact::one")]
    pub r2: Rational,
    /// Set when `dist_sq = 0`, where `r2 = 1` holds by convention.
    pub r2_by_convention: bool,
}

impl ProjectionReport {
    /// `dist_sq − proj_sq − resid_sq`, zero whenever the decomposition holds.
    pub fn pythagorean_defect(&self) -> Rational {
        &self.dist_sq - &self.proj_sq - &self.resid_sq
    }
}

/// All five line quantities. `resid_sq` is the squared norm of the residual
/// profile itself, so `dist_sq = proj_sq + resid_sq` stays a real check.
pub fn projection_report(target: &SymmetricValueProfile, name: &str) -> ProjectionReport {
    let n = target.n();
    let eps_star = epsilon_star(target);
    let dist_sq = norm_sq(&deviation_from_shapley(target));
    let proj_sq = &eps_star * &eps_star * d_n(n);
    let resid_sq = norm_sq(&residual_profile(target));
    let by_convention = dist_sq.is_zero();
    let r2 = if by_convention {
        Rational::one()
    } else {
        &proj_sq / &dist_sq
    };
    ProjectionReport {
        n,
        target: name.to_string(),
        eps_star,
        dist_sq,
        proj_sq,
        resid_sq,
        r2,
        r2_by_convention: by_convention,
    }
}

/// Rejects `n` outside the range every profile-level routine accepts.
pub fn check_profile_players(n: usize) -> Result<()> {
    if !(2..=MAX_PROFILE_PLAYERS).contains(&n) {
        return Err(Error::PlayerCount {
            n,
            min: 2,
            max: MAX_PROFILE_PLAYERS,
        });
    }
    Ok(())
}
