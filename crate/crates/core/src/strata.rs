//! Size-stratified coordinates of symmetric value maps.
//!
//! For each coalition size `a < n`, the stratum component of `Ψ − Sh` splits
//! into a multiple `ε_a` of `(ED − Sh)^{(a)}` and a multiple `δ_a` of the
//! uniform direction `U^{(a)}` (`α = β = 1`). The size-`n` stratum carries no
//! `ε` and is tracked as a squared deviation only.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::same_players;
use crate::line::{d_n, deviation_from_shapley, inner_l, projection_report};
use crate::rational::{binomial_rat, exact, recip, Rational};
use crate::value::SymmetricValueProfile;

fn size_rat(k: usize) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratifiedCoordinates {
    pub n: usize,
    /// `ε_a` for `a = 1..n−1`.
    #[serde(serialize_with = "exact::seq")]
    pub eps: Vec<Rational>,
    /// `δ_a` for `a = 1..n−1`.
    #[serde(serialize_with = "exact::seq")]
    pub delta: Vec<Rational>,
    /// `‖(Ψ − Sh)^{(n)}‖²_L = n·(α_n − 1/n)²`.
    #[serde(serialize_with = "exact::one")]
    pub top_stratum_dev_sq: Rational,
}

impl StratifiedCoordinates {
    pub fn eps_at(&self, stratum: usize) -> Result<&Rational> {
        self.check_stratum(stratum)?;
        Ok(&self.eps[stratum - 1])
    }

    pub fn delta_at(&self, stratum: usize) -> Result<&Rational> {
        self.check_stratum(stratum)?;
        Ok(&self.delta[stratum - 1])
    }

    fn check_stratum(&self, stratum: usize) -> Result<()> {
        if stratum == 0 || stratum >= self.n {
            return Err(Error::StratumOutOfRange {
                stratum,
                max: self.n - 1,
            });
        }
        Ok(())
    }

    /// First stratum with a nonzero efficiency defect, counting the top
    /// stratum as `n`.
    pub fn first_defect(&self) -> Option<usize> {
        self.delta
            .iter()
            .position(|d| !d.is_zero())
            .map(|i| i + 1)
            .or_else(|| (!self.top_stratum_dev_sq.is_zero()).then_some(self.n))
    }

    pub fn is_efficient(&self) -> bool {
        self.first_defect().is_none()
    }
}

/// `δ_a = (a·α_a + (n−a)·β_a − 1)/n`, `ε_a = n·(β_a − δ_a)`.
pub fn stratified_coords(target: &SymmetricValueProfile) -> StratifiedCoordinates {
    let n = target.n();
    let nr = size_rat(n);
    let (eps, delta) = (1..n)
        .map(|a| {
            let delta = (target.stratum_total(a) - Rational::one()) / &nr;
            let eps = &nr * (target.beta(a) - &delta);
            (eps, delta)
        })
        .unzip();
    let top_gap = target.alpha(n) - recip(n as u64);
    StratifiedCoordinates {
        n,
        eps,
        delta,
        top_stratum_dev_sq: &nr * &top_gap * &top_gap,
    }
}

/// The efficient symmetric map with `Ψ^{(a)} = (1 − ε_a)·Sh^{(a)} + ε_a·ED^{(a)}`.
pub fn reconstruct(eps: &[Rational], n: usize) -> Result<SymmetricValueProfile> {
    if n < 2 || eps.len() != n - 1 {
        return Err(Error::WrongLength {
            expected: n.saturating_sub(1),
            found: eps.len(),
        });
    }
    let inv_n = recip(n as u64);
    let mut alpha: Vec<Rational> = eps
        .iter()
        .enumerate()
        .map(|(idx, e)| (Rational::one() - e) * recip(idx as u64 + 1) + e * &inv_n)
        .collect();
    alpha.push(inv_n.clone());
    let beta = eps.iter().map(|e| e * &inv_n).collect();
    SymmetricValueProfile::new(n, alpha, beta)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumWeights {
    pub n: usize,
    /// `w_a = C(n,a)·(1/a − 1/n)/D_n` for `a = 1..n−1`.
    #[serde(serialize_with = "exact::seq")]
    pub w: Vec<Rational>,
}

pub fn weights(n: usize) -> StratumWeights {
    let d = d_n(n);
    let inv_n = recip(n as u64);
    let w = (1..n)
        .map(|a| binomial_rat(n as u64, a as u64) * (recip(a as u64) - &inv_n) / &d)
        .collect();
    StratumWeights { n, w }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Moments {
    #[serde(serialize_with = "exact::one")]
    pub mean: Rational,
    #[serde(serialize_with = "exact::one")]
    pub second_moment: Rational,
    #[serde(serialize_with = "exact::one")]
    pub variance: Rational,
}

/// Mean, second moment and variance of `ε_a` under `w`.
pub fn weighted_moments(coords: &StratifiedCoordinates, w: &StratumWeights) -> Result<Moments> {
    same_players(coords.n, w.n)?;
    let mut mean = Rational::zero();
    let mut second_moment = Rational::zero();
    for (e, wa) in coords.eps.iter().zip(&w.w) {
        let we = wa * e;
        second_moment += &we * e;
        mean += we;
    }
    let variance = &second_moment - &mean * &mean;
    Ok(Moments {
        mean,
        second_moment,
        variance,
    })
}

/// `R² = mean²/second_moment` for an efficient target; `1` for Sh.
pub fn r2_from_moments(coords: &StratifiedCoordinates, w: &StratumWeights) -> Result<Rational> {
    if let Some(stratum) = coords.first_defect() {
        return Err(Error::NotEfficient { stratum });
    }
    let m = weighted_moments(coords, w)?;
    if m.second_moment.is_zero() {
        return Ok(Rational::one());
    }
    Ok(&m.mean * &m.mean / m.second_moment)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PythagorasTerms {
    /// `C(n,a)·(1/a − 1/n)·ε_a²`.
    #[serde(serialize_with = "exact::seq")]
    pub eff_terms: Vec<Rational>,
    /// `C(n,a)·n·δ_a²`.
    #[serde(serialize_with = "exact::seq")]
    pub unif_terms: Vec<Rational>,
    #[serde(serialize_with = "exact::one")]
    pub top_term: Rational,
    #[serde(serialize_with = "exact::one")]
    pub total: Rational,
}

/// Splits `‖Ψ − Sh‖²_L` into per-stratum efficient and uniform parts plus the
/// top stratum.
pub fn generalized_pythagoras(target: &SymmetricValueProfile) -> PythagorasTerms {
    let n = target.n();
    let coords = stratified_coords(target);
    let inv_n = recip(n as u64);
    let mut eff_terms = Vec::with_capacity(n - 1);
    let mut unif_terms = Vec::with_capacity(n - 1);
    for a in 1..n {
        let c = binomial_rat(n as u64, a as u64);
        let (e, d) = (&coords.eps[a - 1], &coords.delta[a - 1]);
        eff_terms.push(&c * (recip(a as u64) - &inv_n) * e * e);
        unif_terms.push(&c * size_rat(n) * d * d);
    }
    let top_term = coords.top_stratum_dev_sq;
    let total = eff_terms.iter().chain(&unif_terms).sum::<Rational>() + &top_term;
    PythagorasTerms {
        eff_terms,
        unif_terms,
        top_term,
        total,
    }
}

/// Everything the strata view reports for one target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrataReport {
    pub target: String,
    #[serde(flatten)]
    pub coords: StratifiedCoordinates,
    #[serde(serialize_with = "exact::seq")]
    pub w: Vec<Rational>,
    #[serde(flatten)]
    pub moments: Moments,
    #[serde(serialize_with = "exact::one")]
    pub r2: Rational,
    /// `moments` for efficient targets, `projection` otherwise.
    pub r2_source: &'static str,
    pub efficient: bool,
}

pub fn strata_report(target: &SymmetricValueProfile, name: &str) -> StrataReport {
    let n = target.n();
    let coords = stratified_coords(target);
    let w = weights(n);
    let moments = weighted_moments(&coords, &w).expect("same n");
    let efficient = coords.is_efficient();
    let (r2, r2_source) = match r2_from_moments(&coords, &w) {
        Ok(r2) => (r2, "moments"),
        Err(_) => (projection_report(target, name).r2, "projection"),
    };
    StrataReport {
        target: name.to_string(),
        coords,
        w: w.w,
        moments,
        r2,
        r2_source,
        efficient,
    }
}

/// `ε* = E_w[ε_a]`, valid for every symmetric target.
pub fn epsilon_star_as_mean(target: &SymmetricValueProfile) -> Rational {
    let coords = stratified_coords(target);
    weighted_moments(&coords, &weights(target.n()))
        .expect("same n")
        .mean
}

/// `‖Ψ − Sh‖²_L`, for comparison with [`generalized_pythagoras`].
pub fn deviation_norm_sq(target: &SymmetricValueProfile) -> Rational {
    let dev = deviation_from_shapley(target);
    inner_l(&dev, &dev).expect("same n")
}

/// `F^ε` rebuilt through coordinates; equal to [`egalitarian_shapley`].
pub fn constant_reconstruction(eps: &Rational, n: usize) -> Result<SymmetricValueProfile> {
    reconstruct(&vec![eps.clone(); n - 1], n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::line::epsilon_star;
    use crate::rational::{int, pow, rat};
    use crate::value::{egalitarian_shapley, named_profile, ValueKind};

    fn named(kind: ValueKind, n: usize) -> SymmetricValueProfile {
        named_profile(kind, n).unwrap()
    }

    fn rv(xs: &[(i64, i64)]) -> Vec<Rational> {
        xs.iter().map(|&(p, q)| rat(p, q)).collect()
    }

    #[test]
    fn coordinates_of_named_targets() {
        let esd = stratified_coords(&named(ValueKind::Esd, 4));
        assert_eq!(esd.eps, rv(&[(0, 1), (1, 1), (1, 1)]));
        assert!(esd.delta.iter().all(Zero::is_zero));
        assert!(esd.top_stratum_dev_sq.is_zero());

        let so = stratified_coords(&named(ValueKind::So, 4));
        assert_eq!(so.eps, rv(&[(23, 36), (13, 18), (3, 4)]));
        assert!(so.is_efficient());

        let bz = stratified_coords(&named(ValueKind::Bz, 4));
        assert_eq!(bz.eps, rv(&[(0, 1), (0, 1), (1, 4)]));
        assert_eq!(bz.delta, rv(&[(0, 1), (0, 1), (-1, 16)]));
        assert_eq!(bz.first_defect(), Some(3));
        assert_eq!(bz.eps_at(3).unwrap(), &rat(1, 4));
        assert!(bz.eps_at(4).is_err());
        assert!(bz.delta_at(0).is_err());
    }

    #[test]
    fn banzhaf_identity_up_to_twenty() {
        for n in 2..=20usize {
            let coords = stratified_coords(&named(ValueKind::Bz, n));
            for a in 1..n {
                let eps = int(1) - rat(a as i64, 1) * pow(&rat(1, 2), a as u32 - 1);
                assert_eq!(coords.eps[a - 1], eps);
                assert_eq!(coords.delta[a - 1], -&eps / rat(n as i64, 1));
            }
        }
    }

    #[test]
    fn reconstruct_examples() {
        for n in 2..=6 {
            assert_eq!(
                reconstruct(&vec![int(0); n - 1], n).unwrap(),
                named(ValueKind::Sh, n)
            );
            let e = rat(2, 7);
            assert_eq!(
                constant_reconstruction(&e, n).unwrap(),
                egalitarian_shapley(&e, n).unwrap()
            );
        }
        assert_eq!(
            reconstruct(&rv(&[(0, 1), (1, 1), (1, 1)]), 4).unwrap(),
            named(ValueKind::Esd, 4)
        );
        assert!(matches!(
            reconstruct(&[int(1)], 4),
            Err(Error::WrongLength {
                expected: 3,
                found: 1
            })
        ));
    }

    #[test]
    fn weights_examples() {
        assert_eq!(weights(4).w, rv(&[(18, 29), (9, 29), (2, 29)]));
        assert_eq!(weights(2).w, vec![int(1)]);
        for n in 2..=30 {
            let w = weights(n);
            assert_eq!(w.w.iter().sum::<Rational>(), int(1));
            assert!(w.w.iter().all(|x| *x > int(0)));
        }
        assert_eq!(int(1) - &weights(4).w[0], rat(11, 29));
    }

    #[test]
    fn moments_examples() {
        let w = weights(4);
        let so = weighted_moments(&stratified_coords(&named(ValueKind::So, 4)), &w).unwrap();
        assert_eq!(so.mean, rat(39, 58));
        assert_eq!(so.variance, rat(19, 10092));
        let esd = weighted_moments(&stratified_coords(&named(ValueKind::Esd, 4)), &w).unwrap();
        assert_eq!(esd.mean, rat(11, 29));
        let flat = stratified_coords(&egalitarian_shapley(&rat(3, 5), 4).unwrap());
        assert!(weighted_moments(&flat, &w).unwrap().variance.is_zero());
        assert!(weighted_moments(&flat, &weights(5)).is_err());
    }

    #[test]
    fn r2_from_moments_examples() {
        let w = weights(4);
        let r2 = |kind| r2_from_moments(&stratified_coords(&named(kind, 4)), &w).unwrap();
        assert_eq!(r2(ValueKind::Esd), rat(11, 29));
        assert_eq!(r2(ValueKind::So), rat(4563, 4582));
        assert_eq!(r2(ValueKind::Sh), int(1));
        let f = stratified_coords(&egalitarian_shapley(&rat(-5, 3), 4).unwrap());
        assert_eq!(r2_from_moments(&f, &w).unwrap(), int(1));
        let bz = stratified_coords(&named(ValueKind::Bz, 4));
        assert_eq!(
            r2_from_moments(&bz, &w),
            Err(Error::NotEfficient { stratum: 3 })
        );
    }

    #[test]
    fn pythagoras_examples() {
        let bz = generalized_pythagoras(&named(ValueKind::Bz, 4));
        assert_eq!(bz.total, rat(7, 48));
        for n in 2..=12usize {
            let target = named(ValueKind::Bz, n);
            let terms = generalized_pythagoras(&target);
            assert_eq!(terms.total, deviation_norm_sq(&target));
            let coords = stratified_coords(&target);
            let clean: Rational = (1..n)
                .map(|a| {
                    binomial_rat(n as u64, a as u64) / rat(a as i64, 1)
                        * &coords.eps[a - 1]
                        * &coords.eps[a - 1]
                })
                .sum::<Rational>()
                + &terms.top_term;
            assert_eq!(terms.total, clean);
        }
        let so = generalized_pythagoras(&named(ValueKind::So, 6));
        assert!(so.unif_terms.iter().all(Zero::is_zero) && so.top_term.is_zero());
    }

    #[test]
    fn projection_is_weighted_mean() {
        let mut rng = fixtures::rng(21);
        for n in 2..=12 {
            for kind in ValueKind::ALL {
                let p = named(kind, n);
                assert_eq!(epsilon_star_as_mean(&p), epsilon_star(&p), "{kind:?} n={n}");
            }
            let p = fixtures::random_symmetric_profile(&mut rng, n);
            assert_eq!(epsilon_star_as_mean(&p), epsilon_star(&p));
        }
    }

    #[test]
    fn report_uses_projection_r2_for_non_efficient_targets() {
        let report = strata_report(&named(ValueKind::Bz, 4), "bz");
        assert_eq!(report.r2_source, "projection");
        assert_eq!(report.r2, rat(2, 203));
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["delta"][2]["num"], "-1");
        assert_eq!(json["delta"][2]["den"], "16");
        let so = strata_report(&named(ValueKind::So, 4), "so");
        assert_eq!((so.r2_source, so.r2), ("moments", rat(4563, 4582)));
    }
}
