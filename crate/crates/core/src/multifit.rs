//! Least-squares projection of a target onto `Sh + span{d_1, …, d_k}`.
//!
//! Directions are given as anchor solutions (ED, Bz, ...); each direction is
//! the anchor minus Sh. The normal equations `G·c = r` with
//! `G_kl = ⟨d_k, d_l⟩_L` and `r_k = ⟨d_k, Ψ − Sh⟩_L` are solved exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::same_players;
use crate::line::{deviation_from_shapley, inner_l};
use crate::rational::{common_denominator, exact, Rational};
use crate::value::{named_profile, SymmetricValueProfile, ValueKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GramFit {
    pub n: usize,
    pub target: String,
    /// Direction `k` is `anchor_k − Sh`.
    pub names: Vec<String>,
    #[serde(serialize_with = "exact::matrix")]
    pub gram: Vec<Vec<Rational>>,
    #[serde(serialize_with = "exact::seq")]
    pub rhs: Vec<Rational>,
    #[serde(serialize_with = "exact::seq")]
    pub coeffs: Vec<Rational>,
    #[serde(serialize_with = "exact::one")]
    pub det: Rational,
    #[serde(serialize_with = "exact::one")]
    pub proj_sq: Rational,
    #[serde(serialize_with = "exact::one")]
    pub dist_sq: Rational,
    #[serde(serialize_with = "exact::one")]
    pub r2_u: Rational,
    /// `Sh + Σ coeffs_k·d_k`.
    pub mixture: SymmetricValueProfile,
    /// Weight on Sh first, then on each anchor; sums to 1.
    #[serde(serialize_with = "exact::seq")]
    pub anchor_weights: Vec<Rational>,
    #[serde(skip)]
    pub directions: Vec<SymmetricValueProfile>,
}

/// Result of exact elimination on a square system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub det: Rational,
    pub x: Vec<Rational>,
}

/// Solves `m·x = b` by fraction-free (Bareiss) elimination.
///
/// Each row is first scaled to integers; pivots are chosen by largest
/// magnitude. Returns `None` when `m` is singular.
pub fn solve_exact(m: &[Vec<Rational>], b: &[Rational]) -> Option<Solution> {
    let size = m.len();
    assert!(
        m.iter().all(|row| row.len() == size) && b.len() == size,
        "square system"
    );
    if size == 0 {
        return Some(Solution {
            det: Rational::one(),
            x: Vec::new(),
        });
    }

    let mut scale = BigInt::one();
    let mut rows: Vec<Vec<BigInt>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let lcm = common_denominator(row.iter().chain(std::iter::once(rhs)));
            scale *= &lcm;
            row.iter()
                .chain(std::iter::once(rhs))
                .map(|v| (v * Rational::from_integer(lcm.clone())).to_integer())
                .collect()
        })
        .collect();

    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..size {
        let pivot = (k..size).max_by_key(|&r| rows[r][k].abs())?;
        if rows[pivot][k].is_zero() {
            return None;
        }
        if pivot != k {
            rows.swap(pivot, k);
            negate = !negate;
        }
        for i in k + 1..size {
            for j in k + 1..=size {
                let num = &rows[k][k] * &rows[i][j] - &rows[i][k] * &rows[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division is exact");
                rows[i][j] = q;
            }
            rows[i][k] = BigInt::zero();
        }
        prev = rows[k][k].clone();
    }

    let mut det = Rational::new(prev, scale);
    if negate {
        det = -det;
    }
    let mut x = vec![Rational::zero(); size];
    for i in (0..size).rev() {
        let mut acc = Rational::from_integer(rows[i][size].clone());
        for j in i + 1..size {
            acc -= Rational::from_integer(rows[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_integer(rows[i][i].clone());
    }
    Some(Solution { det, x })
}

/// Exact determinant via [`solve_exact`]; zero for singular matrices.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    solve_exact(m, &vec![Rational::zero(); m.len()])
        .map(|s| s.det)
        .unwrap_or_else(Rational::zero)
}

fn gram_matrix(directions: &[SymmetricValueProfile]) -> Vec<Vec<Rational>> {
    directions
        .iter()
        .map(|x| {
            directions
                .iter()
                .map(|y| inner_l(x, y).expect("same n"))
                .collect()
        })
        .collect()
}

/// Best approximation of `target` by `Sh + Σ c_k·(anchor_k − Sh)`.
pub fn gram_fit(
    target: &SymmetricValueProfile,
    target_name: &str,
    anchors: &[(String, SymmetricValueProfile)],
) -> Result<GramFit> {
    let n = target.n();
    for (_, anchor) in anchors {
        same_players(n, anchor.n())?;
    }
    let names: Vec<String> = anchors.iter().map(|(name, _)| name.clone()).collect();
    let directions: Vec<SymmetricValueProfile> = anchors
        .iter()
        .map(|(_, p)| deviation_from_shapley(p))
        .collect();
    let deviation = deviation_from_shapley(target);
    let gram = gram_matrix(&directions);
    let rhs: Vec<Rational> = directions
        .iter()
        .map(|d| inner_l(d, &deviation).expect("same n"))
        .collect();

    let Some(Solution { det, x: coeffs }) = solve_exact(&gram, &rhs) else {
        return Err(Error::DependentDirections(dependent_prefix(&names, &gram)));
    };

    let proj_sq: Rational = coeffs.iter().zip(&rhs).map(|(c, r)| c * r).sum();
    let dist_sq = inner_l(&deviation, &deviation).expect("same n");
    let r2_u = if dist_sq.is_zero() {
        Rational::one()
    } else {
        &proj_sq / &dist_sq
    };
    let mixture = combine_directions(n, &coeffs, &directions);
    let mut anchor_weights = vec![Rational::one() - coeffs.iter().sum::<Rational>()];
    anchor_weights.extend(coeffs.iter().cloned());

    Ok(GramFit {
        n,
        target: target_name.to_string(),
        names,
        gram,
        rhs,
        coeffs,
        det,
        proj_sq,
        dist_sq,
        r2_u,
        mixture,
        anchor_weights,
        directions,
    })
}

/// Names up to and including the first direction that lies in the span of
/// those before it.
fn dependent_prefix(names: &[String], gram: &[Vec<Rational>]) -> Vec<String> {
    let k = (1..=gram.len())
        .find(|&k| {
            let leading: Vec<Vec<Rational>> =
                gram[..k].iter().map(|row| row[..k].to_vec()).collect();
            determinant(&leading).is_zero()
        })
        .unwrap_or(gram.len());
    names[..k].to_vec()
}

fn combine_directions(
    n: usize,
    coeffs: &[Rational],
    directions: &[SymmetricValueProfile],
) -> SymmetricValueProfile {
    let sh = named_profile(ValueKind::Sh, n).expect("valid player count");
    coeffs.iter().zip(directions).fold(sh, |acc, (c, d)| {
        acc.combine(&Rational::one(), d, c).expect("same n")
    })
}

/// `Sh + Σ coeffs_k·d_k`.
pub fn mixture_profile(fit: &GramFit) -> SymmetricValueProfile {
    combine_directions(fit.n, &fit.coeffs, &fit.directions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::line::{epsilon_star, norm_sq, projection_report};
    use crate::rational::{int, rat};
    use crate::value::egalitarian_shapley;

    fn anchor(kind: ValueKind, n: usize) -> (String, SymmetricValueProfile) {
        (kind.token().to_string(), named_profile(kind, n).unwrap())
    }

    fn cramer(m: &[Vec<Rational>], b: &[Rational]) -> (Rational, Vec<Rational>) {
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        let x0 = (&b[0] * &m[1][1] - &m[0][1] * &b[1]) / &det;
        let x1 = (&m[0][0] * &b[1] - &b[0] * &m[1][0]) / &det;
        (det, vec![x0, x1])
    }

    #[test]
    fn two_parameter_fit_at_four() {
        let esd = named_profile(ValueKind::Esd, 4).unwrap();
        let fit = gram_fit(
            &esd,
            "esd",
            &[anchor(ValueKind::Ed, 4), anchor(ValueKind::Bz, 4)],
        )
        .unwrap();
        assert_eq!(fit.det, rat(67, 96));
        assert_eq!(fit.coeffs, vec![rat(25, 67), rat(24, 67)]);
        assert_eq!(fit.proj_sq, rat(287, 402));
        assert_eq!(fit.r2_u, rat(287, 737));
        assert_eq!(
            fit.anchor_weights,
            vec![rat(18, 67), rat(25, 67), rat(24, 67)]
        );
        assert_eq!(mixture_profile(&fit), fit.mixture);
        assert_eq!(&fit.r2_u - rat(11, 29), rat(287, 737) - rat(11, 29));
    }

    #[test]
    fn single_direction_reduces_to_line() {
        for kind in [ValueKind::Bz, ValueKind::Esd, ValueKind::So] {
            let target = named_profile(kind, 5).unwrap();
            let fit = gram_fit(&target, kind.token(), &[anchor(ValueKind::Ed, 5)]).unwrap();
            assert_eq!(fit.coeffs, vec![epsilon_star(&target)]);
            assert_eq!(fit.r2_u, projection_report(&target, "").r2);
        }
    }

    #[test]
    fn target_in_span() {
        let target = egalitarian_shapley(&rat(1, 3), 4).unwrap();
        let fit = gram_fit(
            &target,
            "f",
            &[anchor(ValueKind::Ed, 4), anchor(ValueKind::Bz, 4)],
        )
        .unwrap();
        assert_eq!(fit.coeffs, vec![rat(1, 3), int(0)]);
        assert_eq!(fit.r2_u, int(1));
    }

    #[test]
    fn mixture_examples() {
        let sh = named_profile(ValueKind::Sh, 4).unwrap();
        let ed = named_profile(ValueKind::Ed, 4).unwrap();
        let mut fit = gram_fit(
            &ed,
            "ed",
            &[anchor(ValueKind::Ed, 4), anchor(ValueKind::Bz, 4)],
        )
        .unwrap();
        assert_eq!(fit.coeffs, vec![int(1), int(0)]);
        assert_eq!(mixture_profile(&fit), ed);
        fit.coeffs = vec![int(0), int(0)];
        assert_eq!(mixture_profile(&fit), sh);
    }

    #[test]
    fn dependent_directions_are_named() {
        let target = named_profile(ValueKind::So, 4).unwrap();
        let err = gram_fit(
            &target,
            "so",
            &[
                anchor(ValueKind::Bz, 4),
                anchor(ValueKind::Ed, 4),
                ("ed again".into(), named_profile(ValueKind::Ed, 4).unwrap()),
            ],
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::DependentDirections(vec!["bz".into(), "ed".into(), "ed again".into()])
        );
        let sh = gram_fit(&target, "so", &[anchor(ValueKind::Sh, 4)]).unwrap_err();
        assert_eq!(sh, Error::DependentDirections(vec!["sh".into()]));
    }

    #[test]
    fn residual_is_orthogonal_and_pythagorean() {
        for n in 3..=8 {
            for kind in [ValueKind::Esd, ValueKind::So, ValueKind::Bz] {
                let target = named_profile(kind, n).unwrap();
                let fit = gram_fit(
                    &target,
                    kind.token(),
                    &[
                        anchor(ValueKind::Ed, n),
                        anchor(ValueKind::Bz, n),
                        anchor(ValueKind::Esd, n),
                    ],
                );
                let Ok(fit) = fit else { continue };
                let resid = target.minus(&mixture_profile(&fit)).unwrap();
                for d in &fit.directions {
                    assert!(inner_l(&resid, d).unwrap().is_zero());
                }
                assert_eq!(fit.dist_sq, &fit.proj_sq + norm_sq(&resid));
                for (row, r) in fit.gram.iter().zip(&fit.rhs) {
                    let lhs: Rational = row.iter().zip(&fit.coeffs).map(|(g, c)| g * c).sum();
                    assert_eq!(&lhs, r);
                }
            }
        }
    }

    #[test]
    fn nested_models_gain() {
        for n in 4..=8 {
            for kind in [ValueKind::Esd, ValueKind::So] {
                let target = named_profile(kind, n).unwrap();
                let one = gram_fit(&target, "", &[anchor(ValueKind::Ed, n)]).unwrap();
                let two = gram_fit(
                    &target,
                    "",
                    &[anchor(ValueKind::Ed, n), anchor(ValueKind::Bz, n)],
                )
                .unwrap();
                assert!(one.r2_u <= two.r2_u);
                assert!(two.r2_u <= int(1));
            }
        }
    }

    #[test]
    fn elimination_matches_cramer() {
        let cases = [
            (
                vec![vec![rat(29, 6), rat(1, 12)], vec![rat(1, 12), rat(7, 48)]],
                vec![rat(11, 6), rat(1, 12)],
            ),
            (
                vec![vec![int(0), int(3)], vec![rat(2, 5), int(-1)]],
                vec![int(1), rat(7, 3)],
            ),
            (
                vec![vec![rat(-3, 7), rat(5, 2)], vec![rat(9, 4), rat(1, 11)]],
                vec![rat(2, 9), int(-4)],
            ),
        ];
        for (m, b) in cases {
            let sol = solve_exact(&m, &b).unwrap();
            let (det, x) = cramer(&m, &b);
            assert_eq!(sol.det, det);
            assert_eq!(sol.x, x);
        }
        assert!(solve_exact(
            &[vec![int(1), int(2)], vec![int(2), int(4)]],
            &[int(0), int(0)]
        )
        .is_none());
    }

    #[test]
    fn determinant_of_larger_systems() {
        let m = vec![
            vec![int(2), int(-1), int(0)],
            vec![int(-1), int(2), int(-1)],
            vec![int(0), int(-1), int(2)],
        ];
        assert_eq!(determinant(&m), int(4));
        let sol = solve_exact(&m, &[int(1), int(0), int(1)]).unwrap();
        assert_eq!(sol.x, vec![int(1), int(1), int(1)]);
    }

    #[test]
    fn fit_json_shape() {
        let esd = named_profile(ValueKind::Esd, 4).unwrap();
        let fit = gram_fit(
            &esd,
            "esd",
            &[anchor(ValueKind::Ed, 4), anchor(ValueKind::Bz, 4)],
        )
        .unwrap();
        let json = serde_json::to_value(&fit).unwrap();
        assert_eq!(json["gram"].as_array().unwrap().len(), 4);
        assert_eq!(json["r2_u"]["num"], "287");
        assert_eq!(json["mixture"]["alpha"].as_array().unwrap().len(), 4);
        assert!(json.get("directions").is_none());
    }
}
