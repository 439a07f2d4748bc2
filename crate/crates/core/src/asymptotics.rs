//! Exact combinatorial identities behind the large-`n` behaviour, and the
//! trend table of `ε*` and `R²` across `n`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::line::{check_profile_players, d_n, projection_report};
use crate::rational::{binomial_rat, exact, pow, rat, recip, sig4, to_f64, Rational};
use crate::value::{Target, ValueKind, MAX_PROFILE_PLAYERS};

/// Largest `n` accepted by [`trend_table`].
pub const MAX_TREND_PLAYERS: usize = 30;

fn size_rat(k: usize) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

fn check_identity_range(n: usize) {
    assert!(
        (1..=MAX_PROFILE_PLAYERS).contains(&n),
        "n = {n} outside 1..={MAX_PROFILE_PLAYERS}"
    );
}

/// Harmonic number `Σ_{j=1}^{n} 1/j`.
pub fn harmonic(n: usize) -> Rational {
    (1..=n as u64).map(recip).sum()
}

/// `H_n = Σ_a C(n,a)/a`.
pub fn h_n_binomial(n: usize) -> Rational {
    (1..=n)
        .map(|a| binomial_rat(n as u64, a as u64) / size_rat(a))
        .sum()
}

/// `H_n = Σ_{j=1}^{n} 2^j/j − Σ_{j=1}^{n} 1/j`.
pub fn h_n_power_sum(n: usize) -> Rational {
    let two = rat(2, 1);
    (1..=n)
        .map(|j| pow(&two, j as u32) / size_rat(j))
        .sum::<Rational>()
        - harmonic(n)
}

/// `H_n`, with both formulas evaluated and required to agree.
pub fn h_n(n: usize) -> Rational {
    check_identity_range(n);
    let direct = h_n_binomial(n);
    assert_eq!(direct, h_n_power_sum(n), "H_n formulas disagree at n = {n}");
    direct
}

/// `Σ_n = Σ_{j=1}^{n−1} 2^j/j`, checked against `D_n = Σ_n + 1/n − harmonic(n)`.
pub fn sigma(n: usize) -> Rational {
    check_identity_range(n);
    let two = rat(2, 1);
    let value: Rational = (1..n).map(|j| pow(&two, j as u32) / size_rat(j)).sum();
    if n >= 2 {
        let rebuilt = &value + recip(n as u64) - harmonic(n);
        assert_eq!(d_n(n), rebuilt, "D_n identity fails at n = {n}");
    }
    value
}

fn check_stratum(a: usize, n: usize) -> Result<()> {
    check_profile_players(n)?;
    if a == 0 || a >= n {
        return Err(Error::StratumOutOfRange {
            stratum: a,
            max: n - 1,
        });
    }
    Ok(())
}

/// The three equivalent closed forms for `ε_a(So)`:
/// `a·Σ_{s=a+1}^{n} C(n−a−1, s−a−1)/(s·C(n−1, s−1))`,
/// `a/C(n−1,a)·Σ_{s=a+1}^{n} C(s−1,a)/s`, and
/// `a/(a+1) + a/C(n−1,a)·Σ_{s=a+1}^{n−1} C(s,a+1)/(s(s+1))`.
pub fn so_epsilon_forms(a: usize, n: usize) -> Result<[Rational; 3]> {
    check_stratum(a, n)?;
    let (a64, n64) = (a as u64, n as u64);
    let ar = size_rat(a);

    let defining: Rational = (a64 + 1..=n64)
        .map(|s| {
            binomial_rat(n64 - a64 - 1, s - a64 - 1)
                / (size_rat(s as usize) * binomial_rat(n64 - 1, s - 1))
        })
        .sum::<Rational>()
        * &ar;

    let lead = &ar / binomial_rat(n64 - 1, a64);
    let cleaner: Rational = (a64 + 1..=n64)
        .map(|s| binomial_rat(s - 1, a64) / size_rat(s as usize))
        .sum::<Rational>()
        * &lead;

    let abel = &ar / size_rat(a + 1)
        + (a64 + 1..n64)
            .map(|s| binomial_rat(s, a64 + 1) / size_rat((s * (s + 1)) as usize))
            .sum::<Rational>()
            * &lead;

    Ok([defining, cleaner, abel])
}

/// `ε_1(So) = 1 − (harmonic(n) − 1)/(n − 1)`.
pub fn so_epsilon_first(n: usize) -> Rational {
    Rational::one() - (harmonic(n) - Rational::one()) / size_rat(n - 1)
}

/// `ε_{n−1}(So) = (n − 1)/n`.
pub fn so_epsilon_last(n: usize) -> Rational {
    rat(n as i64 - 1, n as i64)
}

/// `ε_{n−2}(So) = (n − 2)·[(n − 1)² + n] / [n·(n − 1)²]`.
pub fn so_epsilon_second_last(n: usize) -> Rational {
    let (n1, n2) = (size_rat(n - 1), size_rat(n - 2));
    n2 * (&n1 * &n1 + size_rat(n)) / (size_rat(n) * &n1 * &n1)
}

/// `ε_a(So)` for `1 ≤ a ≤ n − 1`. All three forms and the applicable
/// special-case identities are required to agree.
pub fn so_epsilon_closed(a: usize, n: usize) -> Result<Rational> {
    let [defining, cleaner, abel] = so_epsilon_forms(a, n)?;
    if defining != cleaner || cleaner != abel {
        return Err(Error::IdentityViolation(format!(
            "solidarity forms disagree at a = {a}, n = {n}: {defining}, {cleaner}, {abel}"
        )));
    }
    let special = [
        (a == 1, so_epsilon_first as fn(usize) -> Rational, "a = 1"),
        (a == n - 1, so_epsilon_last, "a = n − 1"),
        (n >= 3 && a == n - 2, so_epsilon_second_last, "a = n − 2"),
    ];
    for (applies, formula, label) in special {
        if applies && formula(n) != defining {
            return Err(Error::IdentityViolation(format!(
                "solidarity {label} identity fails at n = {n}"
            )));
        }
    }
    Ok(defining)
}

/// `(T1, T2, T3) = (n·(5/4)^{n−1}, 2·((3/2)^n − 1), H_n)`, whose combination
/// `T1 − 2·T2 + T3` is `‖Bz − Sh‖²_L`.
pub fn bz_norm_terms(n: usize) -> (Rational, Rational, Rational) {
    let t1 = size_rat(n) * pow(&rat(5, 4), n as u32 - 1);
    let t2 = rat(2, 1) * (pow(&rat(3, 2), n as u32) - Rational::one());
    (t1, t2, h_n(n))
}

/// `1 − ε*(Bz) = (2·(3/2)^{n−1} − 2)/D_n`.
pub fn bz_eps_gap(n: usize) -> Rational {
    (rat(2, 1) * pow(&rat(3, 2), n as u32 - 1) - rat(2, 1)) / d_n(n)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendRow {
    pub n: usize,
    pub target: String,
    #[serde(serialize_with = "exact::one")]
    pub eps_star: Rational,
    pub eps_star_f64: f64,
    #[serde(serialize_with = "exact::one")]
    pub r2: Rational,
    pub r2_f64: f64,
    pub one_minus_r2: f64,
}

/// `ε*` and `R²` for every target at every `n` in `n_min..=n_max`, ordered
/// by `n` and then by the order of `targets`. Each ESD row with `n ≥ 3` is
/// checked against `1 − R² = (n − 1)/D_n`.
pub fn trend_table(targets: &[Target], n_min: usize, n_max: usize) -> Result<Vec<TrendRow>> {
    if n_min < 2 || n_max > MAX_TREND_PLAYERS || n_min > n_max {
        return Err(Error::PlayerCount {
            n: if n_min < 2 { n_min } else { n_max },
            min: 2,
            max: MAX_TREND_PLAYERS,
        });
    }
    let per_n: Vec<Result<Vec<TrendRow>>> = (n_min..=n_max)
        .into_par_iter()
        .map(|n| targets.iter().map(|t| trend_row(t, n)).collect())
        .collect();
    let mut rows = Vec::new();
    for chunk in per_n {
        rows.extend(chunk?);
    }
    Ok(rows)
}

fn trend_row(target: &Target, n: usize) -> Result<TrendRow> {
    let report = projection_report(&target.profile(n)?, &target.token());
    let one_minus = Rational::one() - &report.r2;
    if *target == Target::Named(ValueKind::Esd) && n >= 3 {
        let expected = size_rat(n - 1) / d_n(n);
        if one_minus != expected {
            return Err(Error::IdentityViolation(format!(
                "1 − R²(ESD) = {one_minus} but (n − 1)/D_n = {expected} at n = {n}"
            )));
        }
    }
    Ok(TrendRow {
        n,
        target: target.token(),
        eps_star_f64: to_f64(&report.eps_star),
        r2_f64: to_f64(&report.r2),
        one_minus_r2: to_f64(&one_minus),
        eps_star: report.eps_star,
        r2: report.r2,
    })
}

/// `n,target,eps_star,r2,one_minus_r2` with exact `p/q` fields.
pub fn trends_csv(rows: &[TrendRow]) -> String {
    let mut out = String::from("n,target,eps_star,r2,one_minus_r2\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.n, row.target, row.eps_star, row.r2, row.one_minus_r2
        );
    }
    out
}

/// Aligned text rendering of trend rows.
pub fn trends_table_text(rows: &[TrendRow]) -> String {
    let mut out = format!(
        "{:>3}  {:<8} {:>12} {:>12} {:>12}\n",
        "n", "target", "eps*", "R2", "1-R2"
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{:>3}  {:<8} {:>12} {:>12} {:>12}",
            row.n,
            row.target,
            sig4(row.eps_star_f64),
            sig4(row.r2_f64),
            sig4(row.one_minus_r2)
        );
    }
    out
}

/// `true` when every element is strictly below the next.
pub fn strictly_increasing(values: &[Rational]) -> bool {
    values.windows(2).all(|w| w[0] < w[1])
}

/// `ε_a(So)` for `n = a+1..=n_max`.
pub fn so_epsilon_sequence(a: usize, n_max: usize) -> Result<Vec<Rational>> {
    (a + 1..=n_max).map(|n| so_epsilon_closed(a, n)).collect()
}
