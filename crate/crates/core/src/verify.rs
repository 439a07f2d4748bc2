//! The fixed list of reference equalities behind the `verify` command.

use num_traits::Zero;
use serde::Serialize;

use crate::asymptotics::{h_n, so_epsilon_closed, trend_table};
use crate::fixtures::glove_game;
use crate::game::{Coalition, Game};
use crate::line::{
    closed_form_eps_bz, closed_form_eps_esd, d_n, deviation_from_shapley, epsilon_star, inner_l,
    projection_report, residual_profile,
};
use crate::multifit::gram_fit;
use crate::rational::{rat, Rational};
use crate::strata::{
    generalized_pythagoras, r2_from_moments, stratified_coords, weighted_moments, weights,
};
use crate::value::{
    banzhaf_oracle, evaluate, named_profile, shapley_oracle, solidarity_oracle, Target, ValueKind,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    /// Which result the check reproduces.
    pub anchor: &'static str,
    pub passed: bool,
    pub detail: String,
}

struct Suite(Vec<Check>);

impl Suite {
    fn record(
        &mut self,
        name: impl Into<String>,
        anchor: &'static str,
        passed: bool,
        detail: String,
    ) {
        self.0.push(Check {
            name: name.into(),
            anchor,
            passed,
            detail,
        });
    }

    fn eq(&mut self, name: impl Into<String>, anchor: &'static str, got: Rational, want: Rational) {
        let passed = got == want;
        self.record(name, anchor, passed, format!("got {got}, expected {want}"));
    }

    fn eq_seq(
        &mut self,
        name: impl Into<String>,
        anchor: &'static str,
        got: Vec<Rational>,
        want: Vec<Rational>,
    ) {
        let show = |v: &[Rational]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        let passed = got == want;
        self.record(
            name,
            anchor,
            passed,
            format!("got ({}), expected ({})", show(&got), show(&want)),
        );
    }
}

fn named(kind: ValueKind, n: usize) -> crate::value::SymmetricValueProfile {
    named_profile(kind, n).expect("valid player count")
}

fn rv(xs: &[(i64, i64)]) -> Vec<Rational> {
    xs.iter().map(|&(p, q)| rat(p, q)).collect()
}

/// Runs every check; the suite passes when all entries have `passed`.
pub fn run_all() -> Vec<Check> {
    let mut s = Suite(Vec::new());

    for (n, want) in (2..=5).zip(rv(&[(1, 1), (5, 2), (29, 6), (103, 12)])) {
        s.eq(format!("D_{n}"), "line constant, small n", d_n(n), want);
    }
    s.eq("H(2)", "binomial harmonic sum", h_n(2), rat(5, 2));
    s.eq("H(3)", "binomial harmonic sum", h_n(3), rat(29, 6));

    for (n, want) in (2..=5).zip(rv(&[(0, 1), (0, 1), (1, 58), (11, 206)])) {
        s.eq(
            format!("eps*(Bz), n={n}"),
            "Banzhaf line coefficient",
            epsilon_star(&named(ValueKind::Bz, n)),
            want.clone(),
        );
        s.eq(
            format!("closed eps*(Bz), n={n}"),
            "Banzhaf closed form",
            closed_form_eps_bz(n),
            want,
        );
    }
    for (n, want) in (2..=5).zip(rv(&[(0, 1), (1, 5), (11, 29), (55, 103)])) {
        s.eq(
            format!("eps*(ESD), n={n}"),
            "ESD line coefficient",
            epsilon_star(&named(ValueKind::Esd, n)),
            want.clone(),
        );
        s.eq(
            format!("closed eps*(ESD), n={n}"),
            "ESD closed form",
            closed_form_eps_esd(n),
            want,
        );
    }

    let table = [
        (
            ValueKind::Bz,
            [(1, 58), (7, 48), (1, 696), (67, 464), (2, 203)],
            "n=4 Banzhaf decomposition",
        ),
        (
            ValueKind::Esd,
            [(11, 29), (11, 6), (121, 174), (33, 29), (11, 29)],
            "n=4 ESD decomposition",
        ),
        (
            ValueKind::So,
            [(39, 58), (79, 36), (507, 232), (19, 2088), (4563, 4582)],
            "n=4 solidarity projection",
        ),
    ];
    for (kind, want, anchor) in table {
        let r = projection_report(&named(kind, 4), kind.label());
        let label = kind.label();
        let got = [r.eps_star, r.dist_sq, r.proj_sq, r.resid_sq, r.r2];
        for ((field, g), (p, q)) in ["eps*", "dist^2", "proj^2", "resid^2", "R^2"]
            .iter()
            .zip(got)
            .zip(want)
        {
            s.eq(format!("{label} {field}, n=4"), anchor, g, rat(p, q));
        }
    }

    let ed_dir = deviation_from_shapley(&named(ValueKind::Ed, 4));
    let bz_dir = deviation_from_shapley(&named(ValueKind::Bz, 4));
    let esd_dir = deviation_from_shapley(&named(ValueKind::Esd, 4));
    s.eq(
        "<ED-Sh, Bz-Sh>, n=4",
        "Banzhaf inner product",
        inner_l(&ed_dir, &bz_dir).unwrap(),
        rat(1, 12),
    );
    s.eq(
        "<Bz-Sh, ESD-Sh>, n=4",
        "Banzhaf/ESD inner product",
        inner_l(&bz_dir, &esd_dir).unwrap(),
        rat(1, 12),
    );
    let bz_resid = residual_profile(&named(ValueKind::Bz, 4));
    s.eq(
        "Bz residual off carrier, n=4",
        "explicit residual",
        bz_resid.beta(2).clone(),
        rat(-1, 232),
    );

    let so4 = named(ValueKind::So, 4);
    s.eq_seq(
        "So beta, n=4",
        "solidarity profile",
        so4.betas().to_vec(),
        rv(&[(23, 144), (13, 72), (3, 16)]),
    );
    s.eq_seq(
        "So alpha, n=4",
        "solidarity profile",
        so4.alphas().to_vec(),
        rv(&[(25, 48), (23, 72), (13, 48), (1, 4)]),
    );
    let so_eps: Vec<Rational> = (1..4).map(|a| so_epsilon_closed(a, 4).unwrap()).collect();
    s.eq_seq(
        "So closed-form eps, n=4",
        "solidarity closed form",
        so_eps,
        rv(&[(23, 36), (13, 18), (3, 4)]),
    );

    let coords = stratified_coords(&so4);
    let w = weights(4);
    s.eq_seq(
        "So stratified eps, n=4",
        "solidarity strata",
        coords.eps.clone(),
        rv(&[(23, 36), (13, 18), (3, 4)]),
    );
    s.eq_seq(
        "stratum weights, n=4",
        "stratum weights",
        w.w.clone(),
        rv(&[(18, 29), (9, 29), (2, 29)]),
    );
    s.eq(
        "Var_w(So), n=4",
        "solidarity strata",
        weighted_moments(&coords, &w).unwrap().variance,
        rat(19, 10092),
    );
    s.eq(
        "R^2(So) from moments, n=4",
        "variance form of R^2",
        r2_from_moments(&coords, &w).unwrap(),
        rat(4563, 4582),
    );
    let esd_coords = stratified_coords(&named(ValueKind::Esd, 4));
    s.eq_seq(
        "ESD stratified eps, n=4",
        "ESD strata",
        esd_coords.eps,
        rv(&[(0, 1), (1, 1), (1, 1)]),
    );
    let bz_coords = stratified_coords(&named(ValueKind::Bz, 4));
    s.eq_seq(
        "Bz stratified eps, n=4",
        "Banzhaf strata",
        bz_coords.eps,
        rv(&[(0, 1), (0, 1), (1, 4)]),
    );
    s.eq_seq(
        "Bz efficiency defects, n=4",
        "Banzhaf strata",
        bz_coords.delta,
        rv(&[(0, 1), (0, 1), (-1, 16)]),
    );
    s.eq(
        "Bz generalized Pythagoras total, n=4",
        "generalized decomposition",
        generalized_pythagoras(&named(ValueKind::Bz, 4)).total,
        rat(7, 48),
    );

    let esd = named(ValueKind::Esd, 4);
    let anchors = [
        ("ed".to_string(), named(ValueKind::Ed, 4)),
        ("bz".to_string(), named(ValueKind::Bz, 4)),
    ];
    let fit = gram_fit(&esd, "esd", &anchors).expect("independent directions");
    s.eq(
        "Gram det",
        "two-parameter fit",
        fit.det.clone(),
        rat(67, 96),
    );
    s.eq_seq(
        "fit coefficients",
        "two-parameter fit",
        fit.coeffs.clone(),
        rv(&[(25, 67), (24, 67)]),
    );
    s.eq(
        "fit projection norm",
        "two-parameter fit",
        fit.proj_sq.clone(),
        rat(287, 402),
    );
    s.eq(
        "fit R^2_U",
        "two-parameter fit",
        fit.r2_u.clone(),
        rat(287, 737),
    );
    s.eq_seq(
        "mixture weights",
        "two-parameter fit",
        fit.anchor_weights.clone(),
        rv(&[(18, 67), (25, 67), (24, 67)]),
    );

    let glove = glove_game();
    s.eq_seq(
        "Shapley of glove game",
        "permutation oracle",
        shapley_oracle(&glove).unwrap().0,
        rv(&[(2, 3), (1, 6), (1, 6)]),
    );
    s.eq_seq(
        "Banzhaf of glove game",
        "definition oracle",
        banzhaf_oracle(&glove).unwrap().0,
        rv(&[(3, 4), (1, 4), (1, 4)]),
    );
    s.eq_seq(
        "closed-form Sh on glove game",
        "unanimity evaluation",
        evaluate(&named(ValueKind::Sh, 3), &glove).unwrap().0,
        rv(&[(2, 3), (1, 6), (1, 6)]),
    );
    let u1 = Game::unanimity(4, Coalition::from_players(&[0], 4).unwrap()).unwrap();
    s.eq(
        "So_i(u_A), |A|=1, i in A, n=4",
        "solidarity oracle",
        solidarity_oracle(&u1).unwrap().0[0].clone(),
        rat(25, 48),
    );
    let u3 = Game::unanimity(4, Coalition::from_players(&[0, 1, 2], 4).unwrap()).unwrap();
    s.eq(
        "So_i(u_A), |A|=3, i not in A, n=4",
        "solidarity oracle",
        solidarity_oracle(&u3).unwrap().0[3].clone(),
        rat(3, 16),
    );

    let targets: Vec<Target> = [ValueKind::Esd, ValueKind::Bz, ValueKind::So]
        .map(Target::Named)
        .to_vec();
    match trend_table(&targets, 3, 30) {
        Ok(rows) => {
            s.record(
                "1 - R^2(ESD) = (n-1)/D_n, n=3..30",
                "ESD asymptotic identity",
                true,
                format!("{} rows", rows.len()),
            );
            let find = |n: usize, t: &str| {
                rows.iter()
                    .find(|r| r.n == n && r.target == t)
                    .expect("row present")
            };
            for n in [20, 30] {
                let r2 = find(n, "bz").r2_f64;
                s.record(
                    format!("R^2(Bz) near 1/2, n={n}"),
                    "Banzhaf limit",
                    (r2 - 0.5).abs() < 0.05,
                    format!("R^2 = {r2:.6}"),
                );
            }
            for (n, reported) in [(4, 4e-3), (12, 4e-4), (20, 9e-6)] {
                let gap = find(n, "so").one_minus_r2;
                s.record(
                    format!("1 - R^2(So) order of magnitude, n={n}"),
                    "solidarity decimals",
                    gap > reported / 2.0 && gap < reported * 2.0,
                    format!("{gap:.3e} vs {reported:.0e}"),
                );
            }
        }
        Err(e) => s.record(
            "trend table",
            "ESD asymptotic identity",
            false,
            e.to_string(),
        ),
    }

    let bz20 = stratified_coords(&named(ValueKind::Bz, 20));
    let locked = bz20
        .eps
        .iter()
        .zip(&bz20.delta)
        .all(|(e, d)| (d + e / rat(20, 1)).is_zero());
    s.record(
        "delta_a(Bz) = -eps_a(Bz)/n, n=20",
        "Banzhaf strata",
        locked,
        String::new(),
    );
    let mean = weighted_moments(&stratified_coords(&named(ValueKind::Bz, 9)), &weights(9))
        .unwrap()
        .mean;
    s.eq(
        "eps*(Bz) as weighted mean, n=9",
        "projection as a mean",
        mean,
        epsilon_star(&named(ValueKind::Bz, 9)),
    );

    s.0
}
