//! Text and CSV renderings. JSON goes straight through serde.

use std::fmt::Write as _;

use serde::Serialize;

use shapley_geometry::line::ProjectionReport;
use shapley_geometry::multifit::GramFit;
use shapley_geometry::rational::{display_with_decimal, exact, ExactJson};
use shapley_geometry::strata::StrataReport;
use shapley_geometry::verify::Check;
use shapley_geometry::{PayoffVector, Rational};

pub fn exact_value(value: &Rational) -> ExactJson {
    ExactJson::from(value)
}

fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

pub fn tabulate_table(reports: &[ProjectionReport]) -> String {
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.target.clone(),
                display_with_decimal(&r.eps_star),
                display_with_decimal(&r.dist_sq),
                display_with_decimal(&r.proj_sq),
                display_with_decimal(&r.resid_sq),
                display_with_decimal(&r.r2),
            ]
        })
        .collect();
    aligned(
        &["target", "eps*", "dist^2", "proj^2", "resid^2", "R^2"],
        &rows,
    )
}

pub fn tabulate_csv(reports: &[ProjectionReport]) -> String {
    let mut out = String::from("n,target,eps_star,dist_sq,proj_sq,resid_sq,r2\n");
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n, r.target, r.eps_star, r.dist_sq, r.proj_sq, r.resid_sq, r.r2
        );
    }
    out
}

pub fn strata_table(report: &StrataReport) -> String {
    let rows: Vec<Vec<String>> = (0..report.coords.eps.len())
        .map(|i| {
            vec![
                (i + 1).to_string(),
                display_with_decimal(&report.coords.eps[i]),
                display_with_decimal(&report.coords.delta[i]),
                display_with_decimal(&report.w[i]),
            ]
        })
        .collect();
    let mut out = aligned(&["a", "eps_a", "delta_a", "w_a"], &rows);
    let _ = writeln!(
        out,
        "top stratum deviation^2: {}",
        display_with_decimal(&report.coords.top_stratum_dev_sq)
    );
    let _ = writeln!(out, "mean: {}", display_with_decimal(&report.moments.mean));
    let _ = writeln!(
        out,
        "variance: {}",
        display_with_decimal(&report.moments.variance)
    );
    let _ = writeln!(
        out,
        "R^2 ({}): {}",
        report.r2_source,
        display_with_decimal(&report.r2)
    );
    out
}

pub fn fit_table(fit: &GramFit) -> String {
    let mut rows = vec![vec![
        "sh".to_string(),
        String::new(),
        display_with_decimal(&fit.anchor_weights[0]),
    ]];
    for (k, name) in fit.names.iter().enumerate() {
        rows.push(vec![
            name.clone(),
            display_with_decimal(&fit.coeffs[k]),
            display_with_decimal(&fit.anchor_weights[k + 1]),
        ]);
    }
    let mut out = aligned(&["anchor", "coefficient", "weight"], &rows);
    let _ = writeln!(out, "Gram det: {}", display_with_decimal(&fit.det));
    let _ = writeln!(out, "proj^2: {}", display_with_decimal(&fit.proj_sq));
    let _ = writeln!(out, "dist^2: {}", display_with_decimal(&fit.dist_sq));
    let _ = writeln!(out, "R^2_U: {}", display_with_decimal(&fit.r2_u));
    out
}

pub fn payoff_table(payoff: &PayoffVector) -> String {
    let rows: Vec<Vec<String>> = payoff
        .entries()
        .iter()
        .enumerate()
        .map(|(i, x)| vec![i.to_string(), display_with_decimal(x)])
        .collect();
    aligned(&["player", "payoff"], &rows)
}

pub fn payoff_csv(payoff: &PayoffVector) -> String {
    let mut out = String::from("player,payoff\n");
    for (i, x) in payoff.entries().iter().enumerate() {
        let _ = writeln!(out, "{i},{x}");
    }
    out
}

#[derive(Serialize)]
pub struct BasisRow {
    pub pair: String,
    #[serde(serialize_with = "exact::one")]
    pub unanimity: Rational,
    #[serde(serialize_with = "exact::one")]
    pub basis: Rational,
    pub equal: bool,
}

pub fn basis_table(provenance: &str, rows: &[BasisRow]) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.pair.clone(),
                r.unanimity.to_string(),
                r.basis.to_string(),
                if r.equal { "equal" } else { "DIFFERENT" }.to_string(),
            ]
        })
        .collect();
    format!(
        "basis: {provenance}\n{}",
        aligned(&["pair", "unanimity", "basis", ""], &cells)
    )
}

pub fn verify_lines(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let _ = write!(out, "{status}  {}  [{}]", c.name, c.anchor);
        if !c.passed || !c.detail.is_empty() {
            let _ = write!(out, "  {}", c.detail);
        }
        out.push('\n');
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(out, "{passed}/{} checks passed", checks.len());
    out
}
