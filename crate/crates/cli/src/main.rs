//! `shapgeo`: exact projections, strata, fits and trends for linear value maps.

mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use shapley_geometry::asymptotics::{
    trend_table, trends_csv, trends_table_text, MAX_TREND_PLAYERS,
};
use shapley_geometry::fixtures;
use shapley_geometry::game::random_h_orthonormal_basis;
use shapley_geometry::line::{
    check_profile_players, deviation_from_shapley, inner_l_general, inner_l_in_basis,
    projection_report,
};
use shapley_geometry::multifit::gram_fit;
use shapley_geometry::strata::strata_report;
use shapley_geometry::value::{evaluate, named_profile};
use shapley_geometry::verify::run_all;
use shapley_geometry::{Error, Game, Target, ValueKind};

const TABULATE_MAX_N: usize = 20;

#[derive(Parser)]
#[command(
    name = "shapgeo",
    version,
    about = "Exact geometry of linear value maps on TU games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Line fit of Sh, ED, Bz, ESD and So at one n.
    Tabulate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Projection of one target onto the egalitarian Shapley line.
    Project {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Stratified coordinates, weights and moments of one target.
    Strata {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Least-squares fit of a target by Sh plus anchor directions.
    Fit {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        target: String,
        /// Comma-separated anchors; each contributes the direction anchor − Sh.
        #[arg(long, default_value = "ed,bz")]
        directions: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// ε* and R² for several targets over a range of n.
    Trends {
        /// Smallest n.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = MAX_TREND_PLAYERS)]
        max_n: usize,
        /// Comma-separated targets.
        #[arg(long, default_value = "esd,bz,so")]
        target: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Evaluate a symmetric value map on a game read from JSON.
    Eval {
        #[arg(long)]
        value: String,
        #[arg(long)]
        game: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Compare inner products in a seeded rational H-orthonormal basis with
    /// the unanimity basis.
    BasisCheck {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run the reference-value suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

/// A failure reported as a single `error code=<slug>: <message>` line.
struct Failure {
    exit: u8,
    code: &'static str,
    message: String,
}

impl Failure {
    fn usage(code: &'static str, message: impl Into<String>) -> Self {
        Failure {
            exit: 2,
            code,
            message: message.into(),
        }
    }

    fn input(code: &'static str, message: impl Into<String>) -> Self {
        Failure {
            exit: 3,
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let message = err.to_string();
        match err {
            Error::UnknownTarget(_) => Failure::usage("unknown-target", message),
            Error::PlayerCount { .. } => Failure::usage("player-count", message),
            Error::StratumOutOfRange { .. } => Failure::usage("stratum-range", message),
            Error::DependentDirections(_) => Failure::usage("dependent-directions", message),
            Error::OracleCap { .. } => Failure::usage("oracle-cap", message),
            Error::InvalidRational(_) => Failure::input("invalid-rational", message),
            Error::DuplicateCoalition(_) => Failure::input("duplicate-coalition", message),
            Error::GameFormat(_)
            | Error::EmptyCoalition
            | Error::PlayerOutOfRange { .. }
            | Error::CoalitionOutOfRange { .. } => Failure::input("game-format", message),
            Error::PlayerMismatch { .. } | Error::WrongLength { .. } => {
                Failure::input("shape", message)
            }
            Error::IdentityViolation(_) => Failure {
                exit: 1,
                code: "identity",
                message,
            },
            Error::NotSymmetric { .. } | Error::NotEfficient { .. } | Error::InvalidBasis(_) => {
                Failure::input("invalid-map", message)
            }
        }
    }
}

type CmdResult = Result<(String, bool), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error code={}: {}", f.code, f.message);
            ExitCode::from(f.exit)
        }
    }
}

fn parse_target(token: &str) -> Result<Target, Failure> {
    token.parse::<Target>().map_err(Failure::from)
}

fn unsupported(format: Format, command: &str) -> Failure {
    let name = match format {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Table => "table",
    };
    Failure::usage(
        "format",
        format!("`{command}` does not support --format {name}"),
    )
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report");
    text.push('\n');
    text
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Tabulate { n, format } => {
            if !(2..=TABULATE_MAX_N).contains(&n) {
                return Err(Failure::usage(
                    "player-count",
                    format!("n = {n} outside 2..={TABULATE_MAX_N}"),
                ));
            }
            let reports: Vec<_> = ValueKind::ALL
                .iter()
                .map(|k| projection_report(&named_profile(*k, n).expect("n checked"), k.label()))
                .collect();
            let out = match format {
                Format::Table => render::tabulate_table(&reports),
                Format::Csv => render::tabulate_csv(&reports),
                Format::Json => pretty(&reports),
            };
            Ok((out, true))
        }
        Command::Project { n, target, format } => {
            check_profile_players(n)?;
            let t = parse_target(&target)?;
            let report = projection_report(&t.profile(n)?, &t.token());
            let out = match format {
                Format::Json => pretty(&report),
                Format::Table => render::tabulate_table(std::slice::from_ref(&report)),
                Format::Csv => render::tabulate_csv(std::slice::from_ref(&report)),
            };
            Ok((out, true))
        }
        Command::Strata { n, target, format } => {
            check_profile_players(n)?;
            let t = parse_target(&target)?;
            let report = strata_report(&t.profile(n)?, &t.token());
            let out = match format {
                Format::Json => pretty(&report),
                Format::Table => render::strata_table(&report),
                Format::Csv => return Err(unsupported(format, "strata")),
            };
            Ok((out, true))
        }
        Command::Fit {
            n,
            target,
            directions,
            format,
        } => {
            check_profile_players(n)?;
            let t = parse_target(&target)?;
            let anchors = directions
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|token| {
                    let anchor = parse_target(token)?;
                    Ok((anchor.token(), anchor.profile(n)?))
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            if anchors.is_empty() {
                return Err(Failure::usage(
                    "directions",
                    "at least one direction is required",
                ));
            }
            let fit = gram_fit(&t.profile(n)?, &t.token(), &anchors)?;
            let out = match format {
                Format::Json => pretty(&fit),
                Format::Table => render::fit_table(&fit),
                Format::Csv => return Err(unsupported(format, "fit")),
            };
            Ok((out, true))
        }
        Command::Trends {
            n,
            max_n,
            target,
            format,
        } => {
            let targets = target
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(parse_target)
                .collect::<Result<Vec<_>, _>>()?;
            let rows = trend_table(&targets, n, max_n)?;
            let out = match format {
                Format::Csv => trends_csv(&rows),
                Format::Table => trends_table_text(&rows),
                Format::Json => pretty(&rows),
            };
            Ok((out, true))
        }
        Command::Eval {
            value,
            game,
            format,
        } => {
            let t = parse_target(&value)?;
            let text = fs::read_to_string(&game)
                .map_err(|e| Failure::input("io", format!("{}: {e}", game.display())))?;
            let g = Game::from_json(&text)?;
            let payoff = evaluate(&t.profile(g.n())?, &g)?;
            let out = match format {
                Format::Json => pretty(&json!({
                    "n": g.n(),
                    "value": t.token(),
                    "payoffs": payoff,
                    "total": render::exact_value(&payoff.total()),
                })),
                Format::Table => render::payoff_table(&payoff),
                Format::Csv => render::payoff_csv(&payoff),
            };
            Ok((out, true))
        }
        Command::BasisCheck { n, seed, format } => {
            let basis = random_h_orthonormal_basis(n, seed)?;
            basis.validate()?;
            let mut rng = fixtures::rng(seed);
            let maps = [
                (
                    "Bz-Sh",
                    deviation_from_shapley(&named_profile(ValueKind::Bz, n)?).to_general()?,
                ),
                (
                    "ED-Sh",
                    deviation_from_shapley(&named_profile(ValueKind::Ed, n)?).to_general()?,
                ),
                ("random", fixtures::random_general_map(&mut rng, n)),
            ];
            let mut rows = Vec::new();
            for (i, (pname, p)) in maps.iter().enumerate() {
                for (qname, q) in &maps[i..] {
                    let direct = inner_l_general(p, q)?;
                    let in_basis = inner_l_in_basis(p, q, &basis)?;
                    rows.push(render::BasisRow {
                        pair: format!("<{pname}, {qname}>"),
                        equal: direct == in_basis,
                        unanimity: direct,
                        basis: in_basis,
                    });
                }
            }
            let ok = rows.iter().all(|r| r.equal);
            let out = match format {
                Format::Json => pretty(&json!({
                    "n": n,
                    "seed": seed,
                    "provenance": basis.provenance(),
                    "gram_identity": true,
                    "pairs": rows,
                    "all_equal": ok,
                })),
                Format::Table => render::basis_table(basis.provenance(), &rows),
                Format::Csv => return Err(unsupported(format, "basis-check")),
            };
            Ok((out, ok))
        }
        Command::Verify { format } => {
            let checks = run_all();
            let ok = checks.iter().all(|c| c.passed);
            let out = match format {
                Format::Table => render::verify_lines(&checks),
                Format::Json => pretty(&checks),
                Format::Csv => return Err(unsupported(format, "verify")),
            };
            Ok((out, ok))
        }
    }
}
