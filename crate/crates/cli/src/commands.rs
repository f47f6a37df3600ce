//! Command dispatch. Each command returns its output document and whether
//! the checked property holds.

use crate::output::{Format, Out};
use crate::{Cli, Command, CorpusAction, Mode, Property, TieBreakArg};
use spelab_core::corpus::named_game;
use spelab_core::dot::to_dot;
use spelab_core::verifier::{
    check_no_mixing, check_weak_no_mixing, count_pure_spe, enumerate_pure_spe,
    enumerate_pure_spe_paths, first_pure_spe, is_spe_one_shot, is_spe_oracle,
    spe_payoff_invariance, Invariance, VerifyError,
};
use spelab_core::{
    backward_induction, check_no_indifference, expected_payoffs, fixed_sum_constant,
    format_rational, improved_backward_induction, parse_game, parse_profile, selection_plays,
    validate_profile, write_game, write_profile, BehaviorProfile, CapError, GameTree, Limits,
    MixRule, Play, PureProfile, Strategy, TieBreak,
};
use std::io::Read;
use std::path::Path;

pub const CAP_VARIABLE: &str = "SPELAB_MAX_SELECTIONS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Cap(#[from] CapError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

fn input(message: impl Into<String>) -> CliError {
    CliError::Input(message.into())
}

fn read_source(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| input(format!("stdin: {e}")))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
    }
}

fn load_game(path: &Path) -> Result<GameTree, CliError> {
    let text = read_source(path)?;
    parse_game(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_profile(tree: &GameTree, game: &Path, path: &Path) -> Result<BehaviorProfile, CliError> {
    if game.as_os_str() == "-" && path.as_os_str() == "-" {
        return Err(input("game and profile cannot both come from stdin"));
    }
    let text = read_source(path)?;
    let profile =
        parse_profile(tree, &text).map_err(|e| input(format!("{}: {e}", path.display())))?;
    let report = validate_profile(tree, &profile);
    if !report.ok() {
        return Err(input(format!("{}: {report}", path.display())));
    }
    Ok(profile)
}

/// Default limits, with the selection cap taken from the environment if set.
pub fn limits() -> Result<Limits, CliError> {
    match std::env::var(CAP_VARIABLE) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map(|cap| Limits::default().with_max_selections(cap))
            .map_err(|_| {
                input(format!(
                    "{CAP_VARIABLE} must be a non-negative integer, got `{v}`"
                ))
            }),
        Err(_) => Ok(Limits::default()),
    }
}

pub fn run(cli: &Cli) -> Result<(String, bool), CliError> {
    let mut out = Out::new(cli.format);
    let holds = match &cli.command {
        Command::Solve {
            game,
            mode,
            tie_break,
            paths,
        } => solve(&mut out, game, *mode, *tie_break, *paths)?,
        Command::Verify {
            game,
            profile,
            oracle,
        } => verify(&mut out, game, profile, *oracle)?,
        Command::EnumerateSpe {
            game,
            paths_only,
            limit,
        } => enumerate(&mut out, game, *paths_only, *limit)?,
        Command::Check { game, property } => check(&mut out, game, *property)?,
        Command::NoMixing {
            game,
            profile,
            weak,
        } => no_mixing(&mut out, game, profile, *weak)?,
        Command::Invariance { game } => invariance(&mut out, game)?,
        Command::Corpus { action } => corpus(&mut out, action)?,
        Command::ExportDot { game } => {
            out.raw(&to_dot(&load_game(game)?));
            true
        }
    };
    Ok((out.into_string(), holds))
}

fn play_payoffs(tree: &GameTree, play: &Play) -> spelab_core::Payoffs {
    let mut g = PureProfile::first_actions(tree);
    for &(n, a) in &play.choices {
        g.set(n, a);
    }
    expected_payoffs(tree, &g, tree.root())
}

fn list_plays<S: Strategy + ?Sized>(out: &mut Out, tree: &GameTree, profile: &S) {
    let mut plays: Vec<(String, Play)> = selection_plays(tree, profile)
        .into_iter()
        .map(|p| (p.render(tree), p))
        .collect();
    plays.sort();
    out.field("paths", plays.len());
    for (i, (rendered, play)) in plays.iter().enumerate() {
        out.item("path", i + 1, rendered, Some(&play_payoffs(tree, play)));
    }
}

fn solve(
    out: &mut Out,
    game: &Path,
    mode: Mode,
    tie: TieBreakArg,
    paths: bool,
) -> Result<bool, CliError> {
    let tree = load_game(game)?;
    match mode {
        Mode::Pure => {
            let tie = match tie {
                TieBreakArg::First => TieBreak::First,
                TieBreakArg::Last => TieBreak::Last,
            };
            let (g, values) = backward_induction(&tree, tie);
            out.field("mode", "pure");
            out.field("value", &values[tree.root()]);
            if paths {
                list_plays(out, &tree, &g);
            } else {
                out.profile(&write_profile(&tree, &g.to_behavior(&tree)));
            }
        }
        Mode::Universal => {
            let u = improved_backward_induction(&tree, MixRule::Uniform)
                .map_err(|e| input(e.to_string()))?;
            out.field("mode", "universal");
            out.field("value", &u.values[tree.root()]);
            out.field("selections", u.argmax.product());
            if paths {
                list_plays(out, &tree, &u.profile);
            } else {
                out.profile(&write_profile(&tree, &u.profile));
            }
        }
    }
    Ok(true)
}

fn verify(out: &mut Out, game: &Path, profile: &Path, oracle: bool) -> Result<bool, CliError> {
    let tree = load_game(game)?;
    let f = load_profile(&tree, game, profile)?;
    let v = is_spe_one_shot(&tree, &f);
    out.field("spe", v.outcome);
    if let Some(w) = &v.witness {
        out.field("witness", w.describe(&tree));
    }
    out.field("value", expected_payoffs(&tree, &f, tree.root()));
    let mut holds = v.outcome;
    if oracle {
        let o = is_spe_oracle(&tree, &f, &limits()?)?;
        out.field("oracle", o.outcome);
        if let Some(w) = &o.witness {
            out.field("oracle_witness", w.describe(&tree));
        }
        holds &= o.outcome;
    }
    Ok(holds)
}

fn enumerate(
    out: &mut Out,
    game: &Path,
    paths_only: bool,
    limit: Option<u64>,
) -> Result<bool, CliError> {
    let tree = load_game(game)?;
    let limits = limits()?;
    out.field("spe_count", count_pure_spe(&tree, &limits)?);
    if paths_only {
        let paths = enumerate_pure_spe_paths(&tree, &limits)?;
        let shown = limit.map_or(paths.paths.len(), |n| paths.paths.len().min(n as usize));
        out.field("paths", paths.paths.len());
        for (i, p) in paths.paths.iter().take(shown).enumerate() {
            out.item("path", i + 1, &p.rendered, Some(&p.payoffs));
        }
    } else {
        let list = match limit {
            Some(n) => first_pure_spe(&tree, n, &limits)?,
            None => enumerate_pure_spe(&tree, &limits)?,
        };
        out.field("listed", list.len());
        for (i, g) in list.iter().enumerate() {
            let payoffs = expected_payoffs(&tree, g, tree.root());
            out.item("profile", i + 1, g.describe(&tree), Some(&payoffs));
        }
    }
    Ok(true)
}

fn check(out: &mut Out, game: &Path, property: Property) -> Result<bool, CliError> {
    let tree = load_game(game)?;
    let (name, holds) = match property {
        Property::NoIndifference => {
            let v = check_no_indifference(&tree);
            out.field("property", "no-indifference");
            out.field("holds", v.outcome);
            if let Some(w) = &v.witness {
                out.field("witness", w.describe(&tree));
            }
            return Ok(v.outcome);
        }
        Property::ZeroSum => {
            let c = fixed_sum_constant(&tree);
            (
                "zero-sum",
                c.is_some_and(|c| c == spelab_core::rational::int(0)),
            )
        }
        Property::FixedSum => ("fixed-sum", fixed_sum_constant(&tree).is_some()),
    };
    out.field("property", name);
    out.field("holds", holds);
    match fixed_sum_constant(&tree) {
        Some(c) => out.field("constant", format_rational(&c)),
        None => {
            let mut sums = tree.terminals().map(|(n, p)| (n, p.sum()));
            let (first, s) = sums.next().expect("a valid tree has a terminal");
            let (second, t) = sums.find(|(_, t)| *t != s).expect("sums differ");
            out.field(
                "witness",
                format!(
                    "terminals {} and {} sum to {} and {}",
                    tree.id(first),
                    tree.id(second),
                    format_rational(&s),
                    format_rational(&t)
                ),
            );
        }
    }
    Ok(holds)
}

fn no_mixing(out: &mut Out, game: &Path, profile: &Path, weak: bool) -> Result<bool, CliError> {
    let tree = load_game(game)?;
    let f = load_profile(&tree, game, profile)?;
    let limits = limits()?;
    let result = if weak {
        check_weak_no_mixing(&tree, &f, &limits)
    } else {
        check_no_mixing(&tree, &f, &limits)
    };
    let report = match result {
        Ok(r) => r,
        Err(VerifyError::Cap(e)) => return Err(e.into()),
        Err(e @ VerifyError::NotSpe(_)) => {
            let detail = match &e {
                VerifyError::NotSpe(v) => v.witness.as_ref().map(|w| w.describe(&tree)),
                VerifyError::Cap(_) => None,
            };
            return Err(input(match detail {
                Some(d) => format!("{e}: {d}"),
                None => e.to_string(),
            }));
        }
    };
    out.field(
        "property",
        if weak { "weak-no-mixing" } else { "no-mixing" },
    );
    out.field("holds", report.verdict.outcome);
    out.field("selections", &report.selections);
    out.field("selections_checked", &report.selections_checked);
    if let Some(w) = &report.verdict.witness {
        out.field("witness", w.describe(&tree));
    }
    Ok(report.verdict.outcome)
}

fn invariance(out: &mut Out, game: &Path) -> Result<bool, CliError> {
    let tree = load_game(game)?;
    let result = spe_payoff_invariance(&tree, &limits()?)?;
    out.field("holds", result.verdict().outcome);
    match &result {
        Invariance::Holds { payoffs, spe_count } => {
            out.field("payoffs", payoffs);
            out.field("spe_count", spe_count);
        }
        Invariance::Fails { witness } => out.field("witness", witness.describe(&tree)),
        Invariance::Vacuous => out.field("spe_count", 0),
    }
    Ok(result.verdict().outcome)
}

const DESCRIPTIONS: &[(&str, &str)] = &[
    (
        "tianji",
        "three-round horse race between the king and Tian Ji",
    ),
    (
        "bargaining",
        "two-stage bargaining with a chance stage; --param grid size (default 8)",
    ),
    ("G1", "three-player control example for uniform mixing"),
    ("G2", "two-player example with no SPE selection"),
    ("G5", "three-player example with no SPE selection"),
    ("G6", "G1 embedded below two earlier moves"),
    (
        "random",
        "seeded random tree; --param depth (default 4), --seed",
    ),
];

fn corpus(out: &mut Out, action: &CorpusAction) -> Result<bool, CliError> {
    match action {
        CorpusAction::List => {
            for (i, (name, description)) in DESCRIPTIONS.iter().enumerate() {
                match out.format() {
                    Format::Text => {
                        out.item("game", i + 1, format!("{name:<12}{description}"), None)
                    }
                    Format::Report => out.item("game", i + 1, name, None),
                }
            }
        }
        CorpusAction::Emit { name, param, seed } => {
            let tree = named_game(name, *param, *seed).map_err(|e| input(e.to_string()))?;
            out.raw(&write_game(&tree));
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use spelab_core::corpus::NAMES;

    #[test]
    fn every_corpus_name_is_described() {
        let described: Vec<&str> = DESCRIPTIONS.iter().map(|(n, _)| *n).collect();
        assert_eq!(described, NAMES);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(input("x").exit_code(), 2);
    }
}
