//! Seeded random game trees.

use crate::game::{GameBuilder, GameTree};
use crate::rational::{int, ratio, Payoffs, Rational};
use num_traits::{Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, VecDeque};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Constraint {
    #[default]
    None,
    /// Every terminal vector sums to 0.
    ZeroSum,
    /// Every terminal vector sums to the constant.
    FixedSum(Rational),
    /// Terminals share one of `classes` vectors that differ in every coordinate.
    NoIndifference { classes: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub max_depth: usize,
    pub max_branching: usize,
    pub players: usize,
    /// Values terminal payoffs are drawn from; a small pool forces ties.
    pub payoff_pool: Vec<Rational>,
    pub constraint: Constraint,
    pub allow_chance: bool,
    /// Probability that a non-terminal node is a chance node.
    pub chance_density: Rational,
    /// Probability that a node below the root stops early as a terminal.
    pub leaf_density: Rational,
    /// Upper bound on the number of pure profiles; decision nodes that would
    /// exceed it become terminals.
    pub profile_budget: Option<u64>,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            max_depth: 4,
            max_branching: 3,
            players: 2,
            payoff_pool: (-2..=2).map(int).collect(),
            constraint: Constraint::None,
            allow_chance: true,
            chance_density: ratio(1, 5),
            leaf_density: ratio(1, 4),
            profile_budget: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeneratorError {
    #[error("payoff pool is empty")]
    EmptyPool,
    #[error("at least one player is required")]
    NoPlayers,
    #[error("max_branching must be at least 1")]
    NoBranching,
    #[error("{0} must be a probability with numerator and denominator below 2^64")]
    Density(&'static str),
    #[error("no_indifference needs {classes} distinct pool values, the pool has {distinct}")]
    PoolTooSmall { classes: usize, distinct: usize },
    #[error("no_indifference needs at least one class")]
    NoClasses,
}

fn bernoulli(rng: &mut ChaCha8Rng, p: &(u64, u64)) -> bool {
    rng.gen_range(0..p.1) < p.0
}

fn as_fraction(p: &Rational, name: &'static str) -> Result<(u64, u64), GeneratorError> {
    if p.is_negative() || *p > int(1) {
        return Err(GeneratorError::Density(name));
    }
    match (p.numer().to_u64(), p.denom().to_u64()) {
        (Some(n), Some(d)) => Ok((n, d)),
        _ => Err(GeneratorError::Density(name)),
    }
}

fn label(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("a{i}")
    }
}

/// Builds a tree breadth-first from `config`. The same config always yields
/// the same tree.
pub fn random_game(config: &GeneratorConfig) -> Result<GameTree, GeneratorError> {
    if config.payoff_pool.is_empty() {
        return Err(GeneratorError::EmptyPool);
    }
    if config.players == 0 {
        return Err(GeneratorError::NoPlayers);
    }
    if config.max_branching == 0 {
        return Err(GeneratorError::NoBranching);
    }
    let chance_p = as_fraction(&config.chance_density, "chance_density")?;
    let leaf_p = as_fraction(&config.leaf_density, "leaf_density")?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let classes = match config.constraint {
        Constraint::NoIndifference { classes } => {
            Some(indifference_classes(config, classes, &mut rng)?)
        }
        _ => None,
    };

    let mut g = GameBuilder::new(config.players);
    g.name(format!("random seed {}", config.seed));
    let mut profiles: u128 = 1;
    let budget = config.profile_budget.map(u128::from);
    let mut next_id = 1usize;
    let mut queue = VecDeque::from([("n0".to_string(), 0usize)]);
    while let Some((id, depth)) = queue.pop_front() {
        let stop = depth >= config.max_depth || (depth > 0 && bernoulli(&mut rng, &leaf_p));
        let min_branch = config.max_branching.min(2);
        let width = rng.gen_range(min_branch..=config.max_branching);
        let chance = !stop && config.allow_chance && bernoulli(&mut rng, &chance_p);
        let over_budget = budget.is_some_and(|b| profiles * width as u128 > b);
        if stop || (!chance && over_budget) {
            let payoffs = draw_payoffs(config, classes.as_deref(), &mut rng);
            g.terminal(&id, payoffs).expect("generated ids are unique");
            continue;
        }
        let children: Vec<String> = (0..width).map(|i| format!("n{}", next_id + i)).collect();
        next_id += width;
        if chance {
            let weights: Vec<i64> = (0..width).map(|_| rng.gen_range(1..=3)).collect();
            let total: i64 = weights.iter().sum();
            g.chance(
                &id,
                weights
                    .iter()
                    .zip(&children)
                    .map(|(w, c)| (ratio(*w, total), c.clone())),
            )
            .expect("generated ids are unique");
        } else {
            profiles *= width as u128;
            let owner = rng.gen_range(1..=config.players);
            g.decision(
                &id,
                owner,
                children
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (label(i), c.clone())),
            )
            .expect("generated ids are unique");
        }
        for c in children {
            queue.push_back((c, depth + 1));
        }
    }
    g.root("n0");
    Ok(g.build().expect("generated trees are well formed"))
}

fn indifference_classes(
    config: &GeneratorConfig,
    classes: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Payoffs>, GeneratorError> {
    if classes == 0 {
        return Err(GeneratorError::NoClasses);
    }
    let distinct: Vec<Rational> = config
        .payoff_pool
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if distinct.len() < classes {
        return Err(GeneratorError::PoolTooSmall {
            classes,
            distinct: distinct.len(),
        });
    }
    // Column j is a random injection of the classes into the pool, so any
    // two classes differ in every coordinate.
    let columns: Vec<Vec<Rational>> = (0..config.players)
        .map(|_| {
            let mut column = distinct.clone();
            column.shuffle(rng);
            column.truncate(classes);
            column
        })
        .collect();
    Ok((0..classes)
        .map(|c| Payoffs(columns.iter().map(|col| col[c].clone()).collect()))
        .collect())
}

fn draw_payoffs(
    config: &GeneratorConfig,
    classes: Option<&[Payoffs]>,
    rng: &mut ChaCha8Rng,
) -> Payoffs {
    let pool = &config.payoff_pool;
    let pick = |rng: &mut ChaCha8Rng| pool[rng.gen_range(0..pool.len())].clone();
    let with_sum = |c: Rational, rng: &mut ChaCha8Rng| {
        let mut v: Vec<Rational> = (1..config.players).map(|_| pick(rng)).collect();
        let rest = v.iter().fold(c, |acc, x| acc - x);
        v.push(rest);
        Payoffs(v)
    };
    match &config.constraint {
        Constraint::None => Payoffs((0..config.players).map(|_| pick(rng)).collect()),
        Constraint::ZeroSum => with_sum(int(0), rng),
        Constraint::FixedSum(c) => with_sum(c.clone(), rng),
        Constraint::NoIndifference { .. } => {
            let classes = classes.expect("classes drawn up front");
            classes[rng.gen_range(0..classes.len())].clone()
        }
    }
}
