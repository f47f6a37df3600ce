//! Exhaustive cross-checks. These enumerate strategies outright and are
//! meant for small games in tests.

use super::is_spe_one_shot;
use crate::game::{GameTree, Node, NodeId};
use crate::limits::{exceeds, CapError, Limits};
use crate::rational::Rational;
use crate::solver::continuation_values;
use crate::strategy::{enumerate_selections, BehaviorProfile, PureProfile, Strategy};
use crate::verdict::{Verdict, Witness};
use num_bigint::BigUint;
use num_traits::Zero;

/// SPE check by unilateral deviation: for every player, every subgame, and
/// every pure replacement of that player's choices inside the subgame, the
/// player's expected payoff at the subgame root must not increase.
///
/// Refused when some player has more than `limits.oracle_strategies` pure
/// strategies in the whole game.
pub fn is_spe_oracle<S: Strategy + ?Sized>(
    tree: &GameTree,
    profile: &S,
    limits: &Limits,
) -> Result<Verdict, CapError> {
    for player in 1..=tree.players() {
        let count: BigUint = tree
            .decision_nodes()
            .iter()
            .filter(|n| tree.owner(**n) == Some(player))
            .map(|n| BigUint::from(tree.actions(*n).len()))
            .product();
        if exceeds(&count, limits.oracle_strategies) {
            return Err(CapError::new(
                "pure strategies per player",
                count,
                limits.oracle_strategies,
            ));
        }
    }

    let baseline = continuation_values(tree, profile);
    for (subgame, node) in tree.nodes() {
        if node.is_terminal() {
            continue;
        }
        let members = tree.subtree(subgame);
        for player in 1..=tree.players() {
            let owned: Vec<NodeId> = {
                let mut v: Vec<NodeId> = members
                    .iter()
                    .copied()
                    .filter(|n| tree.owner(*n) == Some(player))
                    .collect();
                v.sort();
                v
            };
            if owned.is_empty() {
                continue;
            }
            let base = baseline[subgame].of(player).clone();
            let mut values: Vec<Rational> =
                baseline.iter().map(|(_, v)| v.of(player).clone()).collect();
            let mut choice = vec![0usize; tree.len()];
            let mut bottom_up = members.clone();
            bottom_up.reverse();
            for &n in &bottom_up {
                values[n.0] = node_value(tree, profile, player, n, &choice, &values);
            }
            let mut digits = vec![0usize; owned.len()];
            loop {
                if values[subgame.0] > base {
                    return Ok(Verdict::fail(Witness::StrategyDeviation {
                        subgame,
                        player,
                        replacement: owned.iter().map(|n| (*n, choice[n.0])).collect(),
                        gain: &values[subgame.0] - &base,
                    }));
                }
                // advance the odometer, last owned node fastest
                let mut pos = owned.len();
                let mut changed = Vec::new();
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    let n = owned[pos];
                    digits[pos] += 1;
                    if digits[pos] < tree.actions(n).len() {
                        choice[n.0] = digits[pos];
                        changed.push(n);
                        break;
                    }
                    digits[pos] = 0;
                    choice[n.0] = 0;
                    changed.push(n);
                    if pos == 0 {
                        changed.clear();
                        break;
                    }
                }
                if changed.is_empty() {
                    break;
                }
                for n in changed {
                    let mut cur = Some(n);
                    while let Some(c) = cur {
                        values[c.0] = node_value(tree, profile, player, c, &choice, &values);
                        if c == subgame {
                            break;
                        }
                        cur = tree.parent(c);
                    }
                }
            }
        }
    }
    Ok(Verdict::pass())
}

/// Player `player`'s value at `n` when `player` follows `choice` and
/// everyone else follows `profile`.
fn node_value<S: Strategy + ?Sized>(
    tree: &GameTree,
    profile: &S,
    player: usize,
    n: NodeId,
    choice: &[usize],
    values: &[Rational],
) -> Rational {
    match tree.node(n) {
        Node::Terminal { payoffs } => payoffs.of(player).clone(),
        Node::Chance { outcomes } => outcomes.iter().fold(Rational::zero(), |acc, o| {
            acc + &o.probability * &values[o.child.0]
        }),
        Node::Decision { owner, actions } if *owner == player => {
            values[actions[choice[n.0]].child.0].clone()
        }
        Node::Decision { actions, .. } => profile
            .weights(tree, n)
            .into_iter()
            .fold(Rational::zero(), |acc, (a, w)| {
                acc + w * &values[actions[a].child.0]
            }),
    }
}

/// All pure SPE, found by checking every pure profile of the game.
pub fn pure_spe_brute_force(
    tree: &GameTree,
    limits: &Limits,
) -> Result<Vec<PureProfile>, CapError> {
    let everything = BehaviorProfile::uniform(tree);
    Ok(enumerate_selections(tree, &everything, None, limits)?
        .filter(|g| is_spe_one_shot(tree, g).outcome)
        .collect())
}
