//! Outcomes of property checks and the evidence attached to failures.

use crate::game::{GameTree, NodeId};
use crate::rational::{format_rational, Payoffs, Rational};
use crate::strategy::PureProfile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            outcome: true,
            witness: None,
        }
    }

    pub fn pass_with(witness: Witness) -> Self {
        Verdict {
            outcome: true,
            witness: Some(witness),
        }
    }

    pub fn fail(witness: Witness) -> Self {
        Verdict {
            outcome: false,
            witness: Some(witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A one-shot deviation: switching to `action` at `node` gains `gain` for its owner.
    Deviation {
        node: NodeId,
        action: usize,
        gain: Rational,
    },
    /// A unilateral change of `player`'s pure choices inside the subgame at `subgame`.
    StrategyDeviation {
        subgame: NodeId,
        player: usize,
        replacement: Vec<(NodeId, usize)>,
        gain: Rational,
    },
    /// A selection together with the reason it is not an SPE.
    Selection {
        selection: PureProfile,
        failure: Box<Witness>,
    },
    /// A selection that is an SPE (weak no-mixing evidence).
    Pure(PureProfile),
    /// Two terminals on which `tied_player` is indifferent while `differing_player` is not.
    Indifference {
        first: NodeId,
        second: NodeId,
        tied_player: usize,
        differing_player: usize,
    },
    /// Two pure SPE with different root payoffs.
    PayoffSplit {
        first: (PureProfile, Payoffs),
        second: (PureProfile, Payoffs),
    },
    /// A selection whose continuation value at `node` differs from the mixed profile's.
    ValueMismatch {
        node: NodeId,
        expected: Payoffs,
        found: Payoffs,
    },
}

impl Witness {
    /// Human-readable rendering with node ids and action labels resolved against `tree`.
    pub fn describe(&self, tree: &GameTree) -> String {
        match self {
            Witness::Deviation { node, action, gain } => format!(
                "deviation at {} to {} gains {}",
                tree.id(*node),
                tree.actions(*node)[*action].label,
                format_rational(gain)
            ),
            Witness::StrategyDeviation {
                subgame,
                player,
                replacement,
                gain,
            } => {
                let moves: Vec<String> = replacement
                    .iter()
                    .map(|(n, a)| format!("{}={}", tree.id(*n), tree.actions(*n)[*a].label))
                    .collect();
                format!(
                    "player {player} gains {} in the subgame at {} by playing [{}]",
                    format_rational(gain),
                    tree.id(*subgame),
                    moves.join(", ")
                )
            }
            Witness::Selection { selection, failure } => format!(
                "selection [{}] is not an SPE: {}",
                selection.describe(tree),
                failure.describe(tree)
            ),
            Witness::Pure(p) => format!("selection [{}] is an SPE", p.describe(tree)),
            Witness::Indifference {
                first,
                second,
                tied_player,
                differing_player,
            } => format!(
                "terminals {} and {} tie for player {tied_player} but differ for player {differing_player}",
                tree.id(*first),
                tree.id(*second)
            ),
            Witness::PayoffSplit { first, second } => format!(
                "SPE [{}] pays {} while SPE [{}] pays {}",
                first.0.describe(tree),
                first.1,
                second.0.describe(tree),
                second.1
            ),
            Witness::ValueMismatch {
                node,
                expected,
                found,
            } => format!(
                "a selection is worth {found} at {} instead of {expected}",
                tree.id(*node)
            ),
        }
    }
}
