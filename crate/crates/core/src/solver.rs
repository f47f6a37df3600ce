//! Continuation values, backward induction, and the universal (argmax-mixing)
//! variant of backward induction.

use crate::game::{GameTree, Node, NodeId};
use crate::rational::{format_rational, Payoffs, Rational};
use crate::strategy::{BehaviorProfile, PureProfile, Strategy};
use num_traits::{One, Signed, Zero};
use std::ops::Index;

/// Expected payoff vector of every node under some profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueTable {
    values: Vec<Payoffs>,
}

impl ValueTable {
    pub fn get(&self, node: NodeId) -> &Payoffs {
        &self.values[node.0]
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &Payoffs)> {
        self.values.iter().enumerate().map(|(i, v)| (NodeId(i), v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl Index<NodeId> for ValueTable {
    type Output = Payoffs;

    fn index(&self, node: NodeId) -> &Payoffs {
        self.get(node)
    }
}

/// Value of a chance or decision node from its children's values.
pub(crate) fn mixed_value(
    players: usize,
    children: impl IntoIterator<Item = (Rational, NodeId)>,
    values: &[Payoffs],
) -> Payoffs {
    let mut acc = Payoffs::zeros(players);
    for (w, child) in children {
        acc.add_scaled(&w, &values[child.0]);
    }
    acc
}

fn chance_value(tree: &GameTree, node: NodeId, values: &[Payoffs]) -> Option<Payoffs> {
    match tree.node(node) {
        Node::Terminal { payoffs } => Some(payoffs.clone()),
        Node::Chance { outcomes } => Some(mixed_value(
            tree.players(),
            outcomes.iter().map(|o| (o.probability.clone(), o.child)),
            values,
        )),
        Node::Decision { .. } => None,
    }
}

/// Bottom-up expected payoffs of `profile` at every node.
pub fn continuation_values<S: Strategy + ?Sized>(tree: &GameTree, profile: &S) -> ValueTable {
    let mut values = vec![Payoffs::zeros(tree.players()); tree.len()];
    for node in tree.postorder() {
        values[node.0] = match chance_value(tree, node, &values) {
            Some(v) => v,
            None => {
                let actions = tree.actions(node);
                match profile.pure_choice(tree, node) {
                    Some(a) => values[actions[a].child.0].clone(),
                    None => mixed_value(
                        tree.players(),
                        profile
                            .weights(tree, node)
                            .into_iter()
                            .map(|(a, w)| (w, actions[a].child)),
                        &values,
                    ),
                }
            }
        };
    }
    ValueTable { values }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    First,
    Last,
}

/// Indices of the actions maximizing the owner's payoff, in action order.
fn argmax(tree: &GameTree, node: NodeId, values: &[Payoffs]) -> Vec<usize> {
    let owner = tree.owner(node).expect("decision node");
    let actions = tree.actions(node);
    let best = actions
        .iter()
        .map(|a| values[a.child.0].of(owner))
        .max()
        .expect("at least one action");
    let best = best.clone();
    actions
        .iter()
        .enumerate()
        .filter(|(_, a)| *values[a.child.0].of(owner) == best)
        .map(|(i, _)| i)
        .collect()
}

/// Classical backward induction with a deterministic tie-break. The result
/// is a pure SPE together with its value table.
pub fn backward_induction(tree: &GameTree, tie_break: TieBreak) -> (PureProfile, ValueTable) {
    let mut profile = PureProfile::first_actions(tree);
    let mut values = vec![Payoffs::zeros(tree.players()); tree.len()];
    for node in tree.postorder() {
        values[node.0] = match chance_value(tree, node, &values) {
            Some(v) => v,
            None => {
                let best = argmax(tree, node, &values);
                let a = match tie_break {
                    TieBreak::First => best[0],
                    TieBreak::Last => best[best.len() - 1],
                };
                profile.set(node, a);
                values[tree.actions(node)[a].child.0].clone()
            }
        };
    }
    (profile, ValueTable { values })
}

/// Optimal action sets per decision node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgmaxTable {
    sets: Vec<Vec<usize>>,
}

impl ArgmaxTable {
    /// Optimal actions at `node` in action order; empty for non-decision nodes.
    pub fn get(&self, node: NodeId) -> &[usize] {
        &self.sets[node.0]
    }

    /// Number of pure profiles choosing inside every argmax set.
    pub fn product(&self) -> num_bigint::BigUint {
        self.sets
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| num_bigint::BigUint::from(s.len()))
            .product()
    }
}

/// How improved backward induction spreads weight across an argmax set.
pub enum MixRule<'a> {
    /// Equal weight on every optimal action.
    Uniform,
    /// Use the given profile's distribution; its support must equal the argmax set.
    Profile(&'a BehaviorProfile),
    /// Called with each decision node and its argmax set; returns one positive
    /// weight per optimal action, summing to 1.
    Weights(&'a mut dyn FnMut(NodeId, &[usize]) -> Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("at node {node}: support {found:?} differs from the optimal actions {expected:?}")]
    SupportMismatch {
        node: String,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("at node {node}: {reason}")]
    BadWeights { node: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universal {
    pub profile: BehaviorProfile,
    pub values: ValueTable,
    pub argmax: ArgmaxTable,
}

/// Backward induction that mixes over every optimal action instead of picking
/// one. Argmax sets are computed against the mixed continuation built so far.
pub fn improved_backward_induction(
    tree: &GameTree,
    mut rule: MixRule<'_>,
) -> Result<Universal, SolverError> {
    let mut values = vec![Payoffs::zeros(tree.players()); tree.len()];
    let mut sets = vec![Vec::new(); tree.len()];
    let mut profile = BehaviorProfile::new();
    for node in tree.postorder() {
        if let Some(v) = chance_value(tree, node, &values) {
            values[node.0] = v;
            continue;
        }
        let best = argmax(tree, node, &values);
        let actions = tree.actions(node);
        let label = |a: &usize| actions[*a].label.clone();
        let weights: Vec<Rational> = match &mut rule {
            MixRule::Uniform => {
                vec![Rational::new(1.into(), best.len().into()); best.len()]
            }
            MixRule::Profile(given) => {
                let dist = given.weights(tree, node);
                let support: Vec<usize> = dist.iter().map(|(a, _)| *a).collect();
                if support != best {
                    return Err(SolverError::SupportMismatch {
                        node: tree.id(node).to_string(),
                        expected: best.iter().map(label).collect(),
                        found: support.iter().map(label).collect(),
                    });
                }
                dist.into_iter().map(|(_, w)| w).collect()
            }
            MixRule::Weights(f) => f(node, &best),
        };
        check_weights(tree, node, &best, &weights)?;
        values[node.0] = mixed_value(
            tree.players(),
            weights
                .iter()
                .cloned()
                .zip(best.iter().map(|a| actions[*a].child)),
            &values,
        );
        profile.set(node, best.iter().map(label).zip(weights).collect());
        sets[node.0] = best;
    }
    Ok(Universal {
        profile,
        values: ValueTable { values },
        argmax: ArgmaxTable { sets },
    })
}

fn check_weights(
    tree: &GameTree,
    node: NodeId,
    best: &[usize],
    weights: &[Rational],
) -> Result<(), SolverError> {
    let bad = |reason: String| SolverError::BadWeights {
        node: tree.id(node).to_string(),
        reason,
    };
    if weights.len() != best.len() {
        return Err(bad(format!(
            "{} weights for {} optimal actions",
            weights.len(),
            best.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
        return Err(bad(format!(
            "weight {} leaves an optimal action out of the support",
            format_rational(w)
        )));
    }
    let sum = weights.iter().fold(Rational::zero(), |acc, w| acc + w);
    if !sum.is_one() {
        return Err(bad(format!("weights sum to {}", format_rational(&sum))));
    }
    Ok(())
}
