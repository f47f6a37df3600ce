//! Pure-SPE search by value classes.
//!
//! A pure profile is an SPE iff its restriction to every child subgame is an
//! SPE there and the choice at the node is optimal against the children's
//! values. So the SPE restrictions to a subtree can be grouped by the payoff
//! vector they produce at its root ("classes"), and a node's classes follow
//! from its children's classes alone:
//!
//! * decision node owned by `i`: action `a` with child class `c` is optimal
//!   iff every other child `j` takes a class `d` with `d[i] <= c[i]`;
//! * chance node: one class per child, combined by expectation.
//!
//! The accumulator attached to each class decides what is tracked: a count,
//! the profiles themselves, or just the reached (on-path) choices.

use crate::game::{GameTree, Node, NodeId};
use crate::limits::{CapError, Limits};
use crate::rational::Payoffs;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

pub(crate) trait Acc: Clone {
    /// Accumulator of a terminal.
    fn leaf() -> Self;
    fn empty() -> Self;
    fn is_empty(&self) -> bool;
    /// Disjoint union of alternatives.
    fn add(&mut self, other: &Self);
    /// Combination of independent subtrees.
    fn mul(&self, other: &Self) -> Self;
    /// Prefixes the choice of `action` at `node`.
    fn choose(&self, node: NodeId, action: usize) -> Self;
    /// Contribution of a subtree the play does not enter.
    fn offpath(&self) -> Self {
        self.clone()
    }
    /// Number of stored items, for memory caps.
    fn size(&self) -> usize {
        0
    }
}

impl Acc for BigUint {
    fn leaf() -> Self {
        BigUint::one()
    }
    fn empty() -> Self {
        BigUint::zero()
    }
    fn is_empty(&self) -> bool {
        self.is_zero()
    }
    fn add(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn choose(&self, _: NodeId, _: usize) -> Self {
        self.clone()
    }
}

/// Every partial profile, as `(node, action)` lists.
#[derive(Debug, Clone, Default)]
pub(crate) struct Profiles(pub Vec<Vec<(NodeId, usize)>>);

impl Acc for Profiles {
    fn leaf() -> Self {
        Profiles(vec![Vec::new()])
    }
    fn empty() -> Self {
        Profiles::default()
    }
    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    fn add(&mut self, other: &Self) {
        self.0.extend(other.0.iter().cloned());
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() * other.0.len());
        for x in &self.0 {
            for y in &other.0 {
                let mut z = x.clone();
                z.extend_from_slice(y);
                out.push(z);
            }
        }
        Profiles(out)
    }
    fn choose(&self, node: NodeId, action: usize) -> Self {
        Profiles(
            self.0
                .iter()
                .map(|p| {
                    let mut p = p.clone();
                    p.push((node, action));
                    p
                })
                .collect(),
        )
    }
    fn size(&self) -> usize {
        self.0.len()
    }
}

/// Distinct sets of reached choices; off-path subtrees only need to be nonempty.
#[derive(Debug, Clone, Default)]
pub(crate) struct Plays(pub BTreeSet<Vec<(NodeId, usize)>>);

impl Acc for Plays {
    fn leaf() -> Self {
        Plays(BTreeSet::from([Vec::new()]))
    }
    fn empty() -> Self {
        Plays::default()
    }
    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    fn add(&mut self, other: &Self) {
        self.0.extend(other.0.iter().cloned());
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = BTreeSet::new();
        for x in &self.0 {
            for y in &other.0 {
                let mut z = x.clone();
                z.extend_from_slice(y);
                z.sort_unstable();
                out.insert(z);
            }
        }
        Plays(out)
    }
    fn choose(&self, node: NodeId, action: usize) -> Self {
        Plays(
            self.0
                .iter()
                .map(|p| {
                    let mut p = p.clone();
                    p.push((node, action));
                    p.sort_unstable();
                    p
                })
                .collect(),
        )
    }
    fn offpath(&self) -> Self {
        if self.0.is_empty() {
            Plays::empty()
        } else {
            Plays::leaf()
        }
    }
    fn size(&self) -> usize {
        self.0.len()
    }
}

/// One representative partial profile per class.
#[derive(Debug, Clone, Default)]
pub(crate) struct Rep(pub Option<Vec<(NodeId, usize)>>);

impl Acc for Rep {
    fn leaf() -> Self {
        Rep(Some(Vec::new()))
    }
    fn empty() -> Self {
        Rep(None)
    }
    fn is_empty(&self) -> bool {
        self.0.is_none()
    }
    fn add(&mut self, other: &Self) {
        if self.0.is_none() {
            self.0 = other.0.clone();
        }
    }
    fn mul(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Some(x), Some(y)) => {
                let mut z = x.clone();
                z.extend_from_slice(y);
                Rep(Some(z))
            }
            _ => Rep(None),
        }
    }
    fn choose(&self, node: NodeId, action: usize) -> Self {
        Rep(self.0.as_ref().map(|p| {
            let mut p = p.clone();
            p.push((node, action));
            p
        }))
    }
}

pub(crate) type Classes<A> = BTreeMap<Payoffs, A>;

/// SPE classes at the root of the subtree under `top`, where decision node
/// `n` may only choose among `allowed[n]` (all actions still count as
/// deviations).
pub(crate) fn spe_classes<A: Acc>(
    tree: &GameTree,
    top: NodeId,
    allowed: &[Vec<usize>],
    limits: &Limits,
) -> Result<Classes<A>, CapError> {
    let mut table: Vec<Option<Classes<A>>> = vec![None; tree.len()];
    let mut order = tree.subtree(top);
    order.reverse();
    for node in order {
        let classes = match tree.node(node) {
            Node::Terminal { payoffs } => Classes::from([(payoffs.clone(), A::leaf())]),
            Node::Chance { outcomes } => {
                let mut acc: Classes<A> =
                    Classes::from([(Payoffs::zeros(tree.players()), A::leaf())]);
                for o in outcomes {
                    let child = table[o.child.0].take().expect("child solved first");
                    let combos = acc.len() as u64 * child.len() as u64;
                    if combos > limits.max_combinations {
                        return Err(CapError::new(
                            "chance value-class combination",
                            BigUint::from(combos),
                            limits.max_combinations,
                        ));
                    }
                    let mut next = Classes::new();
                    for (v, a) in &acc {
                        for (c, b) in &child {
                            let mut w = v.clone();
                            w.add_scaled(&o.probability, c);
                            insert(&mut next, w, a.mul(b));
                        }
                    }
                    acc = next;
                }
                acc
            }
            Node::Decision { owner, actions } => {
                let children: Vec<Classes<A>> = actions
                    .iter()
                    .map(|a| table[a.child.0].take().expect("child solved first"))
                    .collect();
                let mut out = Classes::new();
                for &a in &allowed[node.0] {
                    for (c, acc_c) in &children[a] {
                        let x = c.of(*owner);
                        let mut prod = acc_c.choose(node, a);
                        for (j, other) in children.iter().enumerate() {
                            if j == a || prod.is_empty() {
                                continue;
                            }
                            let mut below = A::empty();
                            for (_, acc_d) in other.iter().filter(|(d, _)| d.of(*owner) <= x) {
                                below.add(&acc_d.offpath());
                            }
                            prod = if below.is_empty() {
                                A::empty()
                            } else {
                                prod.mul(&below)
                            };
                        }
                        if !prod.is_empty() {
                            insert(&mut out, c.clone(), prod);
                        }
                    }
                }
                out
            }
        };
        let size: usize = classes.values().map(Acc::size).sum();
        if size as u64 > limits.max_selections {
            return Err(CapError::new(
                "materialized pure-SPE",
                BigUint::from(size),
                limits.max_selections,
            ));
        }
        table[node.0] = Some(classes);
    }
    Ok(table[top.0].take().unwrap_or_default())
}

fn insert<A: Acc>(map: &mut Classes<A>, key: Payoffs, value: A) {
    match map.get_mut(&key) {
        Some(existing) => existing.add(&value),
        None => {
            map.insert(key, value);
        }
    }
}

/// Every action at every decision node.
pub(crate) fn all_actions(tree: &GameTree) -> Vec<Vec<usize>> {
    (0..tree.len())
        .map(|i| (0..tree.actions(NodeId(i)).len()).collect())
        .collect()
}
