//! Behavior and pure strategy profiles, induced play, and selections.
//!
//! Profiles are indexed by decision node: with perfect information each node
//! has a single mover, so player `i`'s strategy is the restriction of a
//! profile to the nodes `i` owns.

use crate::game::{GameTree, IssueKind, Node, NodeId, ValidationReport};
use crate::limits::{exceeds, CapError, Limits};
use crate::rational::{format_rational, Payoffs, Rational};
use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashSet};

/// Read access to the action distribution a profile assigns at each decision node.
pub trait Strategy {
    /// The action played with certainty at `node`, if the distribution is a point mass.
    fn pure_choice(&self, tree: &GameTree, node: NodeId) -> Option<usize>;

    /// Actions with positive probability and their weights, in action order.
    fn weights(&self, tree: &GameTree, node: NodeId) -> Vec<(usize, Rational)>;

    /// Support at `node` as action indices.
    fn support(&self, tree: &GameTree, node: NodeId) -> Vec<usize> {
        match self.pure_choice(tree, node) {
            Some(a) => vec![a],
            None => self
                .weights(tree, node)
                .into_iter()
                .map(|(a, _)| a)
                .collect(),
        }
    }
}

/// One action per decision node, stored densely by node index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PureProfile {
    choices: Vec<Option<usize>>,
}

impl PureProfile {
    /// The profile choosing the first listed action everywhere.
    pub fn first_actions(tree: &GameTree) -> Self {
        let mut choices = vec![None; tree.len()];
        for &n in tree.decision_nodes() {
            choices[n.0] = Some(0);
        }
        PureProfile { choices }
    }

    /// Builds a profile from `(node id, action label)` pairs; every decision
    /// node must be covered.
    pub fn from_labels(tree: &GameTree, pairs: &[(&str, &str)]) -> Result<Self, String> {
        let mut choices = vec![None; tree.len()];
        for (id, label) in pairs {
            let node = tree
                .find(id)
                .ok_or_else(|| format!("unknown node `{id}`"))?;
            let a = tree
                .action_index(node, label)
                .ok_or_else(|| format!("no action `{label}` at node `{id}`"))?;
            choices[node.0] = Some(a);
        }
        if let Some(n) = tree
            .decision_nodes()
            .iter()
            .find(|n| choices[n.0].is_none())
        {
            return Err(format!("no action assigned at node `{}`", tree.id(*n)));
        }
        Ok(PureProfile { choices })
    }

    pub fn choice(&self, node: NodeId) -> Option<usize> {
        self.choices.get(node.0).copied().flatten()
    }

    pub fn set(&mut self, node: NodeId, action: usize) {
        self.choices[node.0] = Some(action);
    }

    /// `(node, action)` pairs in node order.
    pub fn assignments(&self) -> impl Iterator<Item = (NodeId, usize)> + '_ {
        self.choices
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|a| (NodeId(i), a)))
    }

    /// Degenerate behavior profile with mass 1 on each chosen action.
    pub fn to_behavior(&self, tree: &GameTree) -> BehaviorProfile {
        let mut profile = BehaviorProfile::new();
        for (node, a) in self.assignments() {
            profile.set(
                node,
                vec![(tree.actions(node)[a].label.clone(), Rational::one())],
            );
        }
        profile
    }

    /// `id=label` pairs joined by commas.
    pub fn describe(&self, tree: &GameTree) -> String {
        self.assignments()
            .map(|(n, a)| format!("{}={}", tree.id(n), tree.actions(n)[a].label))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl Strategy for PureProfile {
    fn pure_choice(&self, _tree: &GameTree, node: NodeId) -> Option<usize> {
        self.choice(node)
    }

    fn weights(&self, _tree: &GameTree, node: NodeId) -> Vec<(usize, Rational)> {
        self.choice(node)
            .map(|a| vec![(a, Rational::one())])
            .unwrap_or_default()
    }
}

/// A distribution over action labels at every decision node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BehaviorProfile {
    assignment: BTreeMap<NodeId, Vec<(String, Rational)>>,
}

impl BehaviorProfile {
    pub fn new() -> Self {
        Self::default()
    }

    /// Equal weight on every available action at every decision node.
    pub fn uniform(tree: &GameTree) -> Self {
        let mut profile = Self::new();
        for &n in tree.decision_nodes() {
            let actions = tree.actions(n);
            let w = Rational::new(1.into(), actions.len().into());
            profile.set(
                n,
                actions
                    .iter()
                    .map(|a| (a.label.clone(), w.clone()))
                    .collect(),
            );
        }
        profile
    }

    pub fn set(&mut self, node: NodeId, distribution: Vec<(String, Rational)>) {
        self.assignment.insert(node, distribution);
    }

    pub fn get(&self, node: NodeId) -> Option<&[(String, Rational)]> {
        self.assignment.get(&node).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &[(String, Rational)])> {
        self.assignment.iter().map(|(n, d)| (*n, d.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// The pure profile this equals, if every distribution is a point mass.
    pub fn as_pure(&self, tree: &GameTree) -> Option<PureProfile> {
        let mut pure = PureProfile::first_actions(tree);
        for &n in tree.decision_nodes() {
            pure.set(n, self.pure_choice(tree, n)?);
        }
        Some(pure)
    }
}

impl Strategy for BehaviorProfile {
    fn pure_choice(&self, tree: &GameTree, node: NodeId) -> Option<usize> {
        let mut positive = self.get(node)?.iter().filter(|(_, p)| p.is_positive());
        let (label, p) = positive.next()?;
        if positive.next().is_some() || !p.is_one() {
            return None;
        }
        tree.action_index(node, label)
    }

    fn weights(&self, tree: &GameTree, node: NodeId) -> Vec<(usize, Rational)> {
        let mut out: Vec<(usize, Rational)> = self
            .get(node)
            .unwrap_or_default()
            .iter()
            .filter(|(_, p)| p.is_positive())
            .filter_map(|(label, p)| tree.action_index(node, label).map(|a| (a, p.clone())))
            .collect();
        out.sort_by_key(|(a, _)| *a);
        out
    }
}

/// Checks that `profile` is a complete, well-formed behavior profile for `tree`.
pub fn validate_profile(tree: &GameTree, profile: &BehaviorProfile) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (node, _) in profile.iter() {
        if node.0 >= tree.len() || !matches!(tree.node(node), Node::Decision { .. }) {
            report.push(tree, node, IssueKind::NotDecision);
        }
    }
    for &node in tree.decision_nodes() {
        let Some(dist) = profile.get(node) else {
            report.push(tree, node, IssueKind::MissingDistribution);
            continue;
        };
        let mut seen = HashSet::new();
        let mut sum = Rational::zero();
        for (label, p) in dist {
            if !seen.insert(label.as_str()) {
                report.push(tree, node, IssueKind::RepeatedLabel(label.clone()));
            }
            if p.is_negative() {
                report.push(
                    tree,
                    node,
                    IssueKind::NegativeWeight(label.clone(), p.clone()),
                );
            }
            if p.is_positive() && tree.action_index(node, label).is_none() {
                report.push(tree, node, IssueKind::SupportOutside(label.clone()));
            }
            sum += p;
        }
        if !sum.is_one() {
            report.push(tree, node, IssueKind::DistributionSum(sum));
        }
    }
    report
}

/// Probability of reaching each terminal from some start node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PathDistribution {
    pub atoms: BTreeMap<NodeId, Rational>,
}

impl PathDistribution {
    pub fn probability(&self, terminal: NodeId) -> Rational {
        self.atoms
            .get(&terminal)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.atoms.values().fold(Rational::zero(), |acc, p| acc + p)
    }
}

/// Distribution over terminals reached from `start` under `profile`.
/// Zero-probability terminals get no atom.
pub fn induced_path<S: Strategy + ?Sized>(
    tree: &GameTree,
    profile: &S,
    start: NodeId,
) -> PathDistribution {
    let mut dist = PathDistribution::default();
    let mut stack = vec![(start, Rational::one())];
    while let Some((node, mass)) = stack.pop() {
        match tree.node(node) {
            Node::Terminal { .. } => {
                *dist.atoms.entry(node).or_insert_with(Rational::zero) += mass;
            }
            Node::Chance { outcomes } => {
                for o in outcomes.iter().filter(|o| o.probability.is_positive()) {
                    stack.push((o.child, &mass * &o.probability));
                }
            }
            Node::Decision { actions, .. } => match profile.pure_choice(tree, node) {
                Some(a) => stack.push((actions[a].child, mass)),
                None => {
                    for (a, w) in profile.weights(tree, node) {
                        stack.push((actions[a].child, &mass * &w));
                    }
                }
            },
        }
    }
    dist
}

/// Expected terminal payoffs from `start`, weighted by the induced path.
pub fn expected_payoffs<S: Strategy + ?Sized>(
    tree: &GameTree,
    profile: &S,
    start: NodeId,
) -> Payoffs {
    let mut total = Payoffs::zeros(tree.players());
    for (terminal, p) in induced_path(tree, profile, start).atoms {
        if let Node::Terminal { payoffs } = tree.node(terminal) {
            total.add_scaled(&p, payoffs);
        }
    }
    total
}

/// Number of selections of `profile`: the product of its support sizes.
pub fn selection_count<S: Strategy + ?Sized>(tree: &GameTree, profile: &S) -> BigUint {
    tree.decision_nodes()
        .iter()
        .map(|&n| BigUint::from(profile.support(tree, n).len()))
        .product()
}

/// Lazily enumerates every pure profile choosing from `profile`'s support at
/// each decision node. Order is lexicographic by (node order, action order),
/// so the last decision node varies fastest.
///
/// Without a `limit`, spaces larger than `limits.max_selections` are refused.
pub fn enumerate_selections<S: Strategy + ?Sized>(
    tree: &GameTree,
    profile: &S,
    limit: Option<u64>,
    limits: &Limits,
) -> Result<Selections, CapError> {
    let count = selection_count(tree, profile);
    if limit.is_none() && exceeds(&count, limits.max_selections) {
        return Err(CapError::new("selection", count, limits.max_selections));
    }
    let supports: Vec<(NodeId, Vec<usize>)> = tree
        .decision_nodes()
        .iter()
        .map(|&n| (n, profile.support(tree, n)))
        .collect();
    let mut current = PureProfile::first_actions(tree);
    let empty = supports.iter().any(|(_, s)| s.is_empty());
    if !empty {
        for (n, s) in &supports {
            current.set(*n, s[0]);
        }
    }
    Ok(Selections {
        digits: vec![0; supports.len()],
        supports,
        current,
        done: empty || limit == Some(0),
        remaining: limit,
        count,
    })
}

/// Cursor over selections; see [`enumerate_selections`].
#[derive(Debug, Clone)]
pub struct Selections {
    supports: Vec<(NodeId, Vec<usize>)>,
    digits: Vec<usize>,
    current: PureProfile,
    done: bool,
    remaining: Option<u64>,
    count: BigUint,
}

impl Selections {
    /// Total number of selections, ignoring any limit.
    pub fn count(&self) -> &BigUint {
        &self.count
    }

    fn advance(&mut self) {
        for pos in (0..self.digits.len()).rev() {
            let (node, support) = &self.supports[pos];
            self.digits[pos] += 1;
            if self.digits[pos] < support.len() {
                self.current.set(*node, support[self.digits[pos]]);
                return;
            }
            self.digits[pos] = 0;
            self.current.set(*node, support[0]);
        }
        self.done = true;
    }
}

impl Iterator for Selections {
    type Item = PureProfile;

    fn next(&mut self) -> Option<PureProfile> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        if let Some(r) = self.remaining.as_mut() {
            *r -= 1;
            if *r == 0 {
                self.done = true;
                return Some(out);
            }
        }
        self.advance();
        Some(out)
    }
}

/// The choices a pure profile makes along every branch of play that is
/// reached with positive or zero chance probability.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Play {
    pub choices: Vec<(NodeId, usize)>,
}

impl Play {
    pub fn choice(&self, node: NodeId) -> Option<usize> {
        self.choices
            .binary_search_by_key(&node, |(n, _)| *n)
            .ok()
            .map(|i| self.choices[i].1)
    }

    /// Arrow-joined action labels; chance moves render as
    /// `{p: branch | p: branch}`.
    pub fn render(&self, tree: &GameTree) -> String {
        self.render_from(tree, tree.root())
    }

    fn render_from(&self, tree: &GameTree, node: NodeId) -> String {
        match tree.node(node) {
            Node::Terminal { .. } => String::new(),
            Node::Decision { actions, .. } => {
                let a = self.choice(node).expect("play covers reached nodes");
                let rest = self.render_from(tree, actions[a].child);
                if rest.is_empty() {
                    actions[a].label.clone()
                } else {
                    format!("{} -> {rest}", actions[a].label)
                }
            }
            Node::Chance { outcomes } => {
                let branches: Vec<String> = outcomes
                    .iter()
                    .map(|o| {
                        let rest = self.render_from(tree, o.child);
                        let rest = if rest.is_empty() {
                            "end".to_string()
                        } else {
                            rest
                        };
                        format!("{}: {rest}", format_rational(&o.probability))
                    })
                    .collect();
                format!("{{{}}}", branches.join(" | "))
            }
        }
    }

    /// Labels in order of play; `None` if play passes a chance node.
    pub fn labels(&self, tree: &GameTree) -> Option<Vec<String>> {
        let mut out = Vec::new();
        let mut node = tree.root();
        loop {
            match tree.node(node) {
                Node::Terminal { .. } => return Some(out),
                Node::Chance { .. } => return None,
                Node::Decision { actions, .. } => {
                    let a = self.choice(node)?;
                    out.push(actions[a].label.clone());
                    node = actions[a].child;
                }
            }
        }
    }
}

/// Every play reachable by some selection of `profile`, without regard to
/// optimality. With chance nodes a play fixes one choice per reached
/// decision node on every chance branch.
pub fn selection_plays<S: Strategy + ?Sized>(tree: &GameTree, profile: &S) -> BTreeSet<Play> {
    let mut sets: Vec<BTreeSet<Vec<(NodeId, usize)>>> = vec![BTreeSet::new(); tree.len()];
    for node in tree.postorder() {
        sets[node.0] = match tree.node(node) {
            Node::Terminal { .. } => BTreeSet::from([Vec::new()]),
            Node::Decision { actions, .. } => {
                let mut out = BTreeSet::new();
                for a in profile.support(tree, node) {
                    for rest in &sets[actions[a].child.0] {
                        let mut p = rest.clone();
                        p.push((node, a));
                        p.sort_unstable();
                        out.insert(p);
                    }
                }
                out
            }
            Node::Chance { outcomes } => {
                let mut acc = BTreeSet::from([Vec::new()]);
                for o in outcomes {
                    let mut next = BTreeSet::new();
                    for x in &acc {
                        for y in &sets[o.child.0] {
                            let mut z: Vec<(NodeId, usize)> = x.clone();
                            z.extend_from_slice(y);
                            z.sort_unstable();
                            next.insert(z);
                        }
                    }
                    acc = next;
                }
                acc
            }
        };
    }
    std::mem::take(&mut sets[tree.root().0])
        .into_iter()
        .map(|choices| Play { choices })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameBuilder;
    use crate::rational::{int, ratio};

    fn stacked() -> GameTree {
        let mut g = GameBuilder::new(2);
        g.decision("a", 1, [("L", "b"), ("R", "c")]).unwrap();
        g.decision("b", 2, [("l", "t1"), ("r", "t2")]).unwrap();
        g.decision("c", 2, [("l", "t3"), ("m", "t4"), ("r", "t5")])
            .unwrap();
        for (i, p) in [[1, 0], [2, 0], [3, 0], [4, 0], [5, 0]].iter().enumerate() {
            g.terminal(&format!("t{}", i + 1), Payoffs::from_ints(p))
                .unwrap();
        }
        g.root("a");
        g.build().unwrap()
    }

    fn dist(pairs: &[(&str, Rational)]) -> Vec<(String, Rational)> {
        pairs
            .iter()
            .map(|(l, p)| (l.to_string(), p.clone()))
            .collect()
    }

    #[test]
    fn profile_validation_issues() {
        let tree = stacked();
        let mut f = BehaviorProfile::uniform(&tree);
        assert!(validate_profile(&tree, &f).ok());

        f.set(NodeId(1), dist(&[("l", ratio(2, 3)), ("r", ratio(2, 3))]));
        let report = validate_profile(&tree, &f);
        assert_eq!(report.issues.len(), 1);
        assert_eq!(
            report.issues[0].kind.to_string(),
            "distribution sums to 4/3"
        );

        f.set(NodeId(1), dist(&[("l", ratio(1, 2)), ("x", ratio(1, 2))]));
        let report = validate_profile(&tree, &f);
        assert_eq!(
            report.issues[0].kind.to_string(),
            "support outside available actions: `x`"
        );
    }

    #[test]
    fn uniform_stacked_binary_paths() {
        let mut g = GameBuilder::new(1);
        g.decision("a", 1, [("L", "b"), ("R", "c")]).unwrap();
        g.decision("b", 1, [("L", "t1"), ("R", "t2")]).unwrap();
        g.decision("c", 1, [("L", "t3"), ("R", "t4")]).unwrap();
        for i in 1..=4 {
            g.terminal(&format!("t{i}"), Payoffs::from_ints(&[i]))
                .unwrap();
        }
        g.root("a");
        let tree = g.build().unwrap();
        let path = induced_path(&tree, &BehaviorProfile::uniform(&tree), tree.root());
        assert_eq!(path.atoms.len(), 4);
        assert!(path.atoms.values().all(|p| *p == ratio(1, 4)));
        assert_eq!(
            expected_payoffs(&tree, &BehaviorProfile::uniform(&tree), tree.root()),
            Payoffs(vec![ratio(5, 2)])
        );
    }

    #[test]
    fn pure_chain_is_point_mass() {
        let tree = stacked();
        let g = PureProfile::from_labels(&tree, &[("a", "R"), ("b", "l"), ("c", "m")]).unwrap();
        let path = induced_path(&tree, &g, tree.root());
        assert_eq!(path.atoms.len(), 1);
        assert_eq!(path.probability(tree.find("t4").unwrap()), int(1));
        let t3 = tree.find("t3").unwrap();
        assert_eq!(expected_payoffs(&tree, &g, t3), Payoffs::from_ints(&[3, 0]));
    }

    #[test]
    fn chance_marginal() {
        let mut g = GameBuilder::new(1);
        g.chance("c", [(ratio(1, 3), "t1"), (ratio(2, 3), "t2")])
            .unwrap();
        g.terminal("t1", Payoffs::from_ints(&[3])).unwrap();
        g.terminal("t2", Payoffs::from_ints(&[0])).unwrap();
        g.root("c");
        let tree = g.build().unwrap();
        let path = induced_path(&tree, &BehaviorProfile::new(), tree.root());
        assert_eq!(path.probability(NodeId(1)), ratio(1, 3));
        assert_eq!(path.probability(NodeId(2)), ratio(2, 3));
    }

    #[test]
    fn selections_product_and_order() {
        let tree = stacked();
        let f = BehaviorProfile::uniform(&tree);
        let all: Vec<_> = enumerate_selections(&tree, &f, None, &Limits::default())
            .unwrap()
            .collect();
        // root contributes 2, node b 2, node c 3
        assert_eq!(all.len(), 12);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        sorted.dedup();
        assert_eq!(sorted.len(), 12);
        assert_eq!(all[1].describe(&tree), "a=L, b=l, c=m");

        let limited: Vec<_> = enumerate_selections(
            &tree,
            &f,
            Some(5),
            &Limits::default().with_max_selections(1),
        )
        .unwrap()
        .collect();
        assert_eq!(limited.len(), 5);
        let err = enumerate_selections(&tree, &f, None, &Limits::default().with_max_selections(11))
            .unwrap_err();
        assert_eq!(err.count, BigUint::from(12u32));
    }

    #[test]
    fn pure_profile_has_one_selection() {
        let tree = stacked();
        let g = PureProfile::from_labels(&tree, &[("a", "R"), ("b", "r"), ("c", "l")]).unwrap();
        let all: Vec<_> =
            enumerate_selections(&tree, &g.to_behavior(&tree), None, &Limits::default())
                .unwrap()
                .collect();
        assert_eq!(all, vec![g.clone()]);
        assert_eq!(g.to_behavior(&tree).as_pure(&tree), Some(g));
    }

    #[test]
    fn zero_weight_actions_leave_the_support() {
        let tree = stacked();
        let mut f = BehaviorProfile::uniform(&tree);
        f.set(
            NodeId(2),
            dist(&[("l", int(0)), ("m", ratio(1, 2)), ("r", ratio(1, 2))]),
        );
        assert_eq!(f.support(&tree, NodeId(2)), vec![1, 2]);
        assert_eq!(selection_count(&tree, &f), BigUint::from(8u32));
    }
}
