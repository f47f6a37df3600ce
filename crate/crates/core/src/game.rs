//! Finite extensive-form games with perfect information and chance moves.
//!
//! A [`GameTree`] is an immutable arena of nodes addressed by [`NodeId`]. Node
//! order is the order in which nodes were declared, and every enumeration in
//! the crate walks decision nodes in that order.

use crate::rational::{format_rational, Payoffs, Rational};
use crate::verdict::{Verdict, Witness};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

/// Default bound on root-to-leaf depth accepted by validation.
pub const DEFAULT_DEPTH_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    Nature,
    /// Active player, numbered from 1.
    Active(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub label: String,
    pub child: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub probability: Rational,
    pub child: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Decision { owner: usize, actions: Vec<Action> },
    Chance { outcomes: Vec<Outcome> },
    Terminal { payoffs: Payoffs },
}

impl Node {
    pub fn mover(&self) -> Option<Player> {
        match self {
            Node::Decision { owner, .. } => Some(Player::Active(*owner)),
            Node::Chance { .. } => Some(Player::Nature),
            Node::Terminal { .. } => None,
        }
    }

    pub fn children(&self) -> Vec<NodeId> {
        match self {
            Node::Decision { actions, .. } => actions.iter().map(|a| a.child).collect(),
            Node::Chance { outcomes } => outcomes.iter().map(|o| o.child).collect(),
            Node::Terminal { .. } => Vec::new(),
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, Node::Terminal { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("duplicate node id `{0}`")]
    DuplicateId(String),
    #[error("unknown node reference `{0}`")]
    UnknownNode(String),
    #[error("no root declared")]
    MissingRoot,
    #[error("invalid game: {0}")]
    Invalid(ValidationReport),
}

/// An immutable, validated (unless built with `new_unchecked`) game tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameTree {
    name: Option<String>,
    players: usize,
    ids: Vec<String>,
    nodes: Vec<Node>,
    root: NodeId,
    index: HashMap<String, NodeId>,
    parents: Vec<Option<NodeId>>,
    decisions: Vec<NodeId>,
}

impl GameTree {
    /// Builds a tree and rejects it unless every structural invariant holds.
    pub fn new(
        name: Option<String>,
        players: usize,
        ids: Vec<String>,
        nodes: Vec<Node>,
        root: NodeId,
    ) -> Result<Self, GameError> {
        Self::with_depth_cap(name, players, ids, nodes, root, DEFAULT_DEPTH_CAP)
    }

    pub fn with_depth_cap(
        name: Option<String>,
        players: usize,
        ids: Vec<String>,
        nodes: Vec<Node>,
        root: NodeId,
        depth_cap: usize,
    ) -> Result<Self, GameError> {
        let tree = Self::new_unchecked(name, players, ids, nodes, root);
        let report = tree.validate_with(depth_cap);
        if report.ok() {
            Ok(tree)
        } else {
            Err(GameError::Invalid(report))
        }
    }

    /// Assembles a tree without checking invariants. Every analysis in this
    /// crate assumes a valid tree; use [`GameTree::validate`] before relying
    /// on one built this way.
    pub fn new_unchecked(
        name: Option<String>,
        players: usize,
        ids: Vec<String>,
        nodes: Vec<Node>,
        root: NodeId,
    ) -> Self {
        assert_eq!(ids.len(), nodes.len(), "one id per node");
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), NodeId(i)))
            .collect();
        let mut parents = vec![None; nodes.len()];
        for (i, node) in nodes.iter().enumerate() {
            for child in node.children() {
                if let Some(slot) = parents.get_mut(child.0) {
                    slot.get_or_insert(NodeId(i));
                }
            }
        }
        let decisions = nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n, Node::Decision { .. }))
            .map(|(i, _)| NodeId(i))
            .collect();
        GameTree {
            name,
            players,
            ids,
            nodes,
            root,
            index,
            parents,
            decisions,
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i), n))
    }

    /// Textual id of a node.
    pub fn id(&self, node: NodeId) -> &str {
        &self.ids[node.0]
    }

    pub fn find(&self, id: &str) -> Option<NodeId> {
        self.index.get(id).copied()
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        self.parents[node.0]
    }

    /// Decision nodes in declaration order.
    pub fn decision_nodes(&self) -> &[NodeId] {
        &self.decisions
    }

    pub fn terminals(&self) -> impl Iterator<Item = (NodeId, &Payoffs)> {
        self.nodes().filter_map(|(id, n)| match n {
            Node::Terminal { payoffs } => Some((id, payoffs)),
            _ => None,
        })
    }

    pub fn owner(&self, node: NodeId) -> Option<usize> {
        match self.node(node) {
            Node::Decision { owner, .. } => Some(*owner),
            _ => None,
        }
    }

    /// Available actions at a decision node; empty for other kinds.
    pub fn actions(&self, node: NodeId) -> &[Action] {
        match self.node(node) {
            Node::Decision { actions, .. } => actions,
            _ => &[],
        }
    }

    pub fn action_index(&self, node: NodeId, label: &str) -> Option<usize> {
        self.actions(node).iter().position(|a| a.label == label)
    }

    pub fn has_chance(&self) -> bool {
        self.nodes.iter().any(|n| matches!(n, Node::Chance { .. }))
    }

    /// Nodes of the subtree rooted at `node`, in preorder.
    pub fn subtree(&self, node: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(n) = stack.pop() {
            out.push(n);
            let children = self.node(n).children();
            stack.extend(children.into_iter().rev());
        }
        out
    }

    /// Every node reachable from the root, children before parents.
    pub fn postorder(&self) -> Vec<NodeId> {
        let mut order = self.subtree(self.root);
        order.reverse();
        order
    }

    /// Number of edges from the root to `node`.
    pub fn depth_of(&self, node: NodeId) -> usize {
        let mut depth = 0;
        let mut cur = node;
        while let Some(p) = self.parent(cur) {
            depth += 1;
            cur = p;
        }
        depth
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(DEFAULT_DEPTH_CAP)
    }

    pub fn validate_with(&self, depth_cap: usize) -> ValidationReport {
        validate_tree(self, depth_cap)
    }

    /// Label of node `node` for diagnostics; falls back to `#index` for ids out of range.
    pub(crate) fn describe(&self, node: NodeId) -> String {
        self.ids
            .get(node.0)
            .cloned()
            .unwrap_or_else(|| format!("#{}", node.0))
    }
}

/// Incremental construction by textual ids; references are resolved at `build`.
#[derive(Debug, Default, Clone)]
pub struct GameBuilder {
    name: Option<String>,
    players: usize,
    ids: Vec<String>,
    seen: HashSet<String>,
    pending: Vec<PendingNode>,
    root: Option<String>,
}

#[derive(Debug, Clone)]
enum PendingNode {
    Decision {
        owner: usize,
        actions: Vec<(String, String)>,
    },
    Chance {
        outcomes: Vec<(Rational, String)>,
    },
    Terminal {
        payoffs: Payoffs,
    },
}

impl GameBuilder {
    pub fn new(players: usize) -> Self {
        GameBuilder {
            players,
            ..Default::default()
        }
    }

    pub fn name(&mut self, name: impl Into<String>) -> &mut Self {
        self.name = Some(name.into());
        self
    }

    fn push(&mut self, id: &str, node: PendingNode) -> Result<&mut Self, GameError> {
        if !self.seen.insert(id.to_string()) {
            return Err(GameError::DuplicateId(id.to_string()));
        }
        self.ids.push(id.to_string());
        self.pending.push(node);
        Ok(self)
    }

    pub fn decision<L: Into<String>, C: Into<String>>(
        &mut self,
        id: &str,
        owner: usize,
        actions: impl IntoIterator<Item = (L, C)>,
    ) -> Result<&mut Self, GameError> {
        let actions = actions
            .into_iter()
            .map(|(l, c)| (l.into(), c.into()))
            .collect();
        self.push(id, PendingNode::Decision { owner, actions })
    }

    pub fn chance<C: Into<String>>(
        &mut self,
        id: &str,
        outcomes: impl IntoIterator<Item = (Rational, C)>,
    ) -> Result<&mut Self, GameError> {
        let outcomes = outcomes.into_iter().map(|(p, c)| (p, c.into())).collect();
        self.push(id, PendingNode::Chance { outcomes })
    }

    pub fn terminal(&mut self, id: &str, payoffs: Payoffs) -> Result<&mut Self, GameError> {
        self.push(id, PendingNode::Terminal { payoffs })
    }

    pub fn root(&mut self, id: &str) -> &mut Self {
        self.root = Some(id.to_string());
        self
    }

    pub fn build(&self) -> Result<GameTree, GameError> {
        let tree = self.build_unchecked()?;
        let report = tree.validate();
        if report.ok() {
            Ok(tree)
        } else {
            Err(GameError::Invalid(report))
        }
    }

    /// Resolves ids but skips structural validation.
    pub fn build_unchecked(&self) -> Result<GameTree, GameError> {
        let index: HashMap<&str, NodeId> = self
            .ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), NodeId(i)))
            .collect();
        let resolve = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| GameError::UnknownNode(id.to_string()))
        };
        let mut nodes = Vec::with_capacity(self.pending.len());
        for pending in &self.pending {
            nodes.push(match pending {
                PendingNode::Decision { owner, actions } => Node::Decision {
                    owner: *owner,
                    actions: actions
                        .iter()
                        .map(|(label, child)| {
                            Ok(Action {
                                label: label.clone(),
                                child: resolve(child)?,
                            })
                        })
                        .collect::<Result<_, GameError>>()?,
                },
                PendingNode::Chance { outcomes } => Node::Chance {
                    outcomes: outcomes
                        .iter()
                        .map(|(p, child)| {
                            Ok(Outcome {
                                probability: p.clone(),
                                child: resolve(child)?,
                            })
                        })
                        .collect::<Result<_, GameError>>()?,
                },
                PendingNode::Terminal { payoffs } => Node::Terminal {
                    payoffs: payoffs.clone(),
                },
            });
        }
        let root = resolve(self.root.as_deref().ok_or(GameError::MissingRoot)?)?;
        Ok(GameTree::new_unchecked(
            self.name.clone(),
            self.players,
            self.ids.clone(),
            nodes,
            root,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IssueKind {
    NoPlayers,
    RootOutOfRange,
    UnknownChild(usize),
    MultipleParents,
    RootHasParent,
    Unreachable,
    NoActions,
    DuplicateLabel(String),
    OwnerOutOfRange(usize),
    NoOutcomes,
    NegativeProbability(Rational),
    ProbabilitySum(Rational),
    PayoffArity { expected: usize, found: usize },
    TooDeep { cap: usize },
    NotDecision,
    MissingDistribution,
    RepeatedLabel(String),
    NegativeWeight(String, Rational),
    SupportOutside(String),
    DistributionSum(Rational),
}

impl fmt::Display for IssueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IssueKind::NoPlayers => write!(f, "game declares no active players"),
            IssueKind::RootOutOfRange => write!(f, "root does not name a node"),
            IssueKind::UnknownChild(i) => write!(f, "unknown node reference #{i}"),
            IssueKind::MultipleParents => write!(f, "node has more than one parent"),
            IssueKind::RootHasParent => write!(f, "root has a parent (cycle)"),
            IssueKind::Unreachable => write!(f, "node is not reachable from the root"),
            IssueKind::NoActions => write!(f, "decision node with no available actions"),
            IssueKind::DuplicateLabel(l) => write!(f, "duplicate action label at node: `{l}`"),
            IssueKind::OwnerOutOfRange(o) => write!(f, "owner {o} is not an active player"),
            IssueKind::NoOutcomes => write!(f, "chance node with no outcomes"),
            IssueKind::NegativeProbability(p) => {
                write!(f, "negative chance probability {}", format_rational(p))
            }
            IssueKind::ProbabilitySum(s) => {
                write!(
                    f,
                    "chance probabilities sum to {}, expected 1",
                    format_rational(s)
                )
            }
            IssueKind::PayoffArity { expected, found } => {
                write!(f, "payoff vector has {found} entries, expected {expected}")
            }
            IssueKind::TooDeep { cap } => write!(f, "depth exceeds the cap of {cap}"),
            IssueKind::NotDecision => {
                write!(f, "profile assigns a node that is not a decision node")
            }
            IssueKind::MissingDistribution => write!(f, "decision node has no distribution"),
            IssueKind::RepeatedLabel(l) => write!(f, "action `{l}` listed twice"),
            IssueKind::NegativeWeight(l, p) => {
                write!(f, "negative probability {} on `{l}`", format_rational(p))
            }
            IssueKind::SupportOutside(l) => {
                write!(f, "support outside available actions: `{l}`")
            }
            IssueKind::DistributionSum(s) => {
                write!(f, "distribution sums to {}", format_rational(s))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub node: NodeId,
    /// Textual id of the node (or `#index` when the id itself is invalid).
    pub node_id: String,
    pub kind: IssueKind,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {}: {}", self.node_id, self.kind)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.issues.is_empty()
    }

    pub(crate) fn push(&mut self, tree: &GameTree, node: NodeId, kind: IssueKind) {
        self.issues.push(Issue {
            node,
            node_id: tree.describe(node),
            kind,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

/// Checks every structural invariant; one issue per violation.
pub fn validate_game(tree: &GameTree) -> ValidationReport {
    tree.validate()
}

fn validate_tree(tree: &GameTree, depth_cap: usize) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = tree.nodes.len();
    if tree.players == 0 {
        report.push(tree, tree.root, IssueKind::NoPlayers);
    }
    if tree.root.0 >= n {
        report.push(tree, tree.root, IssueKind::RootOutOfRange);
        return report;
    }

    let mut parent_count = vec![0usize; n];
    for (id, node) in tree.nodes() {
        for child in node.children() {
            if child.0 >= n {
                report.push(tree, id, IssueKind::UnknownChild(child.0));
            } else {
                parent_count[child.0] += 1;
            }
        }
        match node {
            Node::Decision { owner, actions } => {
                if actions.is_empty() {
                    report.push(tree, id, IssueKind::NoActions);
                }
                if *owner == 0 || *owner > tree.players {
                    report.push(tree, id, IssueKind::OwnerOutOfRange(*owner));
                }
                let mut labels = HashSet::new();
                for a in actions {
                    if !labels.insert(a.label.as_str()) {
                        report.push(tree, id, IssueKind::DuplicateLabel(a.label.clone()));
                    }
                }
            }
            Node::Chance { outcomes } => {
                if outcomes.is_empty() {
                    report.push(tree, id, IssueKind::NoOutcomes);
                }
                for o in outcomes {
                    if o.probability.is_negative() {
                        report.push(
                            tree,
                            id,
                            IssueKind::NegativeProbability(o.probability.clone()),
                        );
                    }
                }
                let sum = outcomes
                    .iter()
                    .fold(Rational::zero(), |acc, o| acc + &o.probability);
                if !outcomes.is_empty() && !sum.is_one() {
                    report.push(tree, id, IssueKind::ProbabilitySum(sum));
                }
            }
            Node::Terminal { payoffs } => {
                if payoffs.len() != tree.players {
                    report.push(
                        tree,
                        id,
                        IssueKind::PayoffArity {
                            expected: tree.players,
                            found: payoffs.len(),
                        },
                    );
                }
            }
        }
    }

    for (i, &count) in parent_count.iter().enumerate() {
        let id = NodeId(i);
        if id == tree.root {
            if count > 0 {
                report.push(tree, id, IssueKind::RootHasParent);
            }
        } else if count > 1 {
            report.push(tree, id, IssueKind::MultipleParents);
        }
    }

    // Reachability and depth, guarded against cycles.
    let mut depth = vec![usize::MAX; n];
    let mut queue = VecDeque::from([tree.root]);
    depth[tree.root.0] = 0;
    let mut too_deep = false;
    while let Some(cur) = queue.pop_front() {
        for child in tree.node(cur).children() {
            if child.0 >= n || depth[child.0] != usize::MAX {
                continue;
            }
            depth[child.0] = depth[cur.0] + 1;
            if depth[child.0] > depth_cap && !too_deep {
                too_deep = true;
                report.push(tree, child, IssueKind::TooDeep { cap: depth_cap });
            }
            queue.push_back(child);
        }
    }
    for (i, d) in depth.iter().enumerate() {
        if *d == usize::MAX {
            report.push(tree, NodeId(i), IssueKind::Unreachable);
        }
    }
    report
}

/// The common sum of all terminal payoff vectors, if there is one.
/// A result of zero means the game is zero-sum.
pub fn fixed_sum_constant(tree: &GameTree) -> Option<Rational> {
    let mut sums = tree.terminals().map(|(_, p)| p.sum());
    let first = sums.next()?;
    sums.all(|s| s == first).then_some(first)
}

/// No-indifference: whenever two terminal outcomes tie for some player, they
/// tie for every player.
pub fn check_no_indifference(tree: &GameTree) -> Verdict {
    // Identical vectors never violate the condition; compare distinct ones.
    let mut distinct: BTreeMap<&Payoffs, NodeId> = BTreeMap::new();
    for (id, payoffs) in tree.terminals() {
        distinct.entry(payoffs).or_insert(id);
    }
    let mut reps: Vec<(NodeId, &Payoffs)> = distinct.into_iter().map(|(p, id)| (id, p)).collect();
    reps.sort_by_key(|(id, _)| *id);
    for (i, (a, pa)) in reps.iter().enumerate() {
        for (b, pb) in &reps[i + 1..] {
            if let Some(tied) = (0..pa.len()).find(|&k| pa.0[k] == pb.0[k]) {
                let differing = (0..pa.len())
                    .find(|&k| pa.0[k] != pb.0[k])
                    .expect("distinct vectors differ somewhere");
                return Verdict::fail(Witness::Indifference {
                    first: *a,
                    second: *b,
                    tied_player: tied + 1,
                    differing_player: differing + 1,
                });
            }
        }
    }
    Verdict::pass()
}
