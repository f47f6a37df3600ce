//! Small games used as negative controls for the no-mixing properties.
//!
//! Each game ships with a distinguished mixed profile and a list of
//! assertions; [`certify`] re-checks every assertion with the verifier.
//!
//! * `G1`: three players move once each in turn on a binary tree. The
//!   all-uniform profile is an SPE worth 3/2 to player 1, while every pure SPE
//!   gives player 1 at most 1.
//! * `G2`: two players alternate over four stages. An argmax-mixing SPE has
//!   stage values (-2, 4), (-2, 2), (3/2, 2) at stages 4, 3, 2, and none of
//!   its selections is an SPE.
//! * `G5`: three-player constant-sum chain with a mixed SPE none of whose
//!   selections is an SPE.
//! * `G6`: player 1 either stops with (6, 4) or lets player 2 choose between
//!   entering `G1` and a terminal. The only pure-SPE payoff is (6, 4), yet a
//!   mixed SPE sends play into the mixing branch.

use crate::game::{check_no_indifference, fixed_sum_constant, GameBuilder, GameTree, Node, NodeId};
use crate::limits::Limits;
use crate::rational::{int, ratio, Payoffs, Rational};
use crate::solver::continuation_values;
use crate::strategy::{expected_payoffs, BehaviorProfile};
use crate::verifier::{
    check_no_mixing, check_weak_no_mixing, enumerate_pure_spe_paths, is_spe_one_shot,
};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Example {
    G1,
    G2,
    G5,
    G6,
}

impl Example {
    pub const ALL: [Example; 4] = [Example::G1, Example::G2, Example::G5, Example::G6];

    pub fn name(self) -> &'static str {
        match self {
            Example::G1 => "G1",
            Example::G2 => "G2",
            Example::G5 => "G5",
            Example::G6 => "G6",
        }
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Example {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Example::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown example `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assertion {
    pub description: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificationReport {
    pub example: Example,
    pub assertions: Vec<Assertion>,
}

impl CertificationReport {
    pub fn all_passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

impl fmt::Display for CertificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "certification of {}", self.example)?;
        for a in &self.assertions {
            let mark = if a.passed { "ok" } else { "FAILED" };
            writeln!(f, "  [{mark}] {}: {}", a.description, a.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub tree: GameTree,
    /// The distinguished mixed profile of the example.
    pub profile: BehaviorProfile,
    pub report: CertificationReport,
}

pub fn reconstruct_example(example: Example) -> Reconstruction {
    let (tree, profile) = match example {
        Example::G1 => g1(),
        Example::G2 => g2(),
        Example::G5 => g5(),
        Example::G6 => g6(),
    };
    let report = certify(example, &tree, &profile);
    Reconstruction {
        tree,
        profile,
        report,
    }
}

const G1_LEAVES: [(&str, [i64; 3]); 8] = [
    ("LLL", [9, 0, 0]),
    ("LLR", [-1, 2, 0]),
    ("LRL", [-1, 1, 0]),
    ("LRR", [-1, 1, 0]),
    ("RLL", [1, 2, 0]),
    ("RLR", [1, 2, 0]),
    ("RRL", [0, 4, 0]),
    ("RRR", [4, 0, 0]),
];

/// Adds G1 under ids `{prefix}n`, `{prefix}nL`, ... and returns the root id.
fn add_g1(g: &mut GameBuilder, prefix: &str) -> String {
    let ok = "G1 ids are unique";
    for history in ["", "L", "R", "LL", "LR", "RL", "RR"] {
        let id = format!("{prefix}n{history}");
        let owner = history.len() + 1;
        let child = |a: &str| {
            if history.len() == 2 {
                format!("{prefix}t{history}{a}")
            } else {
                format!("{prefix}n{history}{a}")
            }
        };
        g.decision(&id, owner, [("L", child("L")), ("R", child("R"))])
            .expect(ok);
    }
    for (leaf, p) in G1_LEAVES {
        g.terminal(&format!("{prefix}t{leaf}"), Payoffs::from_ints(&p))
            .expect(ok);
    }
    format!("{prefix}n")
}

fn mix(labels: &[&str], weights: &[Rational]) -> Vec<(String, Rational)> {
    labels
        .iter()
        .map(|l| l.to_string())
        .zip(weights.iter().cloned())
        .collect()
}

fn half() -> [Rational; 2] {
    [ratio(1, 2), ratio(1, 2)]
}

fn set(profile: &mut BehaviorProfile, tree: &GameTree, id: &str, dist: Vec<(String, Rational)>) {
    profile.set(tree.find(id).expect("known id"), dist);
}

fn g1() -> (GameTree, BehaviorProfile) {
    let mut g = GameBuilder::new(3);
    g.name("G1");
    let root = add_g1(&mut g, "");
    g.root(&root);
    let tree = g.build().expect("G1 is well formed");
    let profile = BehaviorProfile::uniform(&tree);
    (tree, profile)
}

fn g2() -> (GameTree, BehaviorProfile) {
    let mut g = GameBuilder::new(2);
    g.name("G2");
    let ok = "G2 ids are unique";
    g.decision("n1", 1, [("L1", "n2"), ("R1", "z2")]).expect(ok);
    g.decision("n2", 2, [("L2", "n3"), ("R2", "y3")]).expect(ok);
    g.decision("n3", 1, [("L3", "t3"), ("R3", "n4")]).expect(ok);
    g.decision("n4", 2, [("L4", "t4L"), ("R4", "t4R")])
        .expect(ok);
    g.decision("y3", 1, [("L3", "ty3L"), ("R3", "ty3R")])
        .expect(ok);
    g.decision("z2", 2, [("L2", "tz2"), ("R2", "z3")])
        .expect(ok);
    g.decision("z3", 1, [("L3", "z4"), ("R3", "tz3")])
        .expect(ok);
    g.decision("z4", 2, [("L4", "tz4L"), ("R4", "tz4R")])
        .expect(ok);
    for (id, p) in [
        ("t3", [-2, 0]),
        ("t4L", [0, 4]),
        ("t4R", [-4, 4]),
        ("ty3L", [5, -4]),
        ("ty3R", [5, 8]),
        ("tz2", [0, -1]),
        ("tz3", [-3, 6]),
        ("tz4L", [-6, 4]),
        ("tz4R", [6, 4]),
    ] {
        g.terminal(id, Payoffs::from_ints(&p)).expect(ok);
    }
    g.root("n1");
    let tree = g.build().expect("G2 is well formed");
    let mut f = BehaviorProfile::new();
    set(&mut f, &tree, "n1", mix(&["L1"], &[int(1)]));
    set(&mut f, &tree, "n2", mix(&["L2", "R2"], &half()));
    set(&mut f, &tree, "n3", mix(&["L3", "R3"], &half()));
    set(&mut f, &tree, "n4", mix(&["L4", "R4"], &half()));
    set(&mut f, &tree, "y3", mix(&["L3", "R3"], &half()));
    set(&mut f, &tree, "z2", mix(&["R2"], &[int(1)]));
    set(&mut f, &tree, "z3", mix(&["L3"], &[int(1)]));
    set(&mut f, &tree, "z4", mix(&["L4", "R4"], &half()));
    (tree, f)
}

fn g5() -> (GameTree, BehaviorProfile) {
    let mut g = GameBuilder::new(3);
    g.name("G5");
    let ok = "G5 ids are unique";
    g.decision("n1", 1, [("L1", "n2"), ("R1", "t1")]).expect(ok);
    g.decision("n2", 2, [("L2", "n3"), ("R2", "t2")]).expect(ok);
    g.decision("n3", 3, [("L3", "t3L"), ("R3", "t3R")])
        .expect(ok);
    g.terminal("t1", Payoffs::from_ints(&[22, 9, 9])).expect(ok);
    g.terminal("t2", Payoffs::from_ints(&[21, 8, 11]))
        .expect(ok);
    g.terminal("t3L", Payoffs::from_ints(&[28, 4, 8]))
        .expect(ok);
    g.terminal("t3R", Payoffs::from_ints(&[20, 12, 8]))
        .expect(ok);
    g.root("n1");
    let tree = g.build().expect("G5 is well formed");
    let mut f = BehaviorProfile::new();
    set(&mut f, &tree, "n1", mix(&["L1"], &[int(1)]));
    set(&mut f, &tree, "n2", mix(&["L2", "R2"], &half()));
    set(&mut f, &tree, "n3", mix(&["L3", "R3"], &half()));
    (tree, f)
}

fn g6() -> (GameTree, BehaviorProfile) {
    let mut g = GameBuilder::new(3);
    g.name("G6");
    let ok = "G6 ids are unique";
    g.decision("n1", 1, [("L1", "stop"), ("R1", "m")])
        .expect(ok);
    g.terminal("stop", Payoffs::from_ints(&[6, 4, 0]))
        .expect(ok);
    g.decision("m", 2, [("L2", "g1_n"), ("R2", "out")])
        .expect(ok);
    g.terminal("out", Payoffs(vec![int(11), ratio(3, 2), int(0)]))
        .expect(ok);
    add_g1(&mut g, "g1_");
    g.root("n1");
    let tree = g.build().expect("G6 is well formed");
    let mut f = BehaviorProfile::uniform(&tree);
    set(&mut f, &tree, "n1", mix(&["R1"], &[int(1)]));
    set(&mut f, &tree, "m", mix(&["L2", "R2"], &half()));
    (tree, f)
}

struct Checks<'a> {
    tree: &'a GameTree,
    profile: &'a BehaviorProfile,
    limits: Limits,
    out: Vec<Assertion>,
}

impl Checks<'_> {
    fn push(&mut self, description: &str, passed: bool, detail: String) {
        self.out.push(Assertion {
            description: description.to_string(),
            passed,
            detail,
        });
    }

    fn node(&self, id: &str) -> Option<NodeId> {
        self.tree.find(id)
    }

    fn is_spe(&mut self) {
        let v = is_spe_one_shot(self.tree, self.profile);
        let detail = match &v.witness {
            None => "no profitable one-shot deviation".to_string(),
            Some(w) => w.describe(self.tree),
        };
        self.push("the distinguished profile is an SPE", v.outcome, detail);
    }

    fn no_spe_selection(&mut self) {
        let (passed, detail) = match check_weak_no_mixing(self.tree, self.profile, &self.limits) {
            Ok(r) => (
                !r.verdict.outcome,
                format!(
                    "{} selections checked, none is an SPE",
                    r.selections_checked
                ),
            ),
            Err(e) => (false, e.to_string()),
        };
        self.push("no selection of the profile is an SPE", passed, detail);
    }

    fn value(&mut self, description: &str, id: &str, expected: &[Rational]) {
        let found = self
            .node(id)
            .map(|n| continuation_values(self.tree, self.profile)[n].clone());
        let expected = Payoffs(expected.to_vec());
        let passed = found.as_ref() == Some(&expected);
        let detail = match found {
            Some(v) => format!("{v} at {id}, expected {expected}"),
            None => format!("node {id} missing"),
        };
        self.push(description, passed, detail);
    }

    fn pure_spe_payoffs(&mut self) -> Vec<Payoffs> {
        match enumerate_pure_spe_paths(self.tree, &self.limits) {
            Ok(p) => p.payoff_set().into_iter().collect(),
            Err(_) => Vec::new(),
        }
    }
}

/// Re-runs every assertion of `example` against `tree` and `profile`.
pub fn certify(
    example: Example,
    tree: &GameTree,
    profile: &BehaviorProfile,
) -> CertificationReport {
    let mut c = Checks {
        tree,
        profile,
        limits: Limits::default(),
        out: Vec::new(),
    };
    match example {
        Example::G1 => {
            let binary_movers = ["n", "nL", "nR", "nLL", "nLR", "nRL", "nRR"]
                .iter()
                .all(|id| {
                    c.node(id).is_some_and(|n| {
                        tree.actions(n).len() == 2 && tree.owner(n) == Some(id.len())
                    })
                })
                && tree.players() == 3;
            c.push(
                "three sequential binary movers",
                binary_movers,
                "players 1, 2, 3 move at depths 0, 1, 2".into(),
            );
            c.is_spe();
            let v = expected_payoffs(tree, profile, tree.root());
            c.push(
                "player 1 expects exactly 3/2 under the profile",
                tree.players() == 3 && *v.of(1) == ratio(3, 2),
                format!("root value {v}"),
            );
            let payoffs = c.pure_spe_payoffs();
            let worst = payoffs.iter().all(|p| *p.of(1) <= int(1));
            let listed: Vec<String> = payoffs.iter().map(|p| p.to_string()).collect();
            c.push(
                "every pure SPE gives player 1 at most 1",
                worst && !payoffs.is_empty(),
                format!("pure-SPE payoffs {}", listed.join(" ")),
            );
        }
        Example::G2 => {
            let chain = ["n1", "n2", "n3", "n4"];
            let alternating = chain
                .iter()
                .enumerate()
                .all(|(i, id)| c.node(id).and_then(|n| tree.owner(n)) == Some(i % 2 + 1))
                && chain
                    .windows(2)
                    .all(|w| match (c.node(w[0]), c.node(w[1])) {
                        (Some(a), Some(b)) => tree.parent(b) == Some(a),
                        _ => false,
                    });
            c.push(
                "four alternating stages",
                alternating,
                "n1..n4 owned by players 1, 2, 1, 2".into(),
            );
            c.value("stage 4 value is (-2, 4)", "n4", &[int(-2), int(4)]);
            c.value("stage 3 value is (-2, 2)", "n3", &[int(-2), int(2)]);
            c.value("stage 2 value is (3/2, 2)", "n2", &[ratio(3, 2), int(2)]);
            c.is_spe();
            c.no_spe_selection();
        }
        Example::G5 => {
            c.push(
                "three players",
                tree.players() == 3,
                format!("{} players", tree.players()),
            );
            let sum = fixed_sum_constant(tree);
            c.push(
                "constant-sum payoffs",
                sum.is_some(),
                format!(
                    "terminal sums {:?}",
                    sum.map(|s| crate::rational::format_rational(&s))
                ),
            );
            c.is_spe();
            c.no_spe_selection();
            let verdict = check_no_mixing(tree, profile, &c.limits);
            c.push(
                "no-mixing fails",
                matches!(&verdict, Ok(r) if !r.verdict.outcome),
                match &verdict {
                    Ok(r) => r
                        .verdict
                        .witness
                        .as_ref()
                        .map(|w| w.describe(tree))
                        .unwrap_or_default(),
                    Err(e) => e.to_string(),
                },
            );
            let indifference = check_no_indifference(tree);
            c.push(
                "the no-indifference condition fails",
                !indifference.outcome,
                indifference
                    .witness
                    .map(|w| w.describe(tree))
                    .unwrap_or_default(),
            );
        }
        Example::G6 => {
            let embeds = match (c.node("m"), c.node("g1_n")) {
                (Some(m), Some(sub)) => {
                    let (g1, _) = g1();
                    tree.actions(m).iter().any(|a| a.child == sub)
                        && same_shape(tree, sub, &g1, g1.root())
                }
                _ => false,
            };
            c.push(
                "one action of player 2 leads into G1",
                embeds,
                "L2 at m reaches a copy of G1".into(),
            );
            let payoffs = c.pure_spe_payoffs();
            let unique = payoffs.len() == 1
                && payoffs[0].iter().take(2).cloned().collect::<Vec<_>>() == vec![int(6), int(4)];
            let listed: Vec<String> = payoffs.iter().map(|p| p.to_string()).collect();
            c.push(
                "the only pure-SPE payoff is (6, 4) for players 1 and 2",
                unique,
                format!("pure-SPE payoffs {}", listed.join(" ")),
            );
            c.is_spe();
            c.no_spe_selection();
        }
    }
    CertificationReport {
        example,
        assertions: c.out,
    }
}

/// Same owners, labels, probabilities and payoffs below `a` and `b`.
fn same_shape(ta: &GameTree, a: NodeId, tb: &GameTree, b: NodeId) -> bool {
    match (ta.node(a), tb.node(b)) {
        (Node::Terminal { payoffs: p }, Node::Terminal { payoffs: q }) => p == q,
        (Node::Chance { outcomes: x }, Node::Chance { outcomes: y }) => {
            x.len() == y.len()
                && x.iter().zip(y).all(|(o, u)| {
                    o.probability == u.probability && same_shape(ta, o.child, tb, u.child)
                })
        }
        (
            Node::Decision {
                owner: o1,
                actions: x,
            },
            Node::Decision {
                owner: o2,
                actions: y,
            },
        ) => {
            o1 == o2
                && x.len() == y.len()
                && x.iter()
                    .zip(y)
                    .all(|(p, q)| p.label == q.label && same_shape(ta, p.child, tb, q.child))
        }
        _ => false,
    }
}
