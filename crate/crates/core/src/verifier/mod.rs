//! SPE verification, pure-SPE enumeration, and the no-mixing properties.
//!
//! [`is_spe_one_shot`] is the normative check. [`is_spe_oracle`] and
//! [`pure_spe_brute_force`] are exhaustive cross-checks for small games.
//! Enumeration and the selection properties run on value classes (see
//! `classes.rs`), which avoids walking profile spaces explicitly; when a
//! selection space is within the cap it is walked directly so the reported
//! witness is the least one in selection order.

mod classes;
mod oracle;

pub use oracle::{is_spe_oracle, pure_spe_brute_force};

use crate::game::{GameTree, Node, NodeId};
use crate::limits::{exceeds, CapError, Limits};
use crate::rational::Payoffs;
use crate::solver::continuation_values;
use crate::strategy::{enumerate_selections, selection_count, Play, PureProfile, Strategy};
use crate::verdict::{Verdict, Witness};
use classes::{all_actions, spe_classes, Plays, Profiles, Rep};
use num_bigint::BigUint;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};

/// One-shot deviation check: at every decision node the owner's best child
/// value must equal the profile's value there. The first failing node in
/// node order is reported with its best deviation.
pub fn is_spe_one_shot<S: Strategy + ?Sized>(tree: &GameTree, profile: &S) -> Verdict {
    let values = continuation_values(tree, profile);
    for &node in tree.decision_nodes() {
        let owner = tree.owner(node).expect("decision node");
        let here = values[node].of(owner);
        let (best, action) = tree
            .actions(node)
            .iter()
            .enumerate()
            .map(|(i, a)| (values[a.child].of(owner), i))
            .fold(None, |acc: Option<(_, usize)>, (v, i)| match acc {
                Some((bv, _)) if bv >= v => acc,
                _ => Some((v, i)),
            })
            .expect("decision node has actions");
        if best > here {
            return Verdict::fail(Witness::Deviation {
                node,
                action,
                gain: best - here,
            });
        }
    }
    Verdict::pass()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("no-mixing is defined only for SPE profiles")]
    NotSpe(Verdict),
    #[error(transparent)]
    Cap(#[from] CapError),
}

/// Number of pure SPE of `tree`.
pub fn count_pure_spe(tree: &GameTree, limits: &Limits) -> Result<BigUint, CapError> {
    let classes = spe_classes::<BigUint>(tree, tree.root(), &all_actions(tree), limits)?;
    Ok(classes.values().sum())
}

/// All pure SPE in profile order. Refused when there are more than
/// `limits.max_selections`.
pub fn enumerate_pure_spe(tree: &GameTree, limits: &Limits) -> Result<Vec<PureProfile>, CapError> {
    let count = count_pure_spe(tree, limits)?;
    if exceeds(&count, limits.max_selections) {
        return Err(CapError::new("pure SPE", count, limits.max_selections)
            .hint("; use enumerate_pure_spe_paths or count_pure_spe instead"));
    }
    let classes = spe_classes::<Profiles>(tree, tree.root(), &all_actions(tree), limits)?;
    let mut out: Vec<PureProfile> = classes
        .into_values()
        .flat_map(|p| p.0)
        .map(|assignment| {
            let mut profile = PureProfile::first_actions(tree);
            for (n, a) in assignment {
                profile.set(n, a);
            }
            profile
        })
        .collect();
    out.sort();
    Ok(out)
}

/// The first `n` pure SPE in profile order. Found by fixing one decision
/// node at a time, so the total number of SPE may exceed the cap.
pub fn first_pure_spe(
    tree: &GameTree,
    n: u64,
    limits: &Limits,
) -> Result<Vec<PureProfile>, CapError> {
    if n > limits.max_selections {
        return Err(CapError::new(
            "requested pure SPE",
            BigUint::from(n),
            limits.max_selections,
        ));
    }
    let mut search = PrefixSearch {
        tree,
        limits,
        want: n as usize,
        allowed: all_actions(tree),
        chosen: PureProfile::first_actions(tree),
        out: Vec::new(),
    };
    search.run(0)?;
    Ok(search.out)
}

struct PrefixSearch<'a> {
    tree: &'a GameTree,
    limits: &'a Limits,
    want: usize,
    allowed: Vec<Vec<usize>>,
    chosen: PureProfile,
    out: Vec<PureProfile>,
}

impl PrefixSearch<'_> {
    fn run(&mut self, depth: usize) -> Result<(), CapError> {
        let nodes = self.tree.decision_nodes();
        if depth == nodes.len() {
            self.out.push(self.chosen.clone());
            return Ok(());
        }
        let node = nodes[depth];
        let options = self.allowed[node.0].clone();
        for &a in &options {
            if self.out.len() >= self.want {
                break;
            }
            self.allowed[node.0] = vec![a];
            if !spe_count(self.tree, &self.allowed, self.limits)?.is_zero() {
                self.chosen.set(node, a);
                self.run(depth + 1)?;
            }
        }
        self.allowed[node.0] = options;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpePath {
    pub play: Play,
    pub rendered: String,
    pub payoffs: Payoffs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpePaths {
    /// Distinct plays of pure SPE, sorted by their rendering.
    pub paths: Vec<SpePath>,
    /// Number of pure SPE profiles.
    pub profile_count: BigUint,
}

impl SpePaths {
    pub fn payoff_set(&self) -> BTreeSet<Payoffs> {
        self.paths.iter().map(|p| p.payoffs.clone()).collect()
    }
}

/// Distinct equilibrium plays over all pure SPE, with payoffs, plus the
/// number of SPE profiles.
pub fn enumerate_pure_spe_paths(tree: &GameTree, limits: &Limits) -> Result<SpePaths, CapError> {
    let allowed = all_actions(tree);
    let counts = spe_classes::<BigUint>(tree, tree.root(), &allowed, limits)?;
    let plays = spe_classes::<Plays>(tree, tree.root(), &allowed, limits)?;
    let mut paths: Vec<SpePath> = plays
        .into_iter()
        .flat_map(|(payoffs, set)| {
            set.0
                .into_iter()
                .map(move |choices| (payoffs.clone(), Play { choices }))
        })
        .map(|(payoffs, play)| SpePath {
            rendered: play.render(tree),
            play,
            payoffs,
        })
        .collect();
    paths.sort_by(|a, b| {
        a.rendered
            .cmp(&b.rendered)
            .then_with(|| a.play.cmp(&b.play))
    });
    Ok(SpePaths {
        paths,
        profile_count: counts.values().sum(),
    })
}

/// Outcome of a selection property check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixingReport {
    pub verdict: Verdict,
    /// Size of the selection space.
    pub selections: BigUint,
    /// Selections whose status was settled before the answer was known.
    pub selections_checked: BigUint,
}

fn require_spe<S: Strategy + ?Sized>(tree: &GameTree, profile: &S) -> Result<(), VerifyError> {
    let v = is_spe_one_shot(tree, profile);
    if v.outcome {
        Ok(())
    } else {
        Err(VerifyError::NotSpe(v))
    }
}

fn supports<S: Strategy + ?Sized>(tree: &GameTree, profile: &S) -> Vec<Vec<usize>> {
    (0..tree.len())
        .map(|i| {
            let n = NodeId(i);
            if matches!(tree.node(n), Node::Decision { .. }) {
                profile.support(tree, n)
            } else {
                Vec::new()
            }
        })
        .collect()
}

fn product(allowed: &[Vec<usize>], tree: &GameTree) -> BigUint {
    tree.decision_nodes()
        .iter()
        .map(|n| BigUint::from(allowed[n.0].len()))
        .product()
}

fn spe_count(
    tree: &GameTree,
    allowed: &[Vec<usize>],
    limits: &Limits,
) -> Result<BigUint, CapError> {
    Ok(spe_classes::<BigUint>(tree, tree.root(), allowed, limits)?
        .values()
        .sum())
}

/// Least selection (in selection order) accepted by `keep`, found by fixing
/// one decision node at a time; `keep(total, spe)` receives the selection and
/// SPE-selection counts of the remaining completions.
fn least_selection(
    tree: &GameTree,
    mut allowed: Vec<Vec<usize>>,
    limits: &Limits,
    keep: impl Fn(&BigUint, &BigUint) -> bool,
) -> Result<Option<PureProfile>, CapError> {
    let mut chosen = PureProfile::first_actions(tree);
    for &node in tree.decision_nodes() {
        let options = allowed[node.0].clone();
        let mut found = false;
        for a in options {
            allowed[node.0] = vec![a];
            let total = product(&allowed, tree);
            let spe = spe_count(tree, &allowed, limits)?;
            if keep(&total, &spe) {
                chosen.set(node, a);
                found = true;
                break;
            }
        }
        if !found {
            return Ok(None);
        }
    }
    Ok(Some(chosen))
}

/// No-mixing: every selection of the SPE `profile` is itself an SPE. On
/// failure the witness is the least failing selection with its deviation.
pub fn check_no_mixing<S: Strategy + ?Sized>(
    tree: &GameTree,
    profile: &S,
    limits: &Limits,
) -> Result<MixingReport, VerifyError> {
    require_spe(tree, profile)?;
    let total = selection_count(tree, profile);
    if !exceeds(&total, limits.max_selections) {
        let mut checked = BigUint::zero();
        for g in enumerate_selections(tree, profile, None, limits)? {
            checked += 1u32;
            let v = is_spe_one_shot(tree, &g);
            if let Some(failure) = v.witness {
                return Ok(MixingReport {
                    verdict: Verdict::fail(Witness::Selection {
                        selection: g,
                        failure: Box::new(failure),
                    }),
                    selections: total,
                    selections_checked: checked,
                });
            }
        }
        return Ok(MixingReport {
            verdict: Verdict::pass(),
            selections: total,
            selections_checked: checked,
        });
    }
    let allowed = supports(tree, profile);
    let spe = spe_count(tree, &allowed, limits)?;
    let verdict = if spe == total {
        Verdict::pass()
    } else {
        let g = least_selection(tree, allowed, limits, |t, s| t > s)?
            .expect("a failing selection exists");
        let failure = is_spe_one_shot(tree, &g)
            .witness
            .expect("selection was counted as failing");
        Verdict::fail(Witness::Selection {
            selection: g,
            failure: Box::new(failure),
        })
    };
    Ok(MixingReport {
        verdict,
        selections_checked: total.clone(),
        selections: total,
    })
}

/// Weak no-mixing: some selection of the SPE `profile` is an SPE. On
/// success the witness is the least such selection.
pub fn check_weak_no_mixing<S: Strategy + ?Sized>(
    tree: &GameTree,
    profile: &S,
    limits: &Limits,
) -> Result<MixingReport, VerifyError> {
    require_spe(tree, profile)?;
    let total = selection_count(tree, profile);
    if !exceeds(&total, limits.max_selections) {
        let mut checked = BigUint::zero();
        for g in enumerate_selections(tree, profile, None, limits)? {
            checked += 1u32;
            if is_spe_one_shot(tree, &g).outcome {
                return Ok(MixingReport {
                    verdict: Verdict::pass_with(Witness::Pure(g)),
                    selections: total,
                    selections_checked: checked,
                });
            }
        }
        return Ok(MixingReport {
            verdict: Verdict {
                outcome: false,
                witness: None,
            },
            selections: total,
            selections_checked: checked,
        });
    }
    let allowed = supports(tree, profile);
    let verdict = match least_selection(tree, allowed, limits, |_, s| !s.is_zero())? {
        Some(g) => Verdict::pass_with(Witness::Pure(g)),
        None => Verdict {
            outcome: false,
            witness: None,
        },
    };
    Ok(MixingReport {
        verdict,
        selections_checked: total.clone(),
        selections: total,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Invariance {
    /// Every pure SPE pays `payoffs` at the root.
    Holds {
        payoffs: Payoffs,
        spe_count: BigUint,
    },
    /// Two pure SPE pay differently; the witness is a [`Witness::PayoffSplit`].
    Fails { witness: Witness },
    /// The game has no pure SPE.
    Vacuous,
}

impl Invariance {
    /// `Vacuous` maps to a passing verdict without witness.
    pub fn verdict(&self) -> Verdict {
        match self {
            Invariance::Holds { .. } | Invariance::Vacuous => Verdict::pass(),
            Invariance::Fails { witness } => Verdict::fail(witness.clone()),
        }
    }
}

/// Whether all pure SPE induce the same root payoff vector.
pub fn spe_payoff_invariance(tree: &GameTree, limits: &Limits) -> Result<Invariance, CapError> {
    let allowed = all_actions(tree);
    let counts = spe_classes::<BigUint>(tree, tree.root(), &allowed, limits)?;
    if counts.is_empty() {
        return Ok(Invariance::Vacuous);
    }
    if counts.len() == 1 {
        let (payoffs, spe_count) = counts.into_iter().next().expect("one class");
        return Ok(Invariance::Holds { payoffs, spe_count });
    }
    let reps = spe_classes::<Rep>(tree, tree.root(), &allowed, limits)?;
    let mut found: Vec<(PureProfile, Payoffs)> = reps
        .into_iter()
        .filter_map(|(payoffs, rep)| {
            let mut profile = PureProfile::first_actions(tree);
            for (n, a) in rep.0? {
                profile.set(n, a);
            }
            Some((profile, payoffs))
        })
        .collect();
    found.sort();
    let mut it = found.into_iter();
    let first = it.next().expect("two classes");
    let second = it.next().expect("two classes");
    Ok(Invariance::Fails {
        witness: Witness::PayoffSplit { first, second },
    })
}

/// Payoff vectors reachable at each node by selections of `profile`,
/// ignoring optimality.
pub fn selection_value_sets<S: Strategy + ?Sized>(
    tree: &GameTree,
    profile: &S,
    limits: &Limits,
) -> Result<Vec<BTreeSet<Payoffs>>, CapError> {
    let mut sets: Vec<BTreeSet<Payoffs>> = vec![BTreeSet::new(); tree.len()];
    for node in tree.postorder() {
        sets[node.0] = match tree.node(node) {
            Node::Terminal { payoffs } => BTreeSet::from([payoffs.clone()]),
            Node::Decision { actions, .. } => profile
                .support(tree, node)
                .into_iter()
                .flat_map(|a| sets[actions[a].child.0].iter().cloned())
                .collect(),
            Node::Chance { outcomes } => {
                let mut acc = BTreeSet::from([Payoffs::zeros(tree.players())]);
                for o in outcomes {
                    let child = &sets[o.child.0];
                    let combos = acc.len() as u64 * child.len() as u64;
                    if combos > limits.max_combinations {
                        return Err(CapError::new(
                            "chance value combination",
                            BigUint::from(combos),
                            limits.max_combinations,
                        ));
                    }
                    let mut next = BTreeSet::new();
                    for v in &acc {
                        for c in child {
                            let mut w = v.clone();
                            w.add_scaled(&o.probability, c);
                            next.insert(w);
                        }
                    }
                    acc = next;
                }
                acc
            }
        };
    }
    Ok(sets)
}

/// Every selection of `profile` has the same continuation value as
/// `profile` itself at every node. The witness is the first node in node
/// order where some selection differs.
pub fn check_selection_values<S: Strategy + ?Sized>(
    tree: &GameTree,
    profile: &S,
    limits: &Limits,
) -> Result<Verdict, CapError> {
    let values = continuation_values(tree, profile);
    let sets = selection_value_sets(tree, profile, limits)?;
    for (node, expected) in values.iter() {
        if let Some(found) = sets[node.0].iter().find(|v| *v != expected) {
            return Ok(Verdict::fail(Witness::ValueMismatch {
                node,
                expected: expected.clone(),
                found: found.clone(),
            }));
        }
    }
    Ok(Verdict::pass())
}

/// Root payoff vector of each pure SPE class, with the number of SPE per class.
pub fn spe_payoff_classes(
    tree: &GameTree,
    limits: &Limits,
) -> Result<BTreeMap<Payoffs, BigUint>, CapError> {
    spe_classes::<BigUint>(tree, tree.root(), &all_actions(tree), limits)
}

/// Whether the selection set of `profile` is exactly the set of pure SPE,
/// decided by counting: every selection is an SPE and the two sets have
/// the same size.
pub fn selections_are_all_pure_spe<S: Strategy + ?Sized>(
    tree: &GameTree,
    profile: &S,
    limits: &Limits,
) -> Result<bool, CapError> {
    let allowed = supports(tree, profile);
    let total = product(&allowed, tree);
    let spe_selections = spe_count(tree, &allowed, limits)?;
    let all_spe = count_pure_spe(tree, limits)?;
    Ok(spe_selections == total && total == all_spe)
}
