#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use spelab_core::rational::{int, ratio};
use spelab_core::{BehaviorProfile, GameTree, PureProfile, Rational};

/// Positive weights summing to exactly 1.
pub fn random_weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| ratio(w, total)).collect()
}

pub fn random_pure(tree: &GameTree, rng: &mut ChaCha8Rng) -> PureProfile {
    let mut g = PureProfile::first_actions(tree);
    for &n in tree.decision_nodes() {
        g.set(n, rng.gen_range(0..tree.actions(n).len()));
    }
    g
}

/// Random nonempty support at each node with random positive weights.
pub fn random_mixed(tree: &GameTree, rng: &mut ChaCha8Rng) -> BehaviorProfile {
    let mut f = BehaviorProfile::new();
    for &n in tree.decision_nodes() {
        let actions = tree.actions(n);
        let mut support: Vec<usize> = (0..actions.len()).filter(|_| rng.gen_bool(0.6)).collect();
        if support.is_empty() {
            support.push(rng.gen_range(0..actions.len()));
        }
        let weights = random_weights(rng, support.len());
        f.set(
            n,
            support
                .iter()
                .zip(weights)
                .map(|(a, w)| (actions[*a].label.clone(), w))
                .collect(),
        );
    }
    f
}

pub fn pool(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|v| int(*v)).collect()
}
