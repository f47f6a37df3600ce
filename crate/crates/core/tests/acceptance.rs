//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use common::{pool, random_mixed, random_pure, random_weights};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spelab_core::corpus::{
    bargaining, random_game, reconstruct_example, tianji, Constraint, Example, GeneratorConfig,
    TIANJI_SPE_PATHS,
};
use spelab_core::rational::{int, ratio};
use spelab_core::verifier::{
    check_no_mixing, check_selection_values, check_weak_no_mixing, count_pure_spe,
    enumerate_pure_spe, enumerate_pure_spe_paths, is_spe_one_shot, is_spe_oracle,
    pure_spe_brute_force, selections_are_all_pure_spe, spe_payoff_invariance, Invariance,
};
use spelab_core::*;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

struct Outcome {
    failures: Vec<String>,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failures: Vec::new(),
            detail: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn report(id: u32, title: &str, budget: Duration, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut outcome = run();
    let elapsed = start.elapsed();
    outcome.check(elapsed <= budget, || {
        format!("took {elapsed:.2?}, budget {budget:.0?}")
    });
    let pass = outcome.failures.is_empty();
    println!(
        "criterion {id} {}: {title} [{}; {elapsed:.2?}]",
        if pass { "PASS" } else { "FAIL" },
        outcome.detail
    );
    for f in outcome.failures.iter().take(5) {
        println!("    {f}");
    }
    pass
}

fn limits() -> Limits {
    Limits::default()
}

fn interleaved(play: &Play, tree: &GameTree) -> String {
    play.labels(tree).expect("no chance in this game").concat()
}

fn tianji_golden() -> Outcome {
    let mut o = Outcome::new();
    let tree = tianji();
    let expected: BTreeSet<String> = TIANJI_SPE_PATHS.iter().map(|s| s.to_string()).collect();
    let paths = enumerate_pure_spe_paths(&tree, &limits()).expect("within caps");
    let found: BTreeSet<String> = paths
        .paths
        .iter()
        .map(|p| interleaved(&p.play, &tree))
        .collect();
    o.check(paths.paths.len() == 6, || {
        format!("{} SPE paths", paths.paths.len())
    });
    o.check(found == expected, || format!("SPE paths {found:?}"));
    for p in &paths.paths {
        o.check(p.payoffs == Payoffs::from_ints(&[-1, 1]), || {
            format!("path {} pays {}", p.rendered, p.payoffs)
        });
    }
    let universal = improved_backward_induction(&tree, MixRule::Uniform).expect("uniform mixing");
    let via_selections: BTreeSet<String> = selection_plays(&tree, &universal.profile)
        .iter()
        .map(|p| interleaved(p, &tree))
        .collect();
    o.check(via_selections == expected, || {
        format!("selection paths {via_selections:?}")
    });
    o.detail = format!(
        "{} paths, {} SPE profiles",
        found.len(),
        paths.profile_count
    );
    o
}

fn g1_control() -> Outcome {
    let mut o = Outcome::new();
    let r = reconstruct_example(Example::G1);
    let (tree, f) = (&r.tree, &r.profile);
    o.check(is_spe_one_shot(tree, f).outcome, || {
        "uniform profile is not an SPE".into()
    });
    let oracle = is_spe_oracle(tree, f, &limits()).expect("small game");
    o.check(oracle.outcome, || {
        "oracle rejects the uniform profile".into()
    });
    let v = expected_payoffs(tree, f, tree.root());
    o.check(*v.of(1) == ratio(3, 2), || {
        format!("player 1 value {}", v.of(1))
    });
    let brute = pure_spe_brute_force(tree, &limits()).expect("128 profiles");
    let best = brute
        .iter()
        .map(|g| expected_payoffs(tree, g, tree.root()).of(1).clone())
        .max()
        .expect("a pure SPE exists");
    o.check(best <= int(1), || {
        format!("a pure SPE pays player 1 {best}")
    });
    let dp: BTreeSet<Payoffs> = enumerate_pure_spe_paths(tree, &limits())
        .expect("small game")
        .payoff_set();
    let bf: BTreeSet<Payoffs> = brute
        .iter()
        .map(|g| expected_payoffs(tree, g, tree.root()))
        .collect();
    o.check(dp == bf, || "enumeration and brute force disagree".into());
    o.check(r.report.all_passed(), || r.report.to_string());
    o.detail = format!(
        "uniform value {}, {} pure SPE, best for player 1 = {}",
        format_rational(v.of(1)),
        brute.len(),
        format_rational(&best)
    );
    o
}

fn zero_sum_config(seed: u64) -> GeneratorConfig {
    GeneratorConfig {
        seed,
        max_depth: 6,
        max_branching: 3,
        players: 2,
        payoff_pool: pool(&[-2, -1, 0, 1, 2]),
        constraint: Constraint::ZeroSum,
        allow_chance: true,
        chance_density: ratio(1, 5),
        leaf_density: ratio(1, 4),
        profile_budget: Some(1 << 14),
    }
}

struct ZeroSumStats {
    instances: usize,
    brute_forced: usize,
    sampled: usize,
    sampled_spe: usize,
    mixing_nodes: usize,
    max_selections: BigUint,
}

/// Criteria 3, 4 and 8 share the same 200 instances.
fn zero_sum_suite() -> (Outcome, Outcome, Outcome, ZeroSumStats) {
    let (mut c3, mut c4, mut c8) = (Outcome::new(), Outcome::new(), Outcome::new());
    let mut stats = ZeroSumStats {
        instances: 0,
        brute_forced: 0,
        sampled: 0,
        sampled_spe: 0,
        mixing_nodes: 0,
        max_selections: BigUint::one(),
    };
    for seed in 0..200 {
        let tree = random_game(&zero_sum_config(seed)).expect("valid config");
        stats.instances += 1;
        let u = improved_backward_induction(&tree, MixRule::Uniform).expect("uniform mixing");
        let selections = u.argmax.product();
        stats.mixing_nodes += tree
            .decision_nodes()
            .iter()
            .filter(|n| u.argmax.get(**n).len() > 1)
            .count();
        stats.max_selections = stats.max_selections.clone().max(selections.clone());

        // (3) no-mixing and value preservation
        match check_no_mixing(&tree, &u.profile, &limits()) {
            Ok(r) => c3.check(r.verdict.outcome, || {
                format!("seed {seed}: no-mixing fails: {:?}", r.verdict.witness)
            }),
            Err(e) => c3.check(false, || format!("seed {seed}: {e}")),
        }
        match check_selection_values(&tree, &u.profile, &limits()) {
            Ok(v) => c3.check(v.outcome, || format!("seed {seed}: {:?}", v.witness)),
            Err(e) => c3.check(false, || format!("seed {seed}: {e}")),
        }
        let small = selections.to_u64().is_some_and(|s| s <= 1 << 12);
        if small {
            for g in enumerate_selections(&tree, &u.profile, None, &limits()).expect("small") {
                let v = continuation_values(&tree, &g);
                c3.check(v == u.values, || {
                    format!("seed {seed}: a selection changes values")
                });
            }
        }

        // (4) selections of the universal profile = all pure SPE
        let spe = enumerate_pure_spe(&tree, &limits()).expect("within caps");
        let sel: Vec<PureProfile> = enumerate_selections(&tree, &u.profile, None, &limits())
            .expect("within caps")
            .collect();
        c4.check(spe == sel, || {
            format!(
                "seed {seed}: {} pure SPE vs {} selections",
                spe.len(),
                sel.len()
            )
        });
        c4.check(
            count_pure_spe(&tree, &limits()).ok() == Some(selections.clone()),
            || format!("seed {seed}: SPE count differs from selection count"),
        );
        c4.check(
            selections_are_all_pure_spe(&tree, &u.profile, &limits()) == Ok(true),
            || format!("seed {seed}: counting check fails"),
        );
        let total: u64 = tree
            .decision_nodes()
            .iter()
            .map(|n| tree.actions(*n).len() as u64)
            .product();
        if total <= 1 << 11 {
            stats.brute_forced += 1;
            let brute = pure_spe_brute_force(&tree, &limits()).expect("small");
            c4.check(brute == spe, || {
                format!("seed {seed}: brute force disagrees")
            });
        }
        let members: BTreeSet<&PureProfile> = spe.iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..256 {
            let g = random_pure(&tree, &mut rng);
            let one_shot = is_spe_one_shot(&tree, &g).outcome;
            stats.sampled += 1;
            stats.sampled_spe += usize::from(one_shot);
            c4.check(one_shot == members.contains(&g), || {
                format!("seed {seed}: {} misclassified", g.describe(&tree))
            });
        }

        // (8) payoff invariance
        match spe_payoff_invariance(&tree, &limits()) {
            Ok(Invariance::Holds { payoffs, .. }) => c8
                .check(payoffs == u.values[tree.root()], || {
                    format!("seed {seed}: common payoff {payoffs} differs from the value")
                }),
            other => c8.check(false, || format!("seed {seed}: {other:?}")),
        }
    }
    (c3, c4, c8, stats)
}

fn no_indifference_suite() -> Outcome {
    let mut o = Outcome::new();
    let mut mixtures = 0;
    let mut mixing = 0;
    for seed in 0..200u64 {
        let config = GeneratorConfig {
            seed: 10_000 + seed,
            max_depth: 5,
            max_branching: 3,
            players: 2 + (seed % 2) as usize,
            payoff_pool: pool(&[-2, -1, 0, 1, 2, 3]),
            constraint: Constraint::NoIndifference {
                classes: 2 + (seed % 3) as usize,
            },
            allow_chance: false,
            leaf_density: ratio(1, 4),
            profile_budget: Some(1 << 16),
            ..GeneratorConfig::default()
        };
        let tree = random_game(&config).expect("valid config");
        o.check(
            !tree.has_chance() && check_no_indifference(&tree).outcome,
            || format!("seed {seed}: generator broke its contract"),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for trial in 0..4 {
            let u = if trial == 0 {
                improved_backward_induction(&tree, MixRule::Uniform)
            } else {
                let mut w = |_: NodeId, best: &[usize]| random_weights(&mut rng, best.len());
                improved_backward_induction(&tree, MixRule::Weights(&mut w))
            }
            .expect("valid weights");
            mixtures += 1;
            mixing += usize::from(u.argmax.product() > BigUint::one());
            match check_no_mixing(&tree, &u.profile, &limits()) {
                Ok(r) => o.check(r.verdict.outcome, || {
                    format!("seed {seed}: {:?}", r.verdict.witness)
                }),
                Err(e) => o.check(false, || format!("seed {seed}: {e}")),
            }
        }
    }
    let mut negative = Vec::new();
    for e in [Example::G2, Example::G5] {
        let r = reconstruct_example(e);
        let weak = check_weak_no_mixing(&r.tree, &r.profile, &limits()).expect("small game");
        o.check(!weak.verdict.outcome, || {
            format!("{e} has an SPE selection")
        });
        o.check(!check_no_indifference(&r.tree).outcome, || {
            format!("{e} satisfies no-indifference")
        });
        negative.push(e.to_string());
    }
    o.detail = format!(
        "{mixtures} mixtures on 200 trees ({mixing} with real mixing); {} fail weak no-mixing",
        negative.join(" and ")
    );
    o
}

/// Independent grid computation of the two proposal stages.
fn grid_oracle(n: i64) -> (Vec<Rational>, Vec<Rational>, Rational) {
    let grid: Vec<Rational> = (0..=n).map(|k| ratio(k, n)).collect();
    let chance_mean = grid.iter().fold(int(0), |a, x| a + x) / int(n + 1);
    // stage 3: player 2 keeps x2; player 1 accepts 1 - x2 or takes the lottery
    let stage3: Vec<(Rational, Rational)> = grid
        .iter()
        .map(|x2| {
            let accept = (int(1) - x2, x2.clone());
            let reject = (chance_mean.clone(), int(1) - &chance_mean);
            let best = accept.0.clone().max(reject.0.clone());
            let options: Vec<&(Rational, Rational)> = [&accept, &reject]
                .into_iter()
                .filter(|o| o.0 == best)
                .collect();
            let p2 = options.iter().map(|o| o.1.clone()).min().expect("nonempty");
            assert!(
                options.iter().all(|o| o.1 == p2),
                "player 2 value depends on tie"
            );
            (best, p2)
        })
        .collect();
    let p2_best = stage3.iter().map(|s| s.1.clone()).max().expect("grid");
    let support3: Vec<Rational> = grid
        .iter()
        .zip(&stage3)
        .filter(|(_, s)| s.1 == p2_best)
        .map(|(x, _)| x.clone())
        .collect();
    let continuation = (int(1) - &p2_best, p2_best.clone());
    // stage 1: player 1 keeps x1; player 2 accepts 1 - x1 or continues
    let stage1: Vec<Rational> = grid
        .iter()
        .map(|x1| {
            let accept = (x1.clone(), int(1) - x1);
            let best = accept.1.clone().max(continuation.1.clone());
            let mut p1 = Vec::new();
            if accept.1 == best {
                p1.push(accept.0.clone());
            }
            if continuation.1 == best {
                p1.push(continuation.0.clone());
            }
            assert!(
                p1.windows(2).all(|w| w[0] == w[1]),
                "player 1 value depends on tie"
            );
            p1[0].clone()
        })
        .collect();
    let p1_best = stage1.iter().max().expect("grid").clone();
    let support1 = grid
        .iter()
        .zip(&stage1)
        .filter(|(_, v)| **v == p1_best)
        .map(|(x, _)| x.clone())
        .collect();
    (support1, support3, p1_best)
}

fn labels_to_values(labels: Vec<String>) -> Vec<Rational> {
    labels
        .iter()
        .map(|l| parse_rational(l).expect("grid labels are literals"))
        .collect()
}

fn bargaining_suite() -> Outcome {
    let mut o = Outcome::new();
    let half = ratio(1, 2);
    for n in [2usize, 4, 8] {
        let tree = bargaining(n);
        let u = improved_backward_induction(&tree, MixRule::Uniform).expect("uniform mixing");
        let root = &u.values[tree.root()];
        o.check(*root == Payoffs(vec![half.clone(), half.clone()]), || {
            format!("n={n}: value {root}")
        });
        let support = |id: &str| -> Vec<Rational> {
            let node = tree.find(id).expect("known node");
            labels_to_values(
                u.argmax
                    .get(node)
                    .iter()
                    .map(|a| tree.actions(node)[*a].label.clone())
                    .collect(),
            )
        };
        let (oracle1, oracle3, oracle_value) = grid_oracle(n as i64);
        let grid_upper: Vec<Rational> = (0..=n)
            .map(|k| ratio(k as i64, n as i64))
            .filter(|x| *x >= half)
            .collect();
        o.check(oracle_value == half, || {
            format!("n={n}: grid oracle value {oracle_value}")
        });
        o.check(support("p1") == oracle1 && oracle1 == grid_upper, || {
            format!("n={n}: stage-1 support {:?}", support("p1"))
        });
        for k in 0..=n {
            let s3 = support(&format!("p2_{k}"));
            o.check(s3 == oracle3 && oracle3 == grid_upper, || {
                format!("n={n}: stage-3 support after {k} is {s3:?}")
            });
            let x1 = ratio(k as i64, n as i64);
            let node = tree.find(&format!("r1_{k}")).expect("response node");
            let responses: Vec<&str> = u
                .argmax
                .get(node)
                .iter()
                .map(|a| tree.actions(node)[*a].label.as_str())
                .collect();
            let expected: &[&str] = if x1 < half {
                &["accept"]
            } else if x1 == half {
                &["accept", "reject"]
            } else {
                &["reject"]
            };
            o.check(responses == expected, || {
                format!("n={n}: responses to {x1} are {responses:?}")
            });
        }
    }
    o.detail = "grids 2, 4, 8; supports = grid points >= 1/2".into();
    o
}

fn oracle_equivalence() -> Outcome {
    let mut o = Outcome::new();
    let (mut pairs, mut spe, mut non_spe) = (0, 0, 0);
    for seed in 0..40u64 {
        let config = GeneratorConfig {
            seed: 20_000 + seed,
            max_depth: 4,
            max_branching: 3,
            players: 2 + (seed % 2) as usize,
            payoff_pool: pool(&[0, 1, 2, 3]),
            allow_chance: true,
            chance_density: ratio(1, 4),
            profile_budget: Some(1 << 12),
            ..GeneratorConfig::default()
        };
        let tree = random_game(&config).expect("valid config");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut profiles: Vec<BehaviorProfile> = vec![
            improved_backward_induction(&tree, MixRule::Uniform)
                .expect("uniform")
                .profile,
            backward_induction(&tree, TieBreak::Last)
                .0
                .to_behavior(&tree),
            random_pure(&tree, &mut rng).to_behavior(&tree),
            random_mixed(&tree, &mut rng),
        ];
        profiles.push(BehaviorProfile::uniform(&tree));
        for f in &profiles {
            pairs += 1;
            let a = is_spe_one_shot(&tree, f);
            let b = is_spe_oracle(&tree, f, &limits()).expect("within oracle cap");
            if a.outcome {
                spe += 1;
            } else {
                non_spe += 1;
            }
            o.check(a.outcome == b.outcome, || {
                format!(
                    "seed {seed}: one-shot {} vs oracle {}",
                    a.outcome, b.outcome
                )
            });
        }
    }
    o.check(spe > 0 && non_spe > 0, || {
        "need both SPE and non-SPE profiles".into()
    });
    o.check(pairs >= 100, || format!("only {pairs} pairs"));
    o.detail = format!("{pairs} pairs ({spe} SPE, {non_spe} non-SPE)");
    o
}

fn invariance_counterexample() -> bool {
    let tree = parse_game(
        "players 2\nnode r player 2 { L -> a, R -> b }\n\
         terminal a payoffs [1, 1]\nterminal b payoffs [0, 1]\nroot r\n",
    )
    .expect("valid text");
    matches!(
        spe_payoff_invariance(&tree, &limits()),
        Ok(Invariance::Fails {
            witness: Witness::PayoffSplit { .. }
        })
    )
}

fn main() {
    let mut all = true;
    all &= report(
        1,
        "Tian Ji: six SPE paths paying (-1, 1); universal selections give the same six",
        Duration::from_secs(1),
        tianji_golden,
    );
    all &= report(
        2,
        "G1: uniform SPE worth 3/2 to player 1, every pure SPE gives at most 1",
        Duration::from_secs(1),
        g1_control,
    );

    let start = Instant::now();
    let (c3, c4, c8, stats) = zero_sum_suite();
    let shared = start.elapsed();
    let detail = format!(
        "{} zero-sum trees, {} mixing nodes, up to {} selections",
        stats.instances, stats.mixing_nodes, stats.max_selections
    );
    all &= report(
        3,
        "universal profile has no-mixing and every selection keeps its values",
        Duration::from_secs(60),
        || Outcome {
            detail: format!("{detail}; suite {shared:.2?}"),
            ..c3
        },
    );
    all &= report(
        4,
        "selections of the universal profile are exactly the pure SPE",
        Duration::from_secs(60),
        || Outcome {
            detail: format!(
                "{} instances, {} fully brute-forced, {} sampled profiles ({} SPE)",
                stats.instances, stats.brute_forced, stats.sampled, stats.sampled_spe
            ),
            ..c4
        },
    );
    all &= report(
        5,
        "argmax mixtures have no-mixing under no-indifference; G2/G5 fail weak no-mixing",
        Duration::from_secs(60),
        no_indifference_suite,
    );
    all &= report(
        6,
        "bargaining value (1/2, 1/2) and proposal supports match a grid oracle",
        Duration::from_secs(5),
        bargaining_suite,
    );
    all &= report(
        7,
        "one-shot check agrees with the unilateral-deviation oracle",
        Duration::from_secs(30),
        oracle_equivalence,
    );
    all &= report(
        8,
        "pure-SPE payoffs are invariant in zero-sum trees, not in the (1,1)/(0,1) game",
        Duration::from_secs(60),
        || {
            let mut o = c8;
            o.check(invariance_counterexample(), || {
                "counterexample not detected".into()
            });
            o.check(shared <= Duration::from_secs(60), || {
                format!("shared suite took {shared:.2?}")
            });
            o.detail = format!("{} zero-sum trees + counterexample", stats.instances);
            o
        },
    );
    if !all {
        std::process::exit(1);
    }
}
