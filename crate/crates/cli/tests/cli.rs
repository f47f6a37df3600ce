use spelab_core::corpus::{reconstruct_example, Example};
use spelab_core::{write_game, write_profile};
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn spelab(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spelab"));
    cmd.args(args)
        .env_remove("SPELAB_MAX_SELECTIONS")
        .envs(env.iter().copied())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary runs");
    if let Some(text) = stdin {
        child
            .stdin
            .take()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn run(args: &[&str]) -> Output {
    spelab(args, None, &[])
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn emit(name: &str) -> String {
    let o = run(&["corpus", "emit", name]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    stdout(&o)
}

#[test]
fn tianji_round_trip_matches_golden_report() {
    let game = emit("tianji");
    let o = spelab(
        &[
            "solve",
            "-",
            "--mode",
            "universal",
            "--paths",
            "--format",
            "report",
        ],
        Some(&game),
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let golden = include_str!("golden/tianji_universal_paths.report");
    assert_eq!(stdout(&o), golden);
    assert_eq!(golden.matches(".payoffs = (-1, 1)").count(), 6);
}

#[test]
fn tianji_text_paths_and_enumeration() {
    let path = scratch("tianji.game", &emit("tianji"));
    let o = run(&["solve", &path, "--mode", "universal", "--paths"]);
    let text = stdout(&o);
    assert!(text.contains("paths: 6"));
    assert!(text.contains("  A -> C -> B -> A -> C -> B  (-1, 1)"));
    let o = run(&["enumerate-spe", &path, "--paths-only", "--format", "report"]);
    assert_eq!(o.status.code(), Some(0));
    let listed = stdout(&o);
    assert!(listed.contains("spe_count = 6291456\npaths = 6\n"));
    let o = run(&["enumerate-spe", &path]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(stderr(&o).contains("6291456"));
    let o = run(&["enumerate-spe", &path, "--limit", "2", "--format", "report"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("listed = 2\n"));
}

#[test]
fn no_indifference_failure_names_the_pair() {
    let path = scratch(
        "tie.game",
        "players 2\nnode r player 1 { a -> x, b -> y }\n\
         terminal x payoffs [1, 2]\nterminal y payoffs [1, 3]\nroot r\n",
    );
    let o = run(&["check", &path, "--property", "no-indifference"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("holds: false"));
    assert!(
        text.contains("terminals x and y tie for player 1"),
        "{text}"
    );
    let o = run(&[
        "check",
        &path,
        "--property",
        "zero-sum",
        "--format",
        "report",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness = terminals x and y sum to 3 and 4"));
}

#[test]
fn pure_spe_has_one_selection() {
    let game = scratch(
        "pure.game",
        "players 2\nnode r player 1 { a -> x, b -> y }\n\
         terminal x payoffs [0, 0]\nterminal y payoffs [2, 0]\nroot r\n",
    );
    let spe = scratch("pure_spe.profile", "at r: b\n");
    let o = run(&["no-mixing", &game, "--profile", &spe]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("selections checked: 1"));
    let not_spe = scratch("pure_not_spe.profile", "at r: a\n");
    let o = run(&["no-mixing", &game, "--profile", &not_spe]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("only for SPE profiles"));
    let o = run(&["verify", &game, "--profile", &not_spe, "--oracle"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("oracle: false"));
    let o = run(&[
        "verify",
        &game,
        "--profile",
        &spe,
        "--oracle",
        "--format",
        "report",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "spe = true\nvalue = (2, 0)\noracle = true\n");
}

#[test]
fn reconstructed_examples_through_the_cli() {
    for (example, weak_exit) in [(Example::G2, 1), (Example::G5, 1), (Example::G1, 0)] {
        let r = reconstruct_example(example);
        let game = scratch(&format!("{example}.game"), &write_game(&r.tree));
        let profile = scratch(
            &format!("{example}.profile"),
            &write_profile(&r.tree, &r.profile),
        );
        let o = run(&["verify", &game, "--profile", &profile]);
        assert_eq!(o.status.code(), Some(0), "{example}: {}", stdout(&o));
        let o = run(&["no-mixing", &game, "--profile", &profile, "--weak"]);
        assert_eq!(
            o.status.code(),
            Some(weak_exit),
            "{example}: {}",
            stdout(&o)
        );
    }
}

#[test]
fn invariance_exit_codes() {
    let split = scratch(
        "split.game",
        "players 2\nnode r player 2 { L -> a, R -> b }\n\
         terminal a payoffs [1, 1]\nterminal b payoffs [0, 1]\nroot r\n",
    );
    let o = run(&["invariance", &split]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness: SPE"));
    let tianji = scratch("tianji_inv.game", &emit("tianji"));
    let o = run(&["invariance", &tianji, "--format", "report"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("payoffs = (-1, 1)"));
}

#[test]
fn input_errors_exit_two() {
    let bad = scratch(
        "bad.game",
        "players 2\nnode r player 1 { a -> x }\nroot r\n",
    );
    let o = run(&["solve", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    assert_eq!(run(&["solve", "/no/such/file"]).status.code(), Some(2));
    assert_eq!(run(&["solve"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["corpus", "emit", "chess"]).status.code(), Some(2));
    assert_eq!(
        run(&["check", &bad, "--property", "sums"]).status.code(),
        Some(2)
    );
    let o = spelab(
        &["corpus", "list"],
        None,
        &[("SPELAB_MAX_SELECTIONS", "many")],
    );
    assert_eq!(o.status.code(), Some(0));
    let game = scratch("cap.game", &emit("G1"));
    let o = spelab(
        &["enumerate-spe", &game],
        None,
        &[("SPELAB_MAX_SELECTIONS", "many")],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cap_override_from_environment() {
    let game = scratch("g1_cap.game", &emit("G1"));
    let o = spelab(
        &["enumerate-spe", &game],
        None,
        &[("SPELAB_MAX_SELECTIONS", "4")],
    );
    assert_eq!(o.status.code(), Some(3));
    let o = spelab(
        &["enumerate-spe", &game],
        None,
        &[("SPELAB_MAX_SELECTIONS", "1000")],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("listed: 16"));
}

#[test]
fn report_output_is_stable_and_dot_is_exported() {
    let game = scratch("stable.game", &emit("bargaining"));
    let args = ["solve", &game, "--mode", "universal", "--format", "report"];
    let first = stdout(&run(&args));
    assert_eq!(first, stdout(&run(&args)));
    assert!(first.starts_with("mode = universal\nvalue = (1/2, 1/2)\n"));
    let o = run(&["export-dot", &game]);
    assert!(stdout(&o).starts_with("digraph game {"));
    let emitted = emit("random");
    assert_eq!(emitted, emit("random"));
}
