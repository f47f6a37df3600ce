//! Tian Ji's horse race against the king.
//!
//! Three rounds; in each the king (player 1) shows an unused horse and Tian
//! Ji (player 2) answers with one of his. Horses come in classes A > B > C.
//! The king's horse is slightly better than Tian Ji's of the same class, so
//! equal classes go to the king. Winning two rounds wins the race: (1, -1)
//! for the king, (-1, 1) for Tian Ji.

use crate::game::{GameBuilder, GameTree};
use crate::rational::Payoffs;

/// The six equilibrium plays, moves interleaved king / Tian Ji.
pub const TIANJI_SPE_PATHS: [&str; 6] =
    ["ACBACB", "ACCBBA", "BAACCB", "BACBAC", "CBACBA", "CBBAAC"];

const HORSES: [char; 3] = ['A', 'B', 'C'];

fn class(h: char) -> u8 {
    match h {
        'A' => 3,
        'B' => 2,
        _ => 1,
    }
}

fn king_wins(history: &str) -> bool {
    let moves: Vec<char> = history.chars().collect();
    let rounds = moves
        .chunks(2)
        .filter(|r| class(r[0]) >= class(r[1]))
        .count();
    rounds >= 2
}

/// Node ids are `h` followed by the moves so far; forced last picks stay
/// explicit as single-action nodes.
pub fn tianji() -> GameTree {
    let mut g = GameBuilder::new(2);
    g.name("tian ji horse race");
    let mut frontier = vec![String::new()];
    while let Some(history) = frontier.pop() {
        let id = format!("h{history}");
        if history.len() == 6 {
            let p = if king_wins(&history) {
                [1, -1]
            } else {
                [-1, 1]
            };
            g.terminal(&id, Payoffs::from_ints(&p)).expect("fresh id");
            continue;
        }
        let mover = history.len() % 2;
        let used: Vec<char> = history.chars().skip(mover).step_by(2).collect();
        let options: Vec<char> = HORSES
            .iter()
            .copied()
            .filter(|h| !used.contains(h))
            .collect();
        let actions: Vec<(String, String)> = options
            .iter()
            .map(|h| (h.to_string(), format!("h{history}{h}")))
            .collect();
        g.decision(&id, mover + 1, actions).expect("fresh id");
        for h in options.iter().rev() {
            frontier.push(format!("{history}{h}"));
        }
    }
    g.root("h");
    g.build().expect("tian ji tree is well formed")
}
