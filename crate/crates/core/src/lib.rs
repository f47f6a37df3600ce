//! Exact subgame-perfect equilibrium analysis for finite perfect-information
//! games with chance moves.
//!
//! All payoffs and probabilities are exact rationals, so ties and argmax sets
//! are decided without tolerance. The crate covers:
//!
//! * game trees, validation, and structural conditions ([`game`]);
//! * a line-oriented text format for games and profiles ([`text`]);
//! * behavior and pure profiles, induced paths, selections ([`strategy`]);
//! * backward induction and its universal (argmax-mixing) variant ([`solver`]);
//! * SPE checks, pure-SPE enumeration, no-mixing properties ([`verifier`]);
//! * named games and seeded random generators ([`corpus`]).

pub mod corpus;
pub mod dot;
pub mod game;
pub mod limits;
pub mod rational;
pub mod solver;
pub mod strategy;
pub mod text;
pub mod verdict;
pub mod verifier;

pub use game::{
    check_no_indifference, fixed_sum_constant, validate_game, GameBuilder, GameError, GameTree,
    Node, NodeId, Player, ValidationReport,
};
pub use limits::{CapError, Limits};
pub use rational::{format_rational, parse_rational, Payoffs, Rational};
pub use solver::{
    backward_induction, continuation_values, improved_backward_induction, ArgmaxTable, MixRule,
    TieBreak, Universal, ValueTable,
};
pub use strategy::{
    enumerate_selections, expected_payoffs, induced_path, selection_plays, validate_profile,
    BehaviorProfile, PathDistribution, Play, PureProfile, Strategy,
};
pub use text::{parse_game, parse_profile, write_game, write_profile, ParseError};
pub use verdict::{Verdict, Witness};
