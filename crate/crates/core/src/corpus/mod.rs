//! Named games and seeded random games.

mod bargaining;
mod examples;
mod random;
mod tianji;

pub use bargaining::bargaining;
pub use examples::{
    certify, reconstruct_example, Assertion, CertificationReport, Example, Reconstruction,
};
pub use random::{random_game, Constraint, GeneratorConfig, GeneratorError};
pub use tianji::{tianji, TIANJI_SPE_PATHS};

use crate::game::GameTree;

/// Names accepted by [`named_game`].
pub const NAMES: &[&str] = &["tianji", "bargaining", "G1", "G2", "G5", "G6", "random"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("unknown corpus game `{0}`; known: tianji, bargaining, G1, G2, G5, G6, random")]
    Unknown(String),
    #[error("bargaining needs a grid size of at least 2, got {0}")]
    Grid(u64),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}

/// Builds a corpus game by name. `param` is the bargaining grid size
/// (default 8) or the random tree depth (default 4); `seed` drives `random`.
pub fn named_game(
    name: &str,
    param: Option<u64>,
    seed: Option<u64>,
) -> Result<GameTree, CorpusError> {
    match name {
        "tianji" => Ok(tianji()),
        "bargaining" => {
            let n = param.unwrap_or(8);
            if n < 2 {
                return Err(CorpusError::Grid(n));
            }
            Ok(bargaining(n as usize))
        }
        "random" => {
            let config = GeneratorConfig {
                seed: seed.unwrap_or(0),
                max_depth: param.unwrap_or(4) as usize,
                ..GeneratorConfig::default()
            };
            Ok(random_game(&config)?)
        }
        other => match other.parse::<Example>() {
            Ok(e) => Ok(reconstruct_example(e).tree),
            Err(_) => Err(CorpusError::Unknown(other.to_string())),
        },
    }
}
