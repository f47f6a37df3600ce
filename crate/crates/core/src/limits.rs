//! Size caps for exhaustive searches.

use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest selection or pure-profile space walked or materialized explicitly.
    pub max_selections: u64,
    /// Largest pure-strategy count per player accepted by the brute-force SPE oracle.
    pub oracle_strategies: u64,
    /// Largest number of child value-class combinations at a chance node.
    pub max_combinations: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_selections: 1 << 20,
            oracle_strategies: 1 << 16,
            max_combinations: 1 << 16,
        }
    }
}

impl Limits {
    pub fn with_max_selections(mut self, cap: u64) -> Self {
        self.max_selections = cap;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{what} count {count} exceeds the cap of {cap}{hint}")]
pub struct CapError {
    pub what: &'static str,
    pub count: BigUint,
    pub cap: u64,
    pub hint: &'static str,
}

impl CapError {
    pub(crate) fn new(what: &'static str, count: BigUint, cap: u64) -> Self {
        CapError {
            what,
            count,
            cap,
            hint: "",
        }
    }

    pub(crate) fn hint(mut self, hint: &'static str) -> Self {
        self.hint = hint;
        self
    }
}

pub(crate) fn exceeds(count: &BigUint, cap: u64) -> bool {
    *count > BigUint::from(cap)
}
