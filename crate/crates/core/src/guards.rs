//! Size limits for the exhaustive procedures.
//!
//! Every enumeration checks its guard up front or while running and reports
//! [`Error::GuardExceeded`](crate::Error::GuardExceeded) instead of truncating.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guards {
    /// Maximum number of up-sets produced by a single enumeration.
    pub up_sets: usize,
    /// Maximum carrier size for an up-set lattice materialised as tables.
    pub lattice_elements: usize,
    /// Maximum poset size for permutation-based isomorphism search.
    pub iso_search: usize,
    /// Maximum parent size for a standalone subuniverse enumeration.
    pub subuniverse_parent: usize,
    /// Maximum `|A1|·|A2|` for brute-force checks over a product.
    pub product: usize,
    /// Maximum number of subuniverses produced by one enumeration.
    pub subuniverses: usize,
    /// Maximum algebra size for congruence enumeration.
    pub congruence_parent: usize,
    /// Maximum number of closed substructures of a space.
    pub substructures: usize,
    /// Maximum word length for the truncated free-monoid algebra.
    pub word_depth: usize,
    /// Node budget for the ternary term search.
    pub term_budget: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            up_sets: 1 << 20,
            lattice_elements: 4096,
            iso_search: 12,
            subuniverse_parent: 64,
            product: 4096,
            subuniverses: 1_000_000,
            congruence_parent: 32,
            substructures: 1 << 16,
            word_depth: 8,
            term_budget: 12,
        }
    }
}
