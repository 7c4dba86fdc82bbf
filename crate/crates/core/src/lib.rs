//! Exact subsequence decks of binary strings and the tools built on them:
//! collision search for the fixed-size deletion channel, reconstruction
//! from decks, channel simulation and counting bounds.

pub mod bits;
pub mod bounds;
pub mod channel;
pub mod collision;
pub mod corpus;
pub mod deck;
pub mod error;
pub mod exact;
pub mod reconstruct;

pub use bits::{parse_rle, to_rle, BitString, RunLengthString};
pub use collision::{
    check_r, compute_n, hunt_collisions, verify_pair, CollisionReport, HuntConfig, Outcome, PairVerdict,
    PartitionScheme, SearchConfig,
};
pub use deck::{compute_deck, occurrence_count, Deck, Fingerprint, Symmetry};
pub use error::{Error, Result};
pub use exact::{binomial, ExactInt};
