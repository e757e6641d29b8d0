//! Structural procedures: conformal identities and unital splitting,
//! untwisting of inner derivations, the currentness test, and the ideal
//! correspondence between `B` and `Dif B`.

mod currentness;
mod ideal;
mod identity;
mod untwist;

pub use currentness::{dual_identity_consistency, is_current, CurrentnessReport, CurrentnessVerdict, DualReport};
pub use ideal::{ideal_lift, ideal_restrict, nilpotency_check, IdealPair, NilpotencyReport};
pub use identity::{
    extract_current_components, is_conformal_identity, unital_split, IdentityCandidate, UnitalSplit,
};
pub use untwist::{untwist, UntwistReport};
