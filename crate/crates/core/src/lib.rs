//! Exact arithmetic for the half-split recurrence family
//!
//!   F(n) = F(ceil(n/2)) + F(floor(n/2)+1) + F(ceil(n/2)-1) + F(floor(n/2))
//!          + addend                                            for n >= 3,
//!
//! parameterized by the three base values F(0), F(1), F(2) and the addend.
//! Two members get names: T = (0, 0, 1; +1) and P = (0, 0, 0; +1).
//!
//! On top of the memoized evaluator the crate provides:
//!
//! - [`decomposition`]: the four-term split comparison rhs(n, i) vs F(n),
//!   equality sets, and exhaustive range verification in two modes;
//! - [`matrix`]: the 4x4 argument matrix of a split, its column regrouping
//!   into four child subproblems per parity case, column censuses, and the
//!   quartet gap identity;
//! - [`special`]: numbers whose equality set spreads past the midpoints,
//!   their consecutive groups, the group boundary doubling rule, and
//!   spread profiles;
//! - [`cache`]: a plain-text memo table format that is fully revalidated on
//!   load;
//! - [`cli`] / [`output`]: the `halfsplit` binary and its report formats.
//!
//! All arithmetic is exact u64; anything that would wrap is an error.

pub mod cache;
pub mod cli;
pub mod decomposition;
pub mod error;
pub mod matrix;
pub mod output;
pub mod recurrence;
pub mod special;

pub use decomposition::{
    equality_set, is_special, split_rhs, split_value, verify_range, verify_range_with, Relation,
    SpecialEquality, SplitEvaluation, VerificationReport, VerifyMode, VerifyOptions, Violation,
    ViolationKind,
};
pub use error::{Error, Result};
pub use matrix::{
    build_matrix, census, column_params, classify_column, verify_quartet_identity, ArgumentMatrix,
    ColumnCensus, ColumnRecord, EpsilonPartition, ParityCase, QuartetIdentity,
};
pub use recurrence::{
    children, midpoint_set, HalfSplitRecurrence, MemoTable, MidpointSet, MAX_INDEX,
};
pub use special::{
    check_group_recurrence, detect_groups, is_unimodal, parents_containing, predict_next,
    special_set, special_set_with, spread_profile, GroupRecurrenceCheck, GroupResidual,
    SpecialGroup, SpreadProfile,
};
