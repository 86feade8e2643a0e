//! Library half of the `kummer` binary: prime enumeration, scan
//! orchestration with crash-safe CSV checkpoints, and candidate ranking.

pub mod candidates;
pub mod output;
pub mod scan;
pub mod sieve;
