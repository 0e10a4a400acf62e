//! Independent reference implementations and fuzzed invariants used by the
//! acceptance gate.

pub mod oracle;
pub mod properties;
