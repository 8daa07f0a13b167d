//! Set-theoretic types with semantic subtyping, and the languages typed with
//! them: construction and interning of regular recursive types, a decision
//! procedure for emptiness/subtyping validated against an executable model of
//! the interpretation domain, the analytic type operators, an explicitly
//! typed core calculus with type-cases, pattern matching with exhaustiveness
//! and redundancy analysis, occurrence typing through maximal-sharing
//! canonical forms, and the gradual-typing relations.

pub mod basic;
pub mod dnf;
pub mod gradual;
pub mod lang;
pub mod msc;
pub mod oracle;
pub mod ops;
pub mod patterns;
pub mod subtype;
pub mod syntax;
pub mod types;

#[doc(hidden)]
pub mod testgen;

pub use basic::{BasicSet, Constant};
pub use types::{RecError, TypeEngine, TypeId, TypeNode, TypeSpec};
