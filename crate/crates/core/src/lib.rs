//! Modular Golomb rulers: number-theoretic predicates, finite fields, algebraic
//! constructions, exhaustive search, nonexistence certificates and the
//! optical orthogonal code / Steiner system applications.

pub mod certify;
pub mod constructions;
pub mod designs;
pub mod field;
pub mod numtheory;
pub mod ruler;
pub mod search;
pub mod table;

pub use ruler::{canonicalize, diff_profile, embed, verify_mgr, DiffProfile, Ruler, RulerError, VerifyReport};
