//! Gradual row polymorphism.
//!
//! A surface language with records, variants, row polymorphism and the
//! dynamic type `?`, a static checker for its fully annotated fragment, a
//! translation into a cast calculus with runtime type names, and a
//! small-step interpreter for that calculus.

pub mod core;
pub mod eval;
pub mod gradual_rel;
pub mod oracle;
pub mod rows;
pub mod statics;
pub mod syntax;
mod subst;

pub use crate::core::{BlameLabel, CoreTerm, Polarity};
pub use crate::syntax::{Base, Const, Kind, Span, Term, TermKind, TyName, Type};
