//! Workbench for nonassociative products of field operators.
//!
//! - [`term`]: bracketed term syntax, parser and printer.
//! - [`rewrite`]: quartet rewriting into the free associative algebra of [`poly`].
//! - [`algebra`]: Cayley–Dickson algebras and identity certification.
//! - [`fock`]: slave-boson operators on a truncated Fock space.
//! - [`frame`]: frame decompositions of gauge snapshots.
//! - [`potential`]: one-loop effective potential and its minima.

pub mod algebra;
pub mod cli;
pub mod fock;
pub mod frame;
pub mod numfmt;
pub mod poly;
pub mod potential;
pub mod rewrite;
pub mod term;

pub use algebra::{cd_mul, check_identity, CDElement, CheckMode, Identity, IdentityReport};
pub use poly::FreePoly;
pub use rewrite::{evaluate_classical, normalize};
pub use term::{match_quartet, parse, print, Term};
