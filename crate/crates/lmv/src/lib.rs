//! Call-by-value lambda-mu calculus with products, coproducts and bottom.
//!
//! This crate implements the term language of full classical natural
//! deduction, its typing judgment `Γ ⊢ t : A ; Δ`, the seven call-by-value
//! reduction rules (and the five call-by-name ones), segment-trees and
//! segment-woods, extended structural reduction, parallel reduction with
//! complete developments, and a property harness that checks the diamond
//! and confluence properties on generated terms.
//!
//! The `examples/` directory has one runnable example per capability;
//! the `lmv` binary exposes the same operations as subcommands.

pub mod term;
pub mod subst;
pub mod syntax;
pub mod typing;
pub mod reduction;
pub mod segments;
pub mod parallel;
pub mod harness;
pub mod cli;

pub use subst::{alpha_eq, mu_subst_arg, mu_subst_fun, subst_var};
pub use syntax::{parse_formula, parse_term, print_formula, print_term};
pub use term::{is_value, ETerm, Index, MuName, Occurrence, Term, VarName};
pub use typing::{check, erase, infer, ContextPair, Formula};
