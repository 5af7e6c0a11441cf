//! Symbolic jet calculus: canonical expressions, total derivatives,
//! reduction modulo an equation, and covering compatibility.

pub mod expr;
pub mod jet;
pub mod parse;

pub use expr::{JetExpr, Monomial};
pub use jet::{
    covering_compatibility_residual, parse_pde, AtomKind, CoveringReport, CoveringSpec, EquationReduction, JetSpace,
    JetSystem, PairResidual,
};
pub use parse::{parse_expr, ExprSyntax};
