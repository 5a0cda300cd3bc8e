//! Exact symbolic expressions: symbols, canonical polynomials and trees.

mod expr;
mod fmt;
mod poly;
mod symbol;

pub use expr::{Expr, MonomialMap};
pub use fmt::Source;
pub use poly::{Atom, FuncApp, Monomial, Poly};
pub use symbol::{Role, Symbol};
