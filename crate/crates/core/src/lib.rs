//! Maximal linear extensions and maximal chains of well partial orders,
//! computed symbolically over Cantor-normal-form ordinals and checked
//! against brute-force oracles on finite posets.

pub mod ordinal;
pub mod parse;

pub use ordinal::{Classification, Ordinal, OrdinalError, UnitList};
pub use parse::SyntaxError;
pub mod poset;
pub mod term;

pub use poset::{FinitePoset, PosetError};
pub use term::{Element, TermError, WpoTerm};
pub mod maxtype;
pub mod oracle;
pub mod selftest;
pub mod truestage;
