//! Words and automorphisms of free groups, and the outer automorphism
//! induced by an extended Schottky group.

mod auto;
mod intmatrix;
mod rho;
mod word;

pub use auto::FgAuto;
pub use intmatrix::IntMatrix;
pub use rho::{
    rho_diagnostics, rho_from_signature, Agreement, RhoBasis, RhoCase, RhoDiagnostics, RhoLine,
    Symbol, SymbolWord, TableEntry,
};
pub use word::FreeWord;
