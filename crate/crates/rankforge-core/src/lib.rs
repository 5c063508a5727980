//! Core algorithms for rankforge: exact ordinal arithmetic in Cantor normal
//! form, rank evaluators for group constructions and open games, the
//! back-lexicographic order on finitely-supported integer sequences together
//! with automorphism synthesis, antichain-pair fusion, and small brute-force
//! reference engines for cross-checking all of it.

pub mod fusion;
pub mod gamerank;
pub mod grouprank;
pub mod oracle;
pub mod ordinal;
pub mod zline;

pub use ordinal::{Ordinal, OrdinalAnalysis, OrdinalKind};
pub use zline::{ConditionalShift, IndexOrder, Position, SymAutomorphism, ZElement};

