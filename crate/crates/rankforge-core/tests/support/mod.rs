//! Shared helpers for the integration suites: an independent Cantor normal
//! form reference implementation, seeded random generators, and a naive
//! game solver. Everything here deliberately avoids the library's own code
//! paths so agreement is meaningful.
#![allow(dead_code)]

pub mod cnf;
pub mod game;
pub mod gen;
