//! Finite Priestley duality for distributive lattices with unary operations,
//! and decision procedures for quasi-primality and semi-primality.

pub mod acceptance;
pub mod birkhoff;
pub mod bitset;
pub mod cli;
pub mod corpus;
pub mod cornish;
pub mod ddp;
pub mod duality_theorems;
pub mod engine;
pub mod error;
pub mod guards;
pub mod ockham;
pub mod order;
pub mod primality;
pub mod report;
pub mod text;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use guards::Guards;
