//! Cornish spaces and algebras: distributive lattices and posets equipped
//! with unary operations of either polarity, and the duality between them.

mod algebra;
mod duality;
mod free;
mod signature;
mod space;

pub use algebra::{AlgebraHom, CornishAlgebra};
pub use duality::{d_functor, d_mor, e_functor, e_mor, eval_e_cornish, eval_eps_cornish, DualAlgebra, DualSpace};
pub use free::{check_truncated_c, phi_x, truncated_c, TruncationReport};
pub use signature::{Polarity, Signature, Word, WordDisplay};
pub use space::{CornishSpace, Factorization, Orbit, SpaceMorphism};
pub(crate) use space::orbit_of;
