//! Graded local cohomology, fiber loci and specialization over parametric
//! polynomial rings.

pub mod baseprimes;
pub mod coeff;
pub mod error;
pub mod fiber;
pub mod groebner;
pub mod hilbert;
pub mod linalg;
pub mod localcohom;
pub mod loci;
pub mod module;
pub mod mono;
pub mod parse;
pub mod poly;
pub mod ratmap;
pub mod resolution;
pub mod script;
pub mod ring;
pub mod specialize;
pub mod strands;
pub mod unipoly;

pub use coeff::{Coeff, Rat};
pub use error::{Error, Result};
pub use module::{FreeModule, Matrix, ModulePresentation};
pub use poly::Poly;
pub use ring::{BaseKind, Degree, OrderKind, Ring, RingDescriptor};
