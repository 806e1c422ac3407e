//! Detection and certification of Galois points of projective hypersurfaces
//! over exact fields.

pub mod catalog;
pub mod conelib;
pub mod error;
mod fastpoly;
pub mod fermat;
pub mod field;
pub mod galois0;
pub mod galoisp;
pub mod linalg;
pub mod multipoly;
pub mod polyparse;
pub mod projgeom;

pub use error::{Error, Result};
pub use field::{field_make, FieldDesc, Scalar, UniPoly};
pub use multipoly::{HomogPoly, Monomial, MultiPoly};
