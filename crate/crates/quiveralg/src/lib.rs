//! quiveralg: an exact toolkit for bound quiver algebras.
//!
//! The crate models presentations of bound quiver algebras (quivers with
//! marked special loops and relation sets), classifies gentle, special
//! biserial, skewed-gentle and clannish presentations with machine-checkable
//! witnesses, performs vertex splitting and the skewed-gentle envelope,
//! factors representation data into ρ-blocks, builds string and band modules,
//! computes Hom/End/orbit/tangent dimensions over Q and prime fields with
//! exact arithmetic, decides King stability by brute force at desk scale, and
//! reports moduli-space shapes as products of projective spaces.

pub mod classify;
pub mod dsl;
pub mod error;
pub mod linalg;
pub mod presentation;
pub mod quiver;
pub mod rep;
pub mod repfile;
pub mod split;

pub(crate) mod rng;

pub use error::{Error, Result};
pub use presentation::{Presentation, Provenance, Relation};
pub use quiver::{Arrow, ArrowId, DimensionVector, Path, Quiver, VertexId, Weight};
