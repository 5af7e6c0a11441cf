//! Exact computation of deformed Lie algebra cohomology for presentations
//! given by structure equations, plus jet-space tools for verifying
//! differential coverings and Maurer–Cartan forms.

pub mod error;
pub mod exterior;
pub mod linalg;
pub mod scalars;
pub mod presentation;
pub mod fixtures;
pub mod cohomology;
pub mod jetcalc;
pub mod coordforms;
