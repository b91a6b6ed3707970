//! Numerical computation in finite-dimensional JB*-triples: Cartan factors of
//! types 1-4 and their finite ℓ∞-sums, tripotents, spectral calculus, the
//! truncation relation, and a harness for maps preserving truncations of
//! triple products.

pub mod error;
pub mod factor;
pub mod lattice;
pub mod numerics;
pub mod preserver;
pub mod spectral;
pub mod suites;
pub mod truncation;

pub use error::{Error, Result};
pub use factor::{AnyElement, Element, Factor, JbElement, SpinEmbedding, SumElement, SumSpace};
pub use lattice::{PeirceDecomposition, Tripotent};
pub use numerics::{ComplexMatrix, RealMatrix, Tolerance};
pub use spectral::SpectralResolution;
