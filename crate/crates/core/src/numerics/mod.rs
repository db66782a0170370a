//! Special functions and generic kernels shared by the solvers.

pub mod airy;
pub mod chebyshev;
pub mod linalg;
pub mod quad;
pub mod roots;
pub mod scaled;

pub use airy::{airy, airy_ai, airy_bi, AiryValues};
pub use chebyshev::chebyshev_u;
pub use linalg::{dense_determinant, invert_complex};
pub use quad::{adaptive_quadrature, quadrature_sqrt_endpoint};
pub use roots::{bracket_and_refine, BracketedRoot};
pub use scaled::Scaled;
