//! Weitzenböck curvature operators as explicit finite-dimensional linear algebra.
//!
//! * [`tensor`] and [`linalg`]: canonical bases of symmetric and alternating
//!   tensors, dense symmetric eigensolver, null spaces.
//! * [`curvature`]: algebraic curvature tensors and closed-form models.
//! * [`pinching`]: sectional/Ricci extrema and pinching verdicts.
//! * [`weitzenboeck`]: the curvature term of Lichnerowicz-type Laplacians on
//!   symmetric tensors and forms, the curvature operator of the second kind,
//!   quadratic forms and pointwise eigenvalue bounds.
//! * [`discrete`]: a DEC Hodge Laplacian on 1-cochains of an icosphere.

pub mod curvature;
pub mod discrete;
pub mod error;
pub mod linalg;
pub mod pinching;
pub mod tensor;
pub mod weitzenboeck;

pub use curvature::{CurvatureModel, CurvatureTensor};
pub use error::{Error, Result};
pub use linalg::{kernel_basis, sym_eigen, Matrix, SymEigen, SymMatrix};
pub use tensor::{MultiIndexBasis, Symmetry, TensorCoeffs};
