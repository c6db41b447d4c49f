//! Asymptotics of orthogonal polynomials on [-1, 1] via a steepest-descent
//! factorization: weight families with analyticity lenses, a recurrence
//! engine with stability certification, an outer model built from the
//! conformal map and the weight's multiplicative splitting, a
//! singular-integral residual framework on closed contours, a turning-point
//! model problem, and error-law measurement utilities.

pub mod airyparametrix;
pub mod asymlab;
pub mod dd;
pub mod error;
pub mod fit;
pub mod mat2;
pub mod orthocore;
pub mod quad;
pub mod rhframework;
pub mod szegomodel;
pub mod weights;

pub use error::{Error, Result};
pub use mat2::{c64, Mat2, C64};
pub use weights::{WeightFamily, WeightSpec};
