//! Computational Dunkl harmonic analysis on the unit sphere.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! - [`field`]: exact coefficient fields (rationals, `Q(sqrt 3)`) plus `f64`.
//! - [`poly`]: sparse multivariate polynomials in graded-lex order.
//! - [`linalg`]: exact Gaussian elimination and small dense `f64` kernels.
//! - [`roots`]: root systems, multiplicity functions, reflection groups.
//! - [`dunkl`]: Dunkl operators and the Dunkl Laplacian.
//! - [`intertwine`]: the intertwining operator `V_kappa`, degree by degree.
//! - [`quadrature`]: Gauss-Jacobi rules on `[-1, 1]`.
//! - [`sphere`]: weighted rules on the sphere for `Z2^d` and dihedral weights.
//! - [`harmonics`]: kappa-harmonic bases and the addition-theorem check.
//! - [`gegenbauer`]: Gegenbauer expansions and Cesaro means.
//! - [`fundamentality`]: the fundamentality test and summability limits.
#![no_std]

extern crate alloc;

pub mod dunkl;
pub mod error;
pub mod field;
pub mod fundamentality;
pub mod gegenbauer;
pub mod harmonics;
pub mod intertwine;
pub mod linalg;
pub mod poly;
pub mod quadrature;
pub mod roots;
pub mod sphere;

pub use error::{Error, Result};
pub use field::{Field, QSqrt3, Rational};
pub use poly::{Exponent, MPoly};
