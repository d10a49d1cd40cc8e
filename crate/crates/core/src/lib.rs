//! Grand Lebesgue space norms, L_p moduli of convexity and weak convexity bounds.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the
//! `*F64` aliases below name the instantiations the verification harness uses.
//!
//! - [`measure`]: simple functions on weighted partitions, `||f||_p`.
//! - [`psi`]: generating functions ψ and the `||·||_{b,θ}` comparison norm.
//! - [`optimize`]: grid-plus-golden-section search and bisection.
//! - [`gls`]: the Grand Lebesgue norm and the κ, θ functionals.
//! - [`convexity`]: moduli of convexity of `L_p`, refined triangle
//!   inequalities and the weak convexity bounds.
//! - [`moc`]: empirical modulus-of-convexity estimators.
//! - [`sampling`]: seeded random simple functions and ball pairs.

pub mod convexity;
pub mod error;
pub mod gls;
pub mod measure;
pub mod moc;
pub mod optimize;
pub mod psi;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use gls::{FunctionalResult, GlSpace};
pub use measure::{MeasurePartition, SimpleFunction};
pub use optimize::{OptConfig, ScalarOptResult};
pub use psi::{PsiKind, PsiSpec};
pub use scalar::Scalar;

pub type SimpleFunctionF64 = SimpleFunction<f64>;
pub type MeasurePartitionF64 = MeasurePartition<f64>;
pub type PsiSpecF64 = PsiSpec<f64>;
pub type GlSpaceF64 = GlSpace<f64>;
pub type MocResultF64 = convexity::MocResult<f64>;
pub type WcocBoundF64 = convexity::WcocBound<f64>;

pub type SimpleFunctionF32 = SimpleFunction<f32>;
pub type PsiSpecF32 = PsiSpec<f32>;
pub type GlSpaceF32 = GlSpace<f32>;
