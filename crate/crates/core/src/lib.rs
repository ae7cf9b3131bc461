//! Universal Pontryagin forms on the space of Riemannian metrics.
//!
//! The core is generic over the scalar type through [`Real`]; the aliases
//! below fix it to `f64` or `f32`.

pub mod algebra;
pub mod error;
pub mod functionals;
pub mod jet;
pub mod scalar;
pub mod surface;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Matrix64 = algebra::Matrix<f64>;
pub type Matrix32 = algebra::Matrix<f32>;
pub type EndForm64 = algebra::EndForm<f64>;
pub type EndForm32 = algebra::EndForm<f32>;
pub type ScalarForm64 = algebra::ScalarForm<f64>;
pub type ScalarForm32 = algebra::ScalarForm<f32>;
pub type WeilPolynomial64 = algebra::WeilPolynomial<f64>;
pub type WeilPolynomial32 = algebra::WeilPolynomial<f32>;
pub type SymJet64 = surface::SymJet<f64>;
pub type SymJet32 = surface::SymJet<f32>;
pub type VectorJet64 = surface::VectorJet<f64>;
pub type VectorJet32 = surface::VectorJet<f32>;
pub type MetricField64 = surface::MetricField<f64>;
pub type MetricField32 = surface::MetricField<f32>;
pub type JetPoint64 = jet::JetPoint<f64>;
pub type JetPoint32 = jet::JetPoint<f32>;
