//! Tensor fields on periodic charts and metric-dependent operators.

pub mod diffeo;
pub mod field;
pub mod grid;
pub mod jets;
pub mod local;
pub mod ops;
pub mod source;
pub mod spec;

pub use diffeo::{
    pullback, pullback_scalar, pullback_sym, pullback_vector, Diffeo, SymSource, VectorSource,
};
pub use field::{
    EndFormField, MetricField, OneFormField, ScalarField, SymTensorField, VectorField,
};
pub use grid::PeriodicGrid;
pub use jets::{MetricJet, SymJet, VectorJet};
pub use local::{lie_derivative_jet, lie_derivative_metric, Christoffel, LocalGeometry};
pub use source::{Analytic, Scaled, Shifted, SymJets, VectorJets, Zeta};
pub use spec::{random_smooth, FieldKind, FieldSpec, RandomFieldOptions};
