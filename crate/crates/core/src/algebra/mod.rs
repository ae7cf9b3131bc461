//! Pointwise multilinear algebra.

pub mod forms;
pub mod matrix;
pub mod weil;

pub use forms::{trace_wedge, EndForm, ScalarForm};
pub use matrix::{pfaffian2, skew_part_g, sym_part_g, Matrix};
pub use weil::{make_weil, pfaffian_g, polarize_eval, weil_eval_forms, Monomial, WeilPolynomial};
