//! Orientation-preserving diffeomorphisms of the torus with closed-form
//! Jacobians, and pullback of tensor fields along them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::{ScalarField, SymTensorField, VectorField};
use super::grid::{Interpolant, PeriodicGrid};
use super::jets::sym_index;
use super::spec::Field;
use crate::algebra::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// One term `amp · sin(k·x + phase)` of a perturbation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationMode {
    pub k: Vec<i32>,
    pub amp: Vec<f64>,
    pub phase: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Diffeo {
    Identity {
        dim: usize,
    },
    Translation {
        shift: Vec<f64>,
    },
    /// `x ↦ A x` for an integer matrix with determinant 1.
    Shear {
        matrix: Vec<Vec<i64>>,
    },
    /// `x ↦ x + ε ψ(x)`, inverted by fixed-point iteration.
    Perturbation {
        epsilon: f64,
        modes: Vec<PerturbationMode>,
    },
}

const INVERSE_TOL: f64 = 1e-12;
const INVERSE_MAX_ITER: usize = 50;

impl Diffeo {
    pub fn dim(&self) -> usize {
        match self {
            Diffeo::Identity { dim } => *dim,
            Diffeo::Translation { shift } => shift.len(),
            Diffeo::Shear { matrix } => matrix.len(),
            Diffeo::Perturbation { modes, .. } => modes.first().map_or(0, |m| m.k.len()),
        }
    }

    /// The unimodular shear `[[1, 1], [0, 1]]`.
    pub fn standard_shear() -> Self {
        Diffeo::Shear {
            matrix: vec![vec![1, 1], vec![0, 1]],
        }
    }

    /// A few random low modes with `ε` small enough to keep `x + εψ` invertible.
    pub fn random_perturbation(seed: u64, dim: usize, epsilon: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes = (0..3)
            .map(|_| {
                let k: Vec<i32> = loop {
                    let k: Vec<i32> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
                    if k.iter().any(|&v| v != 0) {
                        break k;
                    }
                };
                PerturbationMode {
                    k,
                    amp: (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                    phase: rng.gen_range(0.0..std::f64::consts::TAU),
                }
            })
            .collect();
        Diffeo::Perturbation { epsilon, modes }
    }

    /// Structural checks plus orientation on the nodes of `grid`.
    pub fn validate(&self, grid: &PeriodicGrid) -> Result<()> {
        if self.dim() != grid.dim() {
            return Err(Error::DimensionMismatch {
                expected: grid.dim(),
                found: self.dim(),
            });
        }
        match self {
            Diffeo::Shear { matrix } => {
                let n = matrix.len();
                if matrix.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidArgument("shear matrix must be square".into()));
                }
                let det = Matrix::<f64>::from_fn(n, |i, j| matrix[i][j] as f64).det();
                if (det - 1.0).abs() > 1e-12 {
                    return Err(Error::NotOrientationPreserving { det });
                }
            }
            Diffeo::Perturbation { modes, .. } => {
                if modes
                    .iter()
                    .any(|m| m.k.len() != grid.dim() || m.amp.len() != grid.dim())
                {
                    return Err(Error::InvalidArgument(
                        "perturbation mode has wrong dimension".into(),
                    ));
                }
                for node in 0..grid.len() {
                    let det = self.jacobian::<f64>(&grid.point(node)).det();
                    if !(det > 0.0) {
                        return Err(Error::NotOrientationPreserving { det });
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn map<T: Real>(&self, x: &[T]) -> Vec<T> {
        match self {
            Diffeo::Identity { .. } => x.to_vec(),
            Diffeo::Translation { shift } => {
                x.iter().zip(shift).map(|(&a, &s)| a + T::lit(s)).collect()
            }
            Diffeo::Shear { matrix } => matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(x)
                        .fold(T::zero(), |acc, (&a, &xi)| acc + T::lit(a as f64) * xi)
                })
                .collect(),
            Diffeo::Perturbation { epsilon, modes } => {
                let mut y = x.to_vec();
                for m in modes {
                    let s = Self::phase(m, x).sin();
                    for (yi, &a) in y.iter_mut().zip(&m.amp) {
                        *yi = *yi + T::lit(*epsilon * a) * s;
                    }
                }
                y
            }
        }
    }

    fn phase<T: Real>(m: &PerturbationMode, x: &[T]) -> T {
        m.k.iter().zip(x).fold(T::lit(m.phase), |acc, (&k, &xi)| {
            acc + T::lit(k as f64) * xi
        })
    }

    /// `∂φ^i/∂x^j`.
    pub fn jacobian<T: Real>(&self, x: &[T]) -> Matrix<T> {
        let n = x.len();
        match self {
            Diffeo::Identity { .. } | Diffeo::Translation { .. } => Matrix::identity(n),
            Diffeo::Shear { matrix } => Matrix::from_fn(n, |i, j| T::lit(matrix[i][j] as f64)),
            Diffeo::Perturbation { epsilon, modes } => {
                let mut jac = Matrix::identity(n);
                for m in modes {
                    let c = Self::phase(m, x).cos();
                    for i in 0..n {
                        for j in 0..n {
                            jac[(i, j)] =
                                jac[(i, j)] + T::lit(*epsilon * m.amp[i] * m.k[j] as f64) * c;
                        }
                    }
                }
                jac
            }
        }
    }

    pub fn inverse_map<T: Real>(&self, y: &[T]) -> Result<Vec<T>> {
        match self {
            Diffeo::Identity { .. } => Ok(y.to_vec()),
            Diffeo::Translation { shift } => {
                Ok(y.iter().zip(shift).map(|(&a, &s)| a - T::lit(s)).collect())
            }
            Diffeo::Shear { matrix } => {
                let n = matrix.len();
                let a = Matrix::<T>::from_fn(n, |i, j| T::lit(matrix[i][j] as f64));
                Ok(a.inverse()?.mul_vec(y))
            }
            Diffeo::Perturbation { .. } => {
                // x = y − εψ(x)
                let mut x = y.to_vec();
                for _ in 0..INVERSE_MAX_ITER {
                    let fx = self.map(&x);
                    let mut step = T::zero();
                    for i in 0..x.len() {
                        let next = x[i] - (fx[i] - y[i]);
                        step = step.max((next - x[i]).abs());
                        x[i] = next;
                    }
                    if step < T::lit(INVERSE_TOL) {
                        return Ok(x);
                    }
                }
                Err(Error::InverseDidNotConverge {
                    iterations: INVERSE_MAX_ITER,
                })
            }
        }
    }
}

/// A symmetric 2-tensor field that can be evaluated off the grid.
pub trait SymSource<T: Real>: Sync {
    fn sym_at(&self, x: &[T]) -> Matrix<T>;
}

/// A vector field that can be evaluated off the grid.
pub trait VectorSource<T: Real>: Sync {
    fn vector_at(&self, x: &[T]) -> Vec<T>;
}

impl<T: Real> SymSource<T> for Field {
    fn sym_at(&self, x: &[T]) -> Matrix<T> {
        self.sym_value(x)
    }
}

impl<T: Real> VectorSource<T> for Field {
    fn vector_at(&self, x: &[T]) -> Vec<T> {
        self.vector_value(x)
    }
}

/// Trigonometric interpolant of a sampled symmetric field.
pub struct InterpolatedSym<T> {
    dim: usize,
    comps: Vec<Interpolant<T>>,
}

impl<T: Real> InterpolatedSym<T> {
    pub fn new(field: &SymTensorField<T>) -> Self {
        Self {
            dim: field.grid.dim(),
            comps: field.interpolants(),
        }
    }
}

impl<T: Real> SymSource<T> for InterpolatedSym<T> {
    fn sym_at(&self, x: &[T]) -> Matrix<T> {
        let n = self.dim;
        Matrix::from_fn(n, |i, j| self.comps[sym_index(n, i, j)].eval(x))
    }
}

/// Trigonometric interpolant of a sampled vector field.
pub struct InterpolatedVector<T> {
    comps: Vec<Interpolant<T>>,
}

impl<T: Real> InterpolatedVector<T> {
    pub fn new(field: &VectorField<T>) -> Self {
        Self {
            comps: field
                .comps
                .iter()
                .map(|c| field.grid.interpolator(c))
                .collect(),
        }
    }
}

impl<T: Real> VectorSource<T> for InterpolatedVector<T> {
    fn vector_at(&self, x: &[T]) -> Vec<T> {
        self.comps.iter().map(|c| c.eval(x)).collect()
    }
}

/// `(φ*T)_p = Dφ(p)ᵀ T(φ(p)) Dφ(p)`.
pub fn pullback_sym<T: Real>(
    phi: &Diffeo,
    source: &dyn SymSource<T>,
    grid: &PeriodicGrid,
) -> Result<SymTensorField<T>> {
    phi.validate(grid)?;
    if let Diffeo::Identity { .. } = phi {
        return Ok(SymTensorField::from_fn(*grid, |node| {
            source.sym_at(&grid.point(node))
        }));
    }
    Ok(SymTensorField::from_fn(*grid, |node| {
        let p = grid.point::<T>(node);
        let jac = phi.jacobian(&p);
        let t = source.sym_at(&phi.map(&p));
        &(&jac.transpose() * &t) * &jac
    }))
}

/// `(φ*X)_p = Dφ(p)⁻¹ X(φ(p))`.
pub fn pullback_vector<T: Real>(
    phi: &Diffeo,
    source: &dyn VectorSource<T>,
    grid: &PeriodicGrid,
) -> Result<VectorField<T>> {
    phi.validate(grid)?;
    let values: Vec<Vec<T>> = (0..grid.len())
        .into_par_iter()
        .map(|node| {
            let p = grid.point::<T>(node);
            let x = source.vector_at(&phi.map(&p));
            Ok(phi.jacobian(&p).inverse()?.mul_vec(&x))
        })
        .collect::<Result<_>>()?;
    let comps = (0..grid.dim())
        .map(|i| values.iter().map(|v| v[i]).collect())
        .collect();
    Ok(VectorField::new(*grid, comps))
}

pub fn pullback_scalar<T: Real>(
    phi: &Diffeo,
    source: &(dyn Fn(&[T]) -> T + Sync),
    grid: &PeriodicGrid,
) -> Result<ScalarField<T>> {
    phi.validate(grid)?;
    let values = (0..grid.len())
        .into_par_iter()
        .map(|node| source(&phi.map(&grid.point::<T>(node))))
        .collect();
    Ok(ScalarField::new(*grid, values))
}

/// Pullback of a sampled symmetric field, through trigonometric interpolation.
pub fn pullback<T: Real>(phi: &Diffeo, field: &SymTensorField<T>) -> Result<SymTensorField<T>> {
    if let Diffeo::Identity { .. } = phi {
        phi.validate(&field.grid)?;
        return Ok(field.clone());
    }
    pullback_sym(phi, &InterpolatedSym::new(field), &field.grid)
}
