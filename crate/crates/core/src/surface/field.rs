//! Tensor fields sampled on a periodic grid.

use rayon::prelude::*;

use super::grid::{Interpolant, PeriodicGrid};
use super::jets::{sym_index, sym_len, SymJet, VectorJet};
use crate::algebra::{EndForm, Matrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField<T> {
    pub grid: PeriodicGrid,
    pub values: Vec<T>,
}

impl<T: Real> ScalarField<T> {
    pub fn new(grid: PeriodicGrid, values: Vec<T>) -> Self {
        assert_eq!(values.len(), grid.len(), "field does not match grid");
        Self { grid, values }
    }

    pub fn derivative(&self, axis: usize) -> Self {
        Self::new(self.grid, self.grid.derivative(&self.values, axis))
    }

    pub fn integrate(&self) -> T {
        self.grid.integrate(&self.values)
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

/// Components `X^i` of a vector field.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField<T> {
    pub grid: PeriodicGrid,
    pub comps: Vec<Vec<T>>,
}

/// Components `α_i` of a 1-form.
#[derive(Clone, Debug, PartialEq)]
pub struct OneFormField<T> {
    pub grid: PeriodicGrid,
    pub comps: Vec<Vec<T>>,
}

/// Symmetric 2-tensor stored by its `i ≤ j` components.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensorField<T> {
    pub grid: PeriodicGrid,
    pub comps: Vec<Vec<T>>,
}

/// Symmetric tensor field that is positive definite at every node.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricField<T> {
    inner: SymTensorField<T>,
}

/// End-valued form per node.
#[derive(Clone, Debug, PartialEq)]
pub struct EndFormField<T: Real> {
    pub grid: PeriodicGrid,
    pub forms: Vec<EndForm<T>>,
}

impl<T: Real> VectorField<T> {
    pub fn new(grid: PeriodicGrid, comps: Vec<Vec<T>>) -> Self {
        assert_eq!(comps.len(), grid.dim());
        assert!(comps.iter().all(|c| c.len() == grid.len()));
        Self { grid, comps }
    }

    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self::new(grid, vec![vec![T::zero(); grid.len()]; grid.dim()])
    }

    pub fn at(&self, node: usize) -> Vec<T> {
        self.comps.iter().map(|c| c[node]).collect()
    }

    /// Linear combination `a·self + b·other`.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Self {
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(x, y)| x.iter().zip(y).map(|(&u, &v)| a * u + b * v).collect())
            .collect();
        Self::new(self.grid, comps)
    }

    /// First and second spectral derivatives of every component.
    pub fn jets(&self) -> VectorJetTable<T> {
        let n = self.grid.dim();
        let d1: Vec<Vec<Vec<T>>> = self
            .comps
            .iter()
            .map(|c| (0..n).map(|a| self.grid.derivative(c, a)).collect())
            .collect();
        // d2[i][k][j] = ∂_k∂_j X^i
        let d2 = d1
            .iter()
            .map(|di| {
                (0..n)
                    .map(|k| (0..n).map(|j| self.grid.derivative(&di[j], k)).collect())
                    .collect()
            })
            .collect();
        VectorJetTable {
            grid: self.grid,
            n,
            value: self.comps.clone(),
            d1,
            d2,
        }
    }
}

pub struct VectorJetTable<T> {
    grid: PeriodicGrid,
    n: usize,
    value: Vec<Vec<T>>,
    d1: Vec<Vec<Vec<T>>>,
    d2: Vec<Vec<Vec<Vec<T>>>>,
}

impl<T: Real> VectorJetTable<T> {
    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    pub fn at(&self, node: usize) -> VectorJet<T> {
        let n = self.n;
        VectorJet {
            value: self.value.iter().map(|c| c[node]).collect(),
            d1: Matrix::from_fn(n, |i, j| self.d1[i][j][node]),
            d2: (0..n)
                .map(|k| Matrix::from_fn(n, |i, j| self.d2[i][k][j][node]))
                .collect(),
        }
    }
}

impl<T: Real> OneFormField<T> {
    pub fn new(grid: PeriodicGrid, comps: Vec<Vec<T>>) -> Self {
        assert_eq!(comps.len(), grid.dim());
        assert!(comps.iter().all(|c| c.len() == grid.len()));
        Self { grid, comps }
    }

    pub fn at(&self, node: usize) -> Vec<T> {
        self.comps.iter().map(|c| c[node]).collect()
    }
}

impl<T: Real> SymTensorField<T> {
    pub fn new(grid: PeriodicGrid, comps: Vec<Vec<T>>) -> Self {
        assert_eq!(comps.len(), sym_len(grid.dim()));
        assert!(comps.iter().all(|c| c.len() == grid.len()));
        Self { grid, comps }
    }

    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self::new(grid, vec![vec![T::zero(); grid.len()]; sym_len(grid.dim())])
    }

    /// Field with the given matrix at each node (symmetric part is used).
    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(usize) -> Matrix<T> + Sync) -> Self {
        let n = grid.dim();
        let mats: Vec<Matrix<T>> = (0..grid.len()).into_par_iter().map(&f).collect();
        let mut comps = vec![vec![T::zero(); grid.len()]; sym_len(n)];
        for (node, m) in mats.iter().enumerate() {
            for i in 0..n {
                for j in i..n {
                    comps[sym_index(n, i, j)][node] = T::lit(0.5) * (m[(i, j)] + m[(j, i)]);
                }
            }
        }
        Self::new(grid, comps)
    }

    pub fn at(&self, node: usize) -> Matrix<T> {
        let n = self.grid.dim();
        Matrix::from_fn(n, |i, j| self.comps[sym_index(n, i, j)][node])
    }

    pub fn derivative(&self, axis: usize) -> Self {
        Self::new(
            self.grid,
            self.comps
                .iter()
                .map(|c| self.grid.derivative(c, axis))
                .collect(),
        )
    }

    pub fn combine(&self, a: T, other: &Self, b: T) -> Self {
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(x, y)| x.iter().zip(y).map(|(&u, &v)| a * u + b * v).collect())
            .collect();
        Self::new(self.grid, comps)
    }

    pub fn scale(&self, s: T) -> Self {
        self.combine(s, self, T::zero())
    }

    /// Largest entry in absolute value over all nodes.
    pub fn max_abs(&self) -> T {
        self.comps
            .iter()
            .flatten()
            .fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Spectral jets; `second` also computes second derivatives.
    pub fn jets(&self, second: bool) -> SymJetTable<T> {
        let n = self.grid.dim();
        let d1: Vec<Self> = (0..n).map(|a| self.derivative(a)).collect();
        let mut d2 = Vec::new();
        if second {
            // mixed partials are computed once per pair so d2 is exactly symmetric in (k, l)
            let upper: Vec<Vec<Self>> = (0..n)
                .map(|k| (k..n).map(|l| d1[l].derivative(k)).collect())
                .collect();
            for k in 0..n {
                for l in 0..n {
                    let (a, b) = if k <= l { (k, l) } else { (l, k) };
                    d2.push(upper[a][b - a].clone());
                }
            }
        }
        SymJetTable {
            value: self.clone(),
            d1,
            d2,
        }
    }

    pub fn interpolants(&self) -> Vec<Interpolant<T>> {
        self.comps
            .iter()
            .map(|c| self.grid.interpolator(c))
            .collect()
    }
}

pub struct SymJetTable<T> {
    value: SymTensorField<T>,
    d1: Vec<SymTensorField<T>>,
    d2: Vec<SymTensorField<T>>,
}

impl<T: Real> SymJetTable<T> {
    pub fn at(&self, node: usize) -> SymJet<T> {
        SymJet {
            value: self.value.at(node),
            d1: self.d1.iter().map(|f| f.at(node)).collect(),
            d2: self.d2.iter().map(|f| f.at(node)).collect(),
        }
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.value.grid
    }
}

impl<T: Real> MetricField<T> {
    /// Checks positive definiteness (smallest eigenvalue above 1e−8) at every node.
    pub fn new(inner: SymTensorField<T>) -> Result<Self> {
        let n = inner.grid.dim();
        let threshold = T::lit(1e-8);
        for node in 0..inner.grid.len() {
            let g = inner.at(node);
            let min = if n == 1 {
                g[(0, 0)]
            } else {
                g.symmetric_eigenvalues()[0]
            };
            if !(min > threshold) {
                return Err(Error::NotPositiveDefinite {
                    min_eigenvalue: min.to_f64_lossy(),
                });
            }
        }
        Ok(Self { inner })
    }

    pub fn flat(grid: PeriodicGrid) -> Self {
        let n = grid.dim();
        Self {
            inner: SymTensorField::from_fn(grid, |_| Matrix::identity(n)),
        }
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.inner.grid
    }

    pub fn as_sym(&self) -> &SymTensorField<T> {
        &self.inner
    }

    pub fn at(&self, node: usize) -> Matrix<T> {
        self.inner.at(node)
    }

    /// `self + s·h`, re-validated.
    pub fn perturbed(&self, s: T, h: &SymTensorField<T>) -> Result<Self> {
        Self::new(self.inner.combine(T::one(), h, s))
    }

    pub fn jets(&self) -> SymJetTable<T> {
        self.inner.jets(true)
    }
}

impl<T: Real> EndFormField<T> {
    pub fn at(&self, node: usize) -> &EndForm<T> {
        &self.forms[node]
    }
}
