//! Local 2-jets of tensor fields at a point.

use crate::algebra::Matrix;
use crate::scalar::Real;

/// Number of independent components `i ≤ j` of a symmetric `n×n` tensor.
pub const fn sym_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Packed position of `(i, j)` (either order) among the `i ≤ j` components.
pub fn sym_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

/// Symmetric tensor `T_ij` with `∂_k T_ij` (`d1[k]`) and `∂_k∂_l T_ij`
/// (`d2[k·n + l]`). The second derivatives may be empty when not needed.
#[derive(Clone, Debug, PartialEq)]
pub struct SymJet<T: Real> {
    pub value: Matrix<T>,
    pub d1: Vec<Matrix<T>>,
    pub d2: Vec<Matrix<T>>,
}

/// Metrics and symmetric tensors share one jet layout.
pub type MetricJet<T> = SymJet<T>;

impl<T: Real> SymJet<T> {
    pub fn dim(&self) -> usize {
        self.value.dim()
    }

    pub fn zero(n: usize) -> Self {
        Self {
            value: Matrix::zeros(n),
            d1: vec![Matrix::zeros(n); n],
            d2: vec![Matrix::zeros(n); n * n],
        }
    }

    pub fn constant(value: Matrix<T>) -> Self {
        let n = value.dim();
        Self {
            value,
            d1: vec![Matrix::zeros(n); n],
            d2: vec![Matrix::zeros(n); n * n],
        }
    }

    /// `self + s·other`, componentwise on the jet.
    pub fn axpy(&self, s: T, other: &Self) -> Self {
        let comb = |a: &Matrix<T>, b: &Matrix<T>| {
            let mut m = a.clone();
            m.axpy(s, b);
            m
        };
        Self {
            value: comb(&self.value, &other.value),
            d1: self
                .d1
                .iter()
                .zip(&other.d1)
                .map(|(a, b)| comb(a, b))
                .collect(),
            d2: self
                .d2
                .iter()
                .zip(&other.d2)
                .map(|(a, b)| comb(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            value: self.value.scale(s),
            d1: self.d1.iter().map(|m| m.scale(s)).collect(),
            d2: self.d2.iter().map(|m| m.scale(s)).collect(),
        }
    }
}

/// Vector field `X^i` with `d1[(i, j)] = ∂_j X^i` and `d2[k][(i, j)] = ∂_k∂_j X^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorJet<T: Real> {
    pub value: Vec<T>,
    pub d1: Matrix<T>,
    pub d2: Vec<Matrix<T>>,
}

impl<T: Real> VectorJet<T> {
    pub fn dim(&self) -> usize {
        self.value.len()
    }

    pub fn zero(n: usize) -> Self {
        Self {
            value: vec![T::zero(); n],
            d1: Matrix::zeros(n),
            d2: vec![Matrix::zeros(n); n],
        }
    }

    pub fn constant(value: Vec<T>) -> Self {
        let n = value.len();
        Self {
            value,
            d1: Matrix::zeros(n),
            d2: vec![Matrix::zeros(n); n],
        }
    }

    pub fn axpy(&self, s: T, other: &Self) -> Self {
        let mut d1 = self.d1.clone();
        d1.axpy(s, &other.d1);
        Self {
            value: self
                .value
                .iter()
                .zip(&other.value)
                .map(|(&a, &b)| a + s * b)
                .collect(),
            d1,
            d2: self
                .d2
                .iter()
                .zip(&other.d2)
                .map(|(a, b)| {
                    let mut m = a.clone();
                    m.axpy(s, b);
                    m
                })
                .collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self::zero(self.dim()).axpy(s, self)
    }
}
