//! Small dense square matrices.
//!
//! Row `i` is the upper index and column `j` the lower index, so a matrix
//! `E` acts on components by `(E v)^i = E^i_j v^j`. Storage is inline for
//! dimensions up to six.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::Real;

type Storage<T> = SmallVec<[T; 36]>;

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Storage<T>,
}

impl<T: Real> std::fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut rows = f.debug_list();
        for i in 0..self.dim {
            rows.entry(&self.row(i));
        }
        rows.finish()
    }
}

impl<T: Real> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: SmallVec::from_elem(T::zero(), dim * dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Storage::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds from nested rows; panics on ragged input.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Self {
        let dim = rows.len();
        Self::from_fn(dim, |i, j| {
            let row = rows[i].as_ref();
            assert_eq!(row.len(), dim, "ragged matrix rows");
            row[j]
        })
    }

    pub fn from_f64_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let dim = rows.len();
        Self::from_fn(dim, |i, j| T::lit(rows[i].as_ref()[j]))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.dim..(i + 1) * self.dim].to_vec()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self[(i, i)])
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc = acc + self.data[i * n + j] * other.data[j * n + i];
            }
        }
        acc
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|x| *x = *x * s);
        out
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: T, other: &Self) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, &b) in self.data.iter_mut().zip(other.data.iter()) {
            *a = *a + s * b;
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self * other - other * self
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m + x * x).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Largest `|A_ij + A_ji|`.
    pub fn skew_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self[(i, j)] + self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn sym_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Determinant by partial-pivot elimination.
    pub fn det(&self) -> T {
        let n = self.dim;
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&r, &s| a[(r, col)].abs().partial_cmp(&a[(s, col)].abs()).unwrap())
                .unwrap();
            let pivot = a[(pivot_row, col)];
            if pivot == T::zero() {
                return T::zero();
            }
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                det = -det;
            }
            det = det * pivot;
            for r in col + 1..n {
                let factor = a[(r, col)] / pivot;
                for c in col..n {
                    let v = a[(col, c)];
                    a[(r, c)] = a[(r, c)] - factor * v;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, r: usize, s: usize) {
        for c in 0..self.dim {
            self.data.swap(r * self.dim + c, s * self.dim + c);
        }
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs().max(T::min_positive_value());
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&r, &s| a[(r, col)].abs().partial_cmp(&a[(s, col)].abs()).unwrap())
                .unwrap();
            let pivot = a[(pivot_row, col)];
            if !(pivot.abs() > scale * T::epsilon() * T::lit(16.0)) {
                return Err(Error::Singular {
                    pivot: pivot.to_f64_lossy(),
                });
            }
            a.swap_rows(pivot_row, col);
            inv.swap_rows(pivot_row, col);
            let p_inv = T::one() / a[(col, col)];
            for c in 0..n {
                a[(col, c)] = a[(col, c)] * p_inv;
                inv[(col, c)] = inv[(col, c)] * p_inv;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[(r, col)];
                if factor == T::zero() {
                    continue;
                }
                for c in 0..n {
                    let (ac, ic) = (a[(col, c)], inv[(col, c)]);
                    a[(r, c)] = a[(r, c)] - factor * ac;
                    inv[(r, c)] = inv[(r, c)] - factor * ic;
                }
            }
        }
        Ok(inv)
    }

    /// Eigenvalues of the symmetric part, ascending (cyclic Jacobi).
    pub fn symmetric_eigenvalues(&self) -> Vec<T> {
        let n = self.dim;
        let mut a = Self::from_fn(n, |i, j| T::lit(0.5) * (self[(i, j)] + self[(j, i)]));
        for _sweep in 0..64 {
            let mut off = T::zero();
            for i in 0..n {
                for j in i + 1..n {
                    off = off + a[(i, j)] * a[(i, j)];
                }
            }
            if off <= T::epsilon() * T::epsilon() * a.frobenius_norm().powi(2) {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq == T::zero() {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (T::lit(2.0) * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[(k, p)], a[(k, q)]);
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut eig: Vec<T> = (0..n).map(|i| a[(i, i)]).collect();
        eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
        eig
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).fold(T::zero(), |acc, j| acc + self[(i, j)] * v[j]))
            .collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.dim + j]
    }
}

impl<'a, T: Real> Mul<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        debug_assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl<T: Real> Mul for Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: Matrix<T>) -> Matrix<T> {
        &self * &rhs
    }
}

impl<'a, T: Real> Add<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<T: Real> Add for Matrix<T> {
    type Output = Matrix<T>;
    fn add(mut self, rhs: Matrix<T>) -> Matrix<T> {
        self += &rhs;
        self
    }
}

impl<'a, T: Real> Sub<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<T: Real> Sub for Matrix<T> {
    type Output = Matrix<T>;
    fn sub(mut self, rhs: Matrix<T>) -> Matrix<T> {
        self -= &rhs;
        self
    }
}

impl<T: Real> Neg for Matrix<T> {
    type Output = Matrix<T>;
    fn neg(mut self) -> Matrix<T> {
        self.data.iter_mut().for_each(|x| *x = -*x);
        self
    }
}

impl<'a, T: Real> AddAssign<&'a Matrix<T>> for Matrix<T> {
    fn add_assign(&mut self, rhs: &'a Matrix<T>) {
        debug_assert_eq!(self.dim, rhs.dim);
        for (a, &b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a = *a + b;
        }
    }
}

impl<'a, T: Real> SubAssign<&'a Matrix<T>> for Matrix<T> {
    fn sub_assign(&mut self, rhs: &'a Matrix<T>) {
        debug_assert_eq!(self.dim, rhs.dim);
        for (a, &b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a = *a - b;
        }
    }
}

/// Pfaffian of a skew-symmetric 2×2 matrix: `Pf([[0, a], [-a, 0]]) = a`.
pub fn pfaffian2<T: Real>(a: &Matrix<T>) -> Result<T> {
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: a.dim(),
        });
    }
    let defect = a.skew_defect();
    let scale = a.max_abs().max(T::one());
    if defect > T::lit(1e-12) * scale {
        return Err(Error::NotSkew {
            asymmetry: defect.to_f64_lossy(),
        });
    }
    Ok(T::lit(0.5) * (a[(0, 1)] - a[(1, 0)]))
}

/// `g`-skew part `½(A − g⁻¹Aᵀg)` of an endomorphism.
pub fn skew_part_g<T: Real>(g: &Matrix<T>, a: &Matrix<T>) -> Result<Matrix<T>> {
    let g_inv = g.inverse()?;
    Ok(skew_part_with_inverse(g, &g_inv, a))
}

/// `g`-symmetric part `½(A + g⁻¹Aᵀg)` of an endomorphism.
pub fn sym_part_g<T: Real>(g: &Matrix<T>, a: &Matrix<T>) -> Result<Matrix<T>> {
    let skew = skew_part_g(g, a)?;
    Ok(a - &skew)
}

/// Skew part when `g⁻¹` is already at hand (hot path).
pub fn skew_part_with_inverse<T: Real>(
    g: &Matrix<T>,
    g_inv: &Matrix<T>,
    a: &Matrix<T>,
) -> Matrix<T> {
    let adjoint = &(g_inv * &a.transpose()) * g;
    (a - &adjoint).scale(T::lit(0.5))
}
