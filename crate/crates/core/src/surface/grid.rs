//! Uniform periodic grids on `[0, 2π)ⁿ` with Fourier differentiation and
//! trapezoid quadrature.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicGrid {
    dim: usize,
    size: usize,
}

impl PeriodicGrid {
    pub fn new(dim: usize, size: usize) -> Result<Self> {
        if size % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "grid size must be even (got {size})"
            )));
        }
        if size < 4 {
            return Err(Error::InvalidArgument(format!(
                "grid size must be at least 4 (got {size})"
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "grid dimension must be positive".into(),
            ));
        }
        Ok(Self { dim, size })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Total number of nodes `Nⁿ`.
    pub fn len(&self) -> usize {
        self.size.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing<T: Real>(&self) -> T {
        T::lit(2.0) * T::pi() / T::from_usize_lossy(self.size)
    }

    /// Measure of one cell, `(2π/N)ⁿ`.
    pub fn cell_volume<T: Real>(&self) -> T {
        self.spacing::<T>().powi(self.dim as i32)
    }

    /// Stride of `axis` in the flat (row-major, last axis fastest) layout.
    pub fn stride(&self, axis: usize) -> usize {
        self.size.pow((self.dim - 1 - axis) as u32)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            idx[a] = flat % self.size;
            flat /= self.size;
        }
        idx
    }

    pub fn point<T: Real>(&self, flat: usize) -> Vec<T> {
        let h = self.spacing::<T>();
        self.multi_index(flat)
            .into_iter()
            .map(|i| h * T::from_usize_lossy(i))
            .collect()
    }

    /// `∫ f dx` over the torus by the trapezoid rule.
    pub fn integrate<T: Real>(&self, values: &[T]) -> T {
        debug_assert_eq!(values.len(), self.len());
        pairwise_sum(values) * self.cell_volume()
    }

    /// Signed wavenumber of FFT bin `b`, with the Nyquist bin mapped to 0.
    fn wavenumber(&self, b: usize) -> i64 {
        let n = self.size as i64;
        let b = b as i64;
        if 2 * b == n {
            0
        } else if 2 * b < n {
            b
        } else {
            b - n
        }
    }

    /// Fourier derivative along `axis`, exact for trigonometric polynomials
    /// of degree below `N/2`.
    pub fn derivative<T: Real>(&self, values: &[T], axis: usize) -> Vec<T> {
        assert_eq!(values.len(), self.len(), "field does not match grid");
        assert!(axis < self.dim, "axis out of range");
        let mut planner = FftPlanner::<T>::new();
        let forward: Arc<dyn Fft<T>> = planner.plan_fft_forward(self.size);
        let inverse: Arc<dyn Fft<T>> = planner.plan_fft_inverse(self.size);
        let n = self.size;
        let stride = self.stride(axis);
        let norm = T::one() / T::from_usize_lossy(n);
        let mut out = vec![T::zero(); values.len()];
        let mut line = vec![Complex::new(T::zero(), T::zero()); n];
        let mut scratch = vec![
            Complex::new(T::zero(), T::zero());
            forward
                .get_inplace_scratch_len()
                .max(inverse.get_inplace_scratch_len())
        ];
        for start in 0..values.len() {
            // visit each line once, from its node with axis coordinate 0
            if (start / stride) % n != 0 {
                continue;
            }
            for (j, c) in line.iter_mut().enumerate() {
                *c = Complex::new(values[start + j * stride], T::zero());
            }
            forward.process_with_scratch(&mut line, &mut scratch);
            for (b, c) in line.iter_mut().enumerate() {
                let k = T::lit(self.wavenumber(b) as f64);
                *c = Complex::new(-c.im * k, c.re * k);
            }
            inverse.process_with_scratch(&mut line, &mut scratch);
            for (j, c) in line.iter().enumerate() {
                out[start + j * stride] = c.re * norm;
            }
        }
        out
    }

    /// Value at an arbitrary point of the trigonometric interpolant of the
    /// samples (Nyquist modes split symmetrically).
    pub fn interpolate<T: Real>(&self, values: &[T], x: &[T]) -> T {
        self.interpolator(values).eval(x)
    }

    pub fn interpolator<T: Real>(&self, values: &[T]) -> Interpolant<T> {
        Interpolant::new(*self, values)
    }
}

/// Fourier coefficients of a sampled field, for repeated off-grid evaluation.
#[derive(Clone, Debug)]
pub struct Interpolant<T> {
    grid: PeriodicGrid,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Interpolant<T> {
    fn new(grid: PeriodicGrid, values: &[T]) -> Self {
        assert_eq!(values.len(), grid.len());
        let n = grid.size;
        let mut planner = FftPlanner::<T>::new();
        let forward = planner.plan_fft_forward(n);
        let mut coeffs: Vec<Complex<T>> =
            values.iter().map(|&v| Complex::new(v, T::zero())).collect();
        let mut line = vec![Complex::new(T::zero(), T::zero()); n];
        for axis in 0..grid.dim {
            let stride = grid.stride(axis);
            for start in 0..coeffs.len() {
                if (start / stride) % n != 0 {
                    continue;
                }
                for (j, c) in line.iter_mut().enumerate() {
                    *c = coeffs[start + j * stride];
                }
                forward.process(&mut line);
                for (j, c) in line.iter().enumerate() {
                    coeffs[start + j * stride] = *c;
                }
            }
        }
        let norm = T::one() / T::from_usize_lossy(grid.len());
        coeffs.iter_mut().for_each(|c| *c = *c * norm);
        Self { grid, coeffs }
    }

    pub fn eval(&self, x: &[T]) -> T {
        let n = self.grid.size;
        let dim = self.grid.dim;
        // per-axis phase tables e^{i k x_a}, with weight ½ at Nyquist
        let tables: Vec<Vec<Complex<T>>> = (0..dim)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let half = 2 * b == n;
                        if half {
                            let c = (T::lit((n / 2) as f64) * x[a]).cos();
                            Complex::new(c, T::zero())
                        } else {
                            let k = T::lit(self.grid.wavenumber(b) as f64);
                            Complex::new((k * x[a]).cos(), (k * x[a]).sin())
                        }
                    })
                    .collect()
            })
            .collect();
        let mut acc = Complex::new(T::zero(), T::zero());
        for (flat, c) in self.coeffs.iter().enumerate() {
            let mut phase = Complex::new(T::one(), T::zero());
            let mut rem = flat;
            for a in (0..dim).rev() {
                phase = phase * tables[a][rem % n];
                rem /= n;
            }
            acc = acc + *c * phase;
        }
        acc.re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(grid: &PeriodicGrid, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        (0..grid.len()).map(|i| f(&grid.point::<f64>(i))).collect()
    }

    #[test]
    fn rejects_odd_and_small_sizes() {
        assert!(PeriodicGrid::new(2, 63)
            .unwrap_err()
            .to_string()
            .contains("grid size must be even"));
        assert!(PeriodicGrid::new(2, 2).is_err());
    }

    #[test]
    fn derivative_of_sine_is_cosine() {
        let grid = PeriodicGrid::new(2, 16).unwrap();
        let d = grid.derivative(&sample(&grid, |p| p[0].sin()), 0);
        let expected = sample(&grid, |p| p[0].cos());
        for (a, b) in d.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
        let dy = grid.derivative(&sample(&grid, |p| (2.0 * p[1]).cos()), 1);
        let expected = sample(&grid, |p| -2.0 * (2.0 * p[1]).sin());
        for (a, b) in dy.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let grid = PeriodicGrid::new(2, 16).unwrap();
        let d = grid.derivative(&vec![3.5f64; grid.len()], 1);
        assert!(d.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn derivative_converges_under_refinement() {
        let f = |p: &[f64]| p[0].sin().exp();
        let df = |p: &[f64]| p[0].cos() * p[0].sin().exp();
        for n in [64, 128] {
            let grid = PeriodicGrid::new(2, n).unwrap();
            let d = grid.derivative(&sample(&grid, f), 0);
            let exact = sample(&grid, df);
            let err = d
                .iter()
                .zip(&exact)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err < 1e-12, "N={n}: {err}");
        }
    }

    #[test]
    fn integration_examples() {
        let grid = PeriodicGrid::new(2, 32).unwrap();
        let four_pi2 = 4.0 * std::f64::consts::PI.powi(2);
        assert!((grid.integrate(&vec![1.0; grid.len()]) - four_pi2).abs() < 1e-12);
        assert!(grid.integrate(&sample(&grid, |p| p[0].sin())).abs() < 1e-12);
        let coarse = PeriodicGrid::new(2, 64).unwrap();
        let fine = PeriodicGrid::new(2, 128).unwrap();
        let f = |p: &[f64]| (2.0 * p[0].sin()).exp();
        let a = coarse.integrate(&sample(&coarse, f));
        let b = fine.integrate(&sample(&fine, f));
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn interpolation_is_exact_for_band_limited() {
        let grid = PeriodicGrid::new(2, 16).unwrap();
        let f = |p: &[f64]| (p[0] + 2.0 * p[1]).sin() + 0.5 * (3.0 * p[1]).cos();
        let interp = grid.interpolator(&sample(&grid, f));
        for x in [[0.1, 0.2], [3.3, 5.9], [6.0, 1.234]] {
            assert!((interp.eval(&x) - f(&x)).abs() < 1e-12);
        }
    }
}
