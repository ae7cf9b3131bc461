//! Pointwise Riemannian geometry from the 2-jet of a metric.
//!
//! Index conventions: `Γ^i_jk` is stored at `[i][j][k]`; the curvature
//! End-valued 2-form has coefficient `R^i_{jkl}` at row `i`, column `j` on
//! `dx^k ∧ dx^l`, with
//! `R^i_{jkl} = ∂_kΓ^i_{jl} − ∂_lΓ^i_{jk} + Γ^i_{ak}Γ^a_{jl} − Γ^i_{al}Γ^a_{jk}`.
//! A 2-form `β` is turned into an endomorphism by `(g⁻¹β)^i_j = g^{ia}β_{ja}`.

use super::jets::{SymJet, VectorJet};
use crate::algebra::forms::ScalarForm;
use crate::algebra::matrix::skew_part_with_inverse;
use crate::algebra::{pfaffian_g, EndForm, Matrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `Γ^i_jk` for one point.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> Christoffel<T> {
    /// `Γ^i_jk = ½ g^{ia}(∂_k g_aj + ∂_j g_ak − ∂_a g_jk)`.
    pub fn new(g_inv: &Matrix<T>, dg: &[Matrix<T>]) -> Self {
        let n = g_inv.dim();
        let half = T::lit(0.5);
        let mut lowered = vec![T::zero(); n * n * n];
        for a in 0..n {
            for j in 0..n {
                for k in 0..n {
                    lowered[(a * n + j) * n + k] =
                        half * (dg[k][(a, j)] + dg[j][(a, k)] - dg[a][(j, k)]);
                }
            }
        }
        let mut data = vec![T::zero(); n * n * n];
        for i in 0..n {
            for a in 0..n {
                let gia = g_inv[(i, a)];
                for jk in 0..n * n {
                    data[i * n * n + jk] = data[i * n * n + jk] + gia * lowered[a * n * n + jk];
                }
            }
        }
        Self { n, data }
    }

    pub fn from_raw(n: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), n * n * n);
        Self { n, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> T {
        self.data[(i * self.n + j) * self.n + k]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// Largest `|Γ^i_jk − Γ^i_kj|`.
    pub fn symmetry_defect(&self) -> T {
        let n = self.n;
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max((self.get(i, j, k) - self.get(i, k, j)).abs());
                }
            }
        }
        worst
    }

    /// Christoffel symbols as the matrix-valued 1-form `Γ^i_{jk} dx^k`.
    pub fn connection_matrix(&self, k: usize) -> Matrix<T> {
        Matrix::from_fn(self.n, |i, j| self.get(i, j, k))
    }
}

/// Metric, inverse, volume density and connection at one point.
#[derive(Clone, Debug)]
pub struct LocalGeometry<T: Real> {
    pub n: usize,
    pub g: Matrix<T>,
    pub g_inv: Matrix<T>,
    pub sqrt_det: T,
    pub dg: Vec<Matrix<T>>,
    pub gamma: Christoffel<T>,
    /// `∂_l Γ^i_jk` at `[l][i][j][k]`, present when second derivatives were supplied.
    dgamma: Option<Vec<T>>,
}

impl<T: Real> LocalGeometry<T> {
    pub fn new(jet: &SymJet<T>) -> Result<Self> {
        let n = jet.dim();
        let g = jet.value.clone();
        let det = g.det();
        if !(det > T::zero()) {
            let min = g.symmetric_eigenvalues()[0];
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: min.to_f64_lossy(),
            });
        }
        let g_inv = g.inverse()?;
        let gamma = Christoffel::new(&g_inv, &jet.d1);
        let dgamma = (jet.d2.len() == n * n).then(|| {
            let half = T::lit(0.5);
            let mut out = vec![T::zero(); n * n * n * n];
            for l in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        // ∂_lΓ^i_jk = g^{ia}(½(∂_l∂_k g_aj + ∂_l∂_j g_ak − ∂_l∂_a g_jk) − ∂_l g_ab Γ^b_jk)
                        let mut inner = vec![T::zero(); n];
                        for (a, slot) in inner.iter_mut().enumerate() {
                            let second = half
                                * (jet.d2[l * n + k][(a, j)] + jet.d2[l * n + j][(a, k)]
                                    - jet.d2[l * n + a][(j, k)]);
                            let mut corr = T::zero();
                            for b in 0..n {
                                corr = corr + jet.d1[l][(a, b)] * gamma.get(b, j, k);
                            }
                            *slot = second - corr;
                        }
                        for i in 0..n {
                            let mut v = T::zero();
                            for (a, &x) in inner.iter().enumerate() {
                                v = v + g_inv[(i, a)] * x;
                            }
                            out[((l * n + i) * n + j) * n + k] = v;
                        }
                    }
                }
            }
            out
        });
        Ok(Self {
            n,
            g,
            g_inv,
            sqrt_det: det.sqrt(),
            dg: jet.d1.clone(),
            gamma,
            dgamma,
        })
    }

    #[inline]
    pub fn dgamma(&self, l: usize, i: usize, j: usize, k: usize) -> T {
        let n = self.n;
        self.dgamma
            .as_ref()
            .expect("second derivatives of the metric are required")[((l * n + i) * n + j) * n + k]
    }

    pub fn has_second_derivatives(&self) -> bool {
        self.dgamma.is_some()
    }

    /// `R^i_{jkl}` at `[i][j][k][l]`.
    pub fn riemann(&self) -> Vec<T> {
        let n = self.n;
        let mut r = vec![T::zero(); n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut v = self.dgamma(k, i, j, l) - self.dgamma(l, i, j, k);
                        for a in 0..n {
                            v = v + self.gamma.get(i, a, k) * self.gamma.get(a, j, l)
                                - self.gamma.get(i, a, l) * self.gamma.get(a, j, k);
                        }
                        r[((i * n + j) * n + k) * n + l] = v;
                    }
                }
            }
        }
        r
    }

    /// The curvature `Ω^g` as an End-valued 2-form on the base.
    pub fn curvature_form(&self) -> EndForm<T> {
        let n = self.n;
        let r = self.riemann();
        EndForm::from_fn(2, n, n, |kl| {
            Matrix::from_fn(n, |i, j| r[((i * n + j) * n + kl[0]) * n + kl[1]])
        })
    }

    /// `S = g^{jl} R^i_{jil}`.
    pub fn scalar_curvature(&self) -> T {
        let n = self.n;
        let r = self.riemann();
        let mut s = T::zero();
        for j in 0..n {
            for l in 0..n {
                let mut ric = T::zero();
                for i in 0..n {
                    ric = ric + r[((i * n + j) * n + i) * n + l];
                }
                s = s + self.g_inv[(j, l)] * ric;
            }
        }
        s
    }

    /// Largest `|∇_k g_ij|`; zero for the Levi-Civita connection.
    pub fn metric_compatibility_defect(&self) -> T {
        let n = self.n;
        let mut worst = T::zero();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut v = self.dg[k][(i, j)];
                    for a in 0..n {
                        v = v
                            - self.gamma.get(a, k, i) * self.g[(a, j)]
                            - self.gamma.get(a, k, j) * self.g[(i, a)];
                    }
                    worst = worst.max(v.abs());
                }
            }
        }
        worst
    }

    /// `∇_k h_ib` at `[i][b][k]`.
    fn covariant_derivative_sym(&self, h: &SymJet<T>) -> Vec<T> {
        let n = self.n;
        let mut out = vec![T::zero(); n * n * n];
        for i in 0..n {
            for b in 0..n {
                for k in 0..n {
                    let mut v = h.d1[k][(i, b)];
                    for a in 0..n {
                        v = v
                            - h.value[(a, b)] * self.gamma.get(a, i, k)
                            - h.value[(i, a)] * self.gamma.get(a, b, k);
                    }
                    out[(i * n + b) * n + k] = v;
                }
            }
        }
        out
    }

    /// `∇̇h`: the End-valued 1-form with coefficient on `dx^i` given by
    /// `(j, k) ↦ g^{jb} ∇_k h_ib`.
    pub fn nabla_dot(&self, h: &SymJet<T>) -> EndForm<T> {
        let n = self.n;
        let cov = self.covariant_derivative_sym(h);
        EndForm::from_fn(1, n, n, |idx| {
            let i = idx[0];
            Matrix::from_fn(n, |j, k| {
                let mut v = T::zero();
                for b in 0..n {
                    v = v + self.g_inv[(j, b)] * cov[(i * n + b) * n + k];
                }
                v
            })
        })
    }

    /// `(δh)_i = g^{jb} ∇_j h_ib`.
    pub fn divergence(&self, h: &SymJet<T>) -> Vec<T> {
        let n = self.n;
        let cov = self.covariant_derivative_sym(h);
        (0..n)
            .map(|i| {
                let mut v = T::zero();
                for j in 0..n {
                    for b in 0..n {
                        v = v + self.g_inv[(j, b)] * cov[(i * n + b) * n + j];
                    }
                }
                v
            })
            .collect()
    }

    /// `(∇X)^i_j = ∂_j X^i + Γ^i_jk X^k`.
    pub fn nabla_vector(&self, x: &VectorJet<T>) -> Matrix<T> {
        let n = self.n;
        Matrix::from_fn(n, |i, j| {
            let mut v = x.d1[(i, j)];
            for k in 0..n {
                v = v + self.gamma.get(i, j, k) * x.value[k];
            }
            v
        })
    }

    /// `½(A − g⁻¹Aᵀg)`.
    pub fn skew(&self, a: &Matrix<T>) -> Matrix<T> {
        skew_part_with_inverse(&self.g, &self.g_inv, a)
    }

    pub fn sym(&self, a: &Matrix<T>) -> Matrix<T> {
        a - &self.skew(a)
    }

    /// Skew part of every coefficient of an End-valued form.
    pub fn skew_form(&self, f: &EndForm<T>) -> EndForm<T> {
        f.map(|m| self.skew(m))
    }

    pub fn flat(&self, v: &[T]) -> Vec<T> {
        self.g.mul_vec(v)
    }

    pub fn sharp(&self, alpha: &[T]) -> Vec<T> {
        self.g_inv.mul_vec(alpha)
    }

    /// `tr(g⁻¹h)`.
    pub fn trace_g(&self, h: &Matrix<T>) -> T {
        self.g_inv.trace_of_product(h)
    }

    /// `∂_k tr(g⁻¹h)`.
    pub fn d_trace_g(&self, h: &SymJet<T>) -> Vec<T> {
        let gih = &self.g_inv * &h.value;
        (0..self.n)
            .map(|k| {
                let a = &self.g_inv * &self.dg[k];
                self.g_inv.trace_of_product(&h.d1[k]) - a.trace_of_product(&gih)
            })
            .collect()
    }

    /// Endomorphism `(g⁻¹β)^i_j = g^{ia}β_{ja}` of a 2-form with coefficient matrix `β_{ij}`.
    pub fn raise_two_form(&self, beta: &Matrix<T>) -> Matrix<T> {
        &self.g_inv * &beta.transpose()
    }

    /// Coefficient matrix of `dX^♭`, `(i, j) ↦ ∂_i X^♭_j − ∂_j X^♭_i`.
    pub fn d_flat(&self, x: &VectorJet<T>) -> Matrix<T> {
        let n = self.n;
        let dflat = Matrix::from_fn(n, |i, j| {
            let mut v = T::zero();
            for a in 0..n {
                v = v + self.dg[i][(j, a)] * x.value[a] + self.g[(j, a)] * x.d1[(a, i)];
            }
            v
        });
        &dflat - &dflat.transpose()
    }

    /// The volume form `√det g dx¹∧…∧dxⁿ` as its coefficient matrix (surfaces only).
    pub fn volume_matrix(&self) -> Result<Matrix<T>> {
        self.require_surface()?;
        Ok(Matrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => self.sqrt_det,
            (1, 0) => -self.sqrt_det,
            _ => T::zero(),
        }))
    }

    /// `g⁻¹vol_g`; a `g`-skew complex structure on a surface.
    pub fn raised_volume(&self) -> Result<Matrix<T>> {
        Ok(self.raise_two_form(&self.volume_matrix()?))
    }

    /// Hodge star of a 1-form on a surface, `(⋆α)_j = √det g ε_{ij} g^{ik} α_k`
    /// (so `⋆dx = dy` for the flat metric).
    pub fn hodge_star(&self, alpha: &[T]) -> Result<Vec<T>> {
        self.require_surface()?;
        let up = self.sharp(alpha);
        Ok(vec![-self.sqrt_det * up[1], self.sqrt_det * up[0]])
    }

    /// The Pfaffian of each coefficient of a `g`-skew End-valued form.
    pub fn pfaffian_form(&self, f: &EndForm<T>) -> Result<ScalarForm<T>> {
        self.require_surface()?;
        let coeffs = f
            .coeffs()
            .iter()
            .map(|m| pfaffian_g(&self.g, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(ScalarForm::from_fn(f.degree(), f.space_dim(), |idx| {
            coeffs[crate::algebra::forms::rank(f.space_dim(), idx)]
        }))
    }

    /// Closed form of the surface curvature, `Ω^g = −(S/2)(g⁻¹vol_g) ⊗ vol_g`.
    pub fn curvature_form_closed(&self, scalar_curvature: T) -> Result<EndForm<T>> {
        let j = self.raised_volume()?;
        let coeff = j.scale(-T::lit(0.5) * scalar_curvature * self.sqrt_det);
        Ok(EndForm::from_fn(2, 2, 2, |_| coeff.clone()))
    }

    fn require_surface(&self) -> Result<()> {
        if self.n != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.n,
            });
        }
        Ok(())
    }
}

/// `(L_X g)_ij = X^a ∂_a g_ij + g_aj ∂_i X^a + g_ia ∂_j X^a`.
pub fn lie_derivative_metric<T: Real>(g: &SymJet<T>, x: &VectorJet<T>) -> Matrix<T> {
    let n = g.dim();
    let mut out = &(&x.d1.transpose() * &g.value) + &(&g.value * &x.d1);
    for a in 0..n {
        out.axpy(x.value[a], &g.d1[a]);
    }
    out
}

/// `L_X g` with its first derivatives; needs the second derivatives of `g`.
pub fn lie_derivative_jet<T: Real>(g: &SymJet<T>, x: &VectorJet<T>) -> SymJet<T> {
    let n = g.dim();
    assert_eq!(
        g.d2.len(),
        n * n,
        "second derivatives of the metric are required"
    );
    let dx = &x.d1;
    let d1 = (0..n)
        .map(|k| {
            let ddx = &x.d2[k];
            let mut m = &(&(&ddx.transpose() * &g.value) + &(&g.value * ddx))
                + &(&(&dx.transpose() * &g.d1[k]) + &(&g.d1[k] * dx));
            for a in 0..n {
                m.axpy(dx[(a, k)], &g.d1[a]);
                m.axpy(x.value[a], &g.d2[k * n + a]);
            }
            m
        })
        .collect();
    SymJet {
        value: lie_derivative_metric(g, x),
        d1,
        d2: Vec::new(),
    }
}
