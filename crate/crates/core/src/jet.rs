//! The universal Levi-Civita connection on the 1-jet bundle of metrics, in
//! jet coordinates `(x^h, y_ij, y_ij,k)`.
//!
//! Tangent vectors carry symmetric `dy`, `dy1[k]` blocks; the coordinate
//! basis vector `∂/∂y_ij` (`i < j`) therefore has both `(i, j)` and `(j, i)`
//! entries equal to one.

use rand::Rng;

use crate::algebra::forms::binomial;
use crate::algebra::matrix::skew_part_with_inverse;
use crate::algebra::{weil_eval_forms, EndForm, Matrix, ScalarForm, WeilPolynomial};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::surface::jets::{sym_index, sym_len, SymJet, VectorJet};
use crate::surface::local::{Christoffel, LocalGeometry};

/// Dimension `n + n(n+1)/2 + n²(n+1)/2` of the jet space over an `n`-manifold.
pub const fn jet_dim(n: usize) -> usize {
    n + sym_len(n) + n * sym_len(n)
}

const HOLONOMIC_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct JetPoint<T: Real> {
    pub x: Vec<T>,
    pub y: Matrix<T>,
    /// `y1[k][(i, j)] = y_ij,k`.
    pub y1: Vec<Matrix<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JetTangent<T: Real> {
    pub dx: Vec<T>,
    pub dy: Matrix<T>,
    pub dy1: Vec<Matrix<T>>,
}

fn symmetric_check<T: Real>(m: &Matrix<T>) -> Result<()> {
    let d = m.sym_defect();
    if d > T::lit(1e-12) * (T::one() + m.max_abs()) {
        return Err(Error::InvalidArgument(format!(
            "jet block is not symmetric (defect {})",
            d.to_f64_lossy()
        )));
    }
    Ok(())
}

fn random_sym<T: Real, R: Rng>(rng: &mut R, n: usize, scale: f64) -> Matrix<T> {
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = T::lit(rng.gen_range(-scale..scale));
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

impl<T: Real> JetPoint<T> {
    pub fn new(x: Vec<T>, y: Matrix<T>, y1: Vec<Matrix<T>>) -> Result<Self> {
        let n = x.len();
        if y.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: y.dim(),
            });
        }
        if y1.len() != n || y1.iter().any(|m| m.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: y1.len(),
            });
        }
        symmetric_check(&y)?;
        for m in &y1 {
            symmetric_check(m)?;
        }
        let min = y.symmetric_eigenvalues()[0];
        if !(min > T::zero()) {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: min.to_f64_lossy(),
            });
        }
        Ok(Self { x, y, y1 })
    }

    /// `j¹g(x)` from the jet of a metric at `x`.
    pub fn holonomic(x: Vec<T>, g: &SymJet<T>) -> Result<Self> {
        Self::new(x, g.value.clone(), g.d1.clone())
    }

    /// Random point with `y` near the identity.
    pub fn random<R: Rng>(rng: &mut R, n: usize) -> Self {
        let x = (0..n)
            .map(|_| T::lit(rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let y = &Matrix::identity(n) + &random_sym(rng, n, 0.3 / n as f64);
        let y1 = (0..n).map(|_| random_sym(rng, n, 1.0)).collect();
        Self::new(x, y, y1).expect("diagonally dominant by construction")
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Flat coordinates: `x`, then `y_ij` (`i ≤ j`), then `y_ij,k` grouped by `k`.
    pub fn coords(&self) -> Vec<T> {
        pack(&self.x, &self.y, &self.y1)
    }

    /// Largest deviation from `j¹g(x)`.
    pub fn holonomic_deviation(&self, g: &SymJet<T>) -> T {
        let mut d = (&self.y - &g.value).max_abs();
        for (a, b) in self.y1.iter().zip(&g.d1) {
            d = d.max((a - b).max_abs());
        }
        d
    }
}

fn pack<T: Real>(x: &[T], y: &Matrix<T>, y1: &[Matrix<T>]) -> Vec<T> {
    let n = x.len();
    let mut out = Vec::with_capacity(jet_dim(n));
    out.extend_from_slice(x);
    for block in std::iter::once(y).chain(y1) {
        for i in 0..n {
            for j in i..n {
                out.push(block[(i, j)]);
            }
        }
    }
    out
}

impl<T: Real> JetTangent<T> {
    pub fn zero(n: usize) -> Self {
        Self {
            dx: vec![T::zero(); n],
            dy: Matrix::zeros(n),
            dy1: vec![Matrix::zeros(n); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.dx.len()
    }

    /// Components in the coordinate basis, in the order of [`JetPoint::coords`].
    pub fn coords(&self) -> Vec<T> {
        pack(&self.dx, &self.dy, &self.dy1)
    }

    pub fn from_coords(n: usize, c: &[T]) -> Result<Self> {
        if c.len() != jet_dim(n) {
            return Err(Error::DimensionMismatch {
                expected: jet_dim(n),
                found: c.len(),
            });
        }
        let s = sym_len(n);
        let block = |offset: usize| Matrix::from_fn(n, |i, j| c[offset + sym_index(n, i, j)]);
        Ok(Self {
            dx: c[..n].to_vec(),
            dy: block(n),
            dy1: (0..n).map(|k| block(n + s + k * s)).collect(),
        })
    }

    /// The `a`-th coordinate basis vector.
    pub fn basis(n: usize, a: usize) -> Self {
        let mut c = vec![T::zero(); jet_dim(n)];
        c[a] = T::one();
        Self::from_coords(n, &c).expect("index within jet dimension")
    }

    pub fn random<R: Rng>(rng: &mut R, n: usize) -> Self {
        Self {
            dx: (0..n).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect(),
            dy: random_sym(rng, n, 1.0),
            dy1: (0..n).map(|_| random_sym(rng, n, 1.0)).collect(),
        }
    }

    pub fn axpy(&self, s: T, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.dx.iter_mut().zip(&other.dx) {
            *a = *a + s * *b;
        }
        out.dy.axpy(s, &other.dy);
        for (a, b) in out.dy1.iter_mut().zip(&other.dy1) {
            a.axpy(s, b);
        }
        out
    }
}

/// Tangent `(j¹g)_* u` at `j¹g(x)`.
pub fn push_forward<T: Real>(g: &SymJet<T>, u: &[T]) -> JetTangent<T> {
    let n = g.dim();
    assert_eq!(
        g.d2.len(),
        n * n,
        "pushing forward needs second derivatives"
    );
    let mut t = JetTangent::zero(n);
    t.dx = u.to_vec();
    for (k, &uk) in u.iter().enumerate() {
        t.dy.axpy(uk, &g.d1[k]);
        for l in 0..n {
            t.dy1[l].axpy(uk, &g.d2[k * n + l]);
        }
    }
    t
}

/// `X̄⁽¹⁾`: the natural lift of `X` to metrics, prolonged to 1-jets.
pub fn prolong_vector<T: Real>(p: &JetPoint<T>, x: &VectorJet<T>) -> JetTangent<T> {
    let n = p.dim();
    let dxm = &x.d1;
    // dy = −(DXᵀy + yDX)
    let a = &dxm.transpose() * &p.y;
    let dy = -(&a + &a.transpose());
    let dy1 = (0..n)
        .map(|k| {
            // D_k(dy) with ∂_k∂_iX^a = d2[k][(a, i)]
            let second = &x.d2[k].transpose() * &p.y;
            let first = &dxm.transpose() * &p.y1[k];
            let mut m = -(&(&second + &second.transpose()) + &(&first + &first.transpose()));
            for l in 0..n {
                m.axpy(-dxm[(l, k)], &p.y1[l]);
            }
            m
        })
        .collect();
    JetTangent {
        dx: x.value.clone(),
        dy,
        dy1,
    }
}

/// `H⁽¹⁾`: the prolonged vertical field of `h`.
pub fn vertical_lift<T: Real>(h: &SymJet<T>) -> JetTangent<T> {
    JetTangent {
        dx: vec![T::zero(); h.dim()],
        dy: h.value.clone(),
        dy1: h.d1.clone(),
    }
}

/// `ξ̄ = y_ij ∂/∂y_ij + y_ij,k ∂/∂y_ij,k`.
pub fn xi_bar<T: Real>(p: &JetPoint<T>) -> JetTangent<T> {
    JetTangent {
        dx: vec![T::zero(); p.dim()],
        dy: p.y.clone(),
        dy1: p.y1.clone(),
    }
}

/// Connection data of the universal connection at one jet point.
#[derive(Clone, Debug)]
pub struct JetGeometry<T: Real> {
    pub point: JetPoint<T>,
    pub y_inv: Matrix<T>,
    pub gamma: Christoffel<T>,
}

impl<T: Real> JetGeometry<T> {
    pub fn new(point: JetPoint<T>) -> Result<Self> {
        let y_inv = point.y.inverse()?;
        let gamma = Christoffel::new(&y_inv, &point.y1);
        Ok(Self {
            point,
            y_inv,
            gamma,
        })
    }

    pub fn dim(&self) -> usize {
        self.point.dim()
    }

    /// Exact differential `dΓ^i_jk(v)`, using `d(y⁻¹) = −y⁻¹ dy y⁻¹`.
    pub fn dgamma(&self, v: &JetTangent<T>) -> Christoffel<T> {
        let n = self.dim();
        let linear = Christoffel::new(&self.y_inv, &v.dy1);
        let b = &self.y_inv * &v.dy;
        let mut data = linear.as_slice().to_vec();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut c = T::zero();
                    for a in 0..n {
                        c = c + b[(i, a)] * self.gamma.get(a, j, k);
                    }
                    data[(i * n + j) * n + k] = data[(i * n + j) * n + k] - c;
                }
            }
        }
        Christoffel::from_raw(n, data)
    }

    /// Contact form `ϑ(v) = y⁻¹(dy − y1_k dx^k)`.
    pub fn vartheta(&self, v: &JetTangent<T>) -> Matrix<T> {
        let mut b = v.dy.clone();
        for (k, &d) in v.dx.iter().enumerate() {
            b.axpy(-d, &self.point.y1[k]);
        }
        &self.y_inv * &b
    }

    fn omega_hor_parts(
        &self,
        dv: &Christoffel<T>,
        dw: &Christoffel<T>,
        v: &[T],
        w: &[T],
    ) -> Matrix<T> {
        let n = self.dim();
        let g = &self.gamma;
        Matrix::from_fn(n, |i, j| {
            let mut acc = T::zero();
            for k in 0..n {
                acc = acc + dv.get(i, j, k) * w[k] - dw.get(i, j, k) * v[k];
            }
            for s in 0..n {
                for r in 0..n {
                    let wedge = v[s] * w[r] - w[s] * v[r];
                    if wedge != T::zero() {
                        let mut gg = T::zero();
                        for a in 0..n {
                            gg = gg + g.get(i, a, s) * g.get(a, j, r);
                        }
                        acc = acc + gg * wedge;
                    }
                }
            }
            acc
        })
    }

    /// `Ω_hor(v, w) = (dΓ^i_jk ∧ dx^k + Γ^i_as Γ^a_jr dx^s∧dx^r)(v, w)`.
    pub fn omega_hor(&self, v: &JetTangent<T>, w: &JetTangent<T>) -> Matrix<T> {
        self.omega_hor_parts(&self.dgamma(v), &self.dgamma(w), &v.dx, &w.dx)
    }

    fn omega_parts(&self, hor: &Matrix<T>, tv: &Matrix<T>, tw: &Matrix<T>) -> Matrix<T> {
        let mut out = skew_part_with_inverse(&self.point.y, &self.y_inv, hor);
        out.axpy(-T::lit(0.25), &tv.commutator(tw));
        out
    }

    /// Connection form `ω(v) = Γ_k v^k + ½ϑ(v)`.
    pub fn connection(&self, v: &JetTangent<T>) -> Matrix<T> {
        let n = self.dim();
        let mut m = Matrix::from_fn(n, |i, j| {
            (0..n).fold(T::zero(), |acc, k| acc + self.gamma.get(i, j, k) * v.dx[k])
        });
        m.axpy(T::lit(0.5), &self.vartheta(v));
        m
    }

    /// Curvature `Ω(v, w) = dω(v, w) + [ω(v), ω(w)] = (Ω_hor)_A(v, w) − ¼[ϑ(v), ϑ(w)]`.
    pub fn omega(&self, v: &JetTangent<T>, w: &JetTangent<T>) -> Matrix<T> {
        let hor = self.omega_hor(v, w);
        self.omega_parts(&hor, &self.vartheta(v), &self.vartheta(w))
    }

    fn basis_data(&self) -> Vec<(JetTangent<T>, Christoffel<T>, Matrix<T>)> {
        let n = self.dim();
        (0..jet_dim(n))
            .map(|a| {
                let e = JetTangent::basis(n, a);
                let dg = self.dgamma(&e);
                let th = self.vartheta(&e);
                (e, dg, th)
            })
            .collect()
    }

    pub fn vartheta_form(&self) -> EndForm<T> {
        let n = self.dim();
        EndForm::from_fn(1, jet_dim(n), n, |idx| {
            self.vartheta(&JetTangent::basis(n, idx[0]))
        })
    }

    pub fn omega_hor_form(&self) -> EndForm<T> {
        let n = self.dim();
        let data = self.basis_data();
        EndForm::from_fn(2, jet_dim(n), n, |idx| {
            let (a, b) = (&data[idx[0]], &data[idx[1]]);
            self.omega_hor_parts(&a.1, &b.1, &a.0.dx, &b.0.dx)
        })
    }

    /// `Ω` as an End-valued 2-form on the whole jet space.
    pub fn omega_form(&self) -> EndForm<T> {
        let n = self.dim();
        let data = self.basis_data();
        EndForm::from_fn(2, jet_dim(n), n, |idx| {
            let (a, b) = (&data[idx[0]], &data[idx[1]]);
            let hor = self.omega_hor_parts(&a.1, &b.1, &a.0.dx, &b.0.dx);
            self.omega_parts(&hor, &a.2, &b.2)
        })
    }

    /// `∇X` built from the jet-coordinate connection at `x(p)`.
    pub fn nabla_vector(&self, x: &VectorJet<T>) -> Matrix<T> {
        let n = self.dim();
        Matrix::from_fn(n, |i, j| {
            let mut v = x.d1[(i, j)];
            for k in 0..n {
                v = v + self.gamma.get(i, j, k) * x.value[k];
            }
            v
        })
    }

    /// `ω(X̂ + tξ̂) = ∇X + ½ϑ(X̄⁽¹⁾) + t(−½ id + ½ϑ(ξ̄))`.
    pub fn omega_equivariant(&self, x: &VectorJet<T>, t: T) -> Matrix<T> {
        let n = self.dim();
        let half = T::lit(0.5);
        let mut a = self.nabla_vector(x);
        a.axpy(half, &self.vartheta(&prolong_vector(&self.point, x)));
        let mut scaling = Matrix::identity(n).scale(-half);
        scaling.axpy(half, &self.vartheta(&xi_bar(&self.point)));
        a.axpy(t, &scaling);
        a
    }
}

/// `(j¹g)*Ω` as an End-valued 2-form on the base.
pub fn pullback_omega<T: Real>(g: &SymJet<T>, x: &[T]) -> Result<EndForm<T>> {
    let n = g.dim();
    let geo = JetGeometry::new(JetPoint::holonomic(x.to_vec(), g)?)?;
    let pushed: Vec<JetTangent<T>> = (0..n)
        .map(|a| {
            let mut e = vec![T::zero(); n];
            e[a] = T::one();
            push_forward(g, &e)
        })
        .collect();
    Ok(EndForm::from_fn(2, n, n, |idx| {
        geo.omega(&pushed[idx[0]], &pushed[idx[1]])
    }))
}

/// Both sides of `ι_{H⁽¹⁾}Ω = (∇̇h)_A − ½(g⁻¹h∘ϑ)_A`, contracted with `v`.
pub fn ihone_check<T: Real>(
    g: &SymJet<T>,
    h: &SymJet<T>,
    p: &JetPoint<T>,
    v: &JetTangent<T>,
) -> Result<(Matrix<T>, Matrix<T>)> {
    let deviation = p.holonomic_deviation(g);
    if !(deviation <= T::lit(HOLONOMIC_TOL) * (T::one() + g.value.max_abs())) {
        return Err(Error::OffHolonomic {
            deviation: deviation.to_f64_lossy(),
        });
    }
    let geo = JetGeometry::new(p.clone())?;
    let lhs = geo.omega(&vertical_lift(h), v);
    let base = LocalGeometry::new(g)?;
    let nd = base.nabla_dot(h).evaluate(&[&v.dx])?;
    let gh_theta = &(&geo.y_inv * &h.value) * &geo.vartheta(v);
    let rhs = &base.skew(&nd) - &base.skew(&gh_theta).scale(T::lit(0.5));
    Ok((lhs, rhs))
}

/// The equivariant characteristic form `f(Ω − A, …, Ω − A)` split by form
/// degree; `components[i]` is `C(k,i)(−1)^i f(A,…,A, Ω,…,Ω)` with `i` copies
/// of `A`, a form of degree `2(k − i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantForm<T: Real> {
    pub moment: Matrix<T>,
    pub components: Vec<ScalarForm<T>>,
}

impl<T: Real> EquivariantForm<T> {
    /// Component of the given form degree, if any.
    pub fn of_degree(&self, degree: usize) -> Option<&ScalarForm<T>> {
        self.components.iter().find(|c| c.degree() == degree)
    }
}

/// Evaluates `f(Ω_G)(X, t)` at `j¹g(x)`, with `Ω` pulled back from the jet
/// space and `A = ω(X̂ + tξ̂)` computed from the lifts.
pub fn equivariant_weil<T: Real>(
    f: &WeilPolynomial<T>,
    g: &SymJet<T>,
    x_field: &VectorJet<T>,
    t: T,
    x: &[T],
) -> Result<EquivariantForm<T>> {
    let n = g.dim();
    let omega = pullback_omega(g, x)?;
    let geo = JetGeometry::new(JetPoint::holonomic(x.to_vec(), g)?)?;
    let a = EndForm::constant(geo.omega_equivariant(x_field, t), n);
    let k = f.degree();
    let components = (0..=k)
        .map(|i| {
            let degree = 2 * (k - i);
            if degree > n {
                return Ok(ScalarForm::zero(degree, n));
            }
            let mut args: Vec<&EndForm<T>> = vec![&a; i];
            args.extend(std::iter::repeat(&omega).take(k - i));
            let sign = if i % 2 == 0 { T::one() } else { -T::one() };
            Ok(weil_eval_forms(f, &args)?.scale(sign * T::from_usize_lossy(binomial(k, i))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EquivariantForm {
        moment: a.coeffs()[0].clone(),
        components,
    })
}
