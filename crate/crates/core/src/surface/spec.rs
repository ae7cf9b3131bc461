//! Closed-form field specifications: trigonometric series with analytic
//! jets, their JSON form and seeded random generation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::{MetricField, SymTensorField, VectorField};
use super::grid::PeriodicGrid;
use super::jets::{sym_index, sym_len, SymJet, VectorJet};
use crate::algebra::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// One Fourier mode `re·cos(k·x) − im·sin(k·x)`, stored as `[k₁, …, k_n, re, im]`.
pub type ModeRow = Vec<f64>;

/// `Σ re·cos(k·x) − im·sin(k·x)` with value, gradient and Hessian.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigSeries {
    dim: usize,
    modes: Vec<(Vec<f64>, f64, f64)>,
}

impl TrigSeries {
    pub fn from_rows(dim: usize, rows: &[ModeRow]) -> Result<Self> {
        let mut modes = Vec::with_capacity(rows.len());
        for (r, row) in rows.iter().enumerate() {
            if row.len() != dim + 2 {
                return Err(Error::InvalidArgument(format!(
                    "mode {r}: expected {} entries (wavevector, re, im), found {}",
                    dim + 2,
                    row.len()
                )));
            }
            if row[..dim].iter().any(|k| k.fract() != 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "mode {r}: wavevector must be integer"
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "mode {r}: non-finite entry"
                )));
            }
            modes.push((row[..dim].to_vec(), row[dim], row[dim + 1]));
        }
        Ok(Self { dim, modes })
    }

    pub fn to_rows(&self) -> Vec<ModeRow> {
        self.modes
            .iter()
            .map(|(k, re, im)| {
                let mut row = k.clone();
                row.push(*re);
                row.push(*im);
                row
            })
            .collect()
    }

    /// `(f, ∂f, ∂∂f)` at `x`; the Hessian is row-major `n×n`.
    pub fn jet<T: Real>(&self, x: &[T]) -> (T, Vec<T>, Vec<T>) {
        let n = self.dim;
        let mut value = T::zero();
        let mut grad = vec![T::zero(); n];
        let mut hess = vec![T::zero(); n * n];
        for (k, re, im) in &self.modes {
            let phase = k
                .iter()
                .zip(x)
                .fold(T::zero(), |acc, (&ki, &xi)| acc + T::lit(ki) * xi);
            let (s, c) = phase.sin_cos();
            let (re, im) = (T::lit(*re), T::lit(*im));
            // f = re c − im s;  ∂f = −(re s + im c) k;  ∂∂f = −(re c − im s) k k
            let f = re * c - im * s;
            let fp = -(re * s + im * c);
            value = value + f;
            for a in 0..n {
                let ka = T::lit(k[a]);
                grad[a] = grad[a] + fp * ka;
                for b in 0..n {
                    hess[a * n + b] = hess[a * n + b] - f * ka * T::lit(k[b]);
                }
            }
        }
        (value, grad, hess)
    }

    pub fn value<T: Real>(&self, x: &[T]) -> T {
        self.modes.iter().fold(T::zero(), |acc, (k, re, im)| {
            let phase = k
                .iter()
                .zip(x)
                .fold(T::zero(), |p, (&ki, &xi)| p + T::lit(ki) * xi);
            let (s, c) = phase.sin_cos();
            acc + T::lit(*re) * c - T::lit(*im) * s
        })
    }

    /// Largest `|k_i|` over all modes.
    pub fn bandwidth(&self) -> usize {
        self.modes
            .iter()
            .flat_map(|(k, _, _)| k.iter())
            .fold(0.0f64, |m, k| m.max(k.abs())) as usize
    }
}

/// JSON field description, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    /// `e^{2φ}·base` with `φ` given by its modes (base defaults to the identity).
    ConformalMetric {
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<Vec<Vec<f64>>>,
        phi_modes: Vec<ModeRow>,
    },
    /// General metric given by its `i ≤ j` components; checked for positivity when sampled.
    Metric {
        dim: usize,
        components: Vec<Vec<ModeRow>>,
    },
    /// Symmetric 2-tensor by its `i ≤ j` components.
    Sym2 {
        dim: usize,
        components: Vec<Vec<ModeRow>>,
    },
    /// Vector field `X^i`.
    Vector {
        dim: usize,
        components: Vec<Vec<ModeRow>>,
    },
}

/// Parsed, validated form of a [`FieldSpec`].
#[derive(Clone, Debug)]
pub enum Field {
    Conformal {
        base: Matrix<f64>,
        phi: TrigSeries,
    },
    Sym {
        metric: bool,
        comps: Vec<TrigSeries>,
    },
    Vector {
        comps: Vec<TrigSeries>,
    },
}

impl FieldSpec {
    pub fn dim(&self) -> usize {
        match self {
            FieldSpec::ConformalMetric { dim, .. }
            | FieldSpec::Metric { dim, .. }
            | FieldSpec::Sym2 { dim, .. }
            | FieldSpec::Vector { dim, .. } => *dim,
        }
    }

    pub fn is_metric(&self) -> bool {
        matches!(
            self,
            FieldSpec::ConformalMetric { .. } | FieldSpec::Metric { .. }
        )
    }

    pub fn compile(&self) -> Result<Field> {
        let dim = self.dim();
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "field dimension must be positive".into(),
            ));
        }
        let series = |rows: &[Vec<ModeRow>], expected: usize| -> Result<Vec<TrigSeries>> {
            if rows.len() != expected {
                return Err(Error::InvalidArgument(format!(
                    "expected {expected} components, found {}",
                    rows.len()
                )));
            }
            rows.iter().map(|r| TrigSeries::from_rows(dim, r)).collect()
        };
        Ok(match self {
            FieldSpec::ConformalMetric {
                base, phi_modes, ..
            } => {
                let base = match base {
                    None => Matrix::identity(dim),
                    Some(rows) => {
                        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                            return Err(Error::InvalidArgument(format!(
                                "base must be {dim}×{dim}"
                            )));
                        }
                        let m = Matrix::from_rows(rows);
                        if m.sym_defect() > 0.0 {
                            return Err(Error::InvalidArgument("base must be symmetric".into()));
                        }
                        let min = m.symmetric_eigenvalues()[0];
                        if !(min > 1e-8) {
                            return Err(Error::NotPositiveDefinite {
                                min_eigenvalue: min,
                            });
                        }
                        m
                    }
                };
                Field::Conformal {
                    base,
                    phi: TrigSeries::from_rows(dim, phi_modes)?,
                }
            }
            FieldSpec::Metric { components, .. } => Field::Sym {
                metric: true,
                comps: series(components, sym_len(dim))?,
            },
            FieldSpec::Sym2 { components, .. } => Field::Sym {
                metric: false,
                comps: series(components, sym_len(dim))?,
            },
            FieldSpec::Vector { components, .. } => Field::Vector {
                comps: series(components, dim)?,
            },
        })
    }

    /// Metric of the form `e^{2φ}·I`.
    pub fn conformal(phi: &TrigSeries) -> Self {
        FieldSpec::ConformalMetric {
            dim: phi.dim,
            base: None,
            phi_modes: phi.to_rows(),
        }
    }

    /// Constant symmetric tensor.
    pub fn constant_sym2(value: &Matrix<f64>) -> Self {
        let n = value.dim();
        let mut components = vec![Vec::new(); sym_len(n)];
        for i in 0..n {
            for j in i..n {
                let mut row = vec![0.0; n + 2];
                row[n] = value[(i, j)];
                components[sym_index(n, i, j)] = vec![row];
            }
        }
        FieldSpec::Sym2 { dim: n, components }
    }

    /// `c₁(dx² − dy²) + c₂(2 dx dy)` on a surface.
    pub fn tt_tensor(c1: f64, c2: f64) -> Self {
        Self::constant_sym2(&Matrix::from_f64_rows(&[[c1, c2], [c2, -c1]]))
    }

    pub fn sample_metric<T: Real>(&self, grid: &PeriodicGrid) -> Result<MetricField<T>> {
        if !self.is_metric() {
            return Err(Error::InvalidArgument("field spec is not a metric".into()));
        }
        MetricField::new(self.sample_sym_unchecked(grid)?)
    }

    pub fn sample_sym2<T: Real>(&self, grid: &PeriodicGrid) -> Result<SymTensorField<T>> {
        self.sample_sym_unchecked(grid)
    }

    fn sample_sym_unchecked<T: Real>(&self, grid: &PeriodicGrid) -> Result<SymTensorField<T>> {
        self.check_grid(grid)?;
        let field = self.compile()?;
        if matches!(field, Field::Vector { .. }) {
            return Err(Error::InvalidArgument(
                "vector spec where a symmetric tensor was expected".into(),
            ));
        }
        let n = grid.dim();
        let mut comps = vec![vec![T::zero(); grid.len()]; sym_len(n)];
        for node in 0..grid.len() {
            let m = field.sym_value::<T>(&grid.point(node));
            for i in 0..n {
                for j in i..n {
                    comps[sym_index(n, i, j)][node] = m[(i, j)];
                }
            }
        }
        Ok(SymTensorField::new(*grid, comps))
    }

    pub fn sample_vector<T: Real>(&self, grid: &PeriodicGrid) -> Result<VectorField<T>> {
        self.check_grid(grid)?;
        let Field::Vector { comps } = self.compile()? else {
            return Err(Error::InvalidArgument(
                "field spec is not a vector field".into(),
            ));
        };
        let values = comps
            .iter()
            .map(|c| {
                (0..grid.len())
                    .map(|node| c.value(&grid.point::<T>(node)))
                    .collect()
            })
            .collect();
        Ok(VectorField::new(*grid, values))
    }

    fn check_grid(&self, grid: &PeriodicGrid) -> Result<()> {
        if grid.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: grid.dim(),
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl Field {
    pub fn dim(&self) -> usize {
        match self {
            Field::Conformal { base, .. } => base.dim(),
            Field::Sym { comps, .. } | Field::Vector { comps } => {
                comps.first().map_or(0, |c| c.dim)
            }
        }
    }

    pub fn sym_value<T: Real>(&self, x: &[T]) -> Matrix<T> {
        match self {
            Field::Conformal { base, phi } => {
                let s = (T::lit(2.0) * phi.value(x)).exp();
                Matrix::from_fn(base.dim(), |i, j| s * T::lit(base[(i, j)]))
            }
            Field::Sym { comps, .. } => {
                let n = x.len();
                Matrix::from_fn(n, |i, j| comps[sym_index(n, i, j)].value(x))
            }
            Field::Vector { .. } => panic!("vector field has no symmetric value"),
        }
    }

    /// Value, first and second derivatives of a symmetric field at `x`.
    pub fn sym_jet<T: Real>(&self, x: &[T]) -> Result<SymJet<T>> {
        let n = x.len();
        match self {
            Field::Conformal { base, phi } => {
                let (f, df, ddf) = phi.jet(x);
                let two = T::lit(2.0);
                let g = Matrix::from_fn(n, |i, j| (two * f).exp() * T::lit(base[(i, j)]));
                let d1 = (0..n).map(|k| g.scale(two * df[k])).collect();
                let d2 = (0..n * n)
                    .map(|kl| {
                        let (k, l) = (kl / n, kl % n);
                        g.scale(T::lit(4.0) * df[k] * df[l] + two * ddf[kl])
                    })
                    .collect();
                Ok(SymJet { value: g, d1, d2 })
            }
            Field::Sym { comps, .. } => {
                let jets: Vec<_> = comps.iter().map(|c| c.jet(x)).collect();
                let at = |f: &dyn Fn(&(T, Vec<T>, Vec<T>)) -> T| {
                    Matrix::from_fn(n, |i, j| f(&jets[sym_index(n, i, j)]))
                };
                Ok(SymJet {
                    value: at(&|j| j.0),
                    d1: (0..n).map(|k| at(&|j| j.1[k])).collect(),
                    d2: (0..n * n).map(|kl| at(&|j| j.2[kl])).collect(),
                })
            }
            Field::Vector { .. } => Err(Error::InvalidArgument(
                "vector field has no symmetric jet".into(),
            )),
        }
    }

    pub fn vector_jet<T: Real>(&self, x: &[T]) -> Result<VectorJet<T>> {
        let Field::Vector { comps } = self else {
            return Err(Error::InvalidArgument("not a vector field".into()));
        };
        let n = x.len();
        let jets: Vec<_> = comps.iter().map(|c| c.jet(x)).collect();
        Ok(VectorJet {
            value: jets.iter().map(|j| j.0).collect(),
            d1: Matrix::from_fn(n, |i, j| jets[i].1[j]),
            d2: (0..n)
                .map(|k| Matrix::from_fn(n, |i, j| jets[i].2[k * n + j]))
                .collect(),
        })
    }

    pub fn vector_value<T: Real>(&self, x: &[T]) -> Vec<T> {
        match self {
            Field::Vector { comps } => comps.iter().map(|c| c.value(x)).collect(),
            _ => panic!("not a vector field"),
        }
    }
}

/// Which tensor type [`random_smooth`] produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    /// `e^{2φ}·I`.
    ConformalMetric,
    /// Identity plus a random symmetric perturbation (not conformally flat).
    Metric,
    Sym2,
    Vector,
}

#[derive(Clone, Debug)]
pub struct RandomFieldOptions {
    pub dim: usize,
    /// Wavevector components range over `−max_mode..=max_mode`.
    pub max_mode: i32,
    pub amplitude: f64,
    /// Use only this many randomly chosen modes per series.
    pub mode_count: Option<usize>,
}

impl RandomFieldOptions {
    pub fn surface() -> Self {
        Self {
            dim: 2,
            max_mode: 4,
            amplitude: 1.0,
            mode_count: None,
        }
    }
}

fn half_space_modes(dim: usize, max_mode: i32) -> Vec<Vec<i32>> {
    let side = (2 * max_mode + 1) as usize;
    let mut out = Vec::new();
    for flat in 0..side.pow(dim as u32) {
        let mut rem = flat;
        let k: Vec<i32> = (0..dim)
            .map(|_| {
                let v = (rem % side) as i32 - max_mode;
                rem /= side;
                v
            })
            .collect();
        if k.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0) {
            out.push(k);
        }
    }
    out
}

fn random_series(
    rng: &mut ChaCha8Rng,
    decay: f64,
    opts: &RandomFieldOptions,
    constant: f64,
) -> TrigSeries {
    let mut modes = half_space_modes(opts.dim, opts.max_mode);
    if let Some(count) = opts.mode_count {
        modes.shuffle(rng);
        modes.truncate(count);
        modes.sort();
    }
    let mut rows = Vec::with_capacity(modes.len() + 1);
    if constant != 0.0 {
        let mut row = vec![0.0; opts.dim];
        row.extend([constant, 0.0]);
        rows.push(row);
    }
    for k in modes {
        let k2: f64 = k.iter().map(|&v| (v * v) as f64).sum();
        let w = opts.amplitude * (1.0 + k2).powf(-decay / 2.0);
        let re = rng.gen_range(-1.0..1.0) * w;
        let im = rng.gen_range(-1.0..1.0) * w;
        let mut row: Vec<f64> = k.iter().map(|&v| v as f64).collect();
        row.extend([re, im]);
        rows.push(row);
    }
    TrigSeries::from_rows(opts.dim, &rows).expect("generated modes are well formed")
}

/// Seeded random band-limited field; coefficients scale like
/// `amplitude·(1 + |k|²)^{−decay/2}`, so large `decay` leaves only the
/// constant part.
pub fn random_smooth(
    seed: u64,
    kind: FieldKind,
    decay: f64,
    opts: &RandomFieldOptions,
) -> Result<FieldSpec> {
    if !(decay > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "decay must exceed 1 (got {decay})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = opts.dim;
    let spec = match kind {
        FieldKind::ConformalMetric => FieldSpec::ConformalMetric {
            dim: n,
            base: None,
            phi_modes: random_series(&mut rng, decay, opts, 0.0).to_rows(),
        },
        FieldKind::Metric => {
            // I + small symmetric part; diagonal dominance keeps it positive
            let small = RandomFieldOptions {
                amplitude: opts.amplitude,
                ..opts.clone()
            };
            let components = (0..n)
                .flat_map(|i| (i..n).map(move |j| (i, j)))
                .map(|(i, j)| {
                    random_series(&mut rng, decay, &small, if i == j { 1.0 } else { 0.0 }).to_rows()
                })
                .collect();
            FieldSpec::Metric { dim: n, components }
        }
        FieldKind::Sym2 => {
            let components = (0..sym_len(n))
                .map(|_| {
                    let c = rng.gen_range(-1.0..1.0);
                    random_series(&mut rng, decay, opts, c).to_rows()
                })
                .collect();
            FieldSpec::Sym2 { dim: n, components }
        }
        FieldKind::Vector => {
            let components = (0..n)
                .map(|_| {
                    let c = rng.gen_range(-1.0..1.0);
                    random_series(&mut rng, decay, opts, c).to_rows()
                })
                .collect();
            FieldSpec::Vector { dim: n, components }
        }
    };
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_jet_matches_finite_differences() {
        let s = TrigSeries::from_rows(2, &[vec![1.0, 2.0, 0.3, -0.2], vec![0.0, 1.0, 0.5, 0.1]])
            .unwrap();
        let x = [0.7f64, -1.3];
        let (_, grad, hess) = s.jet(&x);
        let h = 1e-5;
        for a in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[a] += h;
            xm[a] -= h;
            assert!(((s.value(&xp) - s.value(&xm)) / (2.0 * h) - grad[a]).abs() < 1e-8);
            let (_, gp, _) = s.jet(&xp);
            let (_, gm, _) = s.jet(&xm);
            for b in 0..2 {
                assert!(((gp[b] - gm[b]) / (2.0 * h) - hess[a * 2 + b]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let spec = random_smooth(
            7,
            FieldKind::ConformalMetric,
            3.0,
            &RandomFieldOptions::surface(),
        )
        .unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<FieldSpec>(&text).unwrap(), spec);
        let h: FieldSpec = serde_json::from_str(
            r#"{"kind":"sym2","dim":2,"components":[[[0,0,1,0]],[],[[1,0,0,0.5]]]}"#,
        )
        .unwrap();
        assert!(h.compile().is_ok());
        assert!(serde_json::from_str::<FieldSpec>(
            r#"{"kind":"vector","dim":2,"components":[],"extra":1}"#
        )
        .is_err());
    }

    #[test]
    fn malformed_modes_are_rejected() {
        let bad = FieldSpec::ConformalMetric {
            dim: 2,
            base: None,
            phi_modes: vec![vec![1.0, 0.0, 0.3]],
        };
        assert!(bad.compile().is_err());
        let frac = FieldSpec::ConformalMetric {
            dim: 2,
            base: None,
            phi_modes: vec![vec![0.5, 0.0, 0.3, 0.0]],
        };
        assert!(frac.compile().is_err());
    }

    #[test]
    fn random_fields_are_deterministic() {
        let opts = RandomFieldOptions::surface();
        let a = random_smooth(42, FieldKind::Sym2, 2.5, &opts).unwrap();
        let b = random_smooth(42, FieldKind::Sym2, 2.5, &opts).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_ne!(a, random_smooth(43, FieldKind::Sym2, 2.5, &opts).unwrap());
    }

    #[test]
    fn huge_decay_gives_constant_field() {
        let opts = RandomFieldOptions::surface();
        let spec = random_smooth(1, FieldKind::Vector, 1e4, &opts).unwrap();
        let field = spec.compile().unwrap();
        let a = field.vector_value(&[0.3, 2.0]);
        let b = field.vector_value(&[5.1, 0.4]);
        assert_eq!(a, b);
        assert!(random_smooth(1, FieldKind::Vector, 1.0, &opts).is_err());
    }

    #[test]
    fn sampled_spectral_derivative_matches_analytic() {
        let grid = PeriodicGrid::new(2, 16).unwrap();
        let spec = random_smooth(5, FieldKind::Sym2, 2.0, &RandomFieldOptions::surface()).unwrap();
        let field = spec.compile().unwrap();
        let sampled = spec.sample_sym2::<f64>(&grid).unwrap();
        for axis in 0..2 {
            let d = sampled.derivative(axis);
            for node in (0..grid.len()).step_by(7) {
                let jet = field.sym_jet::<f64>(&grid.point(node)).unwrap();
                assert!((&d.at(node) - &jet.d1[axis]).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn conformal_jet_matches_finite_differences() {
        let spec = random_smooth(
            9,
            FieldKind::ConformalMetric,
            2.5,
            &RandomFieldOptions {
                amplitude: 0.2,
                ..RandomFieldOptions::surface()
            },
        )
        .unwrap();
        let field = spec.compile().unwrap();
        let x = [1.1, 0.4];
        let jet = field.sym_jet::<f64>(&x).unwrap();
        let h = 1e-5;
        for k in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            let jp = field.sym_jet::<f64>(&xp).unwrap();
            let jm = field.sym_jet::<f64>(&xm).unwrap();
            let fd = (&jp.value - &jm.value).scale(0.5 / h);
            assert!((&fd - &jet.d1[k]).max_abs() < 1e-8);
            for l in 0..2 {
                let fd2 = (&jp.d1[l] - &jm.d1[l]).scale(0.5 / h);
                assert!((&fd2 - &jet.d2[k * 2 + l]).max_abs() < 1e-7);
            }
        }
    }
}
