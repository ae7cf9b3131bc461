//! The named identity checks. Each one reduces a scenario to a single
//! non-negative residual that is compared against a tolerance.

use metriforms::algebra::{make_weil, Matrix};
use metriforms::functionals::{
    dsigma_residual, invariance_residual, moment_identity_residual, mu6, mu_general, mu_simple,
    mu_trace, sigma6, sigma_general, sigma_p1_2d, sigma_simple, wp_identity_residual, Dim6Weil,
    GroupAction,
};
use metriforms::jet::{equivariant_weil, ihone_check, pullback_omega, JetPoint, JetTangent};
use metriforms::scalar::rel_diff;
use metriforms::surface::spec::{Field, TrigSeries};
use metriforms::surface::{
    random_smooth, Analytic, Diffeo, FieldKind, FieldSpec, LocalGeometry, PeriodicGrid,
    RandomFieldOptions,
};
use metriforms::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::scenario::Prepared;

/// Random draws per pointwise check.
pub const POINT_DRAWS: usize = 25;
/// Step for the finite-difference checks.
pub const FD_STEP: f64 = 1e-4;
/// Points per axis for the six-torus integrals.
pub const DIM6_GRID: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    P2Identity,
    PfaffianLemma,
    MusicalLemma,
    Contraction,
    Pullback,
    Equivariant,
    SigmaTriple,
    Degeneracy,
    MuDual,
    MuFlat,
    Moment,
    Closed,
    Invariance,
    Wp,
    Dim6Pointwise,
    Dim6Integral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Algebra,
    Jet,
    Sigma,
    Wp,
    Dim6,
}

impl Suite {
    pub fn contains(self, check: CheckName) -> bool {
        self == Suite::All || check.suite() == self
    }
}

impl CheckName {
    pub const ALL: [CheckName; 16] = [
        CheckName::P2Identity,
        CheckName::PfaffianLemma,
        CheckName::MusicalLemma,
        CheckName::Contraction,
        CheckName::Pullback,
        CheckName::Equivariant,
        CheckName::SigmaTriple,
        CheckName::Degeneracy,
        CheckName::MuDual,
        CheckName::MuFlat,
        CheckName::Moment,
        CheckName::Closed,
        CheckName::Invariance,
        CheckName::Wp,
        CheckName::Dim6Pointwise,
        CheckName::Dim6Integral,
    ];

    pub fn all() -> Vec<CheckName> {
        Self::ALL.to_vec()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::P2Identity => "p2_identity",
            CheckName::PfaffianLemma => "pfaffian_lemma",
            CheckName::MusicalLemma => "musical_lemma",
            CheckName::Contraction => "contraction",
            CheckName::Pullback => "pullback",
            CheckName::Equivariant => "equivariant",
            CheckName::SigmaTriple => "sigma_triple",
            CheckName::Degeneracy => "degeneracy",
            CheckName::MuDual => "mu_dual",
            CheckName::MuFlat => "mu_flat",
            CheckName::Moment => "moment",
            CheckName::Closed => "closed",
            CheckName::Invariance => "invariance",
            CheckName::Wp => "wp",
            CheckName::Dim6Pointwise => "dim6_pointwise",
            CheckName::Dim6Integral => "dim6_integral",
        }
    }

    pub fn suite(self) -> Suite {
        use CheckName::*;
        match self {
            P2Identity | PfaffianLemma | MusicalLemma => Suite::Algebra,
            Contraction | Pullback | Equivariant => Suite::Jet,
            SigmaTriple | Degeneracy | MuDual | MuFlat | Moment | Closed | Invariance => {
                Suite::Sigma
            }
            Wp => Suite::Wp,
            Dim6Pointwise | Dim6Integral => Suite::Dim6,
        }
    }

    pub fn default_tolerance(self) -> f64 {
        use CheckName::*;
        match self {
            P2Identity => 1e-10,
            PfaffianLemma | MusicalLemma | Contraction | Pullback => 1e-8,
            Equivariant => 1e-12,
            SigmaTriple => 1e-7,
            Degeneracy => 1e-9,
            MuDual => 1e-8,
            MuFlat => 1e-9,
            Moment | Closed => 1e-5,
            Invariance => 1e-6,
            Wp => 1e-8,
            Dim6Pointwise => 1e-8,
            Dim6Integral => 1e-4,
        }
    }

    /// What the residual measures.
    pub fn description(self) -> &'static str {
        use CheckName::*;
        match self {
            P2Identity => "relative gap between p2 and the coefficient of det(I + A/2π) on random so(6) matrices",
            PfaffianLemma => "max-node |Pf_g((∇̇h)_A) + ½⋆(δh − d tr h)|",
            MusicalLemma => "max-node |(∇X)_A − ½g⁻¹dX♭|",
            Contraction => "max |ι_{H⁽¹⁾}Ω − (∇̇h)_A + ½(g⁻¹h∘ϑ)_A| over random jet tangents",
            Pullback => "max |(j¹g)*Ω − Ω^g| over random points",
            Equivariant => "t-independence and term-by-term match of p1(Ω_G)(X,t)",
            SigmaTriple => "max relative gap between the three σ formulas",
            Degeneracy => "|σ_g(g,h)| / max|h|",
            MuDual => "|mu_trace − mu_simple|",
            MuFlat => "|μ(X,t)| on the flat metric",
            Moment => "|σ_g(ζ(X,t), h) − s·D_hμ(X,t)|",
            Closed => "|dσ(h,k,l)| by central differences",
            Invariance => "max relative change of σ under translation, shear, perturbation and scaling",
            Wp => "max-node |σ_density + (S/2π²)·wp_density|; certifies the pointwise algebraic core only",
            Dim6Pointwise => "max relative gap between the dim-6 displays and the polarized integrands",
            Dim6Integral => "max relative gap between generic and display integrals on a coarse six-torus",
        }
    }

    pub fn run(self, p: &Prepared) -> Result<f64> {
        use CheckName::*;
        match self {
            P2Identity => p2_identity(p.seed, 100),
            PfaffianLemma => pfaffian_lemma(p),
            MusicalLemma => musical_lemma(p),
            Contraction => contraction(p),
            Pullback => pullback(p),
            Equivariant => equivariant(p),
            SigmaTriple => sigma_triple(p),
            Degeneracy => degeneracy(p),
            MuDual => mu_dual(p),
            MuFlat => mu_flat(p),
            Moment => moment(p),
            Closed => closed(p),
            Invariance => invariance(p),
            Wp => wp(p),
            Dim6Pointwise => dim6_pointwise(p.seed, 10),
            Dim6Integral => dim6_integral(p.seed, DIM6_GRID),
        }
    }
}

fn sym(field: &Field, grid: PeriodicGrid) -> Result<Analytic> {
    Analytic::sym(field.clone(), grid)
}

fn vector(field: &Field, grid: PeriodicGrid) -> Result<Analytic> {
    Analytic::vector(field.clone(), grid)
}

/// `max` that keeps a NaN instead of discarding it.
trait Worst {
    fn worst(self, other: f64) -> f64;
}

impl Worst for f64 {
    fn worst(self, other: f64) -> f64 {
        if self.is_nan() || other.is_nan() {
            f64::NAN
        } else {
            self.max(other)
        }
    }
}

fn max_over_nodes(grid: PeriodicGrid, f: impl Fn(&[f64]) -> Result<f64>) -> Result<f64> {
    let mut worst = 0.0f64;
    for node in 0..grid.len() {
        worst = worst.worst(f(&grid.point::<f64>(node))?);
    }
    Ok(worst)
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect()
}

/// Random skew matrix with entries in `[-1, 1]`.
pub fn random_skew(rng: &mut ChaCha8Rng, n: usize) -> Matrix<f64> {
    let a = Matrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
    (&a - &a.transpose()).scale(0.5)
}

/// Coefficient of `s⁴` in `det(I + sA/2π)`, by exact interpolation of the
/// degree-6 polynomial at seven nodes.
pub fn p2_from_determinant(a: &Matrix<f64>) -> f64 {
    let n = a.dim();
    let b = a.scale(1.0 / std::f64::consts::TAU);
    let nodes: Vec<f64> = (0..=n).map(|i| i as f64 - n as f64 / 2.0).collect();
    let values: Vec<f64> = nodes
        .iter()
        .map(|&s| {
            let mut m = Matrix::identity(n);
            m.axpy(s, &b);
            m.det()
        })
        .collect();
    // Newton divided differences, then expand to monomial coefficients
    let mut coef = values.clone();
    for j in 1..=n {
        for i in (j..=n).rev() {
            coef[i] = (coef[i] - coef[i - 1]) / (nodes[i] - nodes[i - j]);
        }
    }
    let mut poly = vec![0.0; n + 1];
    for i in (0..=n).rev() {
        // poly = poly·(s − nodes[i]) + coef[i]
        let mut next = vec![0.0; n + 1];
        for d in 0..n {
            next[d + 1] += poly[d];
            next[d] -= nodes[i] * poly[d];
        }
        next[0] += coef[i];
        poly = next;
    }
    poly[4]
}

pub fn p2_identity(seed: u64, draws: usize) -> Result<f64> {
    let p2 = make_weil::<f64>("p2")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let a = random_skew(&mut rng, 6);
        worst = worst.worst(rel_diff(p2.evaluate(&a)?, p2_from_determinant(&a), 1e-300));
    }
    Ok(worst)
}

fn pfaffian_lemma(p: &Prepared) -> Result<f64> {
    max_over_nodes(p.grid, |x| {
        let geo = LocalGeometry::new(&p.g.sym_jet(x)?)?;
        let h = p.h.sym_jet(x)?;
        let pf = geo.pfaffian_form(&geo.skew_form(&geo.nabla_dot(&h)))?;
        let u: Vec<f64> = geo
            .divergence(&h)
            .iter()
            .zip(geo.d_trace_g(&h))
            .map(|(a, b)| a - b)
            .collect();
        let star = geo.hodge_star(&u)?;
        Ok((0..2)
            .map(|i| (pf.coeffs()[i] + 0.5 * star[i]).abs())
            .fold(0.0, f64::max))
    })
}

fn musical_lemma(p: &Prepared) -> Result<f64> {
    max_over_nodes(p.grid, |x| {
        let geo = LocalGeometry::new(&p.g.sym_jet(x)?)?;
        let xj = p.x.vector_jet(x)?;
        let lhs = geo.skew(&geo.nabla_vector(&xj));
        let rhs = geo.raise_two_form(&geo.d_flat(&xj)).scale(0.5);
        Ok((&lhs - &rhs).max_abs())
    })
}

/// Contraction of the universal curvature with a horizontal lift, at random holonomic points of the scenario metric.
fn contraction(p: &Prepared) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let n = p.grid.dim();
    let mut worst = 0.0f64;
    for _ in 0..POINT_DRAWS {
        let x = random_point(&mut rng, n);
        let g = p.g.sym_jet(&x)?;
        let h = p.h.sym_jet(&x)?;
        let point = JetPoint::holonomic(x, &g)?;
        let v = JetTangent::random(&mut rng, n);
        let (lhs, rhs) = ihone_check(&g, &h, &point, &v)?;
        worst = worst.worst((&lhs - &rhs).max_abs());
    }
    Ok(worst)
}

fn pullback(p: &Prepared) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed ^ 0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..POINT_DRAWS {
        let x = random_point(&mut rng, p.grid.dim());
        let g = p.g.sym_jet(&x)?;
        let pulled = pullback_omega(&g, &x)?;
        let base = LocalGeometry::new(&g)?.curvature_form();
        worst = worst.worst(pulled.sub(&base).max_abs());
    }
    Ok(worst)
}

/// `p1(Ω − A)` is independent of `t` and splits as
/// `−(1/8π²)[tr(Ω∧Ω) − 2tr(AΩ) + tr(AA)]` with `A = (∇X)_A`.
fn equivariant(p: &Prepared) -> Result<f64> {
    let p1 = make_weil::<f64>("p1")?;
    let c = -1.0 / (8.0 * std::f64::consts::PI.powi(2));
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed ^ 0xe9);
    let mut worst = 0.0f64;
    for _ in 0..POINT_DRAWS {
        let x = random_point(&mut rng, p.grid.dim());
        let g = p.g.sym_jet(&x)?;
        let xj = p.x.vector_jet(&x)?;
        let at0 = equivariant_weil(&p1, &g, &xj, 0.0, &x)?;
        let at_t = equivariant_weil(&p1, &g, &xj, p.t + 1.0, &x)?;
        for (a, b) in at0.components.iter().zip(&at_t.components) {
            worst = worst.worst(a.add(&b.scale(-1.0)).max_abs());
        }
        let geo = LocalGeometry::new(&g)?;
        let a = geo.skew(&geo.nabla_vector(&xj));
        let w = geo.curvature_form().coeffs()[0].clone();
        let (Some(two), Some(zero)) = (at0.of_degree(2), at0.of_degree(0)) else {
            return Ok(f64::NAN);
        };
        let (two, zero) = (two.top(), zero.coeffs()[0]);
        worst = worst
            .worst((&at0.moment - &a).max_abs())
            .worst((two + 2.0 * c * a.trace_of_product(&w)).abs())
            .worst((zero - c * a.trace_of_product(&a)).abs());
    }
    Ok(worst)
}

fn sigma_triple(p: &Prepared) -> Result<f64> {
    let (g, h, k) = (sym(&p.g, p.grid)?, sym(&p.h, p.grid)?, sym(&p.k, p.grid)?);
    let general: f64 = sigma_general(&make_weil("p1")?, &g, &h, &k)?;
    let p1 = sigma_p1_2d(&g, &h, &k)?;
    let simple = sigma_simple(&g, &h, &k)?.value;
    let floor = 1e-12;
    Ok(rel_diff(general, p1, floor)
        .worst(rel_diff(p1, simple, floor))
        .worst(rel_diff(general, simple, floor)))
}

fn sup_norm(field: &Field, grid: PeriodicGrid) -> f64 {
    (0..grid.len())
        .map(|n| field.sym_value::<f64>(&grid.point(n)).max_abs())
        .fold(0.0, f64::max)
}

fn degeneracy(p: &Prepared) -> Result<f64> {
    let (g, h) = (sym(&p.g, p.grid)?, sym(&p.h, p.grid)?);
    let a: f64 = sigma_p1_2d(&g, &g, &h)?;
    let b: f64 = sigma_simple(&g, &g, &h)?.value;
    Ok(a.abs().worst(b.abs()) / sup_norm(&p.h, p.grid).max(f64::MIN_POSITIVE))
}

fn mu_dual(p: &Prepared) -> Result<f64> {
    let (g, x) = (sym(&p.g, p.grid)?, vector(&p.x, p.grid)?);
    let a = mu_trace::<f64>(&g, &x, p.t)?.value;
    let b = mu_simple::<f64>(&g, &x, p.t)?.value;
    Ok((a - b).abs())
}

fn mu_flat(p: &Prepared) -> Result<f64> {
    let flat = FieldSpec::conformal(&TrigSeries::from_rows(2, &[])?).compile()?;
    let (g, x) = (sym(&flat, p.grid)?, vector(&p.x, p.grid)?);
    let a = mu_trace::<f64>(&g, &x, p.t)?.value;
    let b = mu_simple::<f64>(&g, &x, p.t)?.value;
    let c = mu_general(&make_weil("p1")?, &g, &x, p.t)?.value;
    Ok(a.abs().worst(b.abs()).worst(c.abs()))
}

fn moment(p: &Prepared) -> Result<f64> {
    let (g, h, x) = (
        sym(&p.g, p.grid)?,
        sym(&p.h, p.grid)?,
        vector(&p.x, p.grid)?,
    );
    Ok(moment_identity_residual(&g, &h, &x, p.t, FD_STEP)?.residual)
}

fn closed(p: &Prepared) -> Result<f64> {
    let (g, h, k, l) = (
        sym(&p.g, p.grid)?,
        sym(&p.h, p.grid)?,
        sym(&p.k, p.grid)?,
        sym(&p.l, p.grid)?,
    );
    dsigma_residual(&g, &h, &k, &l, FD_STEP)
}

/// The group elements the invariance check runs through.
pub fn invariance_actions(seed: u64) -> Vec<GroupAction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1a);
    let shift = vec![
        rng.gen_range(0.0..std::f64::consts::TAU),
        rng.gen_range(0.0..std::f64::consts::TAU),
    ];
    vec![
        GroupAction::Diffeo(Diffeo::Translation { shift }),
        GroupAction::Diffeo(Diffeo::standard_shear()),
        GroupAction::Diffeo(Diffeo::random_perturbation(seed, 2, 0.05)),
        GroupAction::Scaling(rng.gen_range(-1.0..1.0)),
    ]
}

fn invariance(p: &Prepared) -> Result<f64> {
    let mut worst = 0.0f64;
    for action in invariance_actions(p.seed) {
        worst = worst.worst(invariance_residual::<f64>(
            &p.g, &p.h, &p.k, p.grid, &action,
        )?);
    }
    Ok(worst)
}

fn wp(p: &Prepared) -> Result<f64> {
    let (g, h, k) = (sym(&p.g, p.grid)?, sym(&p.h, p.grid)?, sym(&p.k, p.grid)?);
    wp_identity_residual(&g, &h, &k)
}

/// Random fields on the six-torus: a slightly non-flat metric and two
/// symmetric tensors, plus a vector field.
pub fn six_torus_fields(seed: u64) -> Result<(Field, Field, Field, Field)> {
    let opts = |amplitude| RandomFieldOptions {
        dim: 6,
        max_mode: 1,
        amplitude,
        mode_count: Some(5),
    };
    let g = random_smooth(seed, FieldKind::Metric, 2.0, &opts(0.03))?.compile()?;
    let h = random_smooth(seed + 1, FieldKind::Sym2, 2.0, &opts(1.0))?.compile()?;
    let k = random_smooth(seed + 2, FieldKind::Sym2, 2.0, &opts(1.0))?.compile()?;
    let x = random_smooth(seed + 3, FieldKind::Vector, 2.0, &opts(1.0))?.compile()?;
    Ok((g, h, k, x))
}

/// Displays against the generic polarized integrands at random points.
fn dim6_pointwise(seed: u64, draws: usize) -> Result<f64> {
    use metriforms::algebra::{weil_eval_forms, EndForm};
    let (g, h, k, xf) = six_torus_fields(seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x66);
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let x = random_point(&mut rng, 6);
        let (gj, hj, kj, xj) = (
            g.sym_jet(&x)?,
            h.sym_jet(&x)?,
            k.sym_jet(&x)?,
            xf.vector_jet(&x)?,
        );
        let geo = LocalGeometry::new(&gj)?;
        let om = geo.curvature_form();
        let a = geo.skew_form(&geo.nabla_dot(&hj));
        let b = geo.skew_form(&geo.nabla_dot(&kj));
        let gh = &geo.g_inv * &hj.value;
        let gk = &geo.g_inv * &kj.value;
        let c = EndForm::constant(geo.skew(&(&gh * &gk)), 6);
        let m = EndForm::constant(geo.skew(&geo.nabla_vector(&xj)), 6);
        for f in [Dim6Weil::T4, Dim6Weil::T2sq] {
            let poly = f.polynomial::<f64>();
            let sigma = -12.0 * weil_eval_forms(&poly, &[&a, &b, &om, &om])?.top()
                - 2.0 * weil_eval_forms(&poly, &[&c, &om, &om, &om])?.top();
            let mu = -4.0 * weil_eval_forms(&poly, &[&m, &om, &om, &om])?.top();
            let ds = metriforms::functionals::sigma6_integrand(f, &gj, &hj, &kj)?;
            let dm = metriforms::functionals::mu6_integrand(f, &gj, &xj)?;
            worst = worst
                .worst(rel_diff(ds, sigma, 1e-300))
                .worst(rel_diff(dm, mu, 1e-300));
        }
    }
    Ok(worst)
}

/// `sigma_general`/`mu_general` against `sigma6`/`mu6` on an `n⁶` grid.
pub fn dim6_integral(seed: u64, n: usize) -> Result<f64> {
    let (g, h, k, x) = six_torus_fields(seed)?;
    let grid = PeriodicGrid::new(6, n)?;
    let (g, h, k, x) = (
        sym(&g, grid)?,
        sym(&h, grid)?,
        sym(&k, grid)?,
        vector(&x, grid)?,
    );
    let mut worst = 0.0f64;
    for f in [Dim6Weil::T4, Dim6Weil::T2sq] {
        let poly = f.polynomial::<f64>();
        let s_gen = sigma_general(&poly, &g, &h, &k)?;
        let s_disp = sigma6(f, &g, &h, &k)?;
        let m_gen = mu_general(&poly, &g, &x, 0.0)?.value;
        let m_disp = mu6(f, &g, &x)?;
        worst = worst
            .worst(rel_diff(s_gen, s_disp, 1e-300))
            .worst(rel_diff(m_gen, m_disp, 1e-300));
    }
    Ok(worst)
}
