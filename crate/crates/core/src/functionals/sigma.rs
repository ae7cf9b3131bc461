//! Three independent formulas for σ_g(h, k).

use serde::{Deserialize, Serialize};

use super::{curved_geometry, integrate_nodes, inv_four_pi2, require_surface};
use crate::algebra::{trace_wedge, weil_eval_forms, EndForm, Matrix, WeilPolynomial};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::surface::local::LocalGeometry;
use crate::surface::source::{same_grid, SymJets};

/// σ on a surface split into its curvature and divergence integrals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sigma2Result<T> {
    pub value: T,
    pub term_curvature: T,
    pub term_divergence: T,
}

/// `(g⁻¹h∘g⁻¹k)_A`.
pub(crate) fn skew_product<T: Real>(
    lg: &LocalGeometry<T>,
    h: &Matrix<T>,
    k: &Matrix<T>,
) -> Matrix<T> {
    lg.skew(&(&(&lg.g_inv * h) * &(&lg.g_inv * k)))
}

/// Fiber-integral formula for `f` of degree `2r` on an `n = 4r − 2` dimensional torus:
/// `−2r(2r−1)∫f((∇̇h)_A, (∇̇k)_A, Ω, …) − r∫f((g⁻¹h∘g⁻¹k)_A, Ω, …)`.
///
/// The second coefficient is half the one obtained with `−½ϑ∧ϑ` read as
/// `−½[ϑ(v), ϑ(w)]`; the universal curvature carries `−¼[ϑ(v), ϑ(w)]`.
pub fn sigma_general<T: Real>(
    f: &WeilPolynomial<T>,
    g: &dyn SymJets<T>,
    h: &dyn SymJets<T>,
    k: &dyn SymJets<T>,
) -> Result<T> {
    let grid = same_grid(&[g.grid(), h.grid(), k.grid()])?;
    let n = grid.dim();
    let deg = f.degree();
    if deg % 2 != 0 || deg < 2 || n + 2 != 2 * deg {
        return Err(Error::DimensionMismatch {
            expected: 2 * deg.max(1) - 2,
            found: n,
        });
    }
    let d = T::from_usize_lossy(deg);
    let c1 = -d * (d - T::one());
    let c2 = -d / T::lit(2.0);
    integrate_nodes(grid, |node| {
        let gj = g.jet(node);
        let hj = h.jet(node);
        let kj = k.jet(node);
        let lg = curved_geometry(&gj)?;
        let omega = lg.curvature_form();
        let hd = lg.skew_form(&lg.nabla_dot(&hj));
        let kd = lg.skew_form(&lg.nabla_dot(&kj));
        let c = EndForm::constant(skew_product(&lg, &hj.value, &kj.value), n);
        let mut first: Vec<&EndForm<T>> = vec![&hd, &kd];
        first.extend(std::iter::repeat(&omega).take(deg - 2));
        let mut second: Vec<&EndForm<T>> = vec![&c];
        second.extend(std::iter::repeat(&omega).take(deg - 1));
        Ok(c1 * weil_eval_forms(f, &first)?.top() + c2 * weil_eval_forms(f, &second)?.top())
    })
}

/// First-Pontryagin formula on a surface:
/// `(1/8π²)∫tr((g⁻¹h∘g⁻¹k)_A∧Ω^g) + (1/4π²)∫tr((∇̇h)_A∧(∇̇k)_A)`.
pub fn sigma_p1_2d<T: Real>(
    g: &dyn SymJets<T>,
    h: &dyn SymJets<T>,
    k: &dyn SymJets<T>,
) -> Result<T> {
    let grid = same_grid(&[g.grid(), h.grid(), k.grid()])?;
    require_surface(&grid)?;
    let c = inv_four_pi2::<T>();
    integrate_nodes(grid, |node| {
        let hj = h.jet(node);
        let kj = k.jet(node);
        let lg = curved_geometry(&g.jet(node))?;
        let omega = lg.curvature_form();
        let hd = lg.skew_form(&lg.nabla_dot(&hj));
        let kd = lg.skew_form(&lg.nabla_dot(&kj));
        let curv = skew_product(&lg, &hj.value, &kj.value).trace_of_product(&omega.coeffs()[0]);
        Ok(c * (curv / T::lit(2.0) + trace_wedge(&[&hd, &kd])?.top()))
    })
}

/// Scalar-curvature and divergence formula on a surface:
/// `(1/16π²)∫S·tr(g⁻¹h∘g⁻¹k∘g⁻¹vol)·vol − (1/8π²)∫(δh − d tr h)∧(δk − d tr k)`,
/// with `g⁻¹vol` the matrix product.
pub fn sigma_simple<T: Real>(
    g: &dyn SymJets<T>,
    h: &dyn SymJets<T>,
    k: &dyn SymJets<T>,
) -> Result<Sigma2Result<T>> {
    let grid = same_grid(&[g.grid(), h.grid(), k.grid()])?;
    require_surface(&grid)?;
    let c = inv_four_pi2::<T>() / T::lit(4.0);
    let c_div = -inv_four_pi2::<T>() / T::lit(2.0);
    let pairs = {
        use rayon::prelude::*;
        (0..grid.len())
            .into_par_iter()
            .map(|node| {
                let hj = h.jet(node);
                let kj = k.jet(node);
                let lg = curved_geometry(&g.jet(node))?;
                let s = lg.scalar_curvature();
                let v = &lg.g_inv * &lg.volume_matrix()?;
                let prod = &(&(&lg.g_inv * &hj.value) * &(&lg.g_inv * &kj.value)) * &v;
                let curv = c * s * prod.trace() * lg.sqrt_det;
                let a = divergence_defect(&lg, &hj);
                let b = divergence_defect(&lg, &kj);
                Ok((curv, c_div * (a[0] * b[1] - a[1] * b[0])))
            })
            .collect::<Result<Vec<(T, T)>>>()?
    };
    let curv: Vec<T> = pairs.iter().map(|p| p.0).collect();
    let div: Vec<T> = pairs.iter().map(|p| p.1).collect();
    let term_curvature = grid.integrate(&curv);
    let term_divergence = grid.integrate(&div);
    Ok(Sigma2Result {
        value: term_curvature + term_divergence,
        term_curvature,
        term_divergence,
    })
}

/// `δh − d tr_g h`.
pub(crate) fn divergence_defect<T: Real>(
    lg: &LocalGeometry<T>,
    h: &crate::surface::SymJet<T>,
) -> Vec<T> {
    let div = lg.divergence(h);
    let dtr = lg.d_trace_g(h);
    div.iter().zip(&dtr).map(|(a, b)| *a - *b).collect()
}
