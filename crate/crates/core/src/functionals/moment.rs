//! Moment map μ(X, t) for σ under the action of Diff⁺ × ℝ.

use serde::{Deserialize, Serialize};

use super::{curved_geometry, integrate_nodes, inv_four_pi2, require_surface};
use crate::algebra::{weil_eval_forms, EndForm, WeilPolynomial};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::surface::source::{same_grid, SymJets, VectorJets};
use crate::surface::LocalGeometry;

/// μ(X, t) together with the scaling parameter it was evaluated at.
/// The value does not depend on `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentValue<T> {
    pub value: T,
    pub t: T,
}

/// μ on a surface, through [`mu_trace`].
pub fn mu_2d<T: Real>(g: &dyn SymJets<T>, x: &dyn VectorJets<T>, t: T) -> Result<MomentValue<T>> {
    mu_trace(g, x, t)
}

/// `(1/4π²)∫tr((∇X)_A∘Ω^g)` on a surface.
pub fn mu_trace<T: Real>(
    g: &dyn SymJets<T>,
    x: &dyn VectorJets<T>,
    t: T,
) -> Result<MomentValue<T>> {
    let grid = same_grid(&[g.grid(), x.grid()])?;
    require_surface(&grid)?;
    let c = inv_four_pi2::<T>();
    let value = integrate_nodes(grid, |node| {
        let lg = curved_geometry(&g.jet(node))?;
        let a = lg.skew(&lg.nabla_vector(&x.jet(node)));
        Ok(c * a.trace_of_product(&lg.curvature_form().coeffs()[0]))
    })?;
    Ok(MomentValue { value, t })
}

/// `−(1/8π²)∫dS^g∧X♭` on a surface, with `dS` taken spectrally from the
/// sampled scalar curvature.
pub fn mu_simple<T: Real>(
    g: &dyn SymJets<T>,
    x: &dyn VectorJets<T>,
    t: T,
) -> Result<MomentValue<T>> {
    use rayon::prelude::*;
    let grid = same_grid(&[g.grid(), x.grid()])?;
    require_surface(&grid)?;
    let s = (0..grid.len())
        .into_par_iter()
        .map(|node| Ok(curved_geometry(&g.jet(node))?.scalar_curvature()))
        .collect::<Result<Vec<T>>>()?;
    let ds = [grid.derivative(&s, 0), grid.derivative(&s, 1)];
    let c = -inv_four_pi2::<T>() / T::lit(2.0);
    let value = integrate_nodes(grid, |node| {
        let lg = LocalGeometry::new(&g.jet(node))?;
        let xf = lg.flat(&x.jet(node).value);
        Ok(c * (ds[0][node] * xf[1] - ds[1][node] * xf[0]))
    })?;
    Ok(MomentValue { value, t })
}

/// `−2r∫f((∇X)_A, Ω^g, …, Ω^g)` for `f` of degree `2r` on an `n = 4r − 2`
/// dimensional torus.
pub fn mu_general<T: Real>(
    f: &WeilPolynomial<T>,
    g: &dyn SymJets<T>,
    x: &dyn VectorJets<T>,
    t: T,
) -> Result<MomentValue<T>> {
    let grid = same_grid(&[g.grid(), x.grid()])?;
    let n = grid.dim();
    let deg = f.degree();
    if deg % 2 != 0 || deg < 2 || n + 2 != 2 * deg {
        return Err(Error::DimensionMismatch {
            expected: 2 * deg.max(1) - 2,
            found: n,
        });
    }
    let c = -T::from_usize_lossy(deg);
    let value = integrate_nodes(grid, |node| {
        let lg = curved_geometry(&g.jet(node))?;
        let a = EndForm::constant(lg.skew(&lg.nabla_vector(&x.jet(node))), n);
        let omega = lg.curvature_form();
        let mut args: Vec<&EndForm<T>> = vec![&a];
        args.extend(std::iter::repeat(&omega).take(deg - 1));
        Ok(c * weil_eval_forms(f, &args)?.top())
    })?;
    Ok(MomentValue { value, t })
}
