//! Pointwise comparison of the curvature density
//! `(1/4π²)S·tr(g⁻¹h∘g⁻¹k∘g⁻¹vol)·vol` with the Weil–Petersson density
//! `½tr(g⁻¹(Jh)∘g⁻¹k)·vol`, `Jh = −vol·g⁻¹h`. Here `g⁻¹vol` and `vol·g⁻¹h`
//! are plain matrix products.
//!
//! The curvature term that σ actually integrates is `¼` of this density
//! (see [`super::sigma_simple`]); the identity checked here is algebraic and
//! does not see that constant.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{curved_geometry, inv_four_pi2, require_surface};
use crate::error::Result;
use crate::scalar::Real;
use crate::surface::source::{same_grid, SymJets};

/// Densities at one node, per unit coordinate area.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WpPoint<T> {
    pub sigma_density: T,
    pub wp_density: T,
    pub scalar_curvature: T,
}

impl<T: Real> WpPoint<T> {
    /// `|σ_density + (S/2π²)·wp_density|`.
    pub fn residual(&self) -> T {
        let c = T::lit(2.0) * inv_four_pi2::<T>();
        (self.sigma_density + c * self.scalar_curvature * self.wp_density).abs()
    }
}

pub fn wp_pointwise<T: Real>(
    g: &dyn SymJets<T>,
    h: &dyn SymJets<T>,
    k: &dyn SymJets<T>,
    node: usize,
) -> Result<WpPoint<T>> {
    let grid = same_grid(&[g.grid(), h.grid(), k.grid()])?;
    require_surface(&grid)?;
    let lg = curved_geometry(&g.jet(node))?;
    let hv = h.jet(node).value;
    let kv = k.jet(node).value;
    let s = lg.scalar_curvature();
    let gh = &lg.g_inv * &hv;
    let gk = &lg.g_inv * &kv;
    let vol = lg.volume_matrix()?;
    let prod = &(&gh * &gk) * &(&lg.g_inv * &vol);
    let sigma_density = inv_four_pi2::<T>() * s * prod.trace() * lg.sqrt_det;
    let jh = (&vol * &gh).scale(-T::one());
    let wp_density = (&lg.g_inv * &jh).trace_of_product(&gk) / T::lit(2.0) * lg.sqrt_det;
    Ok(WpPoint {
        sigma_density,
        wp_density,
        scalar_curvature: s,
    })
}

/// Largest [`WpPoint::residual`] over the grid.
pub fn wp_identity_residual<T: Real>(
    g: &dyn SymJets<T>,
    h: &dyn SymJets<T>,
    k: &dyn SymJets<T>,
) -> Result<T> {
    let grid = same_grid(&[g.grid(), h.grid(), k.grid()])?;
    let worst = (0..grid.len())
        .into_par_iter()
        .map(|node| wp_pointwise(g, h, k, node).map(|p| p.residual()))
        .collect::<Result<Vec<T>>>()?;
    Ok(worst.into_iter().fold(T::zero(), T::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::source::Analytic;
    use crate::surface::spec::TrigSeries;
    use crate::surface::{random_smooth, FieldKind, FieldSpec, PeriodicGrid, RandomFieldOptions};

    fn analytic(spec: FieldSpec, grid: PeriodicGrid) -> Analytic {
        Analytic::sym(spec.compile().unwrap(), grid).unwrap()
    }

    #[test]
    fn flat_tt_pair_has_unit_wp_density() {
        let grid = PeriodicGrid::new(2, 16).unwrap();
        let flat = analytic(
            FieldSpec::conformal(&TrigSeries::from_rows(2, &[]).unwrap()),
            grid,
        );
        let h = analytic(FieldSpec::tt_tensor(1.0, 0.0), grid);
        let k = analytic(FieldSpec::tt_tensor(0.0, 1.0), grid);
        let p = wp_pointwise::<f64>(&flat, &h, &k, 5).unwrap();
        assert_eq!(p.sigma_density, 0.0);
        assert!((p.wp_density - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_holds_for_random_tensors() {
        let grid = PeriodicGrid::new(2, 16).unwrap();
        let opts = RandomFieldOptions {
            dim: 2,
            max_mode: 2,
            amplitude: 0.3,
            mode_count: Some(4),
        };
        for seed in 0..5u64 {
            let kind = if seed % 2 == 0 {
                FieldKind::ConformalMetric
            } else {
                FieldKind::Metric
            };
            let g = analytic(random_smooth(seed, kind, 2.0, &opts).unwrap(), grid);
            let h = analytic(
                random_smooth(seed + 10, FieldKind::Sym2, 2.0, &opts).unwrap(),
                grid,
            );
            let k = analytic(
                random_smooth(seed + 20, FieldKind::Sym2, 2.0, &opts).unwrap(),
                grid,
            );
            assert!(wp_identity_residual::<f64>(&g, &h, &k).unwrap() < 1e-12);
            let p = wp_pointwise::<f64>(&g, &h, &k, 3).unwrap();
            assert!(p.sigma_density.abs() > 1e-8);
        }
    }
}
