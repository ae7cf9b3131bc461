//! Integrated invariants on the space of metrics: the pre-symplectic form
//! σ, its moment map μ, the Weil–Petersson comparison on surfaces, and
//! finite-difference checks of closedness, invariance and the moment identity.

pub mod dim6;
pub mod moment;
pub mod sigma;
pub mod variation;
pub mod wp;

use rayon::prelude::*;

pub use dim6::{mu6, mu6_integrand, sigma6, sigma6_integrand, Dim6Weil};
pub use moment::{mu_2d, mu_general, mu_simple, mu_trace, MomentValue};
pub use sigma::{sigma_general, sigma_p1_2d, sigma_simple, Sigma2Result};
pub use variation::{
    dsigma_residual, invariance_residual, moment_identity_residual, richardson, GroupAction,
    MomentIdentity, MOMENT_SIGN,
};
pub use wp::{wp_identity_residual, wp_pointwise, WpPoint};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::surface::jets::SymJet;
use crate::surface::local::LocalGeometry;
use crate::surface::{PeriodicGrid, ScalarField};

/// `∫ f dx` over the chart by the periodic trapezoid rule.
pub fn integrate<T: Real>(density: &ScalarField<T>) -> T {
    density.integrate()
}

/// Evaluates `f` at every node in parallel and integrates in fixed order.
pub(crate) fn integrate_nodes<T: Real>(
    grid: PeriodicGrid,
    f: impl Fn(usize) -> Result<T> + Sync,
) -> Result<T> {
    let values = (0..grid.len())
        .into_par_iter()
        .map(&f)
        .collect::<Result<Vec<T>>>()?;
    Ok(grid.integrate(&values))
}

/// Local geometry that is guaranteed to carry curvature.
pub(crate) fn curved_geometry<T: Real>(jet: &SymJet<T>) -> Result<LocalGeometry<T>> {
    let lg = LocalGeometry::new(jet)?;
    if !lg.has_second_derivatives() {
        return Err(Error::InvalidArgument(
            "metric jets need second derivatives".into(),
        ));
    }
    Ok(lg)
}

pub(crate) fn require_surface(grid: &PeriodicGrid) -> Result<()> {
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: grid.dim(),
        });
    }
    Ok(())
}

pub(crate) fn inv_four_pi2<T: Real>() -> T {
    T::one() / (T::lit(4.0) * T::pi() * T::pi())
}
