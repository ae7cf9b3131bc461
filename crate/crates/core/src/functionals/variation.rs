//! Finite-difference checks on the space of metrics: the moment identity
//! `i_ζσ = s·dμ`, closedness of σ and its invariance under Diff⁺ × ℝ.

use serde::{Deserialize, Serialize};

use super::moment::mu_trace;
use super::sigma::sigma_p1_2d;
use crate::error::{Error, Result};
use crate::scalar::{rel_diff, Real};
use crate::surface::source::{Analytic, Scaled, Shifted, SymJets, VectorJets, Zeta};
use crate::surface::spec::Field;
use crate::surface::{pullback_sym, Diffeo, MetricField, PeriodicGrid};

/// Sign `s` in `σ_g(ζ(X,t)_g, h) = s·D_hμ(X,t)`, fixed by calibration on a
/// single scenario and asserted on every other one.
pub const MOMENT_SIGN: f64 = 1.0;

/// `f'(0)` from central differences at `ε` and `ε/2` with one Richardson step.
pub fn richardson<T: Real>(mut f: impl FnMut(T) -> Result<T>, eps: T) -> Result<T> {
    if !(eps > T::zero()) {
        return Err(Error::InvalidArgument(
            "finite-difference step must be positive".into(),
        ));
    }
    let two = T::lit(2.0);
    let mut central = |e: T| -> Result<T> { Ok((f(e)? - f(-e)?) / (two * e)) };
    let coarse = central(eps)?;
    let fine = central(eps / two)?;
    Ok((T::lit(4.0) * fine - coarse) / T::lit(3.0))
}

/// Both sides of the moment identity and their difference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentIdentity<T> {
    pub sigma: T,
    pub dmu: T,
    pub residual: T,
}

/// `|σ_g(ζ(X,t)_g, h) − s·D_hμ(X,t)|` with `ζ(X,t)_g = t·g − L_X g`.
/// `g` and `h` need second derivatives.
pub fn moment_identity_residual<T: Real>(
    g: &dyn SymJets<T>,
    h: &dyn SymJets<T>,
    x: &dyn VectorJets<T>,
    t: T,
    eps: T,
) -> Result<MomentIdentity<T>> {
    let zeta = Zeta { g, x, t };
    let sigma = sigma_p1_2d(g, &zeta, h)?;
    let dmu = richardson(
        |s| Ok(mu_trace(&Shifted { base: g, dir: h, s }, x, t)?.value),
        eps,
    )?;
    let residual = (sigma - T::lit(MOMENT_SIGN) * dmu).abs();
    Ok(MomentIdentity {
        sigma,
        dmu,
        residual,
    })
}

/// `D_hσ(k,l) − D_kσ(h,l) + D_lσ(h,k)`, the exterior derivative of σ on
/// constant vector fields. All inputs need second derivatives.
pub fn dsigma_residual<T: Real>(
    g: &dyn SymJets<T>,
    h: &dyn SymJets<T>,
    k: &dyn SymJets<T>,
    l: &dyn SymJets<T>,
    eps: T,
) -> Result<T> {
    let along = |dir: &dyn SymJets<T>, a: &dyn SymJets<T>, b: &dyn SymJets<T>| {
        richardson(|s| sigma_p1_2d(&Shifted { base: g, dir, s }, a, b), eps)
    };
    Ok((along(h, k, l)? - along(k, h, l)? + along(l, h, k)?).abs())
}

/// Element of Diff⁺ × ℝ acting on metrics.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupAction {
    Diffeo(Diffeo),
    /// `g ↦ e^t·g`.
    Scaling(f64),
}

/// Relative change of σ under `(g, h, k) ↦ (a·g, a·h, a·k)`.
///
/// Diffeomorphisms pull the closed-form fields back at the grid nodes and
/// differentiate the result spectrally; the identity compares the exact
/// jets with themselves.
pub fn invariance_residual<T: Real>(
    g: &Field,
    h: &Field,
    k: &Field,
    grid: PeriodicGrid,
    action: &GroupAction,
) -> Result<T> {
    let (ga, ha, ka) = (
        Analytic::sym(g.clone(), grid)?,
        Analytic::sym(h.clone(), grid)?,
        Analytic::sym(k.clone(), grid)?,
    );
    let base: T = sigma_p1_2d(&ga, &ha, &ka)?;
    let moved = match action {
        GroupAction::Scaling(t) => {
            let s = T::lit(t.exp());
            sigma_p1_2d(
                &Scaled { base: &ga, s },
                &Scaled { base: &ha, s },
                &Scaled { base: &ka, s },
            )?
        }
        GroupAction::Diffeo(Diffeo::Identity { .. }) => {
            Diffeo::Identity { dim: grid.dim() }.validate(&grid)?;
            sigma_p1_2d(&ga, &ha, &ka)?
        }
        GroupAction::Diffeo(phi) => {
            let pg = MetricField::new(pullback_sym::<T>(phi, g, &grid)?)?;
            let ph = pullback_sym::<T>(phi, h, &grid)?;
            let pk = pullback_sym::<T>(phi, k, &grid)?;
            sigma_p1_2d(&pg.jets(), &ph.jets(false), &pk.jets(false))?
        }
    };
    Ok(rel_diff(moved, base, T::min_positive_value()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{random_smooth, FieldKind, RandomFieldOptions};

    fn field(seed: u64, kind: FieldKind, amplitude: f64) -> Field {
        let opts = RandomFieldOptions {
            dim: 2,
            max_mode: 2,
            amplitude,
            mode_count: Some(4),
        };
        random_smooth(seed, kind, 2.0, &opts)
            .unwrap()
            .compile()
            .unwrap()
    }

    fn sym(seed: u64, kind: FieldKind, amplitude: f64, grid: PeriodicGrid) -> Analytic {
        Analytic::sym(field(seed, kind, amplitude), grid).unwrap()
    }

    #[test]
    fn richardson_is_exact_on_cubics_and_rejects_bad_steps() {
        let d = richardson(|x: f64| Ok(2.0 + 3.0 * x - x * x + 5.0 * x * x * x), 0.1).unwrap();
        assert!((d - 3.0).abs() < 1e-12);
        assert!(richardson(|x: f64| Ok(x), 0.0).is_err());
        assert!(richardson(|x: f64| Ok(x), -1.0).is_err());
    }

    #[test]
    fn moment_identity_holds_with_calibrated_sign() {
        let grid = PeriodicGrid::new(2, 32).unwrap();
        let g = sym(1, FieldKind::ConformalMetric, 0.4, grid);
        let h = sym(2, FieldKind::Sym2, 0.5, grid);
        let x = Analytic::vector(field(3, FieldKind::Vector, 1.0), grid).unwrap();
        let m = moment_identity_residual::<f64>(&g, &h, &x, 0.7, 1e-4).unwrap();
        assert!(m.sigma.abs() > 1e-4, "{m:?}");
        assert!(m.residual < 1e-7, "{m:?}");
        assert!(moment_identity_residual::<f64>(&g, &h, &x, 0.7, 0.0).is_err());
    }

    #[test]
    fn sigma_is_closed() {
        let grid = PeriodicGrid::new(2, 32).unwrap();
        let g = sym(4, FieldKind::ConformalMetric, 0.4, grid);
        let h = sym(5, FieldKind::Sym2, 0.5, grid);
        let k = sym(6, FieldKind::Sym2, 0.5, grid);
        let l = sym(7, FieldKind::Sym2, 0.5, grid);
        assert!(dsigma_residual::<f64>(&g, &h, &k, &l, 1e-4).unwrap() < 1e-7);
    }

    #[test]
    fn invariant_under_identity_scaling_and_shear() {
        let grid = PeriodicGrid::new(2, 48).unwrap();
        let g = field(8, FieldKind::ConformalMetric, 0.4);
        let h = field(9, FieldKind::Sym2, 0.5);
        let k = field(10, FieldKind::Sym2, 0.5);
        let id = GroupAction::Diffeo(Diffeo::Identity { dim: 2 });
        assert_eq!(
            invariance_residual::<f64>(&g, &h, &k, grid, &id).unwrap(),
            0.0
        );
        assert!(
            invariance_residual::<f64>(&g, &h, &k, grid, &GroupAction::Scaling(0.8)).unwrap()
                < 1e-12
        );
        let shear = GroupAction::Diffeo(Diffeo::standard_shear());
        assert!(invariance_residual::<f64>(&g, &h, &k, grid, &shear).unwrap() < 1e-8);
    }
}
