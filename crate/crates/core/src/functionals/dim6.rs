//! Explicit six-dimensional integrands for `t₄` and `(t₂)²`, written as
//! wedge-trace expressions instead of generic polarization.

use serde::{Deserialize, Serialize};

use super::sigma::skew_product;
use super::{curved_geometry, integrate_nodes};
use crate::algebra::{make_weil, trace_wedge, EndForm, WeilPolynomial};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::surface::source::{same_grid, SymJets, VectorJets};
use crate::surface::{SymJet, VectorJet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dim6Weil {
    T4,
    T2sq,
}

impl Dim6Weil {
    pub fn name(self) -> &'static str {
        match self {
            Dim6Weil::T4 => "t4",
            Dim6Weil::T2sq => "t2sq",
        }
    }

    pub fn polynomial<T: Real>(self) -> WeilPolynomial<T> {
        make_weil(self.name()).expect("named polynomial exists")
    }
}

fn require_six(n: usize) -> Result<()> {
    if n != 6 {
        return Err(Error::DimensionMismatch {
            expected: 6,
            found: n,
        });
    }
    Ok(())
}

fn tr<T: Real>(forms: &[&EndForm<T>]) -> Result<T> {
    Ok(trace_wedge(forms)?.top())
}

/// Top coefficient of the σ integrand at one point.
///
/// With `a = (∇̇h)_A`, `b = (∇̇k)_A`, `c = (g⁻¹h∘g⁻¹k)_A`:
/// `t₄`: `−4[tr(a b Ω Ω) + tr(a Ω b Ω) + tr(a Ω Ω b)] − 2tr(c Ω Ω Ω)`;
/// `(t₂)²`: `−4tr(a b)tr(Ω Ω) − 8tr(a Ω)tr(b Ω) − 2tr(c Ω)tr(Ω Ω)`.
pub fn sigma6_integrand<T: Real>(
    f: Dim6Weil,
    g: &SymJet<T>,
    h: &SymJet<T>,
    k: &SymJet<T>,
) -> Result<T> {
    require_six(g.dim())?;
    let lg = curved_geometry(g)?;
    let omega = lg.curvature_form();
    let a = lg.skew_form(&lg.nabla_dot(h));
    let b = lg.skew_form(&lg.nabla_dot(k));
    let c = EndForm::constant(skew_product(&lg, &h.value, &k.value), 6);
    let (two, four) = (T::lit(2.0), T::lit(4.0));
    let oo = omega.wedge_compose(&omega)?;
    Ok(match f {
        Dim6Weil::T4 => {
            let ab = a.wedge_compose(&b)?;
            let ao = a.wedge_compose(&omega)?;
            let bo = b.wedge_compose(&omega)?;
            let aoo = a.wedge_compose(&oo)?;
            let ooo = oo.wedge_compose(&omega)?;
            let sym = tr(&[&ab, &oo])? + tr(&[&ao, &bo])? + tr(&[&aoo, &b])?;
            -four * sym - two * tr(&[&c, &ooo])?
        }
        Dim6Weil::T2sq => {
            let t_oo = oo.trace();
            let t_ab = trace_wedge(&[&a, &b])?;
            let t_ao = trace_wedge(&[&a, &omega])?;
            let t_bo = trace_wedge(&[&b, &omega])?;
            let t_co = trace_wedge(&[&c, &omega])?;
            -four * t_ab.wedge(&t_oo)?.top()
                - T::lit(8.0) * t_ao.wedge(&t_bo)?.top()
                - two * t_co.wedge(&t_oo)?.top()
        }
    })
}

/// Top coefficient of the μ integrand at one point, `A = (∇X)_A`:
/// `t₄`: `−4tr(A Ω Ω Ω)`; `(t₂)²`: `−4tr(A Ω)tr(Ω Ω)`.
pub fn mu6_integrand<T: Real>(f: Dim6Weil, g: &SymJet<T>, x: &VectorJet<T>) -> Result<T> {
    require_six(g.dim())?;
    let lg = curved_geometry(g)?;
    let omega = lg.curvature_form();
    let a = EndForm::constant(lg.skew(&lg.nabla_vector(x)), 6);
    let oo = omega.wedge_compose(&omega)?;
    let four = T::lit(4.0);
    Ok(match f {
        Dim6Weil::T4 => -four * tr(&[&a, &oo.wedge_compose(&omega)?])?,
        Dim6Weil::T2sq => -four * trace_wedge(&[&a, &omega])?.wedge(&oo.trace())?.top(),
    })
}

/// `∫ sigma6_integrand` over a six-torus.
pub fn sigma6<T: Real>(
    f: Dim6Weil,
    g: &dyn SymJets<T>,
    h: &dyn SymJets<T>,
    k: &dyn SymJets<T>,
) -> Result<T> {
    let grid = same_grid(&[g.grid(), h.grid(), k.grid()])?;
    require_six(grid.dim())?;
    integrate_nodes(grid, |node| {
        sigma6_integrand(f, &g.jet(node), &h.jet(node), &k.jet(node))
    })
}

/// `∫ mu6_integrand` over a six-torus.
pub fn mu6<T: Real>(f: Dim6Weil, g: &dyn SymJets<T>, x: &dyn VectorJets<T>) -> Result<T> {
    let grid = same_grid(&[g.grid(), x.grid()])?;
    require_six(grid.dim())?;
    integrate_nodes(grid, |node| mu6_integrand(f, &g.jet(node), &x.jet(node)))
}
