//! Metric-dependent operators applied node by node to sampled fields.

use rayon::prelude::*;

use super::field::{
    EndFormField, MetricField, OneFormField, ScalarField, SymTensorField, VectorField,
};
use super::local::{lie_derivative_metric, Christoffel, LocalGeometry};
use crate::algebra::EndForm;
use crate::error::{Error, Result};
use crate::scalar::Real;

fn check_grid<T: Real>(g: &MetricField<T>, other: &super::grid::PeriodicGrid) -> Result<()> {
    if g.grid() != *other {
        return Err(Error::InvalidArgument(
            "fields live on different grids".into(),
        ));
    }
    Ok(())
}

/// Local geometry (with second derivatives) at every node.
pub fn local_geometries<T: Real>(g: &MetricField<T>) -> Result<Vec<LocalGeometry<T>>> {
    let jets = g.jets();
    (0..g.grid().len())
        .into_par_iter()
        .map(|node| LocalGeometry::new(&jets.at(node)))
        .collect()
}

fn per_node<T: Real, R: Send>(
    g: &MetricField<T>,
    f: impl Fn(usize, &LocalGeometry<T>) -> Result<R> + Sync,
) -> Result<Vec<R>> {
    let geo = local_geometries(g)?;
    geo.par_iter()
        .enumerate()
        .map(|(node, lg)| f(node, lg))
        .collect()
}

fn transpose_comps<T: Real>(n: usize, values: Vec<Vec<T>>) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| values.iter().map(|v| v[i]).collect())
        .collect()
}

pub fn christoffel<T: Real>(g: &MetricField<T>) -> Result<Vec<Christoffel<T>>> {
    per_node(g, |_, lg| Ok(lg.gamma.clone()))
}

pub fn scalar_curvature<T: Real>(g: &MetricField<T>) -> Result<ScalarField<T>> {
    Ok(ScalarField::new(
        g.grid(),
        per_node(g, |_, lg| Ok(lg.scalar_curvature()))?,
    ))
}

/// `Ω^g` assembled from the Riemann tensor.
pub fn curvature_endform<T: Real>(g: &MetricField<T>) -> Result<EndFormField<T>> {
    Ok(EndFormField {
        grid: g.grid(),
        forms: per_node(g, |_, lg| Ok(lg.curvature_form()))?,
    })
}

pub fn nabla_dot_h<T: Real>(g: &MetricField<T>, h: &SymTensorField<T>) -> Result<EndFormField<T>> {
    check_grid(g, &h.grid)?;
    let hj = h.jets(false);
    Ok(EndFormField {
        grid: g.grid(),
        forms: per_node(g, |node, lg| Ok(lg.nabla_dot(&hj.at(node))))?,
    })
}

pub fn div_h<T: Real>(g: &MetricField<T>, h: &SymTensorField<T>) -> Result<OneFormField<T>> {
    check_grid(g, &h.grid)?;
    let hj = h.jets(false);
    let values = per_node(g, |node, lg| Ok(lg.divergence(&hj.at(node))))?;
    Ok(OneFormField::new(
        g.grid(),
        transpose_comps(g.grid().dim(), values),
    ))
}

/// `∇X` as an End-valued 0-form per node.
pub fn nabla_x<T: Real>(g: &MetricField<T>, x: &VectorField<T>) -> Result<EndFormField<T>> {
    check_grid(g, &x.grid)?;
    let xj = x.jets();
    let n = g.grid().dim();
    let forms = per_node(g, |node, lg| {
        Ok(EndForm::constant(lg.nabla_vector(&xj.at(node)), n))
    })?;
    Ok(EndFormField {
        grid: g.grid(),
        forms,
    })
}

pub fn musical_flat<T: Real>(g: &MetricField<T>, x: &VectorField<T>) -> Result<OneFormField<T>> {
    check_grid(g, &x.grid)?;
    let values = (0..g.grid().len())
        .into_par_iter()
        .map(|node| g.at(node).mul_vec(&x.at(node)))
        .collect();
    Ok(OneFormField::new(
        g.grid(),
        transpose_comps(g.grid().dim(), values),
    ))
}

pub fn musical_sharp<T: Real>(
    g: &MetricField<T>,
    alpha: &OneFormField<T>,
) -> Result<VectorField<T>> {
    check_grid(g, &alpha.grid)?;
    let values = (0..g.grid().len())
        .into_par_iter()
        .map(|node| Ok(g.at(node).inverse()?.mul_vec(&alpha.at(node))))
        .collect::<Result<Vec<_>>>()?;
    Ok(VectorField::new(
        g.grid(),
        transpose_comps(g.grid().dim(), values),
    ))
}

/// Hodge star of a 1-form on a surface.
pub fn hodge_star<T: Real>(g: &MetricField<T>, alpha: &OneFormField<T>) -> Result<OneFormField<T>> {
    check_grid(g, &alpha.grid)?;
    let values = per_node(g, |node, lg| lg.hodge_star(&alpha.at(node)))?;
    Ok(OneFormField::new(g.grid(), transpose_comps(2, values)))
}

/// Density `√det g` of the Riemannian volume form.
pub fn vol_form<T: Real>(g: &MetricField<T>) -> ScalarField<T> {
    let values = (0..g.grid().len())
        .into_par_iter()
        .map(|node| g.at(node).det().sqrt())
        .collect();
    ScalarField::new(g.grid(), values)
}

pub fn trace_g<T: Real>(g: &MetricField<T>, h: &SymTensorField<T>) -> Result<ScalarField<T>> {
    check_grid(g, &h.grid)?;
    let values = (0..g.grid().len())
        .into_par_iter()
        .map(|node| Ok(g.at(node).inverse()?.trace_of_product(&h.at(node))))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScalarField::new(g.grid(), values))
}

pub fn lie_derivative<T: Real>(
    g: &MetricField<T>,
    x: &VectorField<T>,
) -> Result<SymTensorField<T>> {
    check_grid(g, &x.grid)?;
    let gj = g.as_sym().jets(false);
    let xj = x.jets();
    Ok(SymTensorField::from_fn(g.grid(), |node| {
        lie_derivative_metric(&gj.at(node), &xj.at(node))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Matrix;
    use crate::surface::diffeo::{pullback_sym, Diffeo};
    use crate::surface::grid::PeriodicGrid;
    use crate::surface::spec::{FieldSpec, TrigSeries};

    fn conformal(grid: &PeriodicGrid, rows: &[[f64; 4]]) -> (FieldSpec, MetricField<f64>) {
        let phi =
            TrigSeries::from_rows(2, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
        let spec = FieldSpec::conformal(&phi);
        let g = spec.sample_metric(grid).unwrap();
        (spec, g)
    }

    #[test]
    fn flat_metric_has_no_connection_or_curvature() {
        let grid = PeriodicGrid::new(2, 8).unwrap();
        let g = MetricField::<f64>::flat(grid);
        assert!(christoffel(&g)
            .unwrap()
            .iter()
            .all(|c| c.as_slice().iter().all(|v| *v == 0.0)));
        assert!(scalar_curvature(&g).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn conformal_scalar_curvature_example() {
        // φ = 0.3 sin x cos y, S = −2e^{−2φ}Δφ = 1.2 e^{−2φ} sin x cos y
        let grid = PeriodicGrid::new(2, 32).unwrap();
        let (_, g) = conformal(&grid, &[[1.0, 1.0, 0.0, -0.15], [1.0, -1.0, 0.0, -0.15]]);
        let s = scalar_curvature(&g).unwrap();
        for node in (0..grid.len()).step_by(37) {
            let p = grid.point::<f64>(node);
            let phi = 0.3 * p[0].sin() * p[1].cos();
            let expected = 1.2 * (-2.0 * phi).exp() * p[0].sin() * p[1].cos();
            assert!(
                (s.values[node] - expected).abs() < 1e-10,
                "{} vs {expected}",
                s.values[node]
            );
        }
        // Gauss–Bonnet with χ = 0
        let density: Vec<f64> = s
            .values
            .iter()
            .zip(&vol_form(&g).values)
            .map(|(a, b)| a * b)
            .collect();
        assert!(grid.integrate(&density).abs() < 1e-10);
    }

    #[test]
    fn divergence_is_trace_of_nabla_dot() {
        let grid = PeriodicGrid::new(2, 16).unwrap();
        let (_, g) = conformal(&grid, &[[1.0, 0.0, 0.2, 0.1], [0.0, 2.0, -0.1, 0.0]]);
        let h = SymTensorField::from_fn(grid, |node| {
            let p = grid.point::<f64>(node);
            Matrix::from_f64_rows(&[[p[1].sin(), 0.3 * p[0].cos()], [0.3 * p[0].cos(), 1.0]])
        });
        let nd = nabla_dot_h(&g, &h).unwrap();
        let div = div_h(&g, &h).unwrap();
        for node in 0..grid.len() {
            for i in 0..2 {
                assert!((nd.at(node).coeffs()[i].trace() - div.comps[i][node]).abs() < 1e-10);
            }
        }
        // h = g is parallel
        let ndg = nabla_dot_h(&g, g.as_sym()).unwrap();
        assert!(ndg.forms.iter().all(|f| f.max_abs() < 1e-10));
    }

    #[test]
    fn flat_nabla_x_example() {
        // X = sin y ∂/∂x: (∇X)_A has off-diagonal entries ±½cos y
        let grid = PeriodicGrid::new(2, 16).unwrap();
        let g = MetricField::<f64>::flat(grid);
        let x = VectorField::new(
            grid,
            vec![
                (0..grid.len())
                    .map(|n| grid.point::<f64>(n)[1].sin())
                    .collect(),
                vec![0.0; grid.len()],
            ],
        );
        let nx = nabla_x(&g, &x).unwrap();
        for node in (0..grid.len()).step_by(7) {
            let a = crate::algebra::skew_part_g(&Matrix::identity(2), &nx.at(node).coeffs()[0])
                .unwrap();
            let c = grid.point::<f64>(node)[1].cos();
            assert!((a[(0, 1)] - 0.5 * c).abs() < 1e-12 && (a[(1, 0)] + 0.5 * c).abs() < 1e-12);
        }
        let constant = VectorField::new(grid, vec![vec![0.7; grid.len()], vec![-1.0; grid.len()]]);
        assert!(nabla_x(&g, &constant)
            .unwrap()
            .forms
            .iter()
            .all(|f| f.max_abs() < 1e-13));
    }

    #[test]
    fn musical_maps_and_star_round_trip() {
        let grid = PeriodicGrid::new(2, 8).unwrap();
        let (_, g) = conformal(&grid, &[[1.0, 1.0, 0.3, 0.0]]);
        let x = VectorField::new(grid, vec![vec![1.0; grid.len()], vec![2.0; grid.len()]]);
        let back = musical_sharp(&g, &musical_flat(&g, &x).unwrap()).unwrap();
        assert!(back
            .combine(1.0, &x, -1.0)
            .comps
            .iter()
            .flatten()
            .all(|v| v.abs() < 1e-13));
        let alpha = musical_flat(&g, &x).unwrap();
        let twice = hodge_star(&g, &hodge_star(&g, &alpha).unwrap()).unwrap();
        for i in 0..2 {
            for node in 0..grid.len() {
                assert!((twice.comps[i][node] + alpha.comps[i][node]).abs() < 1e-12);
            }
        }
        let tr = trace_g(&g, g.as_sym()).unwrap();
        assert!(tr.values.iter().all(|v| (v - 2.0).abs() < 1e-13));
    }

    #[test]
    fn translation_is_killing_for_flat_metric() {
        let grid = PeriodicGrid::new(2, 8).unwrap();
        let g = MetricField::<f64>::flat(grid);
        let x = VectorField::new(grid, vec![vec![0.4; grid.len()], vec![1.5; grid.len()]]);
        assert!(lie_derivative(&g, &x).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn curvature_is_natural_under_shear() {
        let grid = PeriodicGrid::new(2, 32).unwrap();
        let (spec, g) = conformal(&grid, &[[1.0, 0.0, 0.2, 0.0], [0.0, 1.0, 0.0, 0.15]]);
        let field = spec.compile().unwrap();
        let phi = Diffeo::standard_shear();
        let pulled = MetricField::<f64>::new(pullback_sym(&phi, &field, &grid).unwrap()).unwrap();
        let s_pulled = scalar_curvature(&pulled).unwrap();
        let s: &crate::surface::spec::Field = &field;
        for node in (0..grid.len()).step_by(13) {
            let p = grid.point::<f64>(node);
            let q = phi.map(&p);
            let lg = LocalGeometry::<f64>::new(&s.sym_jet(&q).unwrap()).unwrap();
            assert!((s_pulled.values[node] - lg.scalar_curvature()).abs() < 1e-8);
        }
        assert!(g.grid() == grid);
    }
}
