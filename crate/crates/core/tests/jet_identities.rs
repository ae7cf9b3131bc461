use metriforms::algebra::{make_weil, weil_eval_forms, Matrix};
use metriforms::jet::*;
use metriforms::surface::local::LocalGeometry;
use metriforms::surface::spec::Field;
use metriforms::surface::{random_smooth, FieldKind, RandomFieldOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn opts(dim: usize, amplitude: f64) -> RandomFieldOptions {
    RandomFieldOptions {
        dim,
        max_mode: 2,
        amplitude,
        mode_count: Some(6),
    }
}

fn metric(seed: u64, dim: usize) -> Field {
    let kind = if seed % 2 == 0 {
        FieldKind::ConformalMetric
    } else {
        FieldKind::Metric
    };
    let amp = if kind == FieldKind::Metric {
        0.15 / dim as f64
    } else {
        0.5
    };
    random_smooth(seed, kind, 2.0, &opts(dim, amp))
        .unwrap()
        .compile()
        .unwrap()
}

fn field(seed: u64, dim: usize, kind: FieldKind) -> Field {
    random_smooth(seed, kind, 2.0, &opts(dim, 1.0))
        .unwrap()
        .compile()
        .unwrap()
}

fn point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect()
}

#[test]
fn horizontal_contraction_identity_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [2, 3] {
        let mut worst = 0.0f64;
        for draw in 0..40u64 {
            let g = metric(100 + draw, n);
            let h = field(500 + draw, n, FieldKind::Sym2);
            let x = point(&mut rng, n);
            let gj = g.sym_jet(&x).unwrap();
            let hj = h.sym_jet(&x).unwrap();
            let p = JetPoint::holonomic(x.clone(), &gj).unwrap();
            let v = JetTangent::random(&mut rng, n);
            let (lhs, rhs) = ihone_check(&gj, &hj, &p, &v).unwrap();
            worst = worst.max((&lhs - &rhs).max_abs());
        }
        assert!(worst < 1e-10, "n={n}: {worst}");
    }
}

#[test]
fn contraction_identity_rejects_non_holonomic_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = metric(4, 2);
    let x = point(&mut rng, 2);
    let gj = g.sym_jet(&x).unwrap();
    let p = JetPoint::<f64>::random(&mut rng, 2);
    let v = JetTangent::random(&mut rng, 2);
    assert!(matches!(
        ihone_check(&gj, &gj, &p, &v),
        Err(metriforms::Error::OffHolonomic { .. })
    ));
}

#[test]
fn holonomic_section_pulls_back_to_levi_civita_curvature() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [2, 3] {
        for draw in 0..10u64 {
            let g = metric(200 + draw, n);
            let x = point(&mut rng, n);
            let gj = g.sym_jet(&x).unwrap();
            let pulled = pullback_omega(&gj, &x).unwrap();
            let base = LocalGeometry::new(&gj).unwrap().curvature_form();
            assert!(pulled.sub(&base).max_abs() < 1e-11, "n={n}");
            // contact form vanishes on holonomic tangents
            let geo = JetGeometry::new(JetPoint::holonomic(x.clone(), &gj).unwrap()).unwrap();
            let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            assert!(geo.vartheta(&push_forward(&gj, &u)).max_abs() < 1e-12);
        }
    }
}

#[test]
fn prolonged_lift_measures_symmetric_part_of_nabla_x() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in [2, 3] {
        for draw in 0..10u64 {
            let g = metric(300 + draw, n);
            let xf = field(700 + draw, n, FieldKind::Vector);
            let x = point(&mut rng, n);
            let gj = g.sym_jet(&x).unwrap();
            let xj = xf.vector_jet(&x).unwrap();
            let geo = JetGeometry::new(JetPoint::holonomic(x.clone(), &gj).unwrap()).unwrap();
            let theta = geo.vartheta(&prolong_vector(&geo.point, &xj));
            let local = LocalGeometry::new(&gj).unwrap();
            let expected = local.sym(&local.nabla_vector(&xj)).scale(-2.0);
            assert!((&theta - &expected).max_abs() < 1e-11);
        }
    }
}

/// Degree-2 part of `f(Ω − A)` on a surface through single-matrix
/// evaluations only: `f(−A + εΩ₁₂)` is a polynomial in `ε` whose linear
/// coefficient is read off by exact polynomial interpolation.
fn linear_coefficient(
    f: &metriforms::algebra::WeilPolynomial<f64>,
    a: &Matrix<f64>,
    w: &Matrix<f64>,
) -> f64 {
    let k = f.degree();
    let nodes: Vec<f64> = (0..=k).map(|i| i as f64 - k as f64 / 2.0).collect();
    let values: Vec<f64> = nodes
        .iter()
        .map(|&e| {
            let mut m = a.scale(-1.0);
            m.axpy(e, w);
            f.evaluate(&m).unwrap()
        })
        .collect();
    // derivative at 0 of the Lagrange interpolant
    let mut d = 0.0;
    for (i, &xi) in nodes.iter().enumerate() {
        let mut weight = 0.0;
        for (j, &xj) in nodes.iter().enumerate() {
            if j == i {
                continue;
            }
            let mut term = 1.0 / (xi - xj);
            for (m, &xm) in nodes.iter().enumerate() {
                if m != i && m != j {
                    term *= (0.0 - xm) / (xi - xm);
                }
            }
            weight += term;
        }
        d += weight * values[i];
    }
    d
}

#[test]
fn equivariant_form_is_scale_independent_and_matches_direct_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let p1 = make_weil::<f64>("p1").unwrap();
    let c = -1.0 / (8.0 * std::f64::consts::PI.powi(2));
    for draw in 0..20u64 {
        let g = metric(400 + draw, 2);
        let xf = field(800 + draw, 2, FieldKind::Vector);
        let x = point(&mut rng, 2);
        let gj = g.sym_jet(&x).unwrap();
        let xj = xf.vector_jet(&x).unwrap();
        let at0 = equivariant_weil(&p1, &gj, &xj, 0.0, &x).unwrap();
        let at7 = equivariant_weil(&p1, &gj, &xj, 7.3, &x).unwrap();
        for (a, b) in at0.components.iter().zip(&at7.components) {
            assert!(a.add(&b.scale(-1.0)).max_abs() < 1e-12);
        }
        // the moment part is (∇X)_A
        let local = LocalGeometry::new(&gj).unwrap();
        let a = local.skew(&local.nabla_vector(&xj));
        assert!((&at0.moment - &a).max_abs() < 1e-12);
        // term by term: −(1/8π²)[tr(Ω∧Ω) − 2tr(AΩ) + tr(AA)]
        let omega = local.curvature_form();
        let w = omega.coeffs()[0].clone();
        assert!(at0.of_degree(4).unwrap().max_abs() == 0.0);
        let two = at0.of_degree(2).unwrap().top();
        assert!((two - c * (-2.0 * a.trace_of_product(&w))).abs() < 1e-12);
        let zero = at0.of_degree(0).unwrap().coeffs()[0];
        assert!((zero - c * a.trace_of_product(&a)).abs() < 1e-12);
        // independent route through single-matrix evaluations
        assert!((two - linear_coefficient(&p1, &a, &w)).abs() < 1e-10);
        assert!((zero - p1.evaluate(&a.scale(-1.0)).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn vanishing_vector_field_reduces_to_curvature_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let p1 = make_weil::<f64>("p1").unwrap();
    for draw in 0..3u64 {
        let g = metric(9 + 2 * draw, 4);
        let x = point(&mut rng, 4);
        let gj = g.sym_jet(&x).unwrap();
        let zero = metriforms::surface::VectorJet::zero(4);
        let eq = equivariant_weil(&p1, &gj, &zero, 2.0, &x).unwrap();
        assert!(eq.moment.max_abs() < 1e-13);
        let omega = LocalGeometry::new(&gj).unwrap().curvature_form();
        let direct = weil_eval_forms(&p1, &[&omega, &omega]).unwrap();
        assert!(direct.top().abs() > 1e-6, "{}", direct.top());
        assert!((eq.of_degree(4).unwrap().top() - direct.top()).abs() < 1e-12);
        assert!(eq.of_degree(2).unwrap().max_abs() < 1e-12);
    }
}

fn geometry_at(n: usize, c: &[f64]) -> JetGeometry<f64> {
    let t = JetTangent::from_coords(n, c).unwrap();
    JetGeometry::new(JetPoint::new(t.dx, t.dy, t.dy1).unwrap()).unwrap()
}

/// Central difference of `F` at `c` along coordinate `i`.
fn coordinate_derivative<F: Fn(&[f64]) -> R, R>(
    c: &[f64],
    i: usize,
    eps: f64,
    f: F,
    combine: impl Fn(R, R) -> R,
) -> R {
    let mut cp = c.to_vec();
    cp[i] += eps;
    let mut cm = c.to_vec();
    cm[i] -= eps;
    combine(f(&cp), f(&cm))
}

#[test]
fn omega_is_the_curvature_of_the_connection_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let eps = 1e-5;
    for n in [2, 3] {
        for _ in 0..3 {
            let c0 = JetPoint::<f64>::random(&mut rng, n).coords();
            let geo = geometry_at(n, &c0);
            let dim = c0.len();
            let mut worst = 0.0f64;
            for a in 0..dim {
                for b in (a + 1)..dim {
                    let ea = JetTangent::<f64>::basis(n, a);
                    let eb = JetTangent::<f64>::basis(n, b);
                    let d = |i: usize, v: &JetTangent<f64>| {
                        coordinate_derivative(
                            &c0,
                            i,
                            eps,
                            |c| geometry_at(n, c).connection(v),
                            |p, m| (&p - &m).scale(1.0 / (2.0 * eps)),
                        )
                    };
                    let mut expected = d(a, &eb);
                    expected.axpy(-1.0, &d(b, &ea));
                    expected.axpy(1.0, &geo.connection(&ea).commutator(&geo.connection(&eb)));
                    worst = worst.max((&expected - &geo.omega(&ea, &eb)).max_abs());
                }
            }
            assert!(worst < 1e-8, "n={n}: {worst}");
        }
    }
}

#[test]
fn first_pontryagin_form_is_closed_on_the_jet_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let p1 = make_weil::<f64>("p1").unwrap();
    let alpha = |c: &[f64]| {
        let om = geometry_at(2, c).omega_form();
        weil_eval_forms(&p1, &[&om, &om]).unwrap()
    };
    let eps = 1e-4;
    let c0 = JetPoint::<f64>::random(&mut rng, 2).coords();
    let dim = c0.len();
    let derivs: Vec<_> = (0..dim)
        .map(|i| {
            coordinate_derivative(&c0, i, eps, alpha, |p, m| {
                p.add(&m.scale(-1.0)).scale(1.0 / (2.0 * eps))
            })
        })
        .collect();
    let basis = |i: usize| JetTangent::<f64>::basis(2, i).coords();
    let (mut worst, mut scale) = (0.0f64, 0.0f64);
    for idx in metriforms::algebra::forms::multi_indices(dim, 5) {
        let mut d = 0.0;
        for (pos, &i) in idx.iter().enumerate() {
            let rest: Vec<Vec<f64>> = idx.iter().filter(|&&j| j != i).map(|&j| basis(j)).collect();
            let refs: Vec<&[f64]> = rest.iter().map(|v| v.as_slice()).collect();
            let term = derivs[i].evaluate(&refs).unwrap();
            scale = scale.max(term.abs());
            d += if pos % 2 == 0 { term } else { -term };
        }
        worst = worst.max(d.abs());
    }
    assert!(scale > 1e-4, "{scale}");
    assert!(worst < 1e-8 * scale.max(1.0), "{worst} vs {scale}");
}
