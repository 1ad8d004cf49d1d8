mod common;

use std::f64::consts::E;

use crackfem::analysis::{
    eoc, error_norms, kirchhoff_residual, kirchhoff_residual_with, least_squares_slope, total_imbalance, ErrorNorms, ExactSolution,
    NormReport, PlaneSolution, Quadrature, RadialExact, SineProduct, TangentSampling,
};
use crackfem::config::preset;
use crackfem::crack::{cut_chains, CrackGraph, CrackSpec, SegmentedCrack};
use crackfem::mesh::Mesh;
use crackfem::solve::SolutionField;
use crackfem::study::{run_convergence_study, solve_level};
use crackfem::{Point, Vec2};

use common::*;

fn interpolant(mesh: &Mesh, u: &dyn ExactSolution) -> SolutionField {
    SolutionField::new(mesh.vertices().iter().map(|p| u.value(p)).collect())
}

#[test]
fn radial_solution_is_consistent() {
    assert!((RadialExact::inner_value(E) - (4.0 + E) / 5.0).abs() <= 1e-14);
    assert!((RadialExact::outer_value(E) - (4.0 + E) / 5.0).abs() <= 1e-14);
    assert_eq!(RadialExact::inner_value(1.0), 0.0);
    assert_eq!(RadialExact::outer_value(RadialExact::outer_radius()), 1.0);
    for k in 0..100 {
        let theta = k as f64 / 100.0 * std::f64::consts::TAU;
        let x = Point::new(E * theta.cos(), E * theta.sin());
        assert!((RadialExact::F_GAMMA + RadialExact::flux_jump(&x)).abs() <= 1e-12);
    }
    // Gradients match finite differences away from the crack.
    let h = 1e-6;
    for p in [Point::new(1.3, 1.1), Point::new(2.6, 2.9)] {
        let g = RadialExact.gradient(&p);
        let dx = (RadialExact.value(&(p + Vec2::new(h, 0.0))) - RadialExact.value(&(p - Vec2::new(h, 0.0)))) / (2.0 * h);
        let dy = (RadialExact.value(&(p + Vec2::new(0.0, h))) - RadialExact.value(&(p - Vec2::new(0.0, h)))) / (2.0 * h);
        assert!((g.x - dx).abs() < 1e-7 && (g.y - dy).abs() < 1e-7);
    }
}

#[test]
fn interpolation_errors_are_zero_for_planes() {
    let mesh = unit_square(7);
    let crack = y_crack_spec(2.0).build(0.05).unwrap();
    let cut = cut_chains(&mesh, &crack).unwrap();
    let plane = PlaneSolution {
        offset: 0.3,
        slope: Vec2::new(1.5, -2.0),
    };
    let u = interpolant(&mesh, &plane);
    let a = vec![1.0; mesh.num_triangles()];
    for rule in [Quadrature::Standard, Quadrature::High] {
        let e = error_norms(&mesh, &cut, &crack, &a, &u, &plane, rule);
        assert!(e.l2 <= 1e-14 && e.h1_semi <= 1e-13 && e.l2_gamma <= 1e-14 && e.energy <= 1e-13, "{e:?}");
    }
}

#[test]
fn interpolation_errors_of_a_smooth_function_converge() {
    let mut rows = Vec::new();
    for n in [8, 16, 32, 64] {
        let mesh = unit_square(n);
        let u = interpolant(&mesh, &SineProduct);
        let e = error_norms(&mesh, &SegmentedCrack::default(), &CrackGraph::empty(), &vec![1.0; mesh.num_triangles()], &u, &SineProduct, Quadrature::High);
        assert!(e.l2 > 0.0 && e.h1_semi > 0.0);
        let h = mesh.max_diameter();
        // |u|_{H²} = π² on the unit square.
        let semi = std::f64::consts::PI.powi(2);
        assert!(e.l2 <= semi * h * h && e.h1_semi <= semi * h);
        rows.push(NormReport {
            level: rows.len(),
            h,
            h_gamma: h,
            n_dofs: mesh.num_vertices(),
            errors: e,
        });
    }
    let s = eoc(&rows).unwrap();
    assert!((s.l2 - 2.0).abs() < 0.1 && (s.h1_semi - 1.0).abs() < 0.1, "{s:?}");
}

#[test]
fn energy_norm_matches_the_quadratic_form() {
    let config = preset("radial-local").unwrap();
    let level = solve_level(&config, 0, 8).unwrap();
    let zero = PlaneSolution {
        offset: 0.0,
        slope: Vec2::zeros(),
    };
    let e = error_norms(&level.mesh, &level.segments, &level.crack, &level.bulk_a, &level.solution, &zero, Quadrature::Standard);
    let quad = level.system.stiffness.quadratic_form(&level.solution.values);
    assert!((e.energy * e.energy - quad).abs() <= 1e-10 * quad);
}

// Midpoint rule on an m × m barycentric sub-grid of every triangle.
fn reference_l2_h1(level: &crackfem::study::LevelResult, exact: &dyn ExactSolution, m: usize) -> (f64, f64) {
    let (mut l2, mut h1) = (0.0, 0.0);
    for t in 0..level.mesh.num_triangles() {
        let tri = level.mesh.triangle_points(t);
        let area = crackfem::geom::signed_area(&tri);
        let g = level.solution.gradient(&level.mesh, t);
        let (mut a, mut b, mut count) = (0.0, 0.0, 0.0);
        for i in 0..m {
            for j in 0..m - i {
                let mut centers = vec![(i as f64 + 1.0 / 3.0, j as f64 + 1.0 / 3.0)];
                if i + j + 2 <= m {
                    centers.push((i as f64 + 2.0 / 3.0, j as f64 + 2.0 / 3.0));
                }
                for (li, lj) in centers {
                    let (li, lj) = (li / m as f64, lj / m as f64);
                    let x = Point::from(tri[0].coords * (1.0 - li - lj) + tri[1].coords * li + tri[2].coords * lj);
                    let e = level.solution.value_in(&level.mesh, t, &x) - exact.value(&x);
                    a += e * e;
                    b += (g - exact.gradient(&x)).norm_squared();
                    count += 1.0;
                }
            }
        }
        l2 += area * a / count;
        h1 += area * b / count;
    }
    (l2.sqrt(), h1.sqrt())
}

#[test]
fn default_quadrature_matches_a_subdivided_rule() {
    let config = preset("radial-local").unwrap();
    let exact = config.exact_solution().unwrap().unwrap();
    for divisions in [8, 32] {
        let level = solve_level(&config, 0, divisions).unwrap();
        let (l2, h1) = reference_l2_h1(&level, exact.as_ref(), 12);
        let norms = |rule| error_norms(&level.mesh, &level.segments, &level.crack, &level.bulk_a, &level.solution, exact.as_ref(), rule);
        let high = norms(Quadrature::default());
        assert!((high.l2 - l2).abs() <= 0.01 * l2, "{} vs {l2}", high.l2);
        assert!((high.h1_semi - h1).abs() <= 0.01 * h1, "{} vs {h1}", high.h1_semi);
        assert_eq!(level.errors.unwrap(), high);
        let standard = norms(Quadrature::Standard);
        assert!((standard.h1_semi - h1).abs() <= 0.02 * h1);
        assert!(standard.l2 > l2 && standard.l2 < 1.25 * l2);
    }
}

#[test]
fn local_refinement_beats_uniform_refinement() {
    let mut slopes = Vec::new();
    for name in ["radial-uniform", "radial-local"] {
        let mut config = preset(name).unwrap();
        config.study.as_mut().unwrap().levels = vec![8, 16, 32];
        let study = run_convergence_study(&config, None).unwrap();
        for w in study.reports.windows(2) {
            assert!(w[1].errors.l2 < 1.2 * w[0].errors.l2);
            assert!(w[1].errors.h1_semi < 1.2 * w[0].errors.h1_semi);
        }
        slopes.push(study.slopes);
    }
    assert!(slopes[0].l2 < slopes[1].l2 && slopes[0].h1_semi < slopes[1].h1_semi, "{slopes:?}");
}

#[test]
fn slope_fit_examples() {
    let h = [0.1, 0.05, 0.025];
    assert!((least_squares_slope(&h, &h.map(|x| 3.0 * x * x)) - 2.0).abs() < 1e-12);
    assert!((least_squares_slope(&h, &h.map(f64::sqrt)) - 0.5).abs() < 1e-12);
    let report = |h: f64| NormReport {
        level: 0,
        h,
        h_gamma: h,
        n_dofs: 0,
        errors: ErrorNorms {
            l2: h,
            h1_semi: h,
            l2_gamma: h,
            energy: h,
        },
    };
    assert!(eoc(&[report(0.1), report(0.05)]).is_err());
    assert!(eoc(&[report(0.1), report(0.1), report(0.05)]).is_err());
    assert!((eoc(&[report(0.1), report(0.05), report(0.01)]).unwrap().energy - 1.0).abs() < 1e-12);
}

fn straight_pair(a_gamma: f64) -> CrackSpec {
    CrackSpec {
        nodes: vec![[0.2, 0.2], [0.5, 0.5], [0.8, 0.8]],
        chains: vec![segment_chain([0, 1], a_gamma), segment_chain([1, 2], a_gamma)],
    }
}

#[test]
fn kirchhoff_residual_of_a_plane() {
    let mesh = unit_square(10);
    let plane = PlaneSolution {
        offset: 0.0,
        slope: Vec2::new(1.0, 0.0),
    };
    let u = interpolant(&mesh, &plane);
    let crack = straight_pair(3.0).build(0.03).unwrap();
    let cut = cut_chains(&mesh, &crack).unwrap();
    for sampling in [TangentSampling::Touching, TangentSampling::Detached, TangentSampling::Window] {
        let balances = kirchhoff_residual_with(&u, &mesh, &crack, &cut, sampling);
        assert_eq!(balances.len(), 3);
        let mid = balances.iter().find(|b| b.node == 1).unwrap();
        assert_eq!(mid.degree, 2);
        assert!(mid.imbalance.abs() <= 1e-12);
        assert!((mid.flux_magnitude - 2.0 * 3.0 / 2f64.sqrt()).abs() <= 1e-12);
        for tip in balances.iter().filter(|b| b.node != 1) {
            assert_eq!(tip.degree, 1);
            assert!((tip.imbalance.abs() - 3.0 / 2f64.sqrt()).abs() <= 1e-12);
        }
    }
    let silent = straight_pair(0.0).build(0.03).unwrap();
    let cut = cut_chains(&mesh, &silent).unwrap();
    assert_eq!(total_imbalance(&kirchhoff_residual(&u, &mesh, &silent, &cut)), 0.0);
}
