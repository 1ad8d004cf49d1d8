//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::f64::consts::{E, TAU};
use std::process::ExitCode;

use crackfem::analysis::{ExactSolution, PlaneSolution, RadialExact};
use crackfem::assembly::{assemble, bulk_element_matrix, constant, interface_segment_matrix, stiffness_matrix, BoundarySpec, Coefficients};
use crackfem::config::preset;
use crackfem::crack::{cut_chains, ChainShape, ChainSpec, CrackGraph, CrackSpec, SegmentedCrack};
use crackfem::mesh::Refiner;
use crackfem::solve::{solve, SolverConfig};
use crackfem::study::{run_convergence_study, solve_level};
use crackfem::{Point, Result};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use common::*;

const UNIFORM_H1: (f64, f64) = (0.5, 0.15);
const UNIFORM_L2: (f64, f64) = (1.0, 0.2);
const LOCAL_H1: (f64, f64) = (1.0, 0.15);
const LOCAL_L2: (f64, f64) = (2.0, 0.25);
const MIN_HALVINGS: usize = 4;
const PLANE_TOL: f64 = 1e-8;
const CONTINUITY_TOL: f64 = 1e-14;
const FLUX_TOL: f64 = 1e-12;
const FLUX_POINTS: usize = 100;
const LENGTH_TOL: f64 = 1e-10;
const MIN_ANGLE_DEG: f64 = 15.0;
const RANDOM_SEQUENCES: u64 = 10;
const ORDER_TOL: f64 = 1e-12;
const PATCH_TOL: f64 = 1e-12;
const KIRCHHOFF_FACTOR: f64 = 1.5;
const KIRCHHOFF_LEVELS: (usize, usize) = (8, 32);

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);

fn within(value: f64, (target, tol): (f64, f64)) -> bool {
    (value - target).abs() <= tol
}

fn convergence(name: &str, h1: (f64, f64), l2: (f64, f64)) -> Outcome {
    let config = preset(name)?;
    let levels = &config.study.as_ref().expect("study presets declare levels").levels;
    let halvings = levels.len() - 1;
    let study = run_convergence_study(&config, None)?;
    let s = study.slopes;
    let ok = halvings >= MIN_HALVINGS && within(s.h1_semi, h1) && within(s.l2, l2);
    Ok((
        ok,
        format!(
            "{name}: H1 slope {:.3} (want {}±{}), L2 slope {:.3} (want {}±{}), {halvings} halvings, L2(crack) {:.3}, energy {:.3}",
            s.h1_semi, h1.0, h1.1, s.l2, l2.0, l2.1, s.l2_gamma, s.energy
        ),
    ))
}

fn criterion_3() -> Outcome {
    let config = preset("network-plane")?;
    let level = solve_level(&config, 0, config.mesh.divisions)?;
    let crack_free = stiffness_matrix(&level.mesh, &SegmentedCrack::default(), &CrackGraph::empty(), &level.bulk_a)?;
    let bitwise = level.system.stiffness.bitwise_eq(&crack_free) && !level.segments.is_empty();
    let plane = PlaneSolution::network_plane();
    let err = level
        .mesh
        .vertices()
        .iter()
        .zip(&level.solution.values)
        .map(|(p, u)| (u - plane.value(p)).abs())
        .fold(0.0, f64::max);
    Ok((
        bitwise && err <= PLANE_TOL,
        format!(
            "a_gamma = 0 matrix bitwise equal to crack-free: {bitwise}; max |u_h - (1 - x/13)| = {err:.2e} (tol {PLANE_TOL:e}) over {} vertices",
            level.mesh.num_vertices()
        ),
    ))
}

fn criterion_4() -> Outcome {
    let value = (4.0 + E) / 5.0;
    let cont = (RadialExact::inner_value(E) - value).abs().max((RadialExact::outer_value(E) - value).abs());
    let inner = RadialExact::inner_value(1.0);
    let outer = RadialExact::outer_value(RadialExact::outer_radius());
    let flux = (0..FLUX_POINTS)
        .map(|k| {
            let theta = k as f64 / FLUX_POINTS as f64 * TAU;
            let x = Point::new(E * theta.cos(), E * theta.sin());
            (RadialExact::F_GAMMA + RadialExact::flux_jump(&x)).abs()
        })
        .fold(0.0, f64::max);
    let ok = cont <= CONTINUITY_TOL && inner == 0.0 && outer == 1.0 && flux <= FLUX_TOL;
    Ok((
        ok,
        format!("continuity gap {cont:.1e}, u(1) = {inner}, u(e^(5/4)) = {outer}, max |f_gamma + [n.a grad u]| = {flux:.1e} at {FLUX_POINTS} points"),
    ))
}

fn element_oracles() -> bool {
    let tri = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
    let k = bulk_element_matrix(&tri, 1.0).unwrap();
    let m = interface_segment_matrix(&tri[0], &tri[1], &tri, 1.0).unwrap();
    k == [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]] && m == [[1.0, -1.0, 0.0], [-1.0, 1.0, 0.0], [0.0; 3]]
}

fn patch_test() -> bool {
    let mesh = unit_square(9);
    let crack = y_crack_spec(50.0).build(0.02).unwrap();
    let cut = cut_chains(&mesh, &crack).unwrap();
    let sys = assemble(&mesh, &cut, &crack, &Coefficients::uniform(1.0, constant(0.0)), &BoundarySpec::dirichlet_everywhere(constant(2.5))).unwrap();
    let u = solve(&sys, &SolverConfig::direct()).unwrap();
    u.values.iter().all(|x| (x - 2.5).abs() <= PATCH_TOL)
}

fn spd_and_symmetric() -> bool {
    let mesh = unit_square(9);
    let crack = y_crack_spec(5.0).build(0.02).unwrap();
    let cut = cut_chains(&mesh, &crack).unwrap();
    let sys = assemble(&mesh, &cut, &crack, &Coefficients::uniform(1.0, constant(1.0)), &BoundarySpec::dirichlet_everywhere(constant(0.0))).unwrap();
    let (k, _, _) = sys.reduced();
    let mut rng = StdRng::seed_from_u64(3);
    sys.stiffness.is_symmetric()
        && k.is_symmetric()
        && (0..20).all(|_| {
            let v: Vec<f64> = (0..k.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            k.quadratic_form(&v) > 0.0
        })
}

fn length_conservation() -> f64 {
    let mut rng = StdRng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let mut pt = || [rng.gen_range(0.02..0.98), rng.gen_range(0.02..0.98)];
        let spec = CrackSpec {
            nodes: vec![pt(), pt()],
            chains: vec![ChainSpec {
                shape: ChainShape::Polyline { points: vec![pt(), pt()] },
                nodes: [0, 1],
                a_gamma: 1.0,
                f_gamma: 0.0,
            }],
        };
        let crack = spec.build(rng.gen_range(0.01..0.2)).unwrap();
        let cut = cut_chains(&unit_square(rng.gen_range(1..12)), &crack).unwrap();
        let total: f64 = cut.segments.iter().map(|s| s.length).sum();
        worst = worst.max((total - crack.total_length()).abs() / crack.total_length());
    }
    let radial = radial_crack(0.05);
    let cut = cut_chains(&radial_mesh(16), &radial).unwrap();
    let total: f64 = cut.segments.iter().map(|s| s.length).sum();
    worst.max((total - radial.total_length()).abs() / radial.total_length())
}

fn min_angle_over_random_sequences() -> f64 {
    let mut worst = f64::INFINITY;
    for seed in 0..RANDOM_SEQUENCES {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut r = Refiner::new(&unit_square(3));
        for _ in 0..200 {
            let t = rng.gen_range(0..r.num_triangles());
            r.refine_element(t);
        }
        worst = worst.min(r.into_mesh().min_angle_deg());
    }
    worst
}

// (bitwise, max relative deviation) over segment shuffles and chain permutations.
fn y_order_independence() -> (bool, f64) {
    let mesh = unit_square(9);
    let crack = y_crack_spec(7.0).build(0.02).unwrap();
    let cut = cut_chains(&mesh, &crack).unwrap();
    let a = vec![1.0; mesh.num_triangles()];
    let reference = stiffness_matrix(&mesh, &cut, &crack, &a).unwrap();
    let scale = reference.norm();
    let mut bitwise = true;
    let mut dev: f64 = 0.0;
    let mut compare = |k: crackfem::sparse::CsrMatrix| {
        bitwise &= k.bitwise_eq(&reference);
        for (x, y) in k.values().iter().zip(reference.values()) {
            dev = dev.max((x - y).abs() / scale);
        }
    };
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..5 {
        let mut order: Vec<usize> = (0..cut.len()).collect();
        order.shuffle(&mut rng);
        compare(stiffness_matrix(&mesh, &cut.reordered(&order), &crack, &a).unwrap());
    }
    for perm in [[2, 0, 1], [1, 2, 0], [2, 1, 0]] {
        let mut spec = y_crack_spec(7.0);
        spec.chains = perm.iter().map(|&j| spec.chains[j].clone()).collect();
        let crack2 = spec.build(0.02).unwrap();
        let cut2 = cut_chains(&mesh, &crack2).unwrap();
        compare(stiffness_matrix(&mesh, &cut2, &crack2, &a).unwrap());
    }
    (bitwise, dev)
}

fn criterion_5() -> Outcome {
    let oracles = element_oracles();
    let patch = patch_test();
    let spd = spd_and_symmetric();
    let length = length_conservation();
    let angle = min_angle_over_random_sequences();
    let (bitwise, dev) = y_order_independence();
    let ok = oracles && patch && spd && length <= LENGTH_TOL && angle >= MIN_ANGLE_DEG && dev <= ORDER_TOL;
    Ok((
        ok,
        format!(
            "element oracles {oracles}, patch test {patch}, SPD+symmetric {spd}, chain length rel. error {length:.1e}, \
             min angle {angle:.2} deg over {RANDOM_SEQUENCES} sequences, Y-crack order: bitwise {bitwise}, max rel. deviation {dev:.1e}"
        ),
    ))
}

fn criterion_6() -> Outcome {
    let config = preset("network")?;
    let max_imbalance = |divisions| -> Result<(f64, f64, usize)> {
        let level = solve_level(&config, 0, divisions)?;
        let max = level.kirchhoff.iter().map(|b| b.imbalance.abs()).fold(0.0, f64::max);
        Ok((max, crackfem::analysis::total_imbalance(&level.kirchhoff), level.mesh.num_vertices()))
    };
    let (coarse, coarse_sum, n0) = max_imbalance(KIRCHHOFF_LEVELS.0)?;
    let (fine, fine_sum, n1) = max_imbalance(KIRCHHOFF_LEVELS.1)?;
    let factor = coarse / fine;
    Ok((
        factor >= KIRCHHOFF_FACTOR,
        format!(
            "max node imbalance {coarse:.3e} ({n0} vertices) -> {fine:.3e} ({n1} vertices), factor {factor:.2} (want >= {KIRCHHOFF_FACTOR}); summed {coarse_sum:.3e} -> {fine_sum:.3e}"
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("1 radial convergence, uniform refinement", || convergence("radial-uniform", UNIFORM_H1, UNIFORM_L2)),
        ("2 radial convergence, crack-local refinement", || convergence("radial-local", LOCAL_H1, LOCAL_L2)),
        ("3 zero crack permeability and plane solution", criterion_3),
        ("4 exact solution consistency", criterion_4),
        ("5 property suites", criterion_5),
        ("6 Kirchhoff residual under local refinement", criterion_6),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let (ok, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        println!("{} criterion {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
