use std::f64::consts::PI;

use dglab::analysis::{run_compare, run_convergence, InitialCondition, RunConfig, Scheme};
use dglab::dg_operator::{DgOperator, RhsPath};
use dglab::mesh_basis::{error_norms, project, Mesh1D, ModalBasis, ModalField};
use dglab::time_integrator::{Integrator, Method};

const METHODS: [Method; 3] = [Method::Euler, Method::Ssprk2, Method::Ssprk3];

fn sine(x: f64) -> f64 {
    (2.0 * PI * x).sin()
}

fn evolve(k: usize, n: usize, method: Method, cfl: f64, t: f64, f: impl Fn(f64) -> f64) -> (ModalField, ModalField) {
    let mesh = Mesh1D::new(n).unwrap();
    let op = DgOperator::new(k).unwrap();
    let u0 = project(f, mesh, ModalBasis::new(k).unwrap()).unwrap();
    let (u, _) = Integrator::new(method, cfl, t)
        .unwrap()
        .integrate(u0.clone(), mesh.dx(), |u, _| op.rhs(u, RhsPath::Matrix))
        .unwrap();
    (u0, u)
}

#[test]
fn constants_survive_every_method() {
    for m in METHODS {
        for k in 0..=2 {
            let (_, u) = evolve(k, 16, m, 0.1, 1.0, |_| 2.5);
            for j in 0..16 {
                assert!((u.average(j) - 2.5).abs() < 1e-12);
                assert!(u.cell(j)[1..].iter().all(|c| c.abs() < 1e-12));
            }
        }
    }
}

#[test]
fn piecewise_constant_upwind_decays_visibly() {
    // Euler at cfl 1 is an exact shift for k = 0, so take the three-stage form
    let (_, u) = evolve(0, 32, Method::Ssprk3, 1.0, 1.0, sine);
    let e = error_norms(&u, sine);
    assert!(e.l2 > 0.05, "L2 error {}", e.l2);
    let amplitude = u.max_abs();
    assert!(amplitude < 0.95 && amplitude > 0.5, "{amplitude}");
}

#[test]
fn linear_invariant_is_conserved() {
    let f = |x: f64| sine(x) + 0.3 * (4.0 * PI * x).cos() + 0.7;
    for m in METHODS {
        for k in 1..=2 {
            // Euler and P2 is unstable; a short horizon keeps the state finite
            let t = if m == Method::Euler { 0.1 } else { 1.0 };
            let (u0, u) = evolve(k, 40, m, 0.05, t, f);
            let mass = |v: &ModalField| (0..40).map(|j| v.average(j)).sum::<f64>() / 40.0;
            assert!((mass(&u) - mass(&u0)).abs() <= 1e-12, "{m:?} k={k}");
        }
    }
}

#[test]
fn p1_ssprk2_cfl_ceiling() {
    let l2 = |cfl: f64| {
        let mesh = Mesh1D::new(32).unwrap();
        let op = DgOperator::new(1).unwrap();
        let u0 = project(sine, mesh, ModalBasis::new(1).unwrap()).unwrap();
        Integrator::new(Method::Ssprk2, cfl, 10.0)
            .unwrap()
            .integrate(u0, mesh.dx(), |u, _| op.rhs(u, RhsPath::Matrix))
            .map(|(u, _)| error_norms(&u, |_| 0.0).l2)
            .unwrap_or(f64::INFINITY)
    };
    let initial = 0.5f64.sqrt();
    assert!(l2(0.15) <= initial * 1.0001);
    assert!(l2(1.0) > 10.0 * initial);
}

#[test]
fn compare_at_time_zero_gives_equal_fv_errors() {
    let c = RunConfig {
        grids: vec![10, 20, 40],
        periods: 0.0,
        ..RunConfig::default()
    };
    let t = run_compare(&c).unwrap();
    let schemes: Vec<_> = t.tables.iter().map(|t| t.scheme).collect();
    assert_eq!(schemes, [Scheme::DgP1, Scheme::Fv2Central, Scheme::Fv2Upwind]);
    let norms = |i: usize| t.tables[i].rows.iter().map(|r| r.norms).collect::<Vec<_>>();
    assert_eq!(norms(1), norms(2));
    // cell averages of the exact data have no error at all
    assert!(t.tables[1].rows.iter().all(|r| r.norms.unwrap().l2 == 0.0));
}

#[test]
fn compare_sine_is_second_order_everywhere() {
    let c = RunConfig {
        grids: vec![40, 80, 160],
        ..RunConfig::default()
    };
    for t in run_compare(&c).unwrap().tables {
        let e = t.last_eoc_l2().unwrap();
        assert!((e - 2.0).abs() < 0.2, "{}: {e}", t.scheme.name());
    }
}

#[test]
fn step_data_is_informational() {
    let c = RunConfig {
        scheme: Scheme::Fv2Upwind,
        grids: vec![20, 40],
        ic: InitialCondition::Step,
        ..RunConfig::default()
    };
    let t = run_convergence(&c).unwrap();
    assert!(t.informational());
    assert!(t.checks().is_empty());
    assert!(t.to_csv().lines().skip(1).all(|l| l.ends_with(",informational")));
    let cmp = run_compare(&c).unwrap().to_csv();
    assert!(cmp.lines().skip(1).all(|l| l.ends_with(",informational")));
}

#[test]
fn gauss_pulse_converges() {
    let c = RunConfig {
        scheme: Scheme::DgP2,
        grids: vec![40, 80, 160],
        ic: "gauss:0.08".parse().unwrap(),
        ..RunConfig::default()
    };
    let e = run_convergence(&c).unwrap().last_eoc_l2().unwrap();
    assert!((2.7..=3.3).contains(&e), "{e}");
}
