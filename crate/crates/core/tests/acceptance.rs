//! End-to-end acceptance checks. Each test prints one PASS/FAIL line to stderr
//! (uncaptured) and then asserts. The two extended-tier experiments take tens of minutes
//! and are ignored by default; run them with `cargo test --test acceptance -- --ignored`.

use std::io::Write;

use num_complex::Complex64;
use qnls_core::evolve::{evolve, make_initial, EvolutionConfig, InitialCondition};
use qnls_core::fit::{fit_ground_state, FitResult, DEFAULT_WINDOW};
use qnls_core::phaseplane::{
    critical_points, gradient, hamiltonian, nondegeneracy_check, shoot_ground_state,
    wronskian_constancy, IntervalGrid, PhasePoint,
};
use qnls_core::spectral::{self, rhs, rhs_via_dirac_system, Grid};
use qnls_core::{rk4_step, ComplexField, Diagnostics, Error, GroundState, ModelParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "acceptance [{verdict}] {name}: {detail}");
    assert!(pass, "{name}: {detail}");
}

fn params(a: f64, b: f64, alpha: u32) -> ModelParams {
    ModelParams::new(a, b, alpha).unwrap()
}

struct Run {
    fit: FitResult,
    diagnostics: Diagnostics,
}

fn run_and_fit(
    p: &ModelParams,
    n: usize,
    l: f64,
    ic: InitialCondition,
    t_end: f64,
    n_steps: u64,
) -> Run {
    let grid = Grid::new(n, l).unwrap();
    let f0 = make_initial(&ic, p, &grid).unwrap();
    let cfg = EvolutionConfig::new(t_end, n_steps).unwrap();
    let (f, diagnostics) = evolve(&f0, &cfg, p).unwrap_or_else(|abort| panic!("{abort}"));
    let fit = fit_ground_state(&f, p, DEFAULT_WINDOW).unwrap();
    Run { fit, diagnostics }
}

#[test]
fn closed_form_residuals() {
    let sets: [(u32, [f64; 5]); 3] = [
        (1, [4.0, 4.2, 4.4, 4.49, 4.499]),
        (2, [2.0, 2.5, 2.8, 2.9, 2.99]),
        (3, [2.0, 2.1, 2.2, 2.22, 2.24]),
    ];
    let mut worst_stat = 0.0f64;
    let mut worst_first = 0.0f64;
    for (alpha, bs) in sets {
        for b in bs {
            let gs = GroundState::centered(params(9.0, b, alpha)).unwrap();
            for k in 0..=30_000 {
                let x = -15.0 + k as f64 * 1e-3;
                worst_stat = worst_stat.max(gs.stationary_residual(x).abs());
                worst_first = worst_first.max(gs.first_integral_residual(x).abs());
            }
        }
    }
    report(
        "closed-form residuals on [-15, 15], 15 parameter sets",
        worst_stat < 1e-10 && worst_first < 1e-10,
        &format!(
            "max stationary {worst_stat:.3e}, max first integral {worst_first:.3e} (bound 1e-10)"
        ),
    );
}

#[test]
fn ground_state_evolution_fidelity() {
    let p = params(9.0, 4.4, 1);
    let grid = Grid::new(1024, 5.0).unwrap();
    let gs = GroundState::centered(p).unwrap();
    let f0 = gs.sample_on(&grid);
    let cfg = EvolutionConfig::new(1.0, 100_000).unwrap();
    let (f, diag) = evolve(&f0, &cfg, &p).unwrap();
    let exact = f0.scaled(Complex64::from_polar(1.0, 4.4));
    let err = f.max_abs_diff(&exact);
    let drift = diag.max_energy_drift();
    report(
        "ground-state evolution a=9 b=4.4 N=1024 t=1",
        err <= 1e-10 && drift <= 1e-10,
        &format!("max error vs exp(ibt)phi {err:.3e}, energy drift {drift:.3e} (bounds 1e-10)"),
    );
}

#[test]
fn perturbed_ground_state_fits() {
    let p = params(9.0, 4.4, 1);
    let cases = [
        (
            "lambda=0.99",
            InitialCondition::GroundStateScaled { lambda: 0.99 },
            4.388,
        ),
        (
            "lambda=1.001",
            InitialCondition::GroundStateScaled { lambda: 1.001 },
            4.4011,
        ),
        (
            "gauss-",
            InitialCondition::GroundStatePlusGaussian { epsilon: -0.001 },
            4.3992,
        ),
        (
            "gauss+",
            InitialCondition::GroundStatePlusGaussian { epsilon: 0.001 },
            4.4008,
        ),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, ic, target) in cases {
        let run = run_and_fit(&p, 2048, 5.0, ic, 0.25, 500_000);
        let drift = run.diagnostics.max_energy_drift();
        let ok = (run.fit.b_fit - target).abs() <= 5e-3 && drift < 1e-6;
        pass &= ok;
        detail.push(format!(
            "{name}: b_fit {:.5} (target {target}), drift {drift:.1e}",
            run.fit.b_fit
        ));
    }
    report(
        "perturbed ground-state fits, alpha=1 (tol 5e-3, drift < 1e-6)",
        pass,
        &detail.join("; "),
    );
}

#[test]
#[ignore = "long-running: four runs of 2e6 steps at N=8192"]
fn higher_nonlinearity_fits() {
    let cases = [
        ("alpha=2 lambda=0.99", params(9.0, 2.9, 2), 0.99, 2.9221),
        ("alpha=2 lambda=1.001", params(9.0, 2.9, 2), 1.001, 2.9315),
        ("alpha=3 lambda=0.99", params(9.0, 2.1, 3), 0.99, 2.1492),
        ("alpha=3 lambda=1.001", params(9.0, 2.1, 3), 1.001, 2.164),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, p, lambda, target) in cases {
        let run = run_and_fit(
            &p,
            8192,
            20.0,
            InitialCondition::GroundStateScaled { lambda },
            2.0,
            2_000_000,
        );
        let ok = (run.fit.b_fit - target).abs() <= 2e-2;
        pass &= ok;
        detail.push(format!(
            "{name}: b_fit {:.4} (target {target}), drift {:.1e}",
            run.fit.b_fit,
            run.diagnostics.max_energy_drift()
        ));
    }
    report(
        "higher-nonlinearity fits (tol 2e-2)",
        pass,
        &detail.join("; "),
    );
}

#[test]
#[ignore = "long-running: three runs of 5e5 steps at N=4096"]
fn gaussian_data_resolution() {
    let cases = [(1, 2.7188, 2e-2), (2, 1.4399, 3e-2), (3, 1.2549, 3e-2)];
    let mut pass = true;
    let mut detail = Vec::new();
    for (alpha, target, tol) in cases {
        // b only enters through the fit, which searches over it
        let p = params(9.0, 1.0, alpha);
        let run = run_and_fit(
            &p,
            4096,
            40.0,
            InitialCondition::Gaussian { mu: 0.9 },
            10.0,
            500_000,
        );
        let linf = run.diagnostics.max_linf();
        let ok = (run.fit.b_fit - target).abs() <= tol && linf < 1.0;
        pass &= ok;
        detail.push(format!(
            "alpha={alpha}: b_fit {:.4} (target {target} +- {tol}), max|phi| {linf:.4}",
            run.fit.b_fit
        ));
    }
    report(
        "Gaussian data mu=0.9 settle on a ground state",
        pass,
        &detail.join("; "),
    );
}

// eighth-order central difference; exact (up to rounding) for polynomials of degree <= 8
fn d8(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    const W: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    W.iter()
        .enumerate()
        .map(|(k, w)| w * (f(x + (k + 1) as f64 * h) - f(x - (k + 1) as f64 * h)))
        .sum::<f64>()
        / h
}

#[test]
fn phase_plane_oracles() {
    let p = params(9.0, 4.4, 1);
    let gs = GroundState::centered(p).unwrap();
    let orbit = shoot_ground_state(&p, 10.0, 100_000).unwrap();
    let shoot_err = orbit
        .iter()
        .map(|&(x, q)| (q.phi - gs.eval(x)).abs())
        .fold(0.0, f64::max);
    let h_err = orbit
        .iter()
        .map(|&(_, q)| hamiltonian(q, &p).abs())
        .fold(0.0, f64::max);

    let mut grad_fd = 0.0f64;
    let mut grad_exact = 0.0f64;
    for q in [
        params(9.0, 4.0, 1),
        params(1.0, 1.0, 1),
        params(2.0, 3.0, 1),
        params(9.0, 2.9, 2),
        params(9.0, 2.2, 3),
    ] {
        for cp in critical_points(&q).points {
            let pt = cp.point;
            let gc = d8(
                |c| hamiltonian(PhasePoint::new(c, pt.phi), &q),
                pt.chi,
                0.05,
            );
            let gp = d8(
                |f| hamiltonian(PhasePoint::new(pt.chi, f), &q),
                pt.phi,
                0.05,
            );
            grad_fd = grad_fd.max(gc.hypot(gp));
            let (ec, ep) = gradient(pt, &q);
            grad_exact = grad_exact.max(ec.hypot(ep));
        }
    }
    report(
        "phase-plane shooting, Hamiltonian and critical points",
        shoot_err < 1e-8 && h_err < 1e-10 && grad_fd < 1e-12 && grad_exact < 1e-12,
        &format!(
            "shooting vs closed form {shoot_err:.2e} (1e-8), |H| on orbit {h_err:.2e} (1e-10), \
             critical-point |grad H| fd {grad_fd:.2e} / exact {grad_exact:.2e} (1e-12)"
        ),
    );
}

#[test]
fn linearized_operator_nondegeneracy() {
    let mut pass = true;
    let mut detail = Vec::new();
    for (alpha, b) in [(1, 4.4), (2, 2.8), (3, 2.2)] {
        let p = params(9.0, b, alpha);
        let gs = GroundState::centered(p).unwrap();
        let r = nondegeneracy_check(&gs, &IntervalGrid::symmetric(12.0, 2048).unwrap()).unwrap();
        let phi0 = p.peak_amplitude();
        let deriv_orbit = (-(alpha as f64) * b * phi0, 0.0);
        let w = [deriv_orbit, (0.3, 1.0), (0.0, -0.5)]
            .iter()
            .map(|&init| wronskian_constancy(&gs, 10.0, 20_000, init).unwrap())
            .fold(0.0, f64::max);
        let ok = r.zero_multiplicity == 1 && r.alignment > 0.999 && w < 1e-8;
        pass &= ok;
        detail.push(format!(
            "alpha={alpha} b={b}: multiplicity {}, lambda {:.2e}, alignment {:.9}, wronskian variation {w:.1e}",
            r.zero_multiplicity, r.eigenvalue_near_zero, r.alignment
        ));
    }
    report(
        "linearized operator kernel is one-dimensional",
        pass,
        &detail.join("; "),
    );
}

fn random_field(grid: &Grid, rng: &mut ChaCha8Rng) -> ComplexField {
    let values = (0..grid.len())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexField::new(grid, values).unwrap()
}

#[test]
fn property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut detail = Vec::new();
    let mut pass = true;

    // transform round trip
    let mut roundtrip = 0.0f64;
    for k in 8..=13 {
        let grid = Grid::new(1 << k, 5.0).unwrap();
        let f = random_field(&grid, &mut rng);
        roundtrip = roundtrip.max(spectral::inverse(&spectral::forward(&f)).max_abs_diff(&f));
    }
    pass &= roundtrip < 1e-13;
    detail.push(format!("DFT round trip {roundtrip:.1e}"));

    // observed RK4 order by step halving
    let p = params(9.0, 4.4, 1);
    let grid = Grid::new(256, 5.0).unwrap();
    let f0 = make_initial(
        &InitialCondition::GroundStateScaled { lambda: 0.99 },
        &p,
        &grid,
    )
    .unwrap();
    let t_end = 0.02;
    let solve = |steps: usize| {
        let dt = t_end / steps as f64;
        (0..steps).fold(f0.clone(), |f, _| rk4_step(&f, dt, &p).unwrap())
    };
    let (u1, u2, u3) = (solve(400), solve(800), solve(1600));
    let order = (u1.max_abs_diff(&u2) / u2.max_abs_diff(&u3)).log2();
    pass &= order >= 3.9;
    detail.push(format!("RK4 order {order:.3}"));

    // two routes to the right-hand side
    let g = Grid::new(1024, 5.0).unwrap();
    let gs = GroundState::centered(p).unwrap();
    let bump = ComplexField::from_fn(&g, |x| {
        Complex64::from_polar(
            0.99 * gs.eval(x) + 0.01 * (-(x - 0.5) * (x - 0.5)).exp(),
            0.3 * (-x * x).exp(),
        )
    });
    let mut route = 0.0f64;
    for f in [gs.sample_on(&g).scaled(Complex64::new(0.99, 0.0)), bump] {
        let a = rhs(&f, &p).unwrap();
        let b = rhs_via_dirac_system(&f, &p).unwrap();
        let scale = a.linf().max(1.0);
        route = route.max(a.max_abs_diff(&b) / scale);
    }
    pass &= route < 1e-10;
    detail.push(format!("rhs route agreement {route:.1e}"));

    // mass and energy are conserved together
    let g = Grid::new(512, 5.0).unwrap();
    let f0 = make_initial(
        &InitialCondition::GroundStatePlusGaussian { epsilon: 0.001 },
        &p,
        &g,
    )
    .unwrap();
    let cfg = EvolutionConfig::new(0.05, 20_000).unwrap();
    let (_, diag) = evolve(&f0, &cfg, &p).unwrap();
    let (de, dm) = (diag.max_energy_drift(), diag.max_mass_drift());
    pass &= de < 1e-8 && dm < 1e-8;
    detail.push(format!("energy drift {de:.1e}, mass drift {dm:.1e}"));

    // nonexistence regime
    let rejected = [(9.0, 4.5, 1), (2.0, 1.5, 1), (9.0, 3.0, 2), (9.0, 2.25, 3)]
        .iter()
        .all(|&(a, b, alpha)| {
            let q = params(a, b, alpha);
            matches!(GroundState::centered(q), Err(Error::ParameterDomain { .. }))
                && make_initial(
                    &InitialCondition::GroundStateScaled { lambda: 0.5 },
                    &q,
                    &grid,
                )
                .is_err()
        });
    pass &= rejected;
    detail.push(format!("a <= (alpha+1)b rejected: {rejected}"));

    report("property suite", pass, &detail.join("; "));
}
