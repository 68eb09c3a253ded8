//! Acceptance suite: one test per shipped guarantee, each printing a
//! pass/fail line with the measured quantities (run with `--nocapture` to
//! see the lines for passing tests).

use csgauge_core::{
    cs_inequality_gap, el_residual, energy_i, energy_i_gradient, escape_diagnostics,
    hamiltonian_residual, limit_el_residual, minimize_on_ball, nonexistence_threshold, omega0,
    omega1, psi_curve, scalar, solve_eq_k, soliton_relations, soliton_w1, soliton_wk, thresholds,
    translated_profile_energy, CsParams, Field, InitProfile, Mesh1D, MinimizeConfig,
    MinimizeResult, SolitonParams,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::time::Instant;

const OMEGA0_P2: f64 = 0.103_279_555_898_864_47; // 2 / (5 sqrt 15)
const OMEGA1_P2: f64 = 0.128_300_059_819_916_85; // 2 / (9 sqrt 3)

fn report(criterion: &str, start: Instant, budget_s: f64, detail: &str) {
    let elapsed = start.elapsed().as_secs_f64();
    println!("acceptance {criterion}: PASS ({elapsed:.2}s) — {detail}");
    assert!(elapsed < budget_s, "{criterion} exceeded its {budget_s}s budget: {elapsed:.1}s");
}

fn random_bumps(rng: &mut ChaCha8Rng, mesh: &Mesh1D, bumps: usize) -> Field {
    let rmax = mesh.b();
    let centers: Vec<(f64, f64, f64)> = (0..bumps)
        .map(|_| {
            (rng.gen_range(0.2..1.0), rng.gen_range(0.0..0.55 * rmax), rng.gen_range(0.4..rmax / 8.0))
        })
        .collect();
    Field::from_fn(mesh.clone(), |r| {
        centers.iter().map(|&(a, c, s)| a * (-(r - c) * (r - c) / (2.0 * s * s)).exp()).sum()
    })
    .unwrap()
}

#[test]
fn criterion_01_p2_closed_forms() {
    let start = Instant::now();
    let t = thresholds(2.0).unwrap();
    assert!((t.m - 6.0).abs() <= 1e-8, "m = {}", t.m);
    assert!((t.omega1 - OMEGA1_P2).abs() <= 1e-9);
    assert!((t.omega0 - OMEGA0_P2).abs() <= 1e-9);

    // cross-checks against the defining systems, solved numerically
    // m: independent quadrature with a different truncation and resolution
    let (half, n) = (120.0f64, 480_000usize);
    let h = 2.0 * half / n as f64;
    let mut acc = 0.0f64;
    for i in 0..=n {
        let r = -half + i as f64 * h;
        let w = soliton_w1(2.0, r).unwrap();
        acc += if i == 0 || i == n { 0.5 } else { 1.0 } * w * w;
    }
    let m_ref = acc * h;
    assert!((t.m - m_ref).abs() <= 1e-6, "independent mass {m_ref}");

    // omega1: tangency value of k - (m^2/4) k^3 located by golden section
    let (_, neg_max) =
        scalar::golden_section_min(|k| -(k - 0.25 * t.m * t.m * k.powi(3)), 1e-3, 1.0, 1e-13);
    assert!((-neg_max - t.omega1).abs() <= 1e-6);

    // omega0: frequency where psi(k2) changes sign, located by bisection
    let psi_k2 = |omega: f64| {
        let params = CsParams::new(2.0, omega).unwrap();
        psi_curve(solve_eq_k(&params).k2.unwrap(), &params).unwrap()
    };
    let flip = scalar::bisect_root(psi_k2, 0.5 * t.omega0, 0.99 * t.omega1, 1e-12).unwrap();
    assert!((flip - t.omega0).abs() <= 1e-6);

    report(
        "01 p2-closed-forms",
        start,
        5.0,
        &format!("m={:.10}, omega0={:.10}, omega1={:.10}", t.m, t.omega0, t.omega1),
    );
}

#[test]
fn criterion_02_soliton_identities() {
    let start = Instant::now();
    let sp = SolitonParams::new(2.0, 1.0).unwrap();
    let mesh = Mesh1D::line(40.0, 8000).unwrap();
    let ham = hamiltonian_residual(&sp, &mesh);
    assert!(ham <= 1e-6, "hamiltonian residual {ham:.3e}");

    let (kin, pot) = soliton_relations(2.0).unwrap();
    assert!((kin - 6.0 / 5.0).abs() <= 1e-7);
    assert!((pot - 36.0 / 5.0).abs() <= 1e-7);

    let mut worst = 0.0f64;
    for p in [1.5f64, 2.0, 2.5] {
        let params = CsParams::new(p, 0.8 * omega1(p).unwrap()).unwrap();
        let rep = solve_eq_k(&params);
        for k in [rep.k1.unwrap(), rep.k2.unwrap()] {
            let spk = SolitonParams::new(p, k).unwrap();
            let mesh = Mesh1D::line(40.0 / k.sqrt(), 16_000).unwrap();
            let u = Field::from_fn(mesh, |r| soliton_wk(&spk, r)).unwrap();
            let res = limit_el_residual(&u, &params).unwrap();
            worst = worst.max(res.values().iter().fold(0.0f64, |m, &v| m.max(v.abs())));
        }
    }
    assert!(worst <= 1e-5, "limit residual {worst:.3e}");
    report(
        "02 soliton-identities",
        start,
        30.0,
        &format!("hamiltonian {ham:.1e}, relations ({kin:.9}, {pot:.9}), max root residual {worst:.1e}"),
    );
}

#[test]
fn criterion_03_psi_eqk_duality() {
    let start = Instant::now();
    let mut worst_zero = 0.0f64;
    let mut worst_flip = 0.0f64;
    for p in [1.5f64, 2.0, 2.5] {
        let w1t = omega1(p).unwrap();
        let w0 = omega0(p).unwrap();
        let params = CsParams::new(p, 0.8 * w1t).unwrap();
        let rep = solve_eq_k(&params);
        let (k1, k2) = (rep.k1.unwrap(), rep.k2.unwrap());
        assert!(psi_curve(k1, &params).unwrap() > psi_curve(k2, &params).unwrap());

        let dpsi = |k: f64| {
            let dk = 1e-6 * k;
            (psi_curve(k + dk, &params).unwrap() - psi_curve(k - dk, &params).unwrap()) / (2.0 * dk)
        };
        for k in [k1, k2] {
            let z = scalar::bisect_root(dpsi, 0.9 * k, 1.1 * k, 1e-12).unwrap();
            worst_zero = worst_zero.max((z - k).abs());
        }

        let psi_k2 = |omega: f64| {
            let pr = CsParams::new(p, omega).unwrap();
            psi_curve(solve_eq_k(&pr).k2.unwrap(), &pr).unwrap()
        };
        assert!(psi_k2(0.5 * w0) < 0.0);
        assert!(psi_k2(0.5 * (w0 + w1t)) > 0.0);
        let flip = scalar::bisect_root(psi_k2, 0.5 * w0, 0.99 * w1t, 1e-12).unwrap();
        worst_flip = worst_flip.max((flip - w0).abs());
    }
    assert!(worst_zero <= 1e-6, "dpsi zeros off by {worst_zero:.3e}");
    assert!(worst_flip <= 1e-8, "sign flip off by {worst_flip:.3e}");
    report(
        "03 psi-eqk-duality",
        start,
        10.0,
        &format!("max |dpsi zero - root| {worst_zero:.1e}, max |flip - omega0| {worst_flip:.1e}"),
    );
}

#[test]
fn criterion_04_outer_root_at_threshold() {
    let start = Instant::now();
    let k2_exact = 1.0 / 15.0f64.sqrt();

    // independent bisection on the hand-written scalar equation with m = 6
    let g = |k: f64| 2.0 / (5.0 * 15.0f64.sqrt()) + 9.0 * k * k * k - k;
    let k2_bisect = scalar::bisect_root(g, 0.2, 1.0, 1e-15).unwrap();
    assert!((k2_bisect - k2_exact).abs() <= 1e-12);

    let params = CsParams::new(2.0, omega0(2.0).unwrap()).unwrap();
    let k2 = solve_eq_k(&params).k2.unwrap();
    assert!((k2 - k2_exact).abs() <= 1e-10, "k2 = {k2}");
    let psi = psi_curve(k2_exact, &params).unwrap();
    assert!(psi.abs() <= 1e-12, "psi = {psi:.3e}");
    report(
        "04 outer-root-at-threshold",
        start,
        1.0,
        &format!("|k2 - 1/sqrt(15)| = {:.1e}, |psi| = {:.1e}", (k2 - k2_exact).abs(), psi.abs()),
    );
}

#[test]
fn criterion_05_translated_profile_rate() {
    let start = Instant::now();
    let params = CsParams::new(2.0, omega0(2.0).unwrap()).unwrap();
    let k2 = solve_eq_k(&params).k2.unwrap();
    let sp = SolitonParams::new(2.0, k2).unwrap();
    let half_width = (40.0 / k2.sqrt() / 0.005).round() * 0.005;
    let n = (2.0 * half_width / 0.005).round() as usize;
    let u = Field::from_fn(Mesh1D::line(half_width, n).unwrap(), |r| soliton_wk(&sp, r)).unwrap();
    let j = csgauge_core::energy_j(&u, &params).unwrap().total;

    let mut corrections = Vec::new();
    for rho in [100.0, 200.0, 400.0] {
        let e = translated_profile_energy(&u, rho, &params).unwrap();
        assert!(e.total.abs() > 0.0, "rho = {rho}: energy unexpectedly zero");
        // per unit length the energy approaches J(w_k2) = 0
        assert!((e.total / (TAU * rho)).abs() <= 0.02);
        let corr = e.total - TAU * rho * j;
        assert!(corr < 0.0, "rho = {rho}: correction {corr:.3e} not negative");
        corrections.push(corr);
    }
    let rel = ((corrections[2] - corrections[1]) / corrections[1]).abs();
    assert!(rel < 0.10, "correction varies by {rel:.3}");
    report(
        "05 translated-profile-rate",
        start,
        60.0,
        &format!(
            "corrections {:+.4e}, {:+.4e}, {:+.4e}; relative change {rel:.4}",
            corrections[0], corrections[1], corrections[2]
        ),
    );
}

#[test]
fn criterion_06_fundamental_inequality() {
    let start = Instant::now();
    let mesh = Mesh1D::radial(16.0, 3200).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(424_242);
    let mut min_gap = f64::INFINITY;
    for _ in 0..100 {
        let bumps = rng.gen_range(1..5);
        let u = random_bumps(&mut rng, &mesh, bumps);
        min_gap = min_gap.min(cs_inequality_gap(&u).unwrap());
    }
    assert!(min_gap >= -1e-8, "min gap {min_gap:.3e}");
    report("06 fundamental-inequality", start, 30.0, &format!("min gap {min_gap:.3e} over 100 fields"));
}

#[test]
fn criterion_07_gradient_check() {
    let start = Instant::now();
    let mesh = Mesh1D::radial(10.0, 4000).unwrap();
    let params = CsParams::new(2.0, 0.15).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31_337);
    let u = random_bumps(&mut rng, &mesh, 3);
    let grad = energy_i_gradient(&u, &params).unwrap();
    let fd_step = f64::EPSILON.cbrt();
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let v = random_bumps(&mut rng, &mesh, 2);
        let analytic: f64 = grad.iter().zip(v.values()).map(|(g, w)| g * w).sum();
        let shifted = |sign: f64| {
            Field::new(
                mesh.clone(),
                u.values().iter().zip(v.values()).map(|(&a, &b)| a + sign * fd_step * b).collect(),
            )
            .unwrap()
        };
        let fd = (energy_i(&shifted(1.0), &params).unwrap().total
            - energy_i(&shifted(-1.0), &params).unwrap().total)
            / (2.0 * fd_step);
        worst = worst.max((analytic - fd).abs() / analytic.abs().max(1e-10));
    }
    assert!(worst <= 1e-4, "worst relative FD error {worst:.3e}");

    // second-order consistency of the residual under refinement
    let u_fn = |r: f64| (-(r - 3.0) * (r - 3.0)).exp() + 0.5 * (-0.5 * (r - 5.0) * (r - 5.0)).exp();
    let residual = |n: usize| {
        let u = Field::from_fn(Mesh1D::radial(10.0, n).unwrap(), u_fn).unwrap();
        el_residual(&u, &params).unwrap().into_values()
    };
    let n0 = 500usize;
    let reference = residual(16 * n0);
    let err = |n: usize| {
        let vals = residual(n);
        let stride = 16 * n0 / n;
        (1..n).map(|i| (vals[i] - reference[i * stride]).abs()).fold(0.0f64, f64::max)
    };
    let ratio = err(n0) / err(2 * n0);
    assert!(ratio >= 3.5, "residual refinement ratio {ratio:.2}");
    report(
        "07 gradient-check",
        start,
        60.0,
        &format!("max FD relative error {worst:.2e}, residual refinement ratio {ratio:.2}"),
    );
}

fn run_ball(
    params: &CsParams,
    radius: f64,
    max_iters: usize,
    grad_tol: f64,
    init: InitProfile,
) -> MinimizeResult {
    let config = MinimizeConfig {
        radius,
        n: (radius / 0.05).round() as usize,
        max_iters,
        grad_tol,
        step_init: 1e-3,
        init,
    };
    minimize_on_ball(params, &config).unwrap()
}

#[test]
fn criterion_08_regime_separation() {
    let start = Instant::now();

    // escape regime: deep negative energy from the translated-soliton basin
    let params_low = CsParams::new(2.0, 0.05).unwrap();
    let deep = run_ball(&params_low, 400.0, 1500, 1e-9, InitProfile::TranslatedSoliton {
        rho: 300.0,
    });
    assert!(deep.energy.total <= -10.0, "escape energy {:.3e}", deep.energy.total);

    // coercive regime: every initialization stays above -1e-3
    let params_high = CsParams::new(2.0, 2.0 * OMEGA1_P2).unwrap();
    let mut coercive_energies = Vec::new();
    for init in [InitProfile::ZeroPlusBump, InitProfile::TranslatedSoliton { rho: 300.0 }] {
        let res = run_ball(&params_high, 400.0, 120_000, 1e-6, init);
        assert!(res.energy.total >= -1e-3, "coercive energy {:.3e}", res.energy.total);
        coercive_energies.push(res.energy.total);
    }

    // escape slope across radii matches the soliton-curve prediction
    let k2 = solve_eq_k(&params_low).k2.unwrap();
    let target = TAU * psi_curve(k2, &params_low).unwrap();
    let runs: Vec<MinimizeResult> = [100.0, 200.0, 400.0]
        .iter()
        .map(|&r| run_ball(&params_low, r, 1500, 1e-9, InitProfile::TranslatedSoliton {
            rho: r - 40.0,
        }))
        .collect();
    for w in runs.windows(2) {
        assert!(w[1].centroid_xi > w[0].centroid_xi, "centroid not growing");
        assert!(w[1].l2_mass > w[0].l2_mass, "mass not growing");
    }
    let report_diag = escape_diagnostics(&runs).unwrap();
    let ratio = report_diag.energy_slope / target;
    assert!((0.75..=1.25).contains(&ratio), "slope ratio {ratio:.3}");
    report(
        "08 regime-separation",
        start,
        900.0,
        &format!(
            "escape energy {:+.2e}, coercive energies {:+.2e} / {:+.2e}, slope ratio {ratio:.3}",
            deep.energy.total, coercive_energies[0], coercive_energies[1]
        ),
    );
}

#[test]
fn criterion_09_nonexistence_regime() {
    let start = Instant::now();
    let wbar = nonexistence_threshold(2.0).unwrap();
    assert!((wbar - 1.0 / 3.0).abs() <= 1e-10);
    // grid-scan oracle for the maximum of t - 0.75 t^2
    let m = 1_000_000usize;
    let mut best = f64::NEG_INFINITY;
    for i in 1..=m {
        let t = 2.0 * i as f64 / m as f64;
        best = best.max(t - 0.75 * t * t);
    }
    assert!((wbar - best).abs() <= 1e-10, "grid scan {best}");

    let params = CsParams::new(2.0, 0.5).unwrap();
    let mut details = String::new();
    for init in [InitProfile::ZeroPlusBump, InitProfile::TranslatedSoliton { rho: 60.0 }] {
        let res = run_ball(&params, 100.0, 200_000, 1e-7, init);
        let max_u = res.u.values().iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        assert!(res.energy.total >= -1e-8, "energy {:.3e}", res.energy.total);
        assert!(max_u <= 1e-3, "max |u| = {max_u:.3e}");
        details.push_str(&format!("E={:+.1e} max|u|={:.1e}; ", res.energy.total, max_u));
    }
    report("09 nonexistence-regime", start, 300.0, &format!("omega_bar={wbar:.12}; {details}"));
}

#[test]
fn criterion_10_sweep_reproduction() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_csgauge");
    let run_once = |name: &str| {
        let out = dir.path().join(name);
        let status = std::process::Command::new(bin)
            .args([
                "sweep",
                "--pmin",
                "1.1",
                "--pmax",
                "2.9",
                "--steps",
                "180",
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    let first = run_once("a.csv");
    let second = run_once("b.csv");
    assert_eq!(first, second, "sweep output not byte-identical");

    let text = String::from_utf8(first).unwrap();
    let mut rows = 0;
    for line in text.lines().skip(1) {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let (w0, w1t, wbar) = (fields[2], fields[3], fields[4]);
        assert!(w0 > 0.0 && w0 < w1t && w1t < wbar, "ordering fails at p = {}", fields[0]);
        assert!(fields[1] > 0.0);
        rows += 1;
    }
    assert_eq!(rows, 181);
    report("10 sweep-reproduction", start, 30.0, "181 rows, ordered, byte-identical across runs");
}
