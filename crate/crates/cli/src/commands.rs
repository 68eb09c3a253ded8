//! The `threshold`, `sweep`, `soliton`, and `minimize` subcommands.

use crate::fmtnum::fmt_sig9;
use crate::manifest::RunManifest;
use crate::{CliError, WhichRoot};
use csgauge_core::{
    degenerate_k0, limit_el_residual, minimize_on_ball, solve_eq_k, soliton_wk, soliton_wk_prime,
    thresholds, CsError, CsParams, InitProfile, MinimizeConfig, SolitonParams,
};
use serde_json::json;
use std::path::Path;

fn write_text(path: &Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(CliError::Io)
}

pub fn cmd_threshold(p: f64, json: bool, out: Option<&Path>) -> Result<(), CliError> {
    let t = thresholds(p)?;
    let k0 = degenerate_k0(p)?;
    let body = if json {
        serde_json::to_string_pretty(&json!({
            "p": t.p,
            "m": t.m,
            "omega0": t.omega0,
            "omega1": t.omega1,
            "omega_bar": t.omega_bar,
            "k0": k0,
        }))
        .expect("serializes")
            + "\n"
    } else {
        format!(
            "m={:.6}, omega0={:.6}, omega1={:.6}, omega_bar={:.6}\n\
             k0={:.6} (roots of the scalar equation: two below omega1, one at omega1, none above)\n",
            t.m, t.omega0, t.omega1, t.omega_bar, k0
        )
    };
    print!("{body}");
    if let Some(path) = out {
        let mut manifest = RunManifest::new("threshold").param("p", p).param("json", json);
        write_text(path, &body)?;
        manifest.artifact(path);
        manifest.write_alongside(path).map_err(CliError::Io)?;
    }
    Ok(())
}

pub fn cmd_sweep(pmin: f64, pmax: f64, steps: usize, out: &Path) -> Result<(), CliError> {
    if pmin >= pmax || steps == 0 {
        return Err(CliError::Core(CsError::BadConfig {
            reason: "sweep needs pmin < pmax and at least one step".to_string(),
        }));
    }
    // validate the band edges up front so a bad range fails before any work
    csgauge_core::energy::validate_p(pmin)?;
    csgauge_core::energy::validate_p(pmax)?;

    let mut csv = String::from("p,m,omega0,omega1,omega_bar\n");
    for i in 0..=steps {
        let p = pmin + (pmax - pmin) * i as f64 / steps as f64;
        let t = thresholds(p)?;
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_sig9(t.p),
            fmt_sig9(t.m),
            fmt_sig9(t.omega0),
            fmt_sig9(t.omega1),
            fmt_sig9(t.omega_bar)
        ));
    }
    let mut manifest = RunManifest::new("sweep")
        .param("pmin", pmin)
        .param("pmax", pmax)
        .param("steps", steps);
    write_text(out, &csv)?;
    manifest.artifact(out);
    manifest.write_alongside(out).map_err(CliError::Io)?;
    println!("wrote {} rows to {}", steps + 1, out.display());
    Ok(())
}

pub fn cmd_soliton(
    p: f64,
    omega: f64,
    which: WhichRoot,
    half_width: Option<f64>,
    n: Option<usize>,
    out: &Path,
) -> Result<(), CliError> {
    let params = CsParams::new(p, omega)?;
    let k = match which {
        WhichRoot::K0 => degenerate_k0(p)?,
        WhichRoot::K1 | WhichRoot::K2 => {
            let report = solve_eq_k(&params);
            match (which, report.count) {
                (_, 0) => {
                    return Err(CliError::Core(CsError::RootUnavailable {
                        omega,
                        omega1: csgauge_core::omega1(p)?,
                    }))
                }
                (_, 1) => report.k1.expect("degenerate root present"),
                (WhichRoot::K1, _) => report.k1.expect("two roots"),
                (WhichRoot::K2, _) => report.k2.expect("two roots"),
                (WhichRoot::K0, _) => unreachable!(),
            }
        }
    };
    if k <= 0.0 {
        // omega = 0 collapses the lower root onto the excluded point k = 0
        return Err(CliError::Core(CsError::InvalidK { k }));
    }
    let sp = SolitonParams::new(p, k)?;
    let half_width = half_width.unwrap_or(40.0 / k.sqrt());
    // Even by default so the origin lands on a node.  Pitch 0.02: fine
    // enough for second-order accuracy, coarse enough that the 9-digit
    // CSV quantization (amplified by 1/h^2 in second differences on
    // re-import) stays below the 1e-5 residual level.
    let n = n.unwrap_or_else(|| 2 * ((half_width / 0.02).ceil() as usize).max(1));

    let mut csv = String::from("r,w,wprime\n");
    let mesh = csgauge_core::Mesh1D::line(half_width, n)?;
    for &r in mesh.nodes() {
        csv.push_str(&format!(
            "{},{},{}\n",
            fmt_sig9(r),
            fmt_sig9(soliton_wk(&sp, r)),
            fmt_sig9(soliton_wk_prime(&sp, r))
        ));
    }
    let mut manifest = RunManifest::new("soliton")
        .param("p", p)
        .param("omega", omega)
        .param("which", format!("{which:?}").to_lowercase())
        .param("k", k)
        .param("half_width", half_width)
        .param("n", n);
    write_text(out, &csv)?;
    manifest.artifact(out);
    manifest.write_alongside(out).map_err(CliError::Io)?;
    println!("wrote soliton profile (k = {k:.9}) to {}", out.display());
    Ok(())
}

pub fn parse_init(spec: &str) -> Result<InitProfile, CliError> {
    if spec == "zero_plus_bump" {
        return Ok(InitProfile::ZeroPlusBump);
    }
    if let Some(rho) = spec.strip_prefix("translated_soliton:") {
        let rho: f64 = rho.parse().map_err(|_| {
            CliError::Core(CsError::BadConfig {
                reason: format!("cannot parse translation radius in init '{spec}'"),
            })
        })?;
        return Ok(InitProfile::TranslatedSoliton { rho });
    }
    Err(CliError::Core(CsError::BadConfig {
        reason: format!("unknown init '{spec}' (expected zero_plus_bump or translated_soliton:<rho>)"),
    }))
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_minimize(
    p: f64,
    omega: f64,
    radius: f64,
    n: usize,
    init: &str,
    max_iters: usize,
    grad_tol: f64,
    step_init: Option<f64>,
    out: &Path,
) -> Result<(), CliError> {
    let params = CsParams::new(p, omega)?;
    let spacing = radius / n as f64;
    let config = MinimizeConfig {
        radius,
        n,
        max_iters,
        grad_tol,
        step_init: step_init.unwrap_or(0.4 * spacing * spacing),
        init: parse_init(init)?,
    };
    let result = match minimize_on_ball(&params, &config) {
        Ok(result) => result,
        Err(CsError::Diverged { trace }) => {
            let trace_path = format!("{}.trace.csv", out.display());
            let mut csv = String::from("iter,energy\n");
            for (i, e) in trace.iter().enumerate() {
                csv.push_str(&format!("{i},{}\n", fmt_sig9(*e)));
            }
            let _ = std::fs::write(&trace_path, csv);
            eprintln!("descent diverged; energy trace written to {trace_path}");
            return Err(CliError::Core(CsError::Diverged { trace }));
        }
        Err(e) => return Err(CliError::Core(e)),
    };

    let mut csv = String::from("r,u\n");
    for (r, u) in result.u.mesh().nodes().iter().zip(result.u.values()) {
        csv.push_str(&format!("{},{}\n", fmt_sig9(*r), fmt_sig9(*u)));
    }
    let summary = serde_json::to_string_pretty(&json!({
        "p": p,
        "omega": omega,
        "radius": radius,
        "n": n,
        "init": init,
        "energy": {
            "kinetic": result.energy.kinetic,
            "mass": result.energy.mass,
            "nonlocal": result.energy.nonlocal,
            "potential": result.energy.potential,
            "total": result.energy.total,
        },
        "grad_norm": result.grad_norm,
        "centroid_xi": result.centroid_xi,
        "l2_mass": result.l2_mass,
        "iters": result.iters,
        "converged": result.converged,
    }))
    .expect("serializes")
        + "\n";
    let summary_path = out.with_extension("json");

    let mut manifest = RunManifest::new("minimize")
        .param("p", p)
        .param("omega", omega)
        .param("radius", radius)
        .param("n", n)
        .param("init", init)
        .param("max_iters", max_iters)
        .param("grad_tol", grad_tol);
    write_text(out, &csv)?;
    manifest.artifact(out);
    write_text(&summary_path, &summary)?;
    manifest.artifact(&summary_path);
    manifest.write_alongside(out).map_err(CliError::Io)?;
    println!(
        "energy {:+.6e} after {} iterations (converged: {}); profile at {}",
        result.energy.total,
        result.iters,
        result.converged,
        out.display()
    );
    Ok(())
}

/// Read a soliton CSV back and evaluate the limit-equation residual; used by
/// the test suites to confirm exported profiles solve the equation.
pub fn soliton_csv_residual(path: &Path, p: f64, omega: f64) -> Result<f64, CliError> {
    let body = std::fs::read_to_string(path).map_err(CliError::Io)?;
    let mut rs = Vec::new();
    let mut ws = Vec::new();
    for line in body.lines().skip(1) {
        let mut parts = line.split(',');
        let r: f64 = parts.next().unwrap().parse().expect("numeric r");
        let w: f64 = parts.next().unwrap().parse().expect("numeric w");
        rs.push(r);
        ws.push(w);
    }
    let mesh = csgauge_core::Mesh1D::line(-rs[0], rs.len() - 1)?;
    let u = csgauge_core::Field::new(mesh, ws)?;
    let params = CsParams::new(p, omega)?;
    let res = limit_el_residual(&u, &params)?;
    Ok(res.values().iter().fold(0.0f64, |m, &v| m.max(v.abs())))
}
