//! Drivers behind the subcommands: sweep evaluation, the coefficient
//! oracle, spectrum tabulation, and the verification runner.

use std::fmt::Write as _;

use anyhow::{anyhow, Context, Result};
use rayon::prelude::*;

use qrf_core::atomresponse::{
    dressed_polarizability, power_spectrum, resonance_roots, SpectralMode,
};
use qrf_core::constants::{ev_to_rad_s, HBAR};
use qrf_core::observables::{
    evaluate_observables, friction_forces, friction_lowv, lowv_coefficients,
    lowv_coefficients_quadrature, rotation_frequency_asymptotic, Scenario,
};
use qrf_core::verify::all_checks;

use crate::config::{build, Evaluation, RawConfig, RunSpec, SweepAxis};
use crate::row::{to_csv, OutputRow};

/// Scenario for one sweep point.
fn scenario_at(spec: &RunSpec, x: f64) -> Scenario {
    let mut sc = spec.scenario.clone();
    match spec.sweep_axis {
        SweepAxis::V => sc.v = x,
        SweepAxis::Za => sc.za = x,
    }
    sc
}

/// Evaluate one sweep point; quadrature failures come back as a row of NaN
/// with provenance `full:failed` plus a note, never as a dropped row.
pub fn eval_point(spec: &RunSpec, x: f64) -> (OutputRow, Option<String>) {
    let sc = scenario_at(spec, x);
    let mode = match sc.mode {
        SpectralMode::Ness => "ness",
        SpectralMode::Lte => "lte",
    };
    match spec.evaluation {
        Evaluation::Asymptotic => {
            let (f_t, f_r) = friction_lowv(&sc.atom, &sc.material, sc.za, sc.v);
            let omega = rotation_frequency_asymptotic(&sc.atom, &sc.material, sc.za, sc.v);
            let row = OutputRow {
                v: sc.v,
                za: sc.za,
                f_t,
                f_r,
                f_total: f_t + f_r,
                a: (f_t + f_r) / sc.atom.mass,
                omega,
                // the dipole cloud's rest inertia about y is hbar / omega_a
                l_y: omega * HBAR / sc.atom.omega_a,
                mode: mode.into(),
                provenance: "asymptotic".into(),
                max_quad_err: 0.0,
            };
            (row, None)
        }
        Evaluation::Full => match evaluate_observables(&sc) {
            Ok(obs) => {
                let rel = |err: f64, scale: f64| if scale > 0.0 { err / scale } else { 0.0 };
                let max_quad_err = rel(
                    obs.force.err,
                    obs.force.f_t.abs().max(obs.force.f_r.abs()),
                )
                .max(rel(obs.moments.err_i0, obs.moments.i0.norm_max()))
                .max(rel(obs.moments.err_i1, obs.moments.i1.norm_max()));
                let row = OutputRow {
                    v: sc.v,
                    za: sc.za,
                    f_t: obs.force.f_t,
                    f_r: obs.force.f_r,
                    f_total: obs.force.f_total,
                    a: obs.acceleration,
                    omega: obs.rotation,
                    l_y: obs.angular_momentum[1],
                    mode: mode.into(),
                    provenance: if obs.converged {
                        "full".into()
                    } else {
                        "full:unconverged".into()
                    },
                    max_quad_err,
                };
                (row, None)
            }
            Err(e) => {
                let row = OutputRow {
                    v: sc.v,
                    za: sc.za,
                    f_t: f64::NAN,
                    f_r: f64::NAN,
                    f_total: f64::NAN,
                    a: f64::NAN,
                    omega: f64::NAN,
                    l_y: f64::NAN,
                    mode: mode.into(),
                    provenance: "full:failed".into(),
                    max_quad_err: f64::NAN,
                };
                (row, Some(format!("point {x:.6e}: {e}")))
            }
        },
    }
}

/// Result of a sweep run, ready for the summary printout.
pub struct SweepReport {
    pub rows: Vec<OutputRow>,
    pub notes: Vec<String>,
    pub unconverged: usize,
    pub failed: usize,
    pub worst_quad_err: f64,
    pub csv: String,
}

/// Evaluate every sweep point (worker pool, deterministic output order)
/// and render the CSV.
pub fn run_sweep(spec: &RunSpec) -> Result<SweepReport> {
    let results: Vec<(OutputRow, Option<String>)> = spec
        .sweep
        .par_iter()
        .map(|&x| eval_point(spec, x))
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut notes = Vec::new();
    for (row, note) in results {
        rows.push(row);
        notes.extend(note);
    }
    let unconverged = rows
        .iter()
        .filter(|r| r.provenance.ends_with(":unconverged"))
        .count();
    let failed = rows
        .iter()
        .filter(|r| r.provenance.ends_with(":failed"))
        .count();
    let worst_quad_err = rows
        .iter()
        .map(|r| r.max_quad_err)
        .filter(|e| e.is_finite())
        .fold(0.0f64, f64::max);
    let csv = to_csv(&rows);
    if let Some(path) = &spec.output {
        std::fs::write(path, &csv)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(SweepReport {
        rows,
        notes,
        unconverged,
        failed,
        worst_quad_err,
        csv,
    })
}

/// Warnings the closure flags deserve on every run that uses them.
pub fn closure_warnings(spec: &RunSpec) -> Vec<String> {
    let mut out = Vec::new();
    if spec.scenario.mode == SpectralMode::Lte {
        out.push(
            "warning: the local-equilibrium closure cancels drag against spin recoil, so \
             the net force it predicts vanishes at low velocity; steady-state numbers \
             need mode = ness"
                .into(),
        );
    }
    if !spec.scenario.config.response.backaction {
        out.push(
            "warning: with back-action off the response reduces to its bare equilibrium \
             form (no surface linewidth, no velocity dependence), which is to a large \
             extent the local-equilibrium closure; rotational observables are not \
             defined then"
                .into(),
        );
    }
    out
}

/// The low-velocity coefficient report for the `oracle` subcommand.
pub fn oracle_report() -> String {
    let (ct, cr) = lowv_coefficients();
    let edges = [0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 60.0];
    let (ct_q, cr_q) = lowv_coefficients_quadrature(16, &edges);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "low-velocity closed forms  F = c * hbar alpha0^2 rho^2 v^3 / (2 za)^10"
    );
    let _ = writeln!(
        out,
        "  translational c_t = {ct:+.9}   (-63/pi^3 = {:+.9})",
        -63.0 / std::f64::consts::PI.powi(3)
    );
    let _ = writeln!(
        out,
        "  rotational    c_r = {cr:+.9}   (+45/pi^3 = {:+.9})",
        45.0 / std::f64::consts::PI.powi(3)
    );
    let _ = writeln!(
        out,
        "  independent quadrature oracle: c_t = {ct_q:+.9}, c_r = {cr_q:+.9}"
    );
    let _ = writeln!(
        out,
        "  oracle agreement: {:.2e} / {:.2e} relative",
        (ct_q / ct - 1.0).abs(),
        (cr_q / cr - 1.0).abs()
    );
    let _ = writeln!(out, "  net drag ratio c_r/|c_t| = {:.6} (5/7)", cr / ct.abs());
    out
}

/// Frequency grid and tabulated spectrum for `dump-spectrum`.
pub struct DumpOptions {
    pub omega_min_ev: Option<f64>,
    pub omega_max_ev: Option<f64>,
    /// Coarse grid point count (dense windows are added at the dressed
    /// resonances automatically).
    pub points: usize,
}

/// Tabulate S(omega) for the configured scenario.  The grid is a coarse
/// linear scan plus a dense window around each dressed resonance, because
/// the surface-induced linewidth is orders of magnitude below any sensible
/// coarse spacing.  Negative velocities are mapped to their mirror image.
pub fn run_dump_spectrum(spec: &RunSpec, opts: &DumpOptions) -> Result<String> {
    let sc = &spec.scenario;
    let wa = sc.atom.omega_a;
    let v = sc.v.abs();
    let lo = opts
        .omega_min_ev
        .map(ev_to_rad_s)
        .unwrap_or(-0.1 * wa);
    let hi = opts.omega_max_ev.map(ev_to_rad_s).unwrap_or(2.0 * wa);
    if !(hi > lo) {
        return Err(anyhow!("empty frequency window: max must exceed min"));
    }
    let n = opts.points.max(2);

    let mut grid: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    if let Ok(roots) = resonance_roots(&sc.atom, &sc.material, sc.za, v, &sc.config.response) {
        for root in roots {
            let half = 40.0 * root.hwhm;
            let (a, b) = (root.omega - half, root.omega + half);
            if b < lo || a > hi {
                continue;
            }
            for i in 0..161 {
                let w = a + (b - a) * i as f64 / 160.0;
                if w > lo && w < hi {
                    grid.push(w);
                }
            }
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();

    let mut out = String::with_capacity(grid.len() * 96);
    out.push_str("omega_rad_per_s,S_xx,S_yy,S_zz,S_xz_re,S_xz_im\n");
    for &w in &grid {
        let s = power_spectrum(
            &sc.atom,
            &sc.material,
            sc.za,
            w,
            v,
            sc.mode,
            &sc.config.response,
        )
        .map_err(|e| anyhow!("spectrum at omega = {w:.6e}: {e}"))?;
        let m = s.matrix;
        let _ = writeln!(
            out,
            "{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e}",
            w, m.m[0][0].re, m.m[1][1].re, m.m[2][2].re, m.m[0][2].re, m.m[0][2].im
        );
    }
    Ok(out)
}

/// Run the verification suite, or one of the closure demonstrations when
/// `mode=lte` / `backaction=off` is forced.  Returns the exit code.
pub fn run_verify(mode: Option<&str>, backaction: Option<&str>) -> Result<i32> {
    match (mode, backaction) {
        (Some("lte"), _) => lte_demonstration(),
        (_, Some("off")) => backaction_demonstration(),
        (Some(other), _) if other != "ness" => {
            Err(anyhow!("--mode takes ness | lte, not '{other}'"))
        }
        (_, Some(other)) if other != "on" => {
            Err(anyhow!("--backaction takes on | off, not '{other}'"))
        }
        _ => {
            let checks = all_checks();
            let failed: Vec<&str> = checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name)
                .collect();
            for check in &checks {
                println!("{}", check.line());
            }
            println!(
                "{} of {} checks passed{}",
                checks.len() - failed.len(),
                checks.len(),
                if failed.is_empty() {
                    String::new()
                } else {
                    format!("; failed: {}", failed.join(", "))
                }
            );
            Ok(if failed.is_empty() { 0 } else { 1 })
        }
    }
}

/// Show what the equilibrium closure does to the net force.
fn lte_demonstration() -> Result<i32> {
    let raw = RawConfig::preset("rb-au-fig2")?;
    let spec = build(&raw)?;
    let mut sc = scenario_at(&spec, 5.0e3);
    let ness = friction_forces(&sc).map_err(|e| anyhow!("steady state: {e}"))?;
    sc.mode = SpectralMode::Lte;
    let lte = friction_forces(&sc).map_err(|e| anyhow!("equilibrium closure: {e}"))?;
    println!("rubidium/gold at 5 nm, 5 km/s:");
    println!(
        "  steady state       : f_t = {:+.6e} N, f_r = {:+.6e} N, net = {:+.6e} N",
        ness.f_t, ness.f_r, ness.f_total
    );
    println!(
        "  equilibrium closure: f_t = {:+.6e} N, f_r = {:+.6e} N, net = {:+.6e} N",
        lte.f_t, lte.f_r, lte.f_total
    );
    let cancel = lte.f_total.abs() / ness.f_t.abs();
    println!(
        "  closure net force = {cancel:.1e} x |f_t|: drag and spin recoil cancel, while \
         the steady state keeps a net drag of {:.3} x |f_t|",
        ness.f_total.abs() / ness.f_t.abs()
    );
    println!(
        "warning: the local-equilibrium closure erroneously predicts a vanishing net \
         frictional force; steady-state numbers need mode = ness"
    );
    Ok(if cancel <= 1e-2 { 0 } else { 1 })
}

/// Show that dropping the back-action reduces the response to its bare
/// equilibrium form.
fn backaction_demonstration() -> Result<i32> {
    let raw = RawConfig::preset("rb-au-fig2")?;
    let spec = build(&raw)?;
    let mut sc = scenario_at(&spec, 5.0e3);
    sc.config.response.backaction = false;
    let wa = sc.atom.omega_a;
    // probe the polarizability just off resonance, where the dressing
    // otherwise supplies the surface linewidth and the velocity dependence
    let probe = dressed_polarizability(
        &sc.atom,
        &sc.material,
        sc.za,
        0.999 * wa,
        sc.v,
        &sc.config.response,
    )
    .map_err(|e| anyhow!("polarizability probe: {e}"))?;
    let kernel_gone = probe.kernel.norm_max() == 0.0;
    let alpha = probe.alpha;
    let bare = sc.atom.alpha0 * wa * wa / (wa * wa - (0.999 * wa).powi(2));
    let diag_bare = (alpha.m[0][0].re / bare - 1.0).abs() < 1e-12
        && alpha.m[0][0].im == 0.0
        && alpha.m[0][2].norm_sqr() == 0.0;
    println!("rubidium/gold at 5 nm, 5 km/s with back-action off:");
    println!(
        "  dressing kernel zeroed: {kernel_gone}; polarizability equals the bare real \
         Lorentz form: {diag_bare}"
    );
    println!(
        "warning: without back-action the atomic response keeps no surface linewidth \
         and no intrinsic velocity dependence — to a large extent the local-equilibrium \
         closure; rotational observables are not defined in this limit"
    );
    Ok(if kernel_gone && diag_bare { 0 } else { 1 })
}
