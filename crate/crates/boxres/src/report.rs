//! Driver: computes everything a run asks for, then writes all files in one
//! single-writer pass and returns a human-readable summary.
//!
//! Output layout per partial wave l:
//! - `branches_l<l>.csv`   — stabilization diagram, header `R,E`, one block
//!   per branch separated by a blank line and a `# branch n=<n>` comment
//! - `resonances_l<l>.csv` — header `R_bar,E_gamma,Gamma`, one block per
//!   resonance
//! - `wf_l<l>_res<i>.csv`  — header `r,psi`, the normalized wavefunction at
//!   the largest stable box size of resonance i
//! - `phase_l<l>.csv`      — header `E,eta_unwrapped` (oracle/both modes)
//! - `fit_l<l>_res<i>.txt` — key-value Breit-Wigner fit report
//!
//! All numbers are written with 16 significant digits, so identical configs
//! produce byte-identical files.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::config::{Mode, RunConfig};
use crate::error::{Error, Result};
use crate::oracle::{self, BreitWignerFit, PhaseShiftSample};
use crate::potential::PotentialSpec;
use crate::solver::{normalize_and_sample, solve_on_branch, IntegrationParams, ShootingGrid};
use crate::stabilization::{self, BranchCurve, ResonanceResult};

/// Match radius for the scattering oracle; far outside the finite-range
/// part for any potential this driver accepts.
const MATCH_RADIUS: f64 = 60.0;

/// Energy step of the broad survey sweep in oracle mode.
const SWEEP_STEP: f64 = 5e-3;

/// Points per Breit-Wigner fit window.
const FIT_POINTS: usize = 41;

/// Wavefunction CSV files are thinned to at most this many rows.
const MAX_WF_ROWS: usize = 20_000;

#[derive(Debug)]
pub struct RunSummary {
    /// Paths written, in write order.
    pub files: Vec<PathBuf>,
    /// Table summary mirroring the resonance tables, for stdout.
    pub text: String,
}

struct PendingFile {
    path: PathBuf,
    contents: String,
}

/// Execute a validated configuration. Nothing is written until every
/// computation has finished; existing files abort the run unless `force`
/// is set.
pub fn run(config: &RunConfig, force: bool) -> Result<RunSummary> {
    let mut waves = config.partial_waves.clone();
    waves.sort_unstable();
    waves.dedup();

    let mut pending: Vec<PendingFile> = Vec::new();
    let mut text = String::new();

    for &l in &waves {
        let spec = PotentialSpec::new(config.v0, config.z, l);
        let params = IntegrationParams::new(config.dr, config.r_range.1)?;
        let _ = writeln!(text, "== l = {l} ==");

        let mut stab: Option<Vec<ResonanceResult>> = None;
        if config.mode != Mode::Oracle {
            let curves = stabilization::scan_branches(
                &spec,
                config.r_range,
                config.r_scan_step,
                config.e_max,
                &params,
            )?;
            let resonances = stabilization::resonances_from_curves(&curves)?;
            pending.push(PendingFile {
                path: config.out_dir.join(format!("branches_l{l}.csv")),
                contents: branches_csv(&curves),
            });
            pending.push(PendingFile {
                path: config.out_dir.join(format!("resonances_l{l}.csv")),
                contents: resonances_csv(&resonances),
            });
            for c in &curves {
                if let Some(note) = &c.truncation {
                    let _ = writeln!(text, "note: branch n={}: {note}", c.n);
                }
            }
            if resonances.is_empty() {
                let _ = writeln!(text, "no resonance detected");
            }
            for (i, res) in resonances.iter().enumerate() {
                let _ = writeln!(
                    text,
                    "resonance {} ({} stable points):",
                    i + 1,
                    res.stable_points.len()
                );
                let _ = writeln!(text, "{:>10}  {:>15}  {:>12}", "R_bar", "E_gamma", "Gamma");
                for (p, w) in res.stable_points.iter().zip(&res.widths) {
                    let _ = writeln!(text, "{:>10.4}  {:>15.9}  {:>12.4e}", p.r_bar, p.e_gamma, w);
                }
                let wf = wavefunction_csv(&spec, &params, res)?;
                pending.push(PendingFile {
                    path: config.out_dir.join(format!("wf_l{l}_res{}.csv", i + 1)),
                    contents: wf,
                });
            }
            stab = Some(resonances);
        }

        if config.mode != Mode::Stabilize {
            let energies: Vec<f64> = {
                let n = (config.e_max / SWEEP_STEP).floor() as usize;
                (1..=n).map(|i| i as f64 * SWEEP_STEP).collect()
            };
            let sweep = oracle::phase_shift_sweep(&spec, &energies, MATCH_RADIUS, &params)?;
            let unwrapped = oracle::unwrap_phases(&sweep);
            pending.push(PendingFile {
                path: config.out_dir.join(format!("phase_l{l}.csv")),
                contents: phase_csv(&sweep, &unwrapped),
            });

            let windows: Vec<(f64, f64)> = match &stab {
                Some(resonances) => resonances
                    .iter()
                    .filter_map(|r| r.last())
                    .map(|(p, w)| fit_window(p.e_gamma, w, config.e_max))
                    .collect(),
                None => detect_windows(&sweep, &unwrapped, config.e_max),
            };

            for (i, &window) in windows.iter().enumerate() {
                let fine: Vec<f64> = (0..FIT_POINTS)
                    .map(|j| {
                        window.0 + (window.1 - window.0) * j as f64 / (FIT_POINTS - 1) as f64
                    })
                    .collect();
                let samples = oracle::phase_shift_sweep(&spec, &fine, MATCH_RADIUS, &params)?;
                match oracle::fit_breit_wigner(&samples, window) {
                    Ok(fit) => {
                        pending.push(PendingFile {
                            path: config.out_dir.join(format!("fit_l{l}_res{}.txt", i + 1)),
                            contents: fit_report(&fit, window),
                        });
                        let _ = writeln!(
                            text,
                            "oracle fit {}: E_gamma = {:.9}, Gamma = {:.4e}, rms residual = {:.2e}",
                            i + 1,
                            fit.e_gamma,
                            fit.width,
                            fit.residual
                        );
                        if let Some((p, w)) =
                            stab.as_ref().and_then(|r| r.get(i)).and_then(|r| r.last())
                        {
                            let _ = writeln!(
                                text,
                                "  stabilization:  E_gamma = {:.9}, Gamma = {:.4e}  (dE = {:+.2e}, dGamma/Gamma = {:+.2e})",
                                p.e_gamma,
                                w,
                                fit.e_gamma - p.e_gamma,
                                (fit.width - w) / w
                            );
                        }
                    }
                    Err(e) => {
                        let _ = writeln!(text, "oracle fit {} failed: {e}", i + 1);
                    }
                }
            }
        }
        let _ = writeln!(text);
    }

    // single-writer phase: refuse to clobber anything unless forced
    if !force {
        for f in &pending {
            if f.path.exists() {
                return Err(Error::WouldOverwrite(f.path.clone()));
            }
        }
    }
    std::fs::create_dir_all(&config.out_dir)?;
    let mut files = Vec::with_capacity(pending.len());
    for f in pending {
        std::fs::write(&f.path, f.contents)?;
        files.push(f.path);
    }
    Ok(RunSummary { files, text })
}

/// Fit window around a resonance estimate: ±10Γ for narrow resonances,
/// clipped into (0, e_max].
fn fit_window(e_gamma: f64, width: f64, e_max: f64) -> (f64, f64) {
    let half = (10.0 * width).min(0.8 * e_gamma);
    let lo = (e_gamma - half).max(1e-3);
    let hi = (e_gamma + half).min(e_max);
    (lo, hi)
}

/// Oracle-only mode: find candidate resonances as local maxima of dη/dE in
/// the survey sweep.
fn detect_windows(sweep: &[PhaseShiftSample], unwrapped: &[f64], e_max: f64) -> Vec<(f64, f64)> {
    let mut windows = Vec::new();
    let mut slopes = Vec::with_capacity(sweep.len());
    for i in 0..sweep.len() {
        let (a, b) = (i.saturating_sub(1), (i + 1).min(sweep.len() - 1));
        slopes.push((unwrapped[b] - unwrapped[a]) / (sweep[b].energy - sweep[a].energy));
    }
    for i in 1..sweep.len() - 1 {
        let s = slopes[i];
        if s > slopes[i - 1] && s >= slopes[i + 1] && s > 2.0 {
            // slope 2/Gamma => width estimate below ~1; broader profiles do
            // not stand out from the background slope
            let width_est = 2.0 / s;
            let window = fit_window(sweep[i].energy, width_est.max(2.0 * SWEEP_STEP), e_max);
            let overlaps = windows
                .iter()
                .any(|&(lo, hi): &(f64, f64)| sweep[i].energy >= lo && sweep[i].energy <= hi);
            if !overlaps {
                windows.push(window);
            }
        }
    }
    windows
}

fn fmt(v: f64) -> String {
    format!("{v:.15e}")
}

fn branches_csv(curves: &[BranchCurve]) -> String {
    let mut s = String::from("R,E\n");
    for (i, c) in curves.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let _ = writeln!(s, "# branch n={} l={}", c.n, c.l);
        for &(r, e) in &c.samples {
            let _ = writeln!(s, "{},{}", fmt(r), fmt(e));
        }
    }
    s
}

fn resonances_csv(resonances: &[ResonanceResult]) -> String {
    let mut s = String::from("R_bar,E_gamma,Gamma\n");
    for (i, res) in resonances.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let _ = writeln!(s, "# resonance {}", i + 1);
        for (p, w) in res.stable_points.iter().zip(&res.widths) {
            let _ = writeln!(s, "{},{},{}", fmt(p.r_bar), fmt(p.e_gamma), fmt(*w));
        }
    }
    s
}

/// Normalized wavefunction of the resonance at its largest stable box size.
fn wavefunction_csv(
    spec: &PotentialSpec,
    params: &IntegrationParams,
    res: &ResonanceResult,
) -> Result<String> {
    let (point, _) = res.last().expect("resonances hold at least one point");
    let params = params.with_box_size(point.r_bar)?;
    let grid = ShootingGrid::build(spec, &params)?;
    let state = solve_on_branch(
        &grid,
        point.branch,
        point.e_gamma,
        1e-3 * point.e_gamma.abs().max(1.0),
        crate::solver::EIGEN_REL_TOL,
    )?;
    let stride = (grid.n_steps() / MAX_WF_ROWS).max(1);
    let samples = normalize_and_sample(&state, spec, &params, stride)?;
    let mut s = String::from("r,psi\n");
    for (r, psi) in samples {
        let _ = writeln!(s, "{},{}", fmt(r), fmt(psi));
    }
    Ok(s)
}

fn phase_csv(sweep: &[PhaseShiftSample], unwrapped: &[f64]) -> String {
    let mut s = String::from("E,eta_unwrapped\n");
    for (sample, &eta) in sweep.iter().zip(unwrapped) {
        let _ = writeln!(s, "{},{}", fmt(sample.energy), fmt(eta));
    }
    s
}

fn fit_report(fit: &BreitWignerFit, window: (f64, f64)) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "e_gamma = {}", fmt(fit.e_gamma));
    let _ = writeln!(s, "gamma = {}", fmt(fit.width));
    let _ = writeln!(s, "residual = {}", fmt(fit.residual));
    let _ = writeln!(s, "window_lo = {}", fmt(window.0));
    let _ = writeln!(s, "window_hi = {}", fmt(window.1));
    let _ = writeln!(s, "background_c0 = {}", fmt(fit.background.coeffs[0]));
    let _ = writeln!(s, "background_c1 = {}", fmt(fit.background.coeffs[1]));
    let _ = writeln!(s, "background_c2 = {}", fmt(fit.background.coeffs[2]));
    s
}
