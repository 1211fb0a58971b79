//! Command implementations. Every command is a plain function over a
//! [`Context`] so the test suite can drive it without spawning the binary.
//!
//! CSV conventions: comma delimiter, '.' decimal separator, LF line endings,
//! UTF-8, header on the first line, values printed with 12 significant digits
//! so identical configurations produce byte-identical files.

use crate::args::{parse_setting, Method};
use crate::CliError;
use cascade::correlation::{degree_of_correlation, degree_time_averaged, g2_general, G2Curve};
use cascade::dynamics::{evolve_analytic, CascadeState};
use cascade::oracle;
use cascade::polarization::{BasisPair, PolarizerSetting};
use cascade::rates::RateParams;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Options shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Context {
    pub params: RateParams,
    pub method: Method,
    pub tolerance: f64,
    pub out: Option<PathBuf>,
}

/// Read the rate parameters, or fall back to the symmetric preset
/// (gamma normalized to 1, equal dipoles: gamma1 = gamma3 = gamma2 = gamma4 = 1/2).
pub fn load_params(path: Option<&Path>) -> Result<RateParams, CliError> {
    match path {
        None => Ok(default_params()),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Validation(format!("cannot read {}: {e}", path.display()))
            })?;
            serde_json::from_str(&text).map_err(|e| {
                CliError::Validation(format!("invalid parameters in {}: {e}", path.display()))
            })
        }
    }
}

fn default_params() -> RateParams {
    RateParams::new(0.5, 0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0).expect("preset is valid")
}

fn figure_params(deph: f64, delta: f64) -> RateParams {
    RateParams::new(0.5, 0.5, 0.5, 0.5, deph, deph, delta, 0.0).expect("preset is valid")
}

/// Uniform grid from 0 to max inclusive; strictly increasing, at least 2 points.
pub fn linspace(max: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if points < 2 {
        return Err(CliError::Usage(format!(
            "grid needs at least 2 points, got {points}"
        )));
    }
    if !max.is_finite() || max <= 0.0 {
        return Err(CliError::Usage(format!(
            "grid end must be positive and finite, got {max}"
        )));
    }
    Ok((0..points)
        .map(|k| max * k as f64 / (points - 1) as f64)
        .collect())
}

/// Fixed 12-significant-digit scientific formatting.
pub fn format_value(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

fn write_lines(out: Option<&Path>, lines: &[String]) -> Result<(), CliError> {
    let mut body = String::with_capacity(lines.len() * 32);
    for line in lines {
        body.push_str(line);
        body.push('\n');
    }
    match out {
        Some(path) if path != Path::new("-") => fs::write(path, body)
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display()))),
        _ => {
            let stdout = std::io::stdout();
            let mut handle = stdout.lock();
            handle
                .write_all(body.as_bytes())
                .and_then(|_| handle.flush())
                .map_err(|e| CliError::Validation(format!("cannot write to stdout: {e}")))
        }
    }
}

fn oracle_step(params: &RateParams) -> f64 {
    oracle::default_step(params)
}

fn map_oracle_err(e: oracle::OracleError) -> CliError {
    CliError::Validation(format!("numerical integration failed: {e}"))
}

pub fn cmd_populations(ctx: &Context, t_max: f64, points: usize) -> Result<(), CliError> {
    let grid = linspace(t_max, points)?;
    let initial = CascadeState::initial_biexciton();
    let analytic = || -> Vec<CascadeState> {
        grid.par_iter()
            .map(|&t| evolve_analytic(&initial, &ctx.params, t))
            .collect()
    };
    let numeric = || -> Result<Vec<CascadeState>, CliError> {
        oracle::integrate_grid(&initial, &ctx.params, &grid, oracle_step(&ctx.params))
            .map_err(map_oracle_err)
    };

    let state_cells = |s: &CascadeState| {
        [
            s.rho_ii,
            s.rho_aa,
            s.rho_bb,
            s.rho_jj,
            s.rho_ab.re,
            s.rho_ab.im,
        ]
        .map(format_value)
        .join(",")
    };
    const COLUMNS: &str = "rho_ii,rho_aa,rho_bb,rho_jj,re_rho_ab,im_rho_ab";

    let mut lines = Vec::with_capacity(grid.len() + 1);
    match ctx.method {
        Method::Analytic | Method::Oracle => {
            let states = if ctx.method == Method::Analytic {
                analytic()
            } else {
                numeric()?
            };
            lines.push(format!("t,{COLUMNS}"));
            for (t, s) in grid.iter().zip(&states) {
                lines.push(format!("{},{}", format_value(*t), state_cells(s)));
            }
        }
        Method::Both => {
            let a = analytic();
            let o = numeric()?;
            let oracle_columns = COLUMNS
                .split(',')
                .map(|c| format!("{c}_oracle"))
                .collect::<Vec<_>>()
                .join(",");
            lines.push(format!("t,{COLUMNS},{oracle_columns}"));
            for ((t, sa), so) in grid.iter().zip(&a).zip(&o) {
                lines.push(format!(
                    "{},{},{}",
                    format_value(*t),
                    state_cells(sa),
                    state_cells(so)
                ));
            }
        }
    }
    write_lines(ctx.out.as_deref(), &lines)
}

pub fn cmd_g2(
    ctx: &Context,
    setting1: &str,
    setting2: &str,
    tau_max: f64,
    points: usize,
) -> Result<(), CliError> {
    let p1 = parse_setting(setting1)?;
    let p2 = parse_setting(setting2)?;
    let grid = linspace(tau_max, points)?;

    let analytic = || G2Curve::from_analytic(&ctx.params, p1, p2, &grid);
    let numeric = || -> Result<Vec<f64>, CliError> {
        oracle::g2_conditioned_grid(&ctx.params, &p1, &p2, &grid, oracle_step(&ctx.params))
            .map_err(map_oracle_err)
    };

    let mut lines = Vec::with_capacity(grid.len() + 1);
    match ctx.method {
        Method::Analytic => {
            lines.push("tau,value".to_string());
            for &(tau, value) in analytic().samples() {
                lines.push(format!("{},{}", format_value(tau), format_value(value)));
            }
        }
        Method::Oracle => {
            lines.push("tau,value".to_string());
            for (tau, value) in grid.iter().zip(numeric()?) {
                lines.push(format!("{},{}", format_value(*tau), format_value(value)));
            }
        }
        Method::Both => {
            let a = analytic();
            let o = numeric()?;
            lines.push("tau,value_analytic,value_oracle".to_string());
            for (&(tau, value), numeric_value) in a.samples().iter().zip(o) {
                lines.push(format!(
                    "{},{},{}",
                    format_value(tau),
                    format_value(value),
                    format_value(numeric_value)
                ));
            }
        }
    }
    write_lines(ctx.out.as_deref(), &lines)
}

pub fn cmd_degree(
    ctx: &Context,
    basis_selector: &str,
    tau_max: f64,
    points: usize,
) -> Result<(), CliError> {
    let basis = BasisPair::from_primary(parse_setting(basis_selector)?);
    let grid = linspace(tau_max, points)?;

    let analytic = || -> Vec<f64> {
        grid.par_iter()
            .map(|&tau| degree_of_correlation(&ctx.params, &basis, tau).value)
            .collect()
    };
    let numeric = || -> Result<Vec<f64>, CliError> {
        let step = oracle_step(&ctx.params);
        let primary = basis.primary();
        let co = oracle::g2_conditioned_grid(&ctx.params, &primary, &primary, &grid, step)
            .map_err(map_oracle_err)?;
        let cross =
            oracle::g2_conditioned_grid(&ctx.params, &primary, &basis.orthogonal(), &grid, step)
                .map_err(map_oracle_err)?;
        Ok(co
            .iter()
            .zip(cross)
            .map(|(&co, cross)| {
                let total = co + cross;
                if total.abs() < 1e-300 {
                    0.0
                } else {
                    (co - cross) / total
                }
            })
            .collect())
    };

    let mut lines = Vec::with_capacity(grid.len() + 1);
    match ctx.method {
        Method::Analytic => {
            lines.push("tau,value".to_string());
            for (tau, value) in grid.iter().zip(analytic()) {
                lines.push(format!("{},{}", format_value(*tau), format_value(value)));
            }
        }
        Method::Oracle => {
            lines.push("tau,value".to_string());
            for (tau, value) in grid.iter().zip(numeric()?) {
                lines.push(format!("{},{}", format_value(*tau), format_value(value)));
            }
        }
        Method::Both => {
            let a = analytic();
            let o = numeric()?;
            lines.push("tau,value_analytic,value_oracle".to_string());
            for ((tau, va), vo) in grid.iter().zip(a).zip(o) {
                lines.push(format!(
                    "{},{},{}",
                    format_value(*tau),
                    format_value(va),
                    format_value(vo)
                ));
            }
        }
    }
    write_lines(ctx.out.as_deref(), &lines)
}

pub fn cmd_degree_avg(ctx: &Context, points: usize) -> Result<(), CliError> {
    if ctx.method != Method::Analytic {
        return Err(CliError::Validation(
            "degree-avg uses the closed-form time integrals; only --method analytic is supported"
                .to_string(),
        ));
    }
    let thetas = linspace(PI, points)?;
    let values: Result<Vec<f64>, CliError> = thetas
        .par_iter()
        .map(|&theta| {
            degree_time_averaged(
                &ctx.params,
                &BasisPair::from_primary(PolarizerSetting::new(theta, 0.0)),
            )
            .map_err(|e| CliError::Validation(e.to_string()))
        })
        .collect();
    let values = values?;

    let mut lines = Vec::with_capacity(thetas.len() + 1);
    lines.push("theta,c_avg".to_string());
    for (theta, value) in thetas.iter().zip(values) {
        lines.push(format!("{},{}", format_value(*theta), format_value(value)));
    }
    write_lines(ctx.out.as_deref(), &lines)
}

fn number_tag(x: f64) -> String {
    format!("{x}").replace('.', "p")
}

fn degree_avg_rows(params: &RateParams, thetas: &[f64]) -> Vec<String> {
    let values: Vec<f64> = thetas
        .par_iter()
        .map(|&theta| {
            degree_time_averaged(
                params,
                &BasisPair::from_primary(PolarizerSetting::new(theta, 0.0)),
            )
            .expect("figure presets have decaying excitons")
        })
        .collect();
    let mut lines = Vec::with_capacity(thetas.len() + 1);
    lines.push("theta,c_avg".to_string());
    for (theta, value) in thetas.iter().zip(values) {
        lines.push(format!("{},{}", format_value(*theta), format_value(value)));
    }
    lines
}

fn g2_rows(
    params: &RateParams,
    p1: PolarizerSetting,
    p2: PolarizerSetting,
    taus: &[f64],
) -> Vec<String> {
    let mut lines = Vec::with_capacity(taus.len() + 1);
    lines.push("tau,value".to_string());
    for &(tau, value) in G2Curve::from_analytic(params, p1, p2, taus).samples() {
        lines.push(format!("{},{}", format_value(tau), format_value(value)));
    }
    lines
}

/// Emit the CSV files behind one of the named figure presets. All presets use
/// gamma normalized to 1 and equal dipoles (gamma1 = gamma3 = gamma2 = gamma4
/// = 1/2); only the splitting and the dephasing rate vary between curves.
pub fn cmd_figure(id: &str, outdir: &Path) -> Result<(), CliError> {
    let thetas = linspace(PI, 181)?;
    let taus = linspace(3.0, 601)?;
    let r = PolarizerSetting::preset("R").expect("preset");
    let l = PolarizerSetting::preset("L").expect("preset");

    let mut files: Vec<(String, Vec<String>)> = Vec::new();
    match id {
        "3a" => {
            for delta in [0.0, 1.0, 2.0, 5.0, 10.0] {
                files.push((
                    format!("fig3a_delta_{}.csv", number_tag(delta)),
                    degree_avg_rows(&figure_params(0.0, delta), &thetas),
                ));
            }
        }
        "3b" => {
            for delta in [0.0, 10.0] {
                let params = figure_params(0.0, delta);
                let tag = number_tag(delta);
                files.push((
                    format!("fig3b_rr_delta_{tag}.csv"),
                    g2_rows(&params, r, r, &taus),
                ));
                files.push((
                    format!("fig3b_rl_delta_{tag}.csv"),
                    g2_rows(&params, r, l, &taus),
                ));
            }
        }
        "4a" | "4b" => {
            let delta = if id == "4a" { 10.0 } else { 0.0 };
            for deph in [0.0, 0.5, 1.0, 5.0, 10.0] {
                files.push((
                    format!("fig{id}_deph_{}.csv", number_tag(deph)),
                    degree_avg_rows(&figure_params(deph, delta), &thetas),
                ));
            }
        }
        "5" => {
            for delta in [0.0, 10.0] {
                let params = figure_params(10.0, delta);
                let tag = number_tag(delta);
                files.push((
                    format!("fig5_rr_delta_{tag}.csv"),
                    g2_rows(&params, r, r, &taus),
                ));
                files.push((
                    format!("fig5_rl_delta_{tag}.csv"),
                    g2_rows(&params, r, l, &taus),
                ));
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown figure id {other:?}; valid ids: 3a, 3b, 4a, 4b, 5"
            )));
        }
    }

    fs::create_dir_all(outdir)
        .map_err(|e| CliError::Validation(format!("cannot create {}: {e}", outdir.display())))?;
    for (name, lines) in files {
        write_lines(Some(&outdir.join(name)), &lines)?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    tolerance: f64,
    grid: GridDescription,
    max_relative_error: f64,
    pass: bool,
    cases: Vec<CaseReport>,
}

#[derive(Debug, Serialize)]
struct GridDescription {
    parameter_sets: usize,
    tau_points: usize,
    tau_max: f64,
    seed: u64,
    step_scale: f64,
}

#[derive(Debug, Serialize)]
struct CaseReport {
    index: usize,
    params: RateParams,
    theta1: f64,
    phi1: f64,
    theta2: f64,
    phi2: f64,
    max_abs_error: f64,
    max_relative_error: f64,
}

/// Random-grid equivalence check of the closed-form correlation against the
/// conditioned-evolution integrator; emits a JSON report and fails the
/// process (exit code 3) when the tolerance is exceeded.
pub fn cmd_verify(
    ctx: &Context,
    sets: usize,
    tau_points: usize,
    tau_max: f64,
    seed: u64,
) -> Result<(), CliError> {
    if sets == 0 {
        return Err(CliError::Usage(
            "verify needs at least one parameter set".to_string(),
        ));
    }
    let taus = linspace(tau_max, tau_points.max(2))?;
    let mut rng = StdRng::seed_from_u64(seed);
    let cases: Vec<(RateParams, PolarizerSetting, PolarizerSetting)> = (0..sets)
        .map(|_| {
            let branch = rng.gen_range(0.02..0.98);
            let params = RateParams::new(
                branch,
                1.0 - branch,
                10.0 * (1.0 - rng.gen::<f64>()),
                10.0 * (1.0 - rng.gen::<f64>()),
                10.0 * (1.0 - rng.gen::<f64>()),
                10.0 * (1.0 - rng.gen::<f64>()),
                rng.gen_range(0.0..20.0),
                0.0,
            )
            .expect("drawn parameters are valid");
            let p1 = PolarizerSetting::new(rng.gen_range(0.0..PI), rng.gen_range(-PI..PI));
            let p2 = PolarizerSetting::new(rng.gen_range(0.0..PI), rng.gen_range(-PI..PI));
            (params, p1, p2)
        })
        .collect();

    const STEP_SCALE: f64 = 5.0;
    let reports: Result<Vec<CaseReport>, CliError> = cases
        .par_iter()
        .enumerate()
        .map(|(index, (params, p1, p2))| {
            let step = STEP_SCALE * oracle::default_step(params);
            let numeric =
                oracle::g2_conditioned_grid(params, p1, p2, &taus, step).map_err(map_oracle_err)?;
            let mut max_abs: f64 = 0.0;
            let mut grid_max: f64 = 0.0;
            for (&tau, &num) in taus.iter().zip(&numeric) {
                let ana = g2_general(params, p1, p2, tau);
                max_abs = max_abs.max((ana - num).abs());
                grid_max = grid_max.max(ana.abs());
            }
            Ok(CaseReport {
                index,
                params: *params,
                theta1: p1.theta(),
                phi1: p1.phi(),
                theta2: p2.theta(),
                phi2: p2.phi(),
                max_abs_error: max_abs,
                max_relative_error: max_abs / grid_max.max(1e-12),
            })
        })
        .collect();
    let reports = reports?;

    let max_relative_error = reports
        .iter()
        .map(|c| c.max_relative_error)
        .fold(0.0f64, f64::max);
    let pass = max_relative_error < ctx.tolerance;
    let report = VerifyReport {
        tolerance: ctx.tolerance,
        grid: GridDescription {
            parameter_sets: sets,
            tau_points: taus.len(),
            tau_max,
            seed,
            step_scale: STEP_SCALE,
        },
        max_relative_error,
        pass,
        cases: reports,
    };
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Validation(format!("cannot encode report: {e}")))?;
    write_lines(ctx.out.as_deref(), &[json])?;

    if pass {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "max relative error {max_relative_error:.3e} exceeds tolerance {:.3e}",
            ctx.tolerance
        )))
    }
}
