use super::output::{self, Cell, Format, Meta, Table};
use super::{
    BConventionArg, CliError, Command, FamilyArg, FigureArg, Outcome, OutputArgs, ParamArgs, RunConfig, SuiteArg,
    OUT_DIR_ENV,
};
use crate::classical::{self, integrate_el, IntegrationError, IntegratorOptions, TrajectoryCoeffs};
use crate::model::{self, SystemParams, DOMAIN_EPS};
use crate::slsolver::{self, Formulation, DEFAULT_QUAD_TOL};
use crate::spectrum::{self, BoundState};
use crate::verify::{self, Tolerances, VerifyOptions};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

pub(super) fn dispatch(cmd: Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Potential {
            params,
            kappas,
            x_max,
            points,
            output,
        } => potential(&params, kappas, x_max, points, &output),
        Command::Classical {
            params,
            family,
            amplitude,
            phase,
            b,
            t_end,
            samples,
            integrate,
            output,
        } => classical_cmd(
            &params,
            ClassicalRequest {
                family,
                amplitude,
                phase,
                b,
                t_end,
                samples,
                integrate,
            },
            &output,
        ),
        Command::Spectrum {
            params,
            n_max,
            oracle_cells,
            output,
        } => spectrum_cmd(&params, n_max, oracle_cells, &output),
        Command::Wavefunction {
            params,
            n_max,
            x_max,
            points,
            output,
        } => wavefunction(&params, n_max, x_max, points, &output),
        Command::Verify {
            suite,
            b_convention,
            cells,
            output,
        } => verify_cmd(suite, b_convention, cells, &output),
        Command::Figures { figure, points, output } => figures(figure, points, &output),
    }
}

fn config(command: &str, params: Option<SystemParams>, format: Format, out: &OutputArgs, options: Value) -> Value {
    let cfg = RunConfig {
        command: command.to_string(),
        params,
        output_format: format,
        output_path: out.out.clone(),
        tol: out.tol,
        options,
    };
    serde_json::to_value(cfg).expect("config serializes")
}

fn tol_source(out: &OutputArgs) -> &'static str {
    if out.tol.is_some() {
        "--tol"
    } else {
        "default"
    }
}

fn check_tol(tol: f64) -> Result<f64, CliError> {
    if tol.is_finite() && tol > 0.0 && tol < 1.0 {
        Ok(tol)
    } else {
        Err(CliError::Usage(format!("--tol {tol}: must lie in (0, 1)")))
    }
}

fn check_points(points: usize) -> Result<(), CliError> {
    if points == 0 {
        Err(CliError::Usage("--points must be positive".into()))
    } else {
        Ok(())
    }
}

/// Writes `bytes` to `--out`, to `$ISOKAPPA_OUT_DIR/default_name`, or to stdout.
fn emit(out: &Option<PathBuf>, default_name: &str, bytes: &[u8]) -> Result<(), CliError> {
    let target = match out {
        Some(p) => Some(p.clone()),
        None => std::env::var_os(OUT_DIR_ENV).map(|d| PathBuf::from(d).join(default_name)),
    };
    match target {
        Some(path) => write_file(&path, bytes),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, bytes).map_err(io)
}

fn render(format: Format, meta: &Meta, table: &Table) -> Vec<u8> {
    let mut buf = Vec::new();
    output::write_table(&mut buf, format, meta, table).expect("write to memory");
    buf
}

/// `(x, V)` columns for each κ; samples outside the domain are left empty.
fn potential_table(base: &SystemParams, kappas: &[f64], x_max: f64, points: usize, meta: &mut Meta) -> Table {
    let mut columns = vec!["x".to_string()];
    columns.extend(kappas.iter().map(|k| format!("V_kappa={k}")));
    let mut table = Table {
        columns,
        rows: Vec::new(),
    };
    let mut violations = vec![0usize; kappas.len()];
    for i in 1..=points {
        let x = x_max * i as f64 / points as f64;
        let mut row = vec![Cell::Float(x)];
        for (j, &kappa) in kappas.iter().enumerate() {
            let p = SystemParams { kappa, ..*base };
            match model::potential(x, &p) {
                Ok(v) => row.push(Cell::Float(v)),
                Err(_) => {
                    violations[j] += 1;
                    row.push(Cell::Empty);
                }
            }
        }
        table.rows.push(row);
    }
    let mut report = serde_json::Map::new();
    for (&kappa, &count) in kappas.iter().zip(&violations) {
        if count > 0 {
            meta.note(format!(
                "kappa={kappa}: {count} of {points} samples outside the domain x^2 < 1/kappa, left empty"
            ));
        }
        report.insert(format!("kappa={kappa}"), json!(count));
    }
    meta.summarize("domain_violations", Value::Object(report));
    table
}

fn potential(
    params: &ParamArgs,
    kappas: Vec<f64>,
    x_max: f64,
    points: usize,
    out: &OutputArgs,
) -> Result<Outcome, CliError> {
    check_points(points)?;
    if !(x_max.is_finite() && x_max > 0.0) {
        return Err(CliError::Usage(format!("--x-max {x_max}: must be positive")));
    }
    let base = params.system()?;
    let kappas = if kappas.is_empty() { vec![params.kappa] } else { kappas };
    for &k in &kappas {
        SystemParams { kappa: k, ..base }.validate()?;
    }
    let format = out.format.unwrap_or(Format::Csv);
    let options = json!({"kappas": kappas, "x_max": x_max, "points": points});
    let mut meta = Meta::new("potential", config("potential", Some(base), format, out, options)).tolerance(
        "domain_eps",
        DOMAIN_EPS,
        "model margin at singular points",
    );
    let table = potential_table(&base, &kappas, x_max, points, &mut meta);
    emit(
        &out.out,
        &format!("potential.{}", format.extension()),
        &render(format, &meta, &table),
    )?;
    Ok(Outcome::Success)
}

const FIGURE_KAPPAS: [(&str, [f64; 3]); 2] = [("figure1", [0.0, 0.2, 0.5]), ("figure2", [0.0, -0.2, -0.5])];

fn figures(figure: FigureArg, points: usize, out: &OutputArgs) -> Result<Outcome, CliError> {
    check_points(points)?;
    let format = out.format.unwrap_or(Format::Csv);
    let dir = match &out.out {
        Some(d) => d.clone(),
        None => std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from),
    };
    let base = SystemParams::unit(0.0, 1.0)?;
    let chosen: Vec<_> = match figure {
        FigureArg::One => vec![FIGURE_KAPPAS[0]],
        FigureArg::Two => vec![FIGURE_KAPPAS[1]],
        FigureArg::All => FIGURE_KAPPAS.to_vec(),
    };
    for (name, kappas) in chosen {
        let options = json!({"figure": name, "kappas": kappas, "x_max": 1.4, "points": points});
        let mut meta = Meta::new("figures", config("figures", Some(base), format, out, options)).tolerance(
            "domain_eps",
            DOMAIN_EPS,
            "model margin at singular points",
        );
        meta.note("kappa=0 is the undeformed reference curve");
        let table = potential_table(&base, &kappas, 1.4, points, &mut meta);
        let file = dir.join(format!("{name}_potential.{}", format.extension()));
        write_file(&file, &render(format, &meta, &table))?;
        eprintln!("wrote {}", file.display());
    }
    Ok(Outcome::Success)
}

struct ClassicalRequest {
    family: FamilyArg,
    amplitude: Option<f64>,
    phase: f64,
    b: Option<f64>,
    t_end: Option<f64>,
    samples: usize,
    integrate: bool,
}

fn classical_cmd(params: &ParamArgs, req: ClassicalRequest, out: &OutputArgs) -> Result<Outcome, CliError> {
    let p = params.system()?;
    if req.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let need_amplitude = || {
        req.amplitude
            .ok_or_else(|| CliError::Usage("--amplitude is required for this family".into()))
    };
    let coeffs: TrajectoryCoeffs = match req.family {
        FamilyArg::Trig => classical::solve_trig(need_amplitude()?, req.phase, &p)?,
        FamilyArg::Hyperbolic => classical::solve_hyperbolic(need_amplitude()?, req.phase, &p)?,
        FamilyArg::Border => {
            let b = req
                .b
                .ok_or_else(|| CliError::Usage("--b is required for the border family".into()))?;
            classical::solve_border(b, &p)?
        }
    };
    let t_end = req.t_end.unwrap_or_else(|| coeffs.period().map_or(3.0, |t| 3.0 * t));
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(CliError::Usage(format!("--t-end {t_end}: must be positive")));
    }
    let tol = check_tol(out.tol.unwrap_or(IntegratorOptions::default().tol))?;
    let format = out.format.unwrap_or(Format::Csv);
    let options = json!({
        "family": req.family, "amplitude": req.amplitude, "phase": req.phase, "b": req.b,
        "t_end": t_end, "samples": req.samples, "integrate": req.integrate,
    });
    let mut meta = Meta::new("classical", config("classical", Some(p), format, out, options));
    meta.summarize("solution", serde_json::to_value(coeffs.solution).expect("serializes"));
    meta.summarize("energy", json!(coeffs.energy()));
    meta.summarize("omega", json!(coeffs.omega()));
    meta.summarize("period", json!(coeffs.period()));

    let mut columns = vec!["t", "x", "v", "energy", "el_residual"];
    let mut times: Vec<f64> = (0..=req.samples)
        .map(|i| t_end * i as f64 / req.samples as f64)
        .collect();
    let mut numeric = Vec::new();
    if req.integrate {
        meta = meta.tolerance("integrator", tol, tol_source(out));
        columns.extend(["x_ode", "v_ode", "abs_diff"]);
        let start = coeffs.phase_point(0.0)?;
        let opts = IntegratorOptions {
            tol,
            samples: req.samples,
            ..Default::default()
        };
        let traj = match integrate_el(start.x, start.v, (0.0, t_end), &p, &opts) {
            Ok(t) => t,
            Err(IntegrationError::Stopped { kind, t, partial }) => {
                meta.note(format!("integration stopped at t={t}: {kind:?}; later rows omitted"));
                *partial
            }
            Err(e) => return Err(e.into()),
        };
        times = traj.samples.iter().map(|s| s.t).collect();
        numeric = traj.samples;
    }
    let mut table = Table::new(&columns);
    let mut invalid = 0usize;
    for (i, &t) in times.iter().enumerate() {
        let mut row: Vec<Cell> = vec![t.into()];
        let exact = coeffs.phase_point(t).ok();
        match exact {
            Some(pp) => {
                row.push(pp.x.into());
                row.push(pp.v.into());
                row.push(coeffs.energy_at(t).ok().into());
                row.push(coeffs.el_residual(t).ok().into());
            }
            None => {
                invalid += 1;
                row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]);
            }
        }
        if let Some(s) = numeric.get(i) {
            row.push(s.x.into());
            row.push(s.v.into());
            row.push(exact.map(|pp| (pp.x - s.x).abs()).into());
        }
        table.push(row);
    }
    if invalid > 0 {
        meta.note(format!(
            "{invalid} samples leave the domain of the closed form, left empty"
        ));
    }
    emit(
        &out.out,
        &format!("classical.{}", format.extension()),
        &render(format, &meta, &table),
    )?;
    Ok(Outcome::Success)
}

fn spectrum_cmd(
    params: &ParamArgs,
    n_max: usize,
    oracle_cells: Option<usize>,
    out: &OutputArgs,
) -> Result<Outcome, CliError> {
    let p = params.system()?;
    let dp = model::nondimensionalize(&p)?;
    let tol = check_tol(out.tol.unwrap_or(DEFAULT_QUAD_TOL))?;
    let unit = p.hbar * p.alpha;
    let (kp, g) = (dp.kappa_prime, dp.g);
    let finite = kp < 0.0;
    let available = if finite {
        spectrum::count_bound_states(kp, g)?
    } else {
        usize::MAX
    };
    let count = n_max.min(available);
    let levels = (0..count)
        .map(|n| BoundState::with_tolerance(&dp, n, unit, tol))
        .collect::<Result<Vec<_>, _>>()?;

    let format = out.format.unwrap_or(Format::Csv);
    let study = match oracle_cells {
        Some(cells) if cells < 128 || !cells.is_multiple_of(2) => {
            return Err(CliError::Usage(format!(
                "--oracle-cells {cells}: need an even count of at least 128"
            )))
        }
        Some(cells) => Some(
            slsolver::solve_levels(&dp, count, cells, Formulation::FlatVariable, None)
                .map_err(|e| CliError::Usage(format!("eigenvalue oracle: {e}")))?,
        ),
        None => None,
    };
    let options = json!({"n_max": n_max, "oracle_cells": oracle_cells});
    let mut meta = Meta::new("spectrum", config("spectrum", Some(p), format, out, options)).tolerance(
        "quadrature",
        tol,
        tol_source(out),
    );
    if let Some(st) = &study {
        meta = meta
            .tolerance("oracle_residual", slsolver::RESIDUAL_TOL, "eigensolver default")
            .tolerance("oracle_tail", slsolver::TAIL_TOL, "box truncation default");
        meta.summarize("oracle_box_length", json!(st.box_length));
        meta.summarize("oracle_formulation", json!(st.formulation.name()));
    }
    meta.summarize("mu", json!(dp.mu));
    meta.summarize("kappa_prime", json!(kp));
    meta.summarize("g", json!(g));
    meta.summarize("finite", json!(finite));
    meta.summarize("n_max", json!((finite && available > 0).then(|| available - 1)));
    meta.summarize("n_kappa", json!(spectrum::normalizability_bound(kp, g)));
    meta.summarize(
        "energy_maximum",
        json!(spectrum::energy_maximum_point(kp, g).map(|n| [n, spectrum::energy_formula(n, kp, g)])),
    );
    if count < n_max {
        meta.note(format!("{n_max} levels requested, {count} are normalizable"));
    }
    let mut columns = vec!["n", "m", "energy_dimless", "energy", "gap", "normalizable", "norm"];
    if study.is_some() {
        columns.extend(["grid_size", "eigenvalue", "extrapolated", "error_estimate"]);
    }
    let mut table = Table::new(&columns);
    for (i, s) in levels.iter().enumerate() {
        let gap = levels.get(i + 1).map(|next| next.energy_physical - s.energy_physical);
        let mut row: Vec<Cell> = vec![
            s.n.into(),
            s.m_index.into(),
            s.energy_dimless.into(),
            s.energy_physical.into(),
            gap.into(),
            spectrum::is_normalizable(s.n, kp, g).into(),
            s.norm.into(),
        ];
        if let Some(st) = &study {
            let l = &st.levels[i];
            row.extend([
                st.cells_fine.into(),
                l.fine.into(),
                l.extrapolated.into(),
                l.error_estimate.into(),
            ]);
        }
        table.push(row);
    }
    emit(
        &out.out,
        &format!("spectrum.{}", format.extension()),
        &render(format, &meta, &table),
    )?;
    Ok(Outcome::Success)
}

fn wavefunction(
    params: &ParamArgs,
    n_max: usize,
    x_max: Option<f64>,
    points: usize,
    out: &OutputArgs,
) -> Result<Outcome, CliError> {
    check_points(points)?;
    if n_max == 0 {
        return Err(CliError::Usage("--n-max must be positive".into()));
    }
    let p = params.system()?;
    let dp = model::nondimensionalize(&p)?;
    let tol = check_tol(out.tol.unwrap_or(DEFAULT_QUAD_TOL))?;
    let unit = p.hbar * p.alpha;
    let states = (0..n_max)
        .map(|n| BoundState::with_tolerance(&dp, n, unit, tol))
        .collect::<Result<Vec<_>, _>>()?;
    let barrier = (p.kappa > 0.0).then(|| 1.0 / p.kappa.sqrt());
    let x_max = match x_max {
        Some(x) => x,
        None => {
            let top = states.last().map_or(1.5, |s| s.energy_dimless);
            let rho = 2.0 * (2.0 * top).sqrt() + 4.0;
            barrier.map_or(rho / dp.mu, |b| b.min(rho / dp.mu))
        }
    };
    if !(x_max.is_finite() && x_max > 0.0) {
        return Err(CliError::Usage(format!("--x-max {x_max}: must be positive")));
    }
    // Stay strictly inside the barrier when the grid would touch it.
    let divisor = if barrier.is_some_and(|b| x_max >= b * (1.0 - DOMAIN_EPS)) {
        points + 1
    } else {
        points
    };
    let format = out.format.unwrap_or(Format::Csv);
    let options = json!({"n_max": n_max, "x_max": x_max, "points": points});
    let mut meta = Meta::new("wavefunction", config("wavefunction", Some(p), format, out, options)).tolerance(
        "quadrature",
        tol,
        tol_source(out),
    );
    meta.summarize("norms", json!(states.iter().map(|s| s.norm).collect::<Vec<_>>()));
    meta.summarize(
        "energies",
        json!(states.iter().map(|s| s.energy_physical).collect::<Vec<_>>()),
    );
    let mut columns = vec!["x".to_string()];
    columns.extend((0..n_max).map(|n| format!("psi_{n}")));
    let mut table = Table {
        columns,
        rows: Vec::new(),
    };
    let mut invalid = 0usize;
    for i in 1..=points {
        let x = x_max * i as f64 / divisor as f64;
        let mut row = vec![Cell::Float(x)];
        for s in &states {
            match s.wavefunction(x) {
                Ok(v) => row.push(v.into()),
                Err(_) => {
                    invalid += 1;
                    row.push(Cell::Empty);
                }
            }
        }
        table.rows.push(row);
    }
    if invalid > 0 {
        meta.note(format!("{invalid} samples outside the domain, left empty"));
    }
    emit(
        &out.out,
        &format!("wavefunction.{}", format.extension()),
        &render(format, &meta, &table),
    )?;
    Ok(Outcome::Success)
}

fn verify_cmd(suite: SuiteArg, b: BConventionArg, cells: usize, out: &OutputArgs) -> Result<Outcome, CliError> {
    if cells < 128 || !cells.is_multiple_of(2) {
        return Err(CliError::Usage(format!(
            "--cells {cells}: need an even count of at least 128"
        )));
    }
    if out.tol.is_some() {
        return Err(CliError::Usage(
            "verify thresholds are fixed acceptance values; --tol is not accepted".into(),
        ));
    }
    let opts = VerifyOptions {
        b_convention: b.into(),
        cells,
        tolerances: Tolerances::default(),
    };
    let report = verify::run(suite.into(), &opts);
    let format = out.format.unwrap_or(Format::Json);
    let options = json!({"suite": suite, "b_convention": b, "cells": cells});
    let t = opts.tolerances;
    let src = "acceptance threshold";
    let mut meta = Meta::new("verify", config("verify", None, format, out, options))
        .tolerance("el_residual", t.el_residual, src)
        .tolerance("trajectory", t.trajectory, src)
        .tolerance("frequency", t.frequency, src)
        .tolerance("border_energy", t.border_energy, src)
        .tolerance("quantization", t.quantization, src)
        .tolerance("eigenvalue", t.eigenvalue, src)
        .tolerance("orthogonality", t.orthogonality, src)
        .tolerance("gap", t.gap, src);
    let total: usize = report.suites.iter().map(|s| s.checks.len()).sum();
    let failed: Vec<_> = report.failures().collect();
    meta.summarize("passed", json!(report.passed));
    meta.summarize("checks", json!(total));
    meta.summarize("failed", json!(failed.len()));
    let bytes = match format {
        Format::Json => {
            let mut buf = Vec::new();
            output::write_json(&mut buf, &meta, serde_json::to_value(&report).expect("serializes"))
                .expect("write to memory");
            buf
        }
        Format::Csv => {
            let mut table = Table::new(&["suite", "name", "passed", "value", "threshold", "detail"]);
            for s in &report.suites {
                for c in &s.checks {
                    table.push(vec![
                        s.suite.as_str().into(),
                        c.name.as_str().into(),
                        c.passed.into(),
                        c.value.into(),
                        c.threshold.into(),
                        c.detail.as_str().into(),
                    ]);
                }
            }
            render(format, &meta, &table)
        }
    };
    emit(&out.out, &format!("verify.{}", format.extension()), &bytes)?;
    for c in &failed {
        eprintln!("FAIL {}: {} > {} ({})", c.name, c.value, c.threshold, c.detail);
    }
    eprintln!(
        "verify: {total} checks, {} failed: {}",
        failed.len(),
        if report.passed { "PASS" } else { "FAIL" }
    );
    Ok(if report.passed {
        Outcome::Success
    } else {
        Outcome::ChecksFailed
    })
}
