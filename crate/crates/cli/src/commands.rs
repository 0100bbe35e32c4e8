use rayon::prelude::*;
use squeezelab::fock::{convergence_check, FockConfig};
use squeezelab::montecarlo::{ensemble_moments, ensemble_spectrum, Estimate, Scheme, TrajectoryConfig};
use squeezelab::steady_state::{bisect_critical_u0, PhotonNumber};
use squeezelab::{
    closed_form_moments, critical_coupling, effective_drift, intracavity_photon_number, no_go_check,
    output_spectrum, spectrum_as_printed, variance_sweep, Grid, SpectrumMethod,
    SqueezeError, SweepAxis, SystemParams,
};

use crate::config::{
    load_file, parse_grid, resolve_fock, resolve_mc, resolve_sweep, Command, FileConfig, Format, MethodArg,
    ResolvedParams,
};
use crate::error::CliError;
use crate::output::{Cell, Metadata, Table};

pub struct Report {
    pub format: Format,
    pub out: Option<std::path::PathBuf>,
    pub meta: Metadata,
    pub table: Table,
    /// Set when a validation command finished but disagreed.
    pub failure: Option<String>,
}

struct Context {
    resolved: ResolvedParams,
    params: SystemParams,
    theta: f64,
    meta: Metadata,
}

impl Context {
    fn fail(&self, e: SqueezeError) -> CliError {
        CliError::model(e, self.resolved.to_json())
    }
}

fn context(command: &Command, file: &FileConfig) -> Result<Context, CliError> {
    let common = command.common();
    let resolved = ResolvedParams::resolve(common, &file.params);
    let params = resolved.build().map_err(|e| CliError::model(e, resolved.to_json()))?;
    let theta = common.theta.or(file.theta).unwrap_or(0.0);
    let mut meta = Metadata::default();
    meta.text("squeezelab", env!("CARGO_PKG_VERSION"));
    meta.text("command", command.name());
    meta.num("omega_c", params.omega_c());
    meta.num("omega_eg", params.omega_eg());
    meta.num("omega_0", params.omega_0());
    meta.num("u0", params.u0());
    meta.num("gamma", params.gamma());
    meta.num("alpha", params.alpha());
    meta.num("kappa", params.kappa());
    meta.num("theta", theta);
    Ok(Context { resolved, params, theta, meta })
}

pub fn run(command: &Command) -> Result<Report, CliError> {
    let common = command.common();
    let file = match &common.config {
        Some(path) => load_file(path, command.name())?,
        None => FileConfig::default(),
    };
    let format = common.format.or(file.format).unwrap_or(Format::Csv);
    let out = common.out.clone().or_else(|| file.output_path.clone());
    let mut ctx = context(command, &file)?;
    let (table, failure) = match command {
        Command::Variances { sweep, .. } => {
            let (axis, grid) = resolve_sweep(sweep, &file)?
                .ok_or_else(|| CliError::ConfigParse("variances needs a sweep range".into()))?;
            (variances(&mut ctx, axis, &grid)?, None)
        }
        Command::Spectrum { omega_range, method, .. } => {
            let text = omega_range
                .clone()
                .or_else(|| file.omega_range.clone())
                .ok_or_else(|| CliError::ConfigParse("spectrum needs --omega-range".into()))?;
            let grid = parse_grid(&text, "omega_range")?;
            let method = method.or(file.method).unwrap_or(MethodArg::Rederived);
            (spectrum(&mut ctx, &grid, method)?, None)
        }
        Command::PhotonNumber { sweep, .. } => (photon_number(&mut ctx, resolve_sweep(sweep, &file)?)?, None),
        Command::QptScan { u0_max, tol, .. } => {
            let u0_max = u0_max.or(file.u0_max).unwrap_or(100.0);
            let tol = tol.or(file.tol).unwrap_or(1e-12);
            (qpt_scan(&mut ctx, u0_max, tol)?, None)
        }
        Command::McValidate { mc, omega_range, .. } => {
            let config = resolve_mc(mc, &file.mc);
            let grid = omega_range
                .clone()
                .or_else(|| file.omega_range.clone())
                .map(|t| parse_grid(&t, "omega_range"))
                .transpose()?;
            mc_validate(&mut ctx, &config, grid.as_ref())?
        }
        Command::OracleValidate { fock, .. } => {
            let (list, config) = resolve_fock(fock, &file.fock);
            oracle_validate(&mut ctx, &list, &config)?
        }
    };
    Ok(Report { format, out, meta: ctx.meta, table, failure })
}

fn variances(ctx: &mut Context, axis: SweepAxis, grid: &Grid) -> Result<Table, CliError> {
    ctx.meta.text("sweep_axis", axis.name());
    ctx.meta.text("sweep_range", grid.to_string());
    let rows = variance_sweep(&ctx.params, axis, grid, ctx.theta).map_err(|e| ctx.fail(e))?;
    let mut table = Table::new(&[axis.name(), "var_x1", "var_x2", "stable"]);
    for row in rows {
        table.push(vec![
            Cell::Num(row.axis_value),
            Cell::opt(row.variances.map(|v| v.var_x1)),
            Cell::opt(row.variances.map(|v| v.var_x2)),
            Cell::Bool(row.stable),
        ]);
    }
    Ok(table)
}

fn spectrum(ctx: &mut Context, grid: &Grid, method: MethodArg) -> Result<Table, CliError> {
    let methods: &[SpectrumMethod] = match method {
        MethodArg::Rederived => &[SpectrumMethod::Rederived],
        MethodArg::AsPrinted => &[SpectrumMethod::AsPrinted],
        MethodArg::Both => &[SpectrumMethod::Rederived, SpectrumMethod::AsPrinted],
    };
    ctx.meta.text("omega_range", grid.to_string());
    ctx.meta.text("method", methods.iter().map(|m| m.name()).collect::<Vec<_>>().join(","));
    let drift = effective_drift(&ctx.params);
    let gamma = ctx.params.gamma();
    let mut table = Table::new(&["omega", "method", "s1", "s2", "defined"]);
    for &method in methods {
        let points: Vec<Result<Option<(f64, f64)>, SqueezeError>> = grid
            .values()
            .into_par_iter()
            .map(|omega| {
                let point = match method {
                    SpectrumMethod::Rederived => output_spectrum(&drift, gamma, omega, ctx.theta),
                    SpectrumMethod::AsPrinted => spectrum_as_printed(&ctx.params, omega),
                };
                match point {
                    Ok(p) => Ok(Some((p.s1, p.s2))),
                    Err(SqueezeError::DivisionByZero { .. }) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect();
        for (omega, point) in grid.values().into_iter().zip(points) {
            let point = point.map_err(|e| ctx.fail(e))?;
            table.push(vec![
                Cell::Num(omega),
                Cell::Text(method.name().into()),
                Cell::opt(point.map(|p| p.0)),
                Cell::opt(point.map(|p| p.1)),
                Cell::Bool(point.is_some()),
            ]);
        }
    }
    Ok(table)
}

fn photon_number(ctx: &mut Context, sweep: Option<(SweepAxis, Grid)>) -> Result<Table, CliError> {
    let points: Vec<SystemParams> = match sweep {
        Some((axis, grid)) => {
            ctx.meta.text("sweep_axis", axis.name());
            ctx.meta.text("sweep_range", grid.to_string());
            grid.values()
                .into_iter()
                .map(|v| axis.apply(&ctx.params, v))
                .collect::<Result<_, _>>()
                .map_err(|e| ctx.fail(e))?
        }
        None => vec![ctx.params],
    };
    let mut table = Table::new(&[
        "omega_c",
        "u0",
        "alpha",
        "kappa",
        "determinant",
        "stable",
        "photon_number",
        "as_printed",
        "qpt_divergence",
    ]);
    for p in points {
        let drift = effective_drift(&p);
        let result: Option<PhotonNumber> = match intracavity_photon_number(&drift) {
            Ok(n) => Some(n),
            Err(SqueezeError::UnstableSystem { .. }) => None,
            Err(e) => return Err(ctx.fail(e)),
        };
        let finite = result.filter(|n| !n.qpt_divergence);
        table.push(vec![
            Cell::Num(p.omega_c()),
            Cell::Num(p.u0()),
            Cell::Num(p.alpha()),
            Cell::Num(p.kappa()),
            Cell::Num(drift.determinant()),
            Cell::Bool(drift.is_stable()),
            Cell::opt(finite.map(|n| n.n)),
            Cell::opt(finite.map(|n| n.as_printed)),
            Cell::Bool(result.is_some_and(|n| n.qpt_divergence)),
        ]);
    }
    Ok(table)
}

fn qpt_scan(ctx: &mut Context, u0_max: f64, tol: f64) -> Result<Table, CliError> {
    if !(u0_max > 0.0) || !(tol > 0.0) {
        return Err(CliError::ConfigParse(format!("u0_max = {u0_max} and tol = {tol} must be positive")));
    }
    ctx.meta.num("u0_max", u0_max);
    ctx.meta.num("tol", tol);
    let p = ctx.params;
    let found = bisect_critical_u0(&p, u0_max, tol).map_err(|e| ctx.fail(e))?;
    let formula = if p.alpha() == 0.0 {
        Some(critical_coupling(p.omega_c(), p.omega_eg(), p.gamma()).map_err(|e| ctx.fail(e))?.u0_crit)
    } else {
        None
    };
    let mut table = Table::new(&["alpha", "omega_c", "found", "u0_crit", "omega_crit", "u0_crit_formula", "no_go"]);
    table.push(vec![
        Cell::Num(p.alpha()),
        Cell::Num(p.omega_c()),
        Cell::Bool(found.is_some()),
        Cell::opt(found),
        Cell::opt(found.map(|u| (u * p.omega_eg()).sqrt())),
        Cell::opt(formula),
        Cell::Bool(no_go_check(&p)),
    ]);
    Ok(table)
}

fn mc_validate(
    ctx: &mut Context,
    config: &TrajectoryConfig,
    grid: Option<&Grid>,
) -> Result<(Table, Option<String>), CliError> {
    ctx.meta.num("dt", config.dt);
    ctx.meta.num("t_burn", config.t_burn);
    ctx.meta.num("t_sample", config.t_sample);
    ctx.meta.push("n_traj", Cell::Int(config.n_traj as u64));
    ctx.meta.push("seed", Cell::Int(config.seed));
    let scheme = match config.scheme {
        Scheme::Heun => "heun",
        Scheme::EulerMaruyama => "euler_maruyama",
    };
    ctx.meta.text("scheme", scheme);
    let drift = effective_drift(&ctx.params);
    let gamma = ctx.params.gamma();
    let exact = closed_form_moments(&drift).map_err(|e| ctx.fail(e))?;
    let est = ensemble_moments(&drift, gamma, config).map_err(|e| ctx.fail(e))?.moments;
    let se = est.stderr.expect("ensemble errors");

    let mut table = Table::new(&["quantity", "omega", "reference", "estimate", "stderr", "z", "within_3_stderr"]);
    let mut outside = Vec::new();
    let mut push = |table: &mut Table, name: &str, omega: Option<f64>, reference: f64, e: Estimate| {
        // a vanishing error with an exact match counts as agreement
        let z = if e.stderr > 0.0 { e.z_score(reference) } else if e.mean == reference { 0.0 } else { f64::INFINITY };
        let ok = z.abs() <= 3.0;
        if !ok {
            outside.push(match omega {
                Some(w) => format!("{name}({w})"),
                None => name.to_string(),
            });
        }
        table.push(vec![
            Cell::Text(name.into()),
            Cell::opt(omega),
            Cell::Num(reference),
            Cell::Num(e.mean),
            Cell::Num(e.stderr),
            Cell::opt(z.is_finite().then_some(z)),
            Cell::Bool(ok),
        ]);
    };
    push(&mut table, "a_sq_re", None, exact.a_sq.re, Estimate { mean: est.a_sq.re, stderr: se.a_sq_re });
    push(&mut table, "a_sq_im", None, exact.a_sq.im, Estimate { mean: est.a_sq.im, stderr: se.a_sq_im });
    push(&mut table, "sym_number", None, exact.sym_number, Estimate { mean: est.sym_number, stderr: se.sym_number });

    if let Some(grid) = grid {
        ctx.meta.text("omega_range", grid.to_string());
        let spec = ensemble_spectrum(&drift, gamma, config, &grid.values()).map_err(|e| ctx.fail(e))?;
        for s in spec.spectrum.expect("spectral estimate") {
            let reference = output_spectrum(&drift, gamma, s.omega, 0.0).map_err(|e| ctx.fail(e))?;
            push(&mut table, "s1", Some(s.omega), reference.s1, s.s1);
            push(&mut table, "s2", Some(s.omega), reference.s2, s.s2);
        }
    }
    let failure = (!outside.is_empty()).then(|| format!("beyond 3 stderr: {}", outside.join(", ")));
    Ok((table, failure))
}

fn oracle_validate(
    ctx: &mut Context,
    n_max_list: &[usize],
    config: &FockConfig,
) -> Result<(Table, Option<String>), CliError> {
    ctx.meta.text("n_max", n_max_list.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","));
    ctx.meta.num("tolerance", config.tolerance);
    ctx.meta.num("leak_tolerance", config.leak_tolerance);
    let exact = closed_form_moments(&effective_drift(&ctx.params)).map_err(|e| ctx.fail(e))?;
    let report = convergence_check(&ctx.params, n_max_list, config).map_err(|e| ctx.fail(e))?;
    ctx.meta.push("converged_at", Cell::Int(report.converged_at as u64));
    ctx.meta.num("closed_form_sym_number", exact.sym_number);
    ctx.meta.num("closed_form_a_sq_re", exact.a_sq.re);
    ctx.meta.num("closed_form_a_sq_im", exact.a_sq.im);

    let mut table = Table::new(&["n_max", "a_sq_re", "a_sq_im", "sym_number", "top_population", "rel_error"]);
    let mut failure = None;
    for row in &report.rows {
        let m = row.moments;
        let rel = (m.sym_number - exact.sym_number).abs().max((m.a_sq - exact.a_sq).norm()) / exact.sym_number;
        if row.n_max == report.converged_at && rel > 1e-6 {
            failure = Some(format!("oracle differs from closed form by {rel:e} at n_max = {}", row.n_max));
        }
        table.push(vec![
            Cell::Int(row.n_max as u64),
            Cell::Num(m.a_sq.re),
            Cell::Num(m.a_sq.im),
            Cell::Num(m.sym_number),
            Cell::Num(row.top_population),
            Cell::Num(rel),
        ]);
    }
    Ok((table, failure))
}
