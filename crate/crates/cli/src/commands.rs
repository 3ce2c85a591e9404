use std::f64::consts::FRAC_PI_4;
use std::time::Instant;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use dephase_core::dephasing::{Correlation, DephasingModel, ProbeKind, ProbeState};
use dephase_core::optimize::optimal_time_numeric;
use dephase_core::purification::purify;
use dephase_core::qfi::minimize_ansatz;
use dephase_core::report::{AnsatzChoice, Scenario};
use dephase_core::resolution::{
    closed_form_uncorrelated, improvement_factor, optimal_time_closed, partial_corr_asymptote,
    ramsey_max_correlated, resolution_from_qfi, ResolutionQuery,
};
use dephase_core::verify::{self, Depth, VerifyConfig};

use crate::cli::{
    AnsatzArg, Cli, Command, CorrelationArg, DepthArg, ImprovementArgs, ProbeArg, QfiArgs, ResolutionArgs,
    ScenarioArgs, VerifyArgs,
};
use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::output::{csv, emit, fmt_num, sibling, to_json, write_file, CheckLine, RunManifest};

pub const JOBS_ENV: &str = "DEPHASE_QFI_JOBS";
const DEFAULT_SEED: u64 = 42;

/// Settings shared by every subcommand.
struct Context {
    config: Config,
    seed: u64,
    jobs: usize,
    started: Instant,
}

impl Context {
    fn pool(&self) -> CliResult<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| CliError::Constraint(format!("cannot start {} workers: {e}", self.jobs)))
    }

    fn manifest(&self, parameters: Value, checks: Vec<CheckLine>) -> RunManifest {
        let mut parameters = parameters;
        if let Value::Object(map) = &mut parameters {
            map.insert("seed".into(), json!(self.seed));
            map.insert("jobs".into(), json!(self.jobs));
        }
        RunManifest {
            command_line: std::env::args().collect(),
            parameters,
            version: env!("CARGO_PKG_VERSION").into(),
            duration_seconds: self.started.elapsed().as_secs_f64(),
            checks,
        }
    }

    fn pick_enum<T: ValueEnum>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.config.get::<String>(key)? {
            Some(s) => T::from_str(&s, true).map_err(|e| CliError::Parse(format!("config key '{key}': {e}"))),
            None => Ok(default),
        }
    }
}

fn resolve_jobs(flag: Option<usize>, config: &Config) -> CliResult<usize> {
    let jobs = match config.pick_opt(flag, "jobs")? {
        Some(j) => j,
        None => match std::env::var(JOBS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|e| CliError::Parse(format!("{JOBS_ENV}='{v}': {e}")))?,
            Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if jobs == 0 {
        return Err(CliError::Parse("jobs must be at least 1".into()));
    }
    Ok(jobs)
}

pub fn run(cli: Cli) -> CliResult<()> {
    let started = Instant::now();
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let seed = config.pick(cli.seed, "seed", DEFAULT_SEED)?;
    let jobs = resolve_jobs(cli.jobs, &config)?;
    let ctx = Context {
        config,
        seed,
        jobs,
        started,
    };
    match cli.command {
        Command::Improvement(a) => improvement(&ctx, a),
        Command::Qfi(a) => qfi(&ctx, a),
        Command::Resolution(a) => resolution(&ctx, a),
        Command::Verify(a) => verify(&ctx, a),
    }
}

fn improvement(ctx: &Context, a: ImprovementArgs) -> CliResult<()> {
    let c = &ctx.config;
    let nu_min = c.pick(a.nu_min, "nu-min", 1.0)?;
    let nu_max = c.pick(a.nu_max, "nu-max", 6.0)?;
    let steps = c.pick(a.steps, "steps", 101usize)?;
    let gamma = c.pick(a.gamma, "gamma", 0.5)?;
    let n = c.pick(a.n, "n", 100usize)?;
    let total_time = c.pick(a.total_time, "total-time", 1.0)?;
    let out = c.pick_opt(a.out, "out")?;

    if !(nu_min >= 0.05) {
        return Err(CliError::Constraint(format!("nu-min must be at least 0.05, got {nu_min}")));
    }
    if !(nu_max >= nu_min) {
        return Err(CliError::Constraint(format!("nu-max {nu_max} is below nu-min {nu_min}")));
    }
    if steps < 2 && !(steps == 1 && nu_min == nu_max) {
        return Err(CliError::Constraint(
            "steps must be at least 2 (or 1 when nu-min equals nu-max)".into(),
        ));
    }
    let nus: Vec<f64> = (0..steps)
        .map(|k| {
            if steps == 1 {
                nu_min
            } else {
                nu_min + (nu_max - nu_min) * k as f64 / (steps - 1) as f64
            }
        })
        .collect();
    let rows: Vec<Vec<f64>> = ctx.pool()?.install(|| {
        nus.par_iter()
            .map(|&nu| {
                let model = DephasingModel::uncorrelated(gamma, nu, n)?;
                Ok(vec![nu, improvement_factor(&model, total_time)?])
            })
            .collect::<dephase_core::Result<_>>()
    })?;
    emit(out.as_deref(), &csv(&["nu", "improvement"], &rows))?;
    let params = json!({
        "command": "improvement",
        "nu_min": nu_min, "nu_max": nu_max, "steps": steps,
        "gamma": gamma, "n": n, "total_time": total_time,
    });
    let checks = vec![CheckLine {
        name: "improvement-at-least-one".into(),
        passed: rows.iter().all(|r| r[1] >= 1.0 - 1e-9),
    }];
    ctx.manifest(params, checks).emit(out.as_deref())
}

/// Scenario flags after applying the config file and defaults.
struct ResolvedScenario {
    model: DephasingModel,
    probe: ProbeKind,
    phi: f64,
    total_time: f64,
    ansatz: AnsatzChoice,
}

impl ResolvedScenario {
    fn record(&self) -> Value {
        let mut v = json!({
            "correlation": self.model.correlation().name(),
            "probe": self.probe.name(),
            "n": self.model.n(),
            "gamma": self.model.gamma(),
            "nu": self.model.nu(),
            "phi": self.phi,
            "total_time": self.total_time,
            "ansatz": self.ansatz.name(),
        });
        match self.model.correlation() {
            Correlation::Partial { amplitude } => v["amplitude"] = json!(amplitude),
            Correlation::Mixed { theta } => v["theta"] = json!(theta),
            _ => {}
        }
        v
    }

    fn scenario(&self, t: f64) -> Scenario {
        Scenario {
            model: self.model,
            probe: self.probe,
            t,
            total_time: self.total_time,
            phi: self.phi,
            ansatz: self.ansatz,
        }
    }
}

fn resolve_scenario(ctx: &Context, s: ScenarioArgs) -> CliResult<ResolvedScenario> {
    let c = &ctx.config;
    let correlation = ctx.pick_enum(s.correlation, "correlation", CorrelationArg::Uncorrelated)?;
    let probe = ctx.pick_enum(s.probe, "probe", ProbeArg::Ghz)?;
    let ansatz = ctx.pick_enum(s.ansatz, "ansatz", AnsatzArg::Auto)?;
    let n = c.pick(s.n, "n", 2usize)?;
    let gamma = c.pick(s.gamma, "gamma", 0.25)?;
    let nu = c.pick(s.nu, "nu", 1.0)?;
    let phi = c.pick(s.phi, "phi", 0.0)?;
    let total_time = c.pick(s.total_time, "total-time", 1.0)?;
    let correlation = match correlation {
        CorrelationArg::Uncorrelated => Correlation::Uncorrelated,
        CorrelationArg::MaxCorrelated => Correlation::MaxCorrelated,
        CorrelationArg::Partial => Correlation::Partial {
            amplitude: c
                .pick_opt(s.amplitude, "amplitude")?
                .ok_or_else(|| CliError::Constraint("partial correlation needs --amplitude".into()))?,
        },
        CorrelationArg::Mixed => Correlation::Mixed {
            theta: c.pick(s.theta, "theta", FRAC_PI_4)?,
        },
    };
    if !(total_time.is_finite() && total_time > 0.0) {
        return Err(CliError::Constraint(format!("total-time must be positive, got {total_time}")));
    }
    Ok(ResolvedScenario {
        model: DephasingModel::new(gamma, nu, n, correlation)?,
        probe: match probe {
            ProbeArg::Product => ProbeKind::ProductPlus,
            ProbeArg::Ghz => ProbeKind::Ghz,
        },
        phi,
        total_time,
        ansatz: match ansatz {
            AnsatzArg::Auto => AnsatzChoice::Auto,
            AnsatzArg::Collective => AnsatzChoice::Collective,
            AnsatzArg::TwoQubit => AnsatzChoice::TwoQubit,
            AnsatzArg::Complete => AnsatzChoice::Complete,
            AnsatzArg::None => AnsatzChoice::None,
        },
    })
}

fn qfi(ctx: &Context, a: QfiArgs) -> CliResult<()> {
    let sc = resolve_scenario(ctx, a.scenario)?;
    let t = ctx.config.pick(a.t, "t", 1.0)?;
    let out = ctx.config.pick_opt(a.out, "out")?;
    let report = sc.scenario(t).evaluate()?;
    emit(out.as_deref(), &to_json(&report))?;
    let mut params = sc.record();
    params["command"] = json!("qfi");
    params["t"] = json!(t);
    let checks = vec![CheckLine {
        name: "ansatz >= exact optimum = oracle".into(),
        passed: report.ordering_holds(),
    }];
    ctx.manifest(params, checks).emit(out.as_deref())
}

/// The scenario's closed-form resolution at interrogation time `t`.
fn closed_resolution(sc: &ResolvedScenario, probe: &ProbeState, t: f64) -> dephase_core::Result<f64> {
    match sc.model.correlation() {
        Correlation::Uncorrelated => {
            closed_form_uncorrelated(&ResolutionQuery::for_probe(sc.model, probe, t, sc.total_time))
        }
        Correlation::MaxCorrelated => ramsey_max_correlated(&sc.model, sc.probe, t, sc.total_time),
        Correlation::Partial { amplitude } => {
            Ok(partial_corr_asymptote(amplitude, probe.zz_correlation(0, 1), t)? / sc.total_time.sqrt())
        }
        Correlation::Mixed { .. } => Err(dephase_core::Error::Unsupported(
            "no resolution formula for mixed correlation".into(),
        )),
    }
}

#[derive(Serialize)]
struct Footer {
    t_star_numeric: Option<f64>,
    t_star_closed: Option<f64>,
    delta_w_closed_at_t_star: Option<f64>,
    t_grid_min: Option<f64>,
}

fn resolution(ctx: &Context, a: ResolutionArgs) -> CliResult<()> {
    let sc = resolve_scenario(ctx, a.scenario)?;
    let c = &ctx.config;
    let t_min = c.pick(a.t_min, "t-min", 0.05)?;
    let t_max = c.pick(a.t_max, "t-max", 2.0)?;
    let steps = c.pick(a.steps, "steps", 40usize)?;
    let out = c.pick_opt(a.out, "out")?;
    if !(t_min > 0.0) {
        return Err(CliError::Constraint(format!("t-min must be positive, got {t_min}")));
    }
    if !(t_max > t_min) || steps < 2 {
        return Err(CliError::Constraint("need t-max > t-min and at least 2 steps".into()));
    }
    if let Correlation::Mixed { .. } = sc.model.correlation() {
        return Err(CliError::Constraint(
            "mixed correlation has no purification or resolution formula; use uncorrelated, max-correlated or partial".into(),
        ));
    }
    let probe = ProbeState::of_kind(sc.probe, sc.model.n())?;
    let basis = sc.ansatz.basis(sc.model.correlation(), match sc.model.correlation() {
        Correlation::MaxCorrelated => 1,
        _ => sc.model.n(),
    })?;
    // Surface constraint violations once instead of per row.
    closed_resolution(&sc, &probe, t_min).or_else(|e| match e {
        dephase_core::Error::UndefinedResolution(_) => Ok(f64::NAN),
        other => Err(other),
    })?;

    let ts: Vec<f64> = (0..steps)
        .map(|k| t_min + (t_max - t_min) * k as f64 / (steps - 1) as f64)
        .collect();
    let rows: Vec<Vec<f64>> = ctx.pool()?.install(|| {
        ts.par_iter()
            .map(|&t| {
                let closed = closed_resolution(&sc, &probe, t).unwrap_or(f64::NAN);
                let purified = purify(&probe, &sc.model, t, sc.phi)?;
                let fit = minimize_ansatz(&purified, &basis)?;
                Ok(vec![t, closed, resolution_from_qfi(fit.value, t, sc.total_time)])
            })
            .collect::<dephase_core::Result<_>>()
    })?;
    emit(out.as_deref(), &csv(&["t", "delta_w_closed", "delta_w_qfi"], &rows))?;

    let f = |t: f64| closed_resolution(&sc, &probe, t).unwrap_or(f64::INFINITY);
    let t_star_numeric = optimal_time_numeric(f, (t_min, t_max)).ok();
    let t_star_closed = match sc.model.correlation() {
        Correlation::MaxCorrelated => optimal_time_closed(&sc.model, sc.probe).ok(),
        _ => None,
    };
    let t_grid_min = rows
        .iter()
        .filter(|r| r[1].is_finite())
        .min_by(|x, y| x[1].total_cmp(&y[1]))
        .map(|r| r[0]);
    let footer = Footer {
        t_star_numeric,
        t_star_closed,
        delta_w_closed_at_t_star: t_star_numeric.map(f).filter(|v| v.is_finite()),
        t_grid_min,
    };
    let footer_text = to_json(&footer);
    match out.as_deref() {
        Some(p) => write_file(&sibling(p, "footer.json"), &footer_text)?,
        None => eprint!("{footer_text}"),
    }

    let mut params = sc.record();
    params["command"] = json!("resolution");
    params["t_min"] = json!(t_min);
    params["t_max"] = json!(t_max);
    params["steps"] = json!(steps);
    let checks = vec![CheckLine {
        name: "qfi column finite".into(),
        passed: rows.iter().all(|r| r[2].is_finite()),
    }];
    ctx.manifest(params, checks).emit(out.as_deref())
}

fn verify(ctx: &Context, a: VerifyArgs) -> CliResult<()> {
    let depth = ctx.pick_enum(a.depth, "depth", DepthArg::Quick)?;
    let perturbation = ctx.config.pick(a.perturb, "perturb", 0.0)?;
    let out = ctx.config.pick_opt(a.out, "out")?;
    let depth = match depth {
        DepthArg::Quick => Depth::Quick,
        DepthArg::Full => Depth::Full,
    };
    let report = verify::run(VerifyConfig {
        depth,
        seed: ctx.seed,
        perturbation,
    });
    let width = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut table = String::new();
    for c in &report.checks {
        let status = match (c.mandatory, c.passed) {
            (false, _) => "INFO",
            (true, true) => "PASS",
            (true, false) => "FAIL",
        };
        table.push_str(&format!("{status}  {:width$}  {}\n", c.name, c.detail));
    }
    let failed = report.failures().count();
    table.push_str(&format!(
        "{} mandatory checks, {failed} failed\n",
        report.checks.iter().filter(|c| c.mandatory).count()
    ));
    emit(out.as_deref(), &table)?;
    let params = json!({
        "command": "verify",
        "depth": match depth { Depth::Quick => "quick", Depth::Full => "full" },
        "perturbation": fmt_num(perturbation),
    });
    let checks = report
        .checks
        .iter()
        .filter(|c| c.mandatory)
        .map(|c| CheckLine {
            name: c.name.clone(),
            passed: c.passed,
        })
        .collect();
    ctx.manifest(params, checks).emit(out.as_deref())?;
    if failed > 0 {
        return Err(CliError::Constraint(format!("{failed} mandatory verification checks failed")));
    }
    Ok(())
}
