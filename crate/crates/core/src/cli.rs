//! Batch driver: configuration files, simulation runs with snapshots and
//! logs, the convergence harness and WENO table generation.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::output::{write_csv, write_vtk};
use crate::scenarios::{convergence_orders, Scenario};
use crate::semidiscretization::WbMode;
use crate::timeint::{build_dec_tableau, Solver, StepReport};
use crate::weno_gen::{format_table, generate_table, parse_points};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WbSetting {
    /// The scenario's own choice.
    On,
    Off,
    Forced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Writer {
    Csv,
    Vtk,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cadence {
    /// Initial and final state only.
    Final,
    Steps(usize),
    Time(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: String,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub cfl: Option<f64>,
    pub tf: Option<f64>,
    pub wb: WbSetting,
    /// Start channel flows on their steady state.
    pub steady_init: bool,
    pub dec_m: usize,
    pub dec_p: usize,
    pub out: PathBuf,
    pub writer: Writer,
    pub cadence: Cadence,
    pub log_every: usize,
    pub max_steps: Option<usize>,
}

impl RunConfig {
    pub fn new(scenario: &str) -> Self {
        RunConfig {
            scenario: scenario.to_string(),
            nx: None,
            ny: None,
            cfl: None,
            tf: None,
            wb: WbSetting::On,
            steady_init: false,
            dec_m: 3,
            dec_p: 5,
            out: PathBuf::from("out"),
            writer: Writer::Csv,
            cadence: Cadence::Final,
            log_every: 1,
            max_steps: None,
        }
    }

    /// Resolved scenario with mesh and init overrides applied.
    pub fn scenario(&self) -> Result<Scenario> {
        let mut sc = Scenario::by_name(&self.scenario)?;
        let nx = self.nx.unwrap_or(sc.spec.nx);
        let ny = self.ny.unwrap_or(sc.spec.ny);
        sc = sc.with_mesh(nx, ny);
        if let Some(c) = self.cfl {
            sc.spec.cfl = c;
        }
        if let Some(t) = self.tf {
            sc.spec.t_final = t;
        }
        if self.steady_init {
            sc.start_steady()?;
        }
        Ok(sc)
    }

    pub fn mode(&self, sc: &Scenario) -> WbMode {
        match self.wb {
            WbSetting::On => sc.spec.wb,
            WbSetting::Off => WbMode::Off,
            WbSetting::Forced => WbMode::Forced,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Usage(m));
        if self.nx == Some(0) || self.ny == Some(0) {
            return bad("mesh sizes must be positive".into());
        }
        if let Some(c) = self.cfl {
            if !(c > 0.0 && c.is_finite()) {
                return bad(format!("cfl must be positive, got {c}"));
            }
        }
        if let Some(t) = self.tf {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("tf must be positive, got {t}"));
            }
        }
        match self.cadence {
            Cadence::Steps(0) => return bad("snapshot_every must be positive".into()),
            Cadence::Time(t) if !(t > 0.0 && t.is_finite()) => return bad("snapshot_dt must be positive".into()),
            _ => {}
        }
        if self.log_every == 0 {
            return bad("log_every must be positive".into());
        }
        Ok(())
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str, line: usize) -> Result<T> {
    v.parse().map_err(|_| Error::Usage(format!("line {line}: malformed value `{v}` for `{key}`")))
}

/// Parse `key = value` lines with `#` comments.
pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::new("");
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("line {line}: expected `key = value`")))?;
        let (k, v) = (k.trim(), v.trim());
        match k {
            "scenario" => cfg.scenario = v.to_string(),
            "nx" => cfg.nx = Some(parse_value(k, v, line)?),
            "ny" => cfg.ny = Some(parse_value(k, v, line)?),
            "cfl" => cfg.cfl = Some(parse_value(k, v, line)?),
            "tf" => cfg.tf = Some(parse_value(k, v, line)?),
            "wb" => cfg.wb = parse_wb(v).map_err(|e| Error::Usage(format!("line {line}: {e}")))?,
            "init" => {
                cfg.steady_init = match v {
                    "default" => false,
                    "steady" => true,
                    _ => return Err(Error::Usage(format!("line {line}: init must be default or steady"))),
                }
            }
            "dec_m" => cfg.dec_m = parse_value(k, v, line)?,
            "dec_p" => cfg.dec_p = parse_value(k, v, line)?,
            "out" => cfg.out = PathBuf::from(v),
            "writer" => cfg.writer = parse_writer(v).map_err(|e| Error::Usage(format!("line {line}: {e}")))?,
            "snapshot_every" => cfg.cadence = Cadence::Steps(parse_value(k, v, line)?),
            "snapshot_dt" => cfg.cadence = Cadence::Time(parse_value(k, v, line)?),
            "log_every" => cfg.log_every = parse_value(k, v, line)?,
            "max_steps" => cfg.max_steps = Some(parse_value(k, v, line)?),
            _ => return Err(Error::Usage(format!("line {line}: unknown key `{k}`"))),
        }
    }
    if cfg.scenario.is_empty() {
        return Err(Error::Usage("scenario required".into()));
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
    parse_config_str(&text)
}

pub fn parse_wb(v: &str) -> std::result::Result<WbSetting, String> {
    match v {
        "on" => Ok(WbSetting::On),
        "off" => Ok(WbSetting::Off),
        "forced" => Ok(WbSetting::Forced),
        _ => Err(format!("wb must be on, off or forced, got `{v}`")),
    }
}

pub fn parse_writer(v: &str) -> std::result::Result<Writer, String> {
    match v {
        "csv" => Ok(Writer::Csv),
        "vtk" => Ok(Writer::Vtk),
        "both" => Ok(Writer::Both),
        _ => Err(format!("writer must be csv, vtk or both, got `{v}`")),
    }
}

/// What a finished run reports.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub final_time: f64,
    pub steps: usize,
    pub min_h: f64,
    pub mass_initial: f64,
    pub mass_final: f64,
    pub boundary_budget: f64,
    /// Largest pointwise change of any conserved variable from the start.
    pub max_change: f64,
    pub errors: Option<Vec<(&'static str, f64)>>,
    pub wall_time: f64,
}

impl RunSummary {
    pub fn mass_drift(&self) -> f64 {
        (self.mass_final - self.mass_initial) / self.mass_initial.abs().max(f64::MIN_POSITIVE)
    }

    /// Mass change not explained by boundary exchange, relative.
    pub fn budget_mismatch(&self) -> f64 {
        (self.mass_final - self.mass_initial - self.boundary_budget) / self.mass_initial.abs().max(f64::MIN_POSITIVE)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "final_time = {:.16e}", self.final_time);
        let _ = writeln!(s, "steps = {}", self.steps);
        let _ = writeln!(s, "min_h = {:.16e}", self.min_h);
        let _ = writeln!(s, "mass_initial = {:.16e}", self.mass_initial);
        let _ = writeln!(s, "mass_final = {:.16e}", self.mass_final);
        let _ = writeln!(s, "mass_drift = {:.6e}", self.mass_drift());
        let _ = writeln!(s, "boundary_budget = {:.16e}", self.boundary_budget);
        let _ = writeln!(s, "budget_mismatch = {:.6e}", self.budget_mismatch());
        let _ = writeln!(s, "max_change = {:.6e}", self.max_change);
        if let Some(errs) = &self.errors {
            for (k, v) in errs {
                let _ = writeln!(s, "error_{k} = {v:.6e}");
            }
        }
        let _ = writeln!(s, "wall_time = {:.3}", self.wall_time);
        s
    }
}

fn snapshot(cfg: &RunConfig, solver: &Solver, bathy: &crate::mesh::BathymetryData, k: usize) -> Result<()> {
    if matches!(cfg.writer, Writer::Csv | Writer::Both) {
        write_csv(&cfg.out.join(format!("snapshot_{k:05}.csv")), &solver.state, bathy)?;
    }
    if matches!(cfg.writer, Writer::Vtk | Writer::Both) {
        write_vtk(&cfg.out.join(format!("snapshot_{k:05}.vtk")), &solver.state, bathy, solver.t)?;
    }
    Ok(())
}

fn log_line(r: &StepReport, step: usize) -> String {
    format!(
        "{step} {:.16e} {:.6e} {:.6e} {:.16e} {:.6e} {}",
        r.t, r.dt, r.min_h, r.mass, r.max_theta, r.jacobi_sweeps
    )
}

/// Run a configured simulation, writing snapshots, `run.log` and
/// `summary.txt` into the output directory.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let sc = cfg.scenario()?;
    let tableau = build_dec_tableau(cfg.dec_m, cfg.dec_p)?;
    let (mut solver, setup) = sc.solver(cfg.mode(&sc), tableau)?;
    fs::create_dir_all(&cfg.out)?;
    let mut log = std::io::BufWriter::new(fs::File::create(cfg.out.join("run.log"))?);
    writeln!(log, "# step t dt min_h mass max_theta jacobi_sweeps")?;

    let clock = Instant::now();
    let tf = sc.spec.t_final;
    let mass_initial = solver.state.mass();
    let mut min_h = solver.state.min_h();
    let mut budget = 0.0;
    let mut shots = 0;
    snapshot(cfg, &solver, &setup.bathy, shots)?;
    let mut next_shot = match cfg.cadence {
        Cadence::Time(tau) => tau,
        _ => f64::INFINITY,
    };
    let result: Result<()> = (|| {
        while solver.t < tf && cfg.max_steps.map_or(true, |m| solver.steps < m) {
            let mut dt = solver.stable_dt(sc.spec.cfl, tf);
            if let Cadence::Time(_) = cfg.cadence {
                // land on snapshot times
                if solver.t + dt > next_shot && next_shot < tf {
                    dt = next_shot - solver.t;
                }
            }
            let r = solver.advance(dt)?;
            budget += r.boundary_inflow;
            min_h = min_h.min(r.min_h);
            if solver.steps % cfg.log_every == 0 {
                writeln!(log, "{}", log_line(&r, solver.steps))?;
            }
            let due = match cfg.cadence {
                Cadence::Steps(k) => solver.steps % k == 0,
                Cadence::Time(tau) => {
                    let hit = solver.t >= next_shot * (1.0 - 1e-14);
                    if hit {
                        next_shot += tau;
                    }
                    hit
                }
                Cadence::Final => false,
            };
            if due && solver.t < tf {
                shots += 1;
                snapshot(cfg, &solver, &setup.bathy, shots)?;
            }
        }
        Ok(())
    })();
    log.flush()?;
    if let Err(e) = result {
        writeln!(log, "# failed at t = {:.16e}: {e}", solver.t)?;
        log.flush()?;
        return Err(e);
    }
    shots += 1;
    snapshot(cfg, &solver, &setup.bathy, shots)?;

    let mut max_change: f64 = 0.0;
    for ((_, _, a), (_, _, b)) in solver.state.interior().zip(setup.initial.interior()) {
        for k in 0..3 {
            max_change = max_change.max((a[k] - b[k]).abs());
        }
    }
    let summary = RunSummary {
        final_time: solver.t,
        steps: solver.steps,
        min_h,
        mass_initial,
        mass_final: solver.state.mass(),
        boundary_budget: budget,
        max_change,
        errors: sc.errors(&solver.state, &setup, solver.t),
        wall_time: clock.elapsed().as_secs_f64(),
    };
    fs::write(cfg.out.join("summary.txt"), summary.render())?;
    Ok(summary)
}

#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub meshes: Vec<usize>,
    pub names: Vec<&'static str>,
    pub errors: Vec<Vec<f64>>,
    pub orders: Vec<Vec<f64>>,
}

impl ConvergenceTable {
    pub fn render(&self) -> String {
        let mut s = format!("{:>6}", "N");
        for n in &self.names {
            let _ = write!(s, " {:>14} {:>6}", format!("err_{n}"), "order");
        }
        s.push('\n');
        for (k, n) in self.meshes.iter().enumerate() {
            let _ = write!(s, "{n:>6}");
            for v in 0..self.names.len() {
                let o = if k == 0 { "---".to_string() } else { format!("{:.2}", self.orders[k - 1][v]) };
                let _ = write!(s, " {:>14.6e} {o:>6}", self.errors[k][v]);
            }
            s.push('\n');
        }
        s
    }
}

/// Mesh for refinement level `n`: channels stay one-dimensional, other
/// cases keep their aspect ratio.
pub fn mesh_for(sc: &Scenario, n: usize) -> (usize, usize) {
    if sc.spec.name.starts_with("channel") {
        (n, sc.spec.ny)
    } else {
        let ny = (n as f64 * sc.spec.ny as f64 / sc.spec.nx as f64).round() as usize;
        (n, ny.max(1))
    }
}

/// Run the configured scenario on every mesh and tabulate errors and orders.
pub fn convergence(cfg: &RunConfig, meshes: &[usize]) -> Result<ConvergenceTable> {
    cfg.validate()?;
    if meshes.len() < 2 || meshes.contains(&0) {
        return Err(Error::Usage("need at least two positive mesh sizes".into()));
    }
    let base = cfg.scenario()?;
    if base.errors(&base.setup()?.initial, &base.setup()?, 0.0).is_none() {
        return Err(Error::Usage(format!("scenario `{}` has no reference solution", cfg.scenario)));
    }
    let tableau = build_dec_tableau(cfg.dec_m, cfg.dec_p)?;
    let mut names = Vec::new();
    let mut errors = Vec::new();
    for &n in meshes {
        let (nx, ny) = mesh_for(&base, n);
        let sc = base.clone().with_mesh(nx, ny);
        let (mut solver, setup) = sc.solver(cfg.mode(&sc), tableau.clone())?;
        let tf = sc.spec.t_final;
        while solver.t < tf {
            let dt = solver.stable_dt(sc.spec.cfl, tf);
            solver.advance(dt)?;
        }
        let e = sc.errors(&solver.state, &setup, solver.t).expect("reference checked above");
        names = e.iter().map(|v| v.0).collect();
        errors.push(e.iter().map(|v| v.1).collect());
    }
    let orders = convergence_orders(&errors, meshes);
    Ok(ConvergenceTable { meshes: meshes.to_vec(), names, errors, orders })
}

pub fn parse_meshes(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Usage(format!("bad mesh size `{t}`"))))
        .collect()
}

/// Plain-text reconstruction table for `gen-weno`.
pub fn gen_weno(r: usize, points: &str) -> Result<String> {
    let pts = parse_points(points)?;
    Ok(format_table(&generate_table(r, &pts)?))
}
