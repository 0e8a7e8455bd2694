//! Run configuration and the end-to-end drivers: single runs, convergence
//! studies and the with/without-correction comparison.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{l1_distance, l1_error, remap_conservative, ConvergenceTable, ContactMetrics, ContactWindow, ErrorRow};
use crate::error::{Error, Result};
use crate::io;
use crate::ldcu1d::Field1d;
use crate::ldcu2d::{Field2d, Scheme};
use crate::mhd::Primitive;
use crate::problems::{Problem, ProblemSpec};
use crate::reconstruct::Limiter;
use crate::timestepper::{run_to_time, DiagRecord, Evolution, Fully1d, Semi1d, Semi2d, SimState};

pub const DEFAULT_THETA: f64 = 1.3;
pub const DEFAULT_REFERENCE_CELLS: usize = 6000;

/// Environment variable overriding the reference-solution cache directory.
pub const CACHE_ENV: &str = "LDCU_MHD_CACHE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimiterChoice {
    Minmod,
    Mc,
    None,
}

impl LimiterChoice {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "minmod" => Ok(Self::Minmod),
            "mc" => Ok(Self::Mc),
            "none" => Ok(Self::None),
            _ => Err(Error::Config(format!("unknown limiter '{s}' (expected minmod, mc or none)"))),
        }
    }

    pub fn build(self, theta: f64) -> Result<Limiter> {
        match self {
            Self::Minmod => Ok(Limiter::Minmod),
            Self::Mc => Limiter::mc(theta),
            Self::None => Ok(Limiter::None),
        }
    }

    fn of(lim: Limiter) -> Self {
        match lim {
            Limiter::Minmod => Self::Minmod,
            Limiter::McTheta(_) => Self::Mc,
            Limiter::None => Self::None,
        }
    }
}

/// What a single invocation does.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Run,
    Convergence(Vec<usize>),
    CompareCorrection,
}

/// Settings as given by a config file or the command line; unset fields fall
/// back to problem defaults in [`PartialConfig::resolve`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PartialConfig {
    pub problem: Option<String>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub cfl: Option<f64>,
    pub limiter: Option<LimiterChoice>,
    pub theta: Option<f64>,
    pub use_correction: Option<bool>,
    pub t_final: Option<f64>,
    pub out: Option<PathBuf>,
    pub dump_every: Option<usize>,
    pub semi_discrete: Option<bool>,
    pub reference_cells: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub convergence: Option<Vec<usize>>,
    pub compare_correction: Option<bool>,
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse()
        .map_err(|e| Error::Config(format!("invalid value '{v}' for '{key}': {e}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!("invalid boolean '{v}' for '{key}'"))),
    }
}

pub fn parse_grid_list(v: &str) -> Result<Vec<usize>> {
    let grids = v
        .split(',')
        .map(|s| parse_value::<usize>("convergence", s.trim()))
        .collect::<Result<Vec<_>>>()?;
    if grids.is_empty() {
        return Err(Error::Config("empty grid list".into()));
    }
    Ok(grids)
}

impl PartialConfig {
    /// Parses `key = value` lines; `#` starts a comment. Keys mirror the
    /// command-line flags without the leading dashes.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", k + 1)))?;
            let key = key.trim().replace('_', "-");
            let v = v.trim();
            match key.as_str() {
                "problem" => c.problem = Some(v.to_string()),
                "nx" => c.nx = Some(parse_value(&key, v)?),
                "ny" => c.ny = Some(parse_value(&key, v)?),
                "cfl" => c.cfl = Some(parse_value(&key, v)?),
                "limiter" => c.limiter = Some(LimiterChoice::parse(v)?),
                "theta" => c.theta = Some(parse_value(&key, v)?),
                "correction" => c.use_correction = Some(parse_bool(&key, v)?),
                "no-correction" => c.use_correction = Some(!parse_bool(&key, v)?),
                "t-final" => c.t_final = Some(parse_value(&key, v)?),
                "out" => c.out = Some(PathBuf::from(v)),
                "dump-every" => c.dump_every = Some(parse_value(&key, v)?),
                "semi-discrete" => c.semi_discrete = Some(parse_bool(&key, v)?),
                "reference-cells" => c.reference_cells = Some(parse_value(&key, v)?),
                "cache-dir" => c.cache_dir = Some(PathBuf::from(v)),
                "convergence" => c.convergence = Some(parse_grid_list(v)?),
                "compare-correction" => c.compare_correction = Some(parse_bool(&key, v)?),
                _ => return Err(Error::Config(format!("line {}: unknown key '{key}'", k + 1))),
            }
        }
        Ok(c)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Fields set in `over` replace those of `self`.
    pub fn overridden_by(self, over: PartialConfig) -> Self {
        Self {
            problem: over.problem.or(self.problem),
            nx: over.nx.or(self.nx),
            ny: over.ny.or(self.ny),
            cfl: over.cfl.or(self.cfl),
            limiter: over.limiter.or(self.limiter),
            theta: over.theta.or(self.theta),
            use_correction: over.use_correction.or(self.use_correction),
            t_final: over.t_final.or(self.t_final),
            out: over.out.or(self.out),
            dump_every: over.dump_every.or(self.dump_every),
            semi_discrete: over.semi_discrete.or(self.semi_discrete),
            reference_cells: over.reference_cells.or(self.reference_cells),
            cache_dir: over.cache_dir.or(self.cache_dir),
            convergence: over.convergence.or(self.convergence),
            compare_correction: over.compare_correction.or(self.compare_correction),
        }
    }

    pub fn resolve(self) -> Result<(RunConfig, Mode)> {
        let name = self
            .problem
            .ok_or_else(|| Error::Config("no problem given (use --problem)".into()))?;
        let problem = Problem::from_name(&name)?;
        let spec = problem.spec();
        let (dnx, dny) = spec.default_cells;
        let nx = self.nx.unwrap_or(dnx);
        let ny = if spec.dim == 1 { 1 } else { self.ny.unwrap_or(if self.nx.is_some() { nx } else { dny }) };
        let theta = self.theta.unwrap_or(DEFAULT_THETA);
        let limiter = match self.limiter {
            Some(choice) => choice.build(theta)?,
            None => match spec.default_limiter {
                Limiter::McTheta(_) => Limiter::mc(theta)?,
                other => other,
            },
        };
        let cfg = RunConfig {
            problem,
            nx,
            ny,
            cfl: self.cfl.unwrap_or(if spec.dim == 1 { 0.4 } else { 0.45 }),
            limiter: LimiterChoice::of(limiter),
            theta,
            use_correction: self.use_correction.unwrap_or(true),
            t_final: self.t_final.unwrap_or(spec.t_final),
            out: self.out.unwrap_or_else(|| PathBuf::from("out")),
            dump_every: self.dump_every.unwrap_or(0),
            semi_discrete: self.semi_discrete.unwrap_or(false),
            reference_cells: self.reference_cells.unwrap_or(DEFAULT_REFERENCE_CELLS),
            cache_dir: self.cache_dir,
        };
        cfg.validate()?;
        let mode = match (self.convergence, self.compare_correction.unwrap_or(false)) {
            (Some(_), true) => {
                return Err(Error::Config("--convergence and --compare-correction are exclusive".into()))
            }
            (Some(grids), false) => Mode::Convergence(grids),
            (None, true) => Mode::CompareCorrection,
            (None, false) => Mode::Run,
        };
        Ok((cfg, mode))
    }
}

/// Fully resolved settings of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub problem: Problem,
    pub nx: usize,
    /// 1 for 1-D problems.
    pub ny: usize,
    pub cfl: f64,
    pub limiter: LimiterChoice,
    /// MC parameter; also used by the corner reconstruction.
    pub theta: f64,
    pub use_correction: bool,
    pub t_final: f64,
    pub out: PathBuf,
    /// Intermediate dump stride in steps; 0 writes the final state only.
    pub dump_every: usize,
    /// 1-D only: RK3 on the semi-discrete form instead of the fully-discrete update.
    pub semi_discrete: bool,
    pub reference_cells: usize,
    pub cache_dir: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults of `problem`.
    pub fn new(problem: Problem) -> Self {
        PartialConfig {
            problem: Some(problem.name().to_string()),
            ..Default::default()
        }
        .resolve()
        .expect("problem defaults are valid")
        .0
    }

    pub fn spec(&self) -> ProblemSpec {
        self.problem.spec()
    }

    pub fn limiter(&self) -> Limiter {
        self.limiter.build(self.theta).expect("validated")
    }

    pub fn validate(&self) -> Result<()> {
        let spec = self.spec();
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::Config(format!("CFL number must lie in (0, 1), got {}", self.cfl)));
        }
        if !(1.0..=2.0).contains(&self.theta) {
            return Err(Error::Config(format!("theta must lie in [1, 2], got {}", self.theta)));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::Config(format!("final time must be positive, got {}", self.t_final)));
        }
        if spec.dim == 2 && (self.nx < 8 || self.ny < 8) {
            return Err(Error::Config(format!("2-D grids need at least 8x8 cells, got {}x{}", self.nx, self.ny)));
        }
        if spec.dim == 1 && self.nx < 4 {
            return Err(Error::Config(format!("1-D grids need at least 4 cells, got {}", self.nx)));
        }
        if self.reference_cells < self.nx {
            return Err(Error::Config("reference grid must not be coarser than the run grid".into()));
        }
        if self.semi_discrete && spec.dim == 2 {
            return Err(Error::Config("--semi-discrete applies to 1-D problems only".into()));
        }
        Ok(())
    }

    /// `key = value` text that [`PartialConfig::parse`] maps back to `self`.
    pub fn to_config_text(&self) -> String {
        let mut s = format!(
            "problem = {}\nnx = {}\nny = {}\ncfl = {:?}\nlimiter = {}\ntheta = {:?}\ncorrection = {}\nt-final = {:?}\nout = {}\ndump-every = {}\nsemi-discrete = {}\nreference-cells = {}\n",
            self.problem.name(),
            self.nx,
            self.ny,
            self.cfl,
            self.limiter.build(self.theta).map(|l| l.name()).unwrap_or("mc"),
            self.theta,
            self.use_correction,
            self.t_final,
            self.out.display(),
            self.dump_every,
            self.semi_discrete,
            self.reference_cells,
        );
        if let Some(dir) = &self.cache_dir {
            s += &format!("cache-dir = {}\n", dir.display());
        }
        s
    }

    fn scheme(&self) -> Scheme {
        Scheme::new(self.spec().gas(), self.limiter(), self.theta, self.use_correction)
    }
}

/// Record of a finished run, written as `manifest.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: RunConfig,
    pub mode: Mode,
    pub gamma: f64,
    pub version: String,
    pub steps: usize,
    pub t_reached: f64,
    pub wall_time_s: f64,
    pub outputs: Vec<String>,
}

/// Final 1-D state and its diagnostics.
#[derive(Clone, Debug)]
pub struct Outcome1d {
    pub field: Field1d,
    pub log: Vec<DiagRecord>,
    pub t: f64,
}

#[derive(Clone, Debug)]
pub struct Outcome2d {
    pub field: Field2d,
    pub log: Vec<DiagRecord>,
    pub t: f64,
}

fn evolve<E: Evolution>(
    model: &E,
    field: E::Field,
    cfg: &RunConfig,
    observer: impl FnMut(&SimState<E::Field>) -> Result<()>,
) -> Result<(E::Field, Vec<DiagRecord>, f64)> {
    let mut state = SimState::new(field);
    let log = run_to_time(model, &mut state, cfg.t_final, cfg.cfl, observer)?;
    Ok((state.field, log, state.t))
}

/// Runs a 1-D problem to `cfg.t_final`; `observer` sees every accepted step.
pub fn simulate_1d(cfg: &RunConfig, observer: impl FnMut(&SimState<Field1d>) -> Result<()>) -> Result<Outcome1d> {
    let spec = cfg.spec();
    let field = spec.setup_1d(cfg.nx)?;
    let (gas, limiter, use_correction) = (spec.gas(), cfg.limiter(), cfg.use_correction);
    let (field, log, t) = if cfg.semi_discrete {
        evolve(&Semi1d { gas, limiter, use_correction }, field, cfg, observer)?
    } else {
        evolve(&Fully1d { gas, limiter, use_correction }, field, cfg, observer)?
    };
    Ok(Outcome1d { field, log, t })
}

pub fn simulate_2d(cfg: &RunConfig, observer: impl FnMut(&SimState<Field2d>) -> Result<()>) -> Result<Outcome2d> {
    let field = cfg.spec().setup_2d(cfg.nx, cfg.ny)?;
    let (field, log, t) = evolve(&Semi2d { scheme: cfg.scheme() }, field, cfg, observer)?;
    Ok(Outcome2d { field, log, t })
}

/// Summary returned by every driver entry point.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub manifest: RunManifest,
    pub manifest_path: PathBuf,
}

fn rel(out: &Path, p: &Path) -> String {
    p.strip_prefix(out).unwrap_or(p).display().to_string()
}

fn finish_manifest(cfg: &RunConfig, mode: Mode, steps: usize, t: f64, start: Instant, mut outputs: Vec<PathBuf>) -> Result<RunSummary> {
    let cfg_path = cfg.out.join("run.cfg");
    io::write_text(&cfg_path, &cfg.to_config_text())?;
    outputs.push(cfg_path);
    let manifest = RunManifest {
        config: cfg.clone(),
        mode,
        gamma: cfg.spec().gamma,
        version: env!("CARGO_PKG_VERSION").to_string(),
        steps,
        t_reached: t,
        wall_time_s: start.elapsed().as_secs_f64(),
        outputs: outputs.iter().map(|p| rel(&cfg.out, p)).collect(),
    };
    let manifest_path = cfg.out.join("manifest.json");
    io::write_json(&manifest_path, &manifest)?;
    Ok(RunSummary { manifest, manifest_path })
}

/// Single run: final fields, diagnostics series, `run.cfg` and `manifest.json` in `cfg.out`.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let start = Instant::now();
    let spec = cfg.spec();
    let gas = spec.gas();
    let name = spec.name();
    let out = &cfg.out;
    let mut outputs = Vec::new();
    let every = cfg.dump_every;
    let (steps, t, log) = if spec.dim == 1 {
        let mut dumps = Vec::new();
        let res = simulate_1d(cfg, |s| {
            if every > 0 && s.step % every == 0 {
                let p = out.join(format!("{name}_{:06}.csv", s.step));
                io::write_csv_1d(&p, &s.field, gas)?;
                dumps.push(p);
            }
            Ok(())
        })?;
        outputs.extend(dumps);
        let p = out.join(format!("{name}.csv"));
        io::write_csv_1d(&p, &res.field, gas)?;
        outputs.push(p);
        (res.log.last().map_or(0, |r| r.step), res.t, res.log)
    } else {
        let mut dumps = Vec::new();
        let res = simulate_2d(cfg, |s| {
            if every > 0 && s.step % every == 0 {
                let d = io::dump_from_field(&s.field, gas, name, s.t, s.step)?;
                dumps.push(io::write_grid_dump(out, &format!("dump_{:06}", s.step), &d)?);
            }
            Ok(())
        })?;
        outputs.extend(dumps);
        let steps = res.log.last().map_or(0, |r| r.step);
        let d = io::dump_from_field(&res.field, gas, name, res.t, steps)?;
        outputs.push(io::write_grid_dump(out, "final", &d)?);
        let vtk = out.join(format!("{name}.vtk"));
        io::write_vtk(&vtk, &res.field, gas, &format!("{name} t={}", res.t))?;
        outputs.push(vtk);
        (steps, res.t, res.log)
    };
    let diag = out.join("diagnostics.csv");
    io::write_diagnostics(&diag, &log)?;
    outputs.push(diag);
    finish_manifest(cfg, Mode::Run, steps, t, start, outputs)
}

/// Cell-centre l1 errors of a 2-D state against the exact solution at `t`.
pub fn errors_against_exact(field: &Field2d, spec: &ProblemSpec, t: f64) -> Result<[f64; 8]> {
    let (nx, ny) = (field.nx(), field.ny());
    let g = &field.grid;
    let gas = spec.gas();
    let mut num = Vec::with_capacity(nx * ny);
    let mut exact = Vec::with_capacity(nx * ny);
    for j in 0..ny as isize {
        for i in 0..nx as isize {
            num.push(field.primitive(i, j, gas)?);
            exact.push(
                spec.exact(g.xc(i), g.yc(j), t)
                    .ok_or_else(|| Error::Config(format!("problem '{}' has no exact solution", spec.name())))?,
            );
        }
    }
    l1_error(&num, &exact, g.cell_area())
}

/// Runs `cfg` on each `n x n` grid and tabulates errors; writes
/// `convergence.txt` and `convergence.json` into `cfg.out`.
pub fn convergence_study(cfg: &RunConfig, grids: &[usize]) -> Result<(ConvergenceTable, RunSummary)> {
    let spec = cfg.spec();
    if !spec.has_exact() || spec.dim != 2 {
        return Err(Error::Config(format!("problem '{}' has no exact solution", spec.name())));
    }
    if grids.is_empty() {
        return Err(Error::Config("empty grid list".into()));
    }
    let start = Instant::now();
    let mut table = ConvergenceTable::default();
    let mut steps = 0;
    let mut t = 0.0;
    for &n in grids {
        let c = RunConfig { nx: n, ny: n, ..cfg.clone() };
        c.validate()?;
        let res = simulate_2d(&c, |_| Ok(()))?;
        steps += res.log.last().map_or(0, |r| r.step);
        t = res.t;
        table.push(ErrorRow {
            nx: n,
            ny: n,
            errors: errors_against_exact(&res.field, &spec, res.t)?,
        });
    }
    let text_path = cfg.out.join("convergence.txt");
    io::write_text(&text_path, &table.to_text(&[0, 7]))?;
    let json_path = cfg.out.join("convergence.json");
    io::write_json(&json_path, &table)?;
    let summary = finish_manifest(cfg, Mode::Convergence(grids.to_vec()), steps, t, start, vec![text_path, json_path])?;
    Ok((table, summary))
}

/// Density and pressure of a 1-D reference run, on its own grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Reference1d {
    pub n: usize,
    pub dx: f64,
    pub rho: Vec<f64>,
    pub p: Vec<f64>,
    /// Cache file the profile was read from or written to.
    pub path: PathBuf,
}

fn default_cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("ldcu-mhd-cache"))
}

/// The uncorrected fully-discrete run on the reference grid that `cfg` compares against.
pub fn reference_config(cfg: &RunConfig) -> RunConfig {
    RunConfig {
        nx: cfg.reference_cells,
        use_correction: false,
        semi_discrete: false,
        dump_every: 0,
        ..cfg.clone()
    }
}

/// Content hash identifying a reference run.
pub fn reference_key(reference: &RunConfig) -> String {
    let ident = serde_json::json!({
        "problem": reference.problem.name(),
        "cells": reference.nx,
        "cfl": reference.cfl,
        "limiter": reference.limiter,
        "theta": reference.theta,
        "t_final": reference.t_final,
        "correction": reference.use_correction,
        "semi_discrete": reference.semi_discrete,
        "version": env!("CARGO_PKG_VERSION"),
    });
    let digest = Sha256::digest(ident.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn profile_columns(field: &Field1d, spec: &ProblemSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    let prims: Vec<Primitive> = field.primitives(spec.gas())?;
    Ok((prims.iter().map(|w| w.rho).collect(), prims.iter().map(|w| w.p).collect()))
}

/// Loads the reference for `cfg` from the cache or computes and stores it.
pub fn reference_1d(cfg: &RunConfig) -> Result<Reference1d> {
    let spec = cfg.spec();
    if spec.dim != 1 {
        return Err(Error::Config("reference profiles exist for 1-D problems only".into()));
    }
    let rc = reference_config(cfg);
    let dir = cfg.cache_dir.clone().unwrap_or_else(default_cache_dir);
    let path = dir.join(format!("{}-{}.csv", spec.name(), reference_key(&rc)));
    let grid = spec.grid_1d(rc.nx)?;
    if path.exists() {
        let (_, rows) = io::read_csv(&path)?;
        if rows.len() == rc.nx {
            return Ok(Reference1d {
                n: rc.nx,
                dx: grid.dx,
                rho: rows.iter().map(|r| r[1]).collect(),
                p: rows.iter().map(|r| r[7]).collect(),
                path,
            });
        }
    }
    let res = simulate_1d(&rc, |_| Ok(()))?;
    io::write_csv_1d(&path, &res.field, spec.gas())?;
    let (rho, p) = profile_columns(&res.field, &spec)?;
    Ok(Reference1d {
        n: rc.nx,
        dx: grid.dx,
        rho,
        p,
        path,
    })
}

/// Half-width (cells) of the window in which transition cells are counted.
pub const COUNT_HALF_WIDTH: usize = 20;
/// Distance (cells) from the contact at which the reference plateau levels are read.
pub const PLATEAU_OFFSET: usize = 20;
/// Half-width (cells) of the l1 comparison window.
pub const L1_HALF_WIDTH: usize = 20;

/// Contact metrics of the corrected and uncorrected runs of a 1-D problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactComparison {
    pub problem: String,
    pub cells: usize,
    pub window: ContactWindow,
    pub contact_x: f64,
    pub corrected: ContactMetrics,
    pub uncorrected: ContactMetrics,
    pub reference_cells: usize,
}

/// Density-field differences of the corrected and uncorrected runs of a 2-D problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldComparison {
    pub problem: String,
    pub nx: usize,
    pub ny: usize,
    /// l1 distance between the two density fields.
    pub density_l1_difference: f64,
    pub corrected_min: (f64, f64),
    pub uncorrected_min: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    Contact(ContactComparison),
    Field(FieldComparison),
}

/// 1-D: runs both variants, locates the contact on the remapped reference and
/// measures sharpness and windowed l1 distance. 2-D: runs both variants and
/// writes their final states. Results go to `comparison.json` in `cfg.out`.
pub fn compare_correction(cfg: &RunConfig) -> Result<(Comparison, RunSummary)> {
    cfg.validate()?;
    let start = Instant::now();
    let spec = cfg.spec();
    let gas = spec.gas();
    let out = &cfg.out;
    let mut outputs = Vec::new();
    let mut steps = 0;
    let with = RunConfig { use_correction: true, ..cfg.clone() };
    let without = RunConfig { use_correction: false, ..cfg.clone() };
    let (cmp, t) = if spec.dim == 1 {
        let a = simulate_1d(&with, |_| Ok(()))?;
        let b = simulate_1d(&without, |_| Ok(()))?;
        steps += a.log.len() + b.log.len() - 2;
        for (tag, res) in [("corrected", &a), ("uncorrected", &b)] {
            let p = out.join(format!("{tag}.csv"));
            io::write_csv_1d(&p, &res.field, gas)?;
            outputs.push(p);
        }
        let (cmp, ref_text) = contact_comparison(cfg, &a.field, &b.field)?;
        let p = out.join("reference.csv");
        io::write_text(&p, &ref_text)?;
        outputs.push(p);
        (Comparison::Contact(cmp), a.t)
    } else {
        let a = simulate_2d(&with, |_| Ok(()))?;
        let b = simulate_2d(&without, |_| Ok(()))?;
        steps += a.log.len() + b.log.len() - 2;
        let mut rho = [Vec::new(), Vec::new()];
        let mut mins = [(0.0, 0.0); 2];
        for (k, (tag, res)) in [("corrected", &a), ("uncorrected", &b)].into_iter().enumerate() {
            let d = io::dump_from_field(&res.field, gas, spec.name(), res.t, res.log.len() - 1)?;
            rho[k] = d.data[0].as_slice().to_vec();
            let (r, p) = (&d.data[0], &d.data[7]);
            mins[k] = (
                r.as_slice().iter().cloned().fold(f64::INFINITY, f64::min),
                p.as_slice().iter().cloned().fold(f64::INFINITY, f64::min),
            );
            outputs.push(io::write_grid_dump(out, tag, &d)?);
        }
        let cmp = FieldComparison {
            problem: spec.name().to_string(),
            nx: cfg.nx,
            ny: cfg.ny,
            density_l1_difference: l1_distance(&rho[0], &rho[1], a.field.grid.cell_area())?,
            corrected_min: mins[0],
            uncorrected_min: mins[1],
        };
        (Comparison::Field(cmp), a.t)
    };
    let p = out.join("comparison.json");
    io::write_json(&p, &cmp)?;
    outputs.push(p);
    let summary = finish_manifest(cfg, Mode::CompareCorrection, steps, t, start, outputs)?;
    Ok((cmp, summary))
}

/// Contact metrics of two final 1-D fields against the cached reference;
/// also returns the remapped reference as CSV text.
pub fn contact_comparison(cfg: &RunConfig, corrected: &Field1d, uncorrected: &Field1d) -> Result<(ContactComparison, String)> {
    let spec = cfg.spec();
    let reference = reference_1d(cfg)?;
    let grid = corrected.grid;
    let rho_ref = remap_conservative(&reference.rho, reference.dx, grid.n, grid.dx);
    let p_ref = remap_conservative(&reference.p, reference.dx, grid.n, grid.dx);
    let window = ContactWindow::from_reference(&rho_ref, &p_ref, COUNT_HALF_WIDTH, PLATEAU_OFFSET, L1_HALF_WIDTH)
        .ok_or_else(|| Error::Config(format!("no contact found in the {} reference", spec.name())))?;
    let (rho_a, _) = profile_columns(corrected, &spec)?;
    let (rho_b, _) = profile_columns(uncorrected, &spec)?;
    let cmp = ContactComparison {
        problem: spec.name().to_string(),
        cells: grid.n,
        window,
        contact_x: grid.center(window.center as isize),
        corrected: window.measure(&rho_a, &rho_ref, grid.dx)?,
        uncorrected: window.measure(&rho_b, &rho_ref, grid.dx)?,
        reference_cells: reference.n,
    };
    let mut text = String::from("x,rho,p\n");
    for j in 0..grid.n {
        text += &format!("{:.16e},{:.16e},{:.16e}\n", grid.center(j as isize), rho_ref[j], p_ref[j]);
    }
    Ok((cmp, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text_round_trips() {
        let text = "# comment\nproblem = vortex\nnx = 32 # trailing\nlimiter = mc\ntheta = 1.5\nno-correction = true\nt_final = 0.5\n";
        let (cfg, mode) = PartialConfig::parse(text).unwrap().resolve().unwrap();
        assert_eq!(mode, Mode::Run);
        assert_eq!(cfg.nx, 32);
        assert_eq!(cfg.ny, 32);
        assert_eq!(cfg.limiter(), Limiter::McTheta(1.5));
        assert!(!cfg.use_correction);
        assert_eq!(cfg.cfl, 0.45);
        let (back, _) = PartialConfig::parse(&cfg.to_config_text()).unwrap().resolve().unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn cli_overrides_file() {
        let file = PartialConfig::parse("problem = sine\nnx = 16\ncfl = 0.3").unwrap();
        let cli = PartialConfig {
            nx: Some(24),
            ..Default::default()
        };
        let (cfg, _) = file.overridden_by(cli).resolve().unwrap();
        assert_eq!((cfg.nx, cfg.ny, cfg.cfl), (24, 24, 0.3));
    }

    #[test]
    fn defaults_follow_the_problem() {
        let c = RunConfig::new(Problem::BrioWu1d);
        assert_eq!((c.nx, c.ny, c.cfl), (800, 1, 0.4));
        assert_eq!(c.limiter, LimiterChoice::Minmod);
        let v = RunConfig::new(Problem::Vortex);
        assert_eq!(v.limiter(), Limiter::McTheta(DEFAULT_THETA));
        assert_eq!(v.t_final, 10.0);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad = [
            "problem = nope",
            "nx = 10",
            "problem = sine\ncfl = 1.2",
            "problem = sine\nnx = 4",
            "problem = sine\nlimiter = superbee",
            "problem = sine\ntheta = 3",
            "problem = sine\nwhat = 1",
            "problem = sine\nnx",
            "problem = sine\nconvergence = 8,16\ncompare-correction = true",
            "problem = sine\nsemi-discrete = true",
        ];
        for text in bad {
            let r = PartialConfig::parse(text).and_then(|c| c.resolve());
            assert!(matches!(r, Err(Error::Config(_)) | Err(Error::UnknownProblem(_))), "{text}: {r:?}");
        }
    }

    #[test]
    fn reference_key_depends_on_settings() {
        let a = reference_config(&RunConfig::new(Problem::BrioWu1d));
        let mut b = a.clone();
        assert_eq!(reference_key(&a), reference_key(&b));
        b.cfl = 0.3;
        assert_ne!(reference_key(&a), reference_key(&b));
        assert_eq!(reference_key(&a).len(), 64);
    }
}
