//! Experiment runner: a TOML run description in, CSV traces and a JSON
//! summary out.
//!
//! The config has three tables. `[design]` describes the array, the
//! two-mainlobe target and the lag set; `[solver]` selects the variant and
//! its parameters; `[output]` names the directory and which files to emit.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use cmwave_core::metrics::{
    beampattern_trace, normalized_correlation_db, objective_decomposition, DEFAULT_DB_FLOOR,
};
use cmwave_core::ndarray::Array2;
use cmwave_core::{
    AgdPolicy, Algorithm, Complex64, DesignSpec, DualInit, IterationRecord, PhaseMatrix, RhoMode,
    RunOutput, SbcdPolicy, Scenario, Solver, SolverConfig,
};
use serde::{Deserialize, Serialize};

pub const TRACE_FLUSH_INTERVAL: usize = 100;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Validation(cmwave_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Solver(cmwave_core::Error),
}

impl CliError {
    /// 1 for anything caught before the solver starts, 2 afterwards.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Validation(_) => 1,
            CliError::Io { .. } | CliError::Solver(_) => 2,
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmName {
    Admm,
    Sbcd,
    Agd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RhoModeName {
    Theory,
    Practical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DualInitName {
    Auto,
    Gradient,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSection {
    pub num_antennas: usize,
    pub waveform_length: usize,
    /// Explicit lag set; alternatively `max_lag` for `0..=max_lag`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lags: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_lag: Option<usize>,
    #[serde(default = "default_grid_step")]
    pub grid_step_deg: f64,
    #[serde(default = "default_centers")]
    pub mainlobe_centers: Vec<f64>,
    #[serde(default = "default_halfwidth")]
    pub mainlobe_halfwidth: f64,
    /// Defaults to the mainlobe centers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corr_angles: Option<Vec<f64>>,
    #[serde(default = "default_weight")]
    pub weight_ac: f64,
    #[serde(default = "default_weight")]
    pub weight_cc: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub algorithm: AlgorithmName,
    pub rho_mode: RhoModeName,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub sbcd_fraction: f64,
    pub agd_t: f64,
    pub lipschitz_scale: f64,
    pub dual_init: DualInitName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            algorithm: AlgorithmName::Admm,
            rho_mode: RhoModeName::Practical,
            tol: 1e-4,
            max_iter: 60_000,
            seed: 0,
            sbcd_fraction: 0.25,
            agd_t: 3.0,
            lipschitz_scale: 1.0,
            dual_init: DualInitName::Auto,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub trace: bool,
    pub waveform: bool,
    pub beampattern: bool,
    pub correlation_report: bool,
    /// Adds the augmented Lagrangian column to the trace.
    pub lagrangian_audit: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: PathBuf::from("out"),
            trace: true,
            waveform: true,
            beampattern: true,
            correlation_report: true,
            lagrangian_audit: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub design: DesignSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputSection,
}

fn default_grid_step() -> f64 {
    0.1
}

fn default_centers() -> Vec<f64> {
    vec![-40.0, 30.0]
}

fn default_halfwidth() -> f64 {
    10.0
}

fn default_weight() -> f64 {
    10.0
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub algorithm: Option<AlgorithmName>,
    pub seed: Option<u64>,
    pub max_iter: Option<usize>,
    pub tol: Option<f64>,
    pub rho_mode: Option<RhoModeName>,
    pub output_dir: Option<PathBuf>,
    pub sbcd_fraction: Option<f64>,
    pub agd_t: Option<f64>,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn apply(&mut self, o: &Overrides) {
        let s = &mut self.solver;
        if let Some(v) = o.algorithm {
            s.algorithm = v;
        }
        if let Some(v) = o.seed {
            s.seed = v;
        }
        if let Some(v) = o.max_iter {
            s.max_iter = v;
        }
        if let Some(v) = o.tol {
            s.tol = v;
        }
        if let Some(v) = o.rho_mode {
            s.rho_mode = v;
        }
        if let Some(v) = o.sbcd_fraction {
            s.sbcd_fraction = v;
        }
        if let Some(v) = o.agd_t {
            s.agd_t = v;
        }
        if let Some(v) = o.threads {
            s.threads = Some(v);
        }
        if let Some(v) = &o.output_dir {
            self.output.dir = v.clone();
        }
    }

    pub fn lags(&self) -> Result<Vec<usize>> {
        let d = &self.design;
        let lags = match (&d.lags, d.max_lag) {
            (Some(l), None) => l.clone(),
            (None, Some(m)) => (0..=m).collect(),
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "design: give either `lags` or `max_lag`, not both".into(),
                ))
            }
            (None, None) => {
                return Err(CliError::Config(
                    "design: one of `lags` or `max_lag` is required".into(),
                ))
            }
        };
        if let Some(&bad) = lags.iter().find(|&&l| l >= d.waveform_length) {
            return Err(CliError::Config(format!(
                "design.lags: lag {bad} is out of range, lags must not exceed N-1 = {}",
                d.waveform_length.saturating_sub(1)
            )));
        }
        Ok(lags)
    }

    pub fn design_spec(&self) -> Result<DesignSpec> {
        let d = &self.design;
        let mut spec = DesignSpec::mainlobes(
            d.num_antennas,
            d.waveform_length,
            d.grid_step_deg,
            &d.mainlobe_centers,
            d.mainlobe_halfwidth,
            self.lags()?,
        )
        .map_err(CliError::Validation)?;
        if let Some(angles) = &d.corr_angles {
            spec.corr_angles = angles.clone();
        }
        spec.weight_ac = d.weight_ac;
        spec.weight_cc = d.weight_cc;
        if let Some(a) = d.alpha_max {
            spec.alpha_max = a;
        }
        spec.validate().map_err(CliError::Validation)?;
        Ok(spec)
    }

    pub fn solver_config(&self, num_lags: usize) -> Result<SolverConfig> {
        let s = &self.solver;
        let algorithm = match s.algorithm {
            AlgorithmName::Admm => Algorithm::Admm,
            AlgorithmName::Sbcd => Algorithm::Sbcd(SbcdPolicy::uniform(s.sbcd_fraction, num_lags)),
            AlgorithmName::Agd => Algorithm::Agd(AgdPolicy { t: s.agd_t }),
        };
        let cfg = SolverConfig {
            rho_mode: match s.rho_mode {
                RhoModeName::Theory => RhoMode::Theory,
                RhoModeName::Practical => RhoMode::Practical,
            },
            tol_residual: s.tol,
            max_iterations: s.max_iter,
            rng_seed: s.seed,
            lipschitz_scale: s.lipschitz_scale,
            record_lagrangian: self.output.lagrangian_audit,
            dual_init: match s.dual_init {
                DualInitName::Auto => DualInit::Auto,
                DualInitName::Gradient => DualInit::Gradient,
                DualInitName::Zero => DualInit::Zero,
            },
            algorithm,
            threads: s.threads,
        };
        cfg.validate(num_lags).map_err(CliError::Validation)?;
        Ok(cfg)
    }

    /// Checks every nested invariant.
    pub fn validate(&self) -> Result<()> {
        let spec = self.design_spec()?;
        self.solver_config(spec.lags.len())?;
        Ok(())
    }
}

/// Parses and validates config text.
pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config_str(&text)
}

/// Seventeen significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn fmt_complex(z: Complex64) -> String {
    format!("{:.16e}{:+.16e}j", z.re, z.im)
}

/// Inverse of [`fmt_complex`].
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let body = s.trim().strip_suffix('j')?;
    // The imaginary sign is the last one not attached to an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'))?;
    let re = body[..split].parse().ok()?;
    let im = body[split..].parse().ok()?;
    Some(Complex64::new(re, im))
}

fn read_table<T, F>(path: &Path, mut parse: F) -> Result<Vec<Vec<T>>>
where
    F: FnMut(&str) -> Option<T>,
{
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, line)| {
            line.split(',')
                .map(|cell| {
                    parse(cell).ok_or_else(|| {
                        CliError::Config(format!(
                            "{}: line {}: cannot parse `{cell}`",
                            path.display(),
                            n + 1
                        ))
                    })
                })
                .collect()
        })
        .collect()
}

fn rows_to_array<T: Clone>(path: &Path, rows: Vec<Vec<T>>) -> Result<Array2<T>> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(CliError::Config(format!("{}: ragged rows", path.display())));
    }
    let n = rows.len();
    Array2::from_shape_vec((n, cols), rows.into_iter().flatten().collect())
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Loads an `N x M` phase file as written by [`run_experiment`].
pub fn read_phases(path: &Path) -> Result<PhaseMatrix> {
    let rows = read_table(path, |c| c.trim().parse::<f64>().ok())?;
    PhaseMatrix::new(rows_to_array(path, rows)?).map_err(CliError::Validation)
}

pub fn read_waveform(path: &Path) -> Result<Array2<Complex64>> {
    let rows = read_table(path, parse_complex)?;
    rows_to_array(path, rows)
}

struct Sink {
    path: PathBuf,
    out: BufWriter<File>,
}

impl Sink {
    fn create(dir: &Path, name: &str) -> Result<Self> {
        let path = dir.join(name);
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        Ok(Sink {
            path,
            out: BufWriter::new(file),
        })
    }

    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}").map_err(|e| CliError::io(&self.path, e))
    }

    fn flush(&mut self) -> Result<()> {
        self.out.flush().map_err(|e| CliError::io(&self.path, e))
    }
}

fn trace_header(with_lagrangian: bool) -> String {
    let mut h = String::from("k,e,pc,objective,alpha,res_consensus,res_successive");
    if with_lagrangian {
        h.push_str(",lagrangian");
    }
    h
}

fn trace_row(r: &IterationRecord, with_lagrangian: bool) -> String {
    let mut row = format!(
        "{},{},{},{},{},{},{}",
        r.k,
        fmt_f64(r.e),
        fmt_f64(r.pc),
        fmt_f64(r.objective),
        fmt_f64(r.alpha),
        fmt_f64(r.res_consensus),
        fmt_f64(r.res_successive)
    );
    if with_lagrangian {
        row.push(',');
        row.push_str(&r.lagrangian.map_or_else(String::new, fmt_f64));
    }
    row
}

/// Result of a completed run, alongside the files it wrote.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub scenario: Scenario,
    pub output: RunOutput,
    pub summary: serde_json::Value,
}

/// Builds the scenario, runs the selected variant, and writes the enabled
/// files into the output directory.
pub fn run_experiment(config: &RunConfig) -> Result<Experiment> {
    let spec = config.design_spec()?;
    let scenario = Scenario::new(spec).map_err(CliError::Validation)?;
    let solver_cfg = config.solver_config(scenario.num_lags())?;
    let dir = &config.output.dir;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;

    let audit = solver_cfg.record_lagrangian;
    let mut trace = if config.output.trace {
        let mut t = Sink::create(dir, "trace.csv")?;
        t.line(&trace_header(audit))?;
        Some(t)
    } else {
        None
    };
    let solver = Solver::new(&scenario, solver_cfg).map_err(CliError::Validation)?;
    let mut write_err = None;
    let result = solver.run_with(|rec| {
        let Some(t) = trace.as_mut() else {
            return Ok(());
        };
        let mut step = t.line(&trace_row(rec, audit));
        if step.is_ok() && rec.k % TRACE_FLUSH_INTERVAL == 0 {
            step = t.flush();
        }
        step.map_err(|e| {
            let msg = e.to_string();
            write_err = Some(e);
            cmwave_core::Error::Domain(msg)
        })
    });
    if let Some(e) = write_err {
        return Err(e);
    }
    let output = result.map_err(CliError::Solver)?;
    if let Some(t) = trace.as_mut() {
        t.flush()?;
    }

    let phi = &output.solution.phi;
    let mut phases = Sink::create(dir, "phases.csv")?;
    for row in phi.as_array().rows() {
        let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        phases.line(&cells.join(","))?;
    }
    phases.flush()?;

    if config.output.waveform {
        let mut w = Sink::create(dir, "waveform.csv")?;
        for row in output.solution.waveform.rows() {
            let cells: Vec<String> = row.iter().map(|z| fmt_complex(*z)).collect();
            w.line(&cells.join(","))?;
        }
        w.flush()?;
    }

    if config.output.beampattern {
        let bp = beampattern_trace(phi, &scenario);
        let mut b = Sink::create(dir, "beampattern.csv")?;
        b.line("theta_deg,power,power_db")?;
        for i in 0..bp.theta_deg.len() {
            b.line(&format!(
                "{},{},{}",
                fmt_f64(bp.theta_deg[i]),
                fmt_f64(bp.power[i]),
                fmt_f64(bp.power_db[i])
            ))?;
        }
        b.flush()?;
    }

    if config.output.correlation_report {
        let report = normalized_correlation_db(phi, &scenario, DEFAULT_DB_FLOOR)
            .map_err(CliError::Solver)?;
        let mut c = Sink::create(dir, "correlation.csv")?;
        c.line("theta_i,theta_j,lag,re,im,level_db")?;
        for e in &report.entries {
            c.line(&format!(
                "{},{},{},{},{},{}",
                fmt_f64(e.theta_i),
                fmt_f64(e.theta_j),
                e.lag,
                fmt_f64(e.value.re),
                fmt_f64(e.value.im),
                fmt_f64(e.level_db)
            ))?;
        }
        c.flush()?;
    }

    let summary = summarize(config, &scenario, &output);
    let path = dir.join("summary.json");
    let text = serde_json::to_string_pretty(&summary).expect("summary is plain data");
    fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;

    Ok(Experiment {
        scenario,
        output,
        summary,
    })
}

fn summarize(config: &RunConfig, scenario: &Scenario, out: &RunOutput) -> serde_json::Value {
    let last = out.trace.last();
    let final_obj = objective_decomposition(out.solution.alpha, &out.solution.phi, scenario);
    serde_json::json!({
        "stop_reason": out.stop_reason.as_str(),
        "iterations": out.trace.len(),
        "seed": config.solver.seed,
        "algorithm": config.solver.algorithm,
        "final_e": final_obj.e,
        "final_pc": final_obj.pc,
        "final_objective": final_obj.total,
        "final_alpha": out.solution.alpha,
        "final_res_consensus": last.map(|r| r.res_consensus),
        "final_res_successive": last.map(|r| r.res_successive),
        "initial_e": out.initial.e,
        "initial_pc": out.initial.pc,
        "initial_lagrangian": out.initial_lagrangian,
        "rho_n": out.rho_n,
        "lipschitz": {
            "alpha": out.lipschitz.alpha,
            "phi": out.lipschitz.phi,
            "lag": out.lipschitz.lag,
        },
        "descent_violations": out.descent_violations,
        "lags": scenario.spec.lags,
        "config": config,
    })
}
