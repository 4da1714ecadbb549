//! Scenario configuration, CSV emission and parameter sweeps behind the
//! `mintime` binary.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use mintime_core::arc::{self, build_arc, ArcInput, DragParams};
use mintime_core::inverse::{time_at_space, velocity_at_space, InversionSettings};
use mintime_core::ocp::{
    feasibility, sample_trajectory, solve, BangBangProblem, BangBangSolution, Feasibility,
    FeasibilityVerdict, Phase,
};

/// One fully specified scenario (problem data plus sampling resolution).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    pub v0: f64,
    pub vf: f64,
    pub length: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    pub c0: f64,
    pub c1: f64,
    pub samples: usize,
}

impl ScenarioConfig {
    pub fn problem(&self) -> Result<BangBangProblem, CliError> {
        if self.samples < 2 {
            return Err(CliError::Input("samples must be at least 2".into()));
        }
        let drag = DragParams::new(self.c0, self.c1).map_err(|e| CliError::Input(e.to_string()))?;
        BangBangProblem::new(self.v0, self.vf, self.length, self.a_plus, self.a_minus, drag)
            .map_err(|e| CliError::Input(e.to_string()))
    }
}

/// Parameter swept by `mintime sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    C0,
    C1,
    APlus,
    AMinus,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::C0 => "c0",
            SweepParameter::C1 => "c1",
            SweepParameter::APlus => "a_plus",
            SweepParameter::AMinus => "a_minus",
        }
    }
}

impl FromStr for SweepParameter {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "c0" => Ok(SweepParameter::C0),
            "c1" => Ok(SweepParameter::C1),
            "a_plus" | "a-plus" => Ok(SweepParameter::APlus),
            "a_minus" | "a-minus" => Ok(SweepParameter::AMinus),
            other => Err(CliError::Input(format!("unknown sweep parameter `{other}`"))),
        }
    }
}

/// A sweep request: which parameter and which values.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

impl FromStr for SweepSpec {
    type Err = CliError;

    /// Parses `<param>=<comma-separated values>`, e.g. `c0=0,1e-5,0.01`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, list) = s
            .split_once('=')
            .ok_or_else(|| CliError::Input("sweep must look like `<param>=<v1,v2,...>`".into()))?;
        let parameter = name.trim().parse()?;
        let values = list
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Input(format!("bad sweep value `{v}`")))
            })
            .collect::<Result<Vec<f64>, CliError>>()?;
        if values.is_empty() {
            return Err(CliError::Input("sweep value list is empty".into()));
        }
        Ok(SweepSpec { parameter, values })
    }
}

impl SweepSpec {
    pub fn apply(&self, base: &ScenarioConfig, value: f64) -> ScenarioConfig {
        let mut cfg = *base;
        match self.parameter {
            SweepParameter::C0 => cfg.c0 = value,
            SweepParameter::C1 => cfg.c1 = value,
            SweepParameter::APlus => cfg.a_plus = value,
            SweepParameter::AMinus => cfg.a_minus = value,
        }
        cfg
    }
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Solver(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "input error: {msg}"),
            CliError::Solver(msg) => write!(f, "solver error: {msg}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Formats with 12 significant digits in plain decimal, minimal trailing
/// zeros; infinities render as `inf` / `-inf`.
pub fn format_value(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".to_string() } else { "-inf".to_string() };
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let prec = (11 - exp).max(0) as usize;
    let s = format!("{x:.prec$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Feasibility data plus the solution when one exists.
#[derive(Debug, Clone, Copy)]
pub struct SolveReport {
    pub feasibility: Feasibility,
    pub solution: Option<BangBangSolution>,
}

/// Runs feasibility analysis and, when feasible, the full solve.
pub fn run_solve(config: &ScenarioConfig) -> Result<SolveReport, CliError> {
    let problem = config.problem()?;
    let feas = feasibility(&problem).map_err(|e| CliError::Solver(e.to_string()))?;
    let solution = if feas.verdict == FeasibilityVerdict::Feasible {
        Some(solve(&problem).map_err(|e| CliError::Solver(e.to_string()))?)
    } else {
        None
    };
    Ok(SolveReport { feasibility: feas, solution })
}

/// Fixed-format report of a single solve.
pub fn render_report(report: &SolveReport) -> String {
    let mut out = String::new();
    let f = &report.feasibility;
    let _ = writeln!(out, "{:<10} {}", "verdict", f.verdict);
    let _ = writeln!(out, "{:<10} {}", "vf_min", format_value(f.vf_min));
    let _ = writeln!(out, "{:<10} {}", "vf_max", format_value(f.vf_max));
    match &report.solution {
        Some(sol) => {
            let _ = writeln!(out, "{:<10} {}", "s_sigma", format_value(sol.s_sigma));
            let _ = writeln!(out, "{:<10} {}", "t_sigma", format_value(sol.t_sigma));
            let _ = writeln!(out, "{:<10} {}", "T", format_value(sol.total_time));
        }
        None => {
            let _ = writeln!(out, "{:<10} -", "s_sigma");
            let _ = writeln!(out, "{:<10} -", "t_sigma");
            let _ = writeln!(out, "{:<10} -", "T");
        }
    }
    out
}

fn phase_name(p: Phase) -> &'static str {
    match p {
        Phase::Accel => "accel",
        Phase::Brake => "brake",
    }
}

/// Renders a solved trajectory as CSV (`s,t,v,a,phase`, LF line endings).
pub fn trajectory_csv(solution: &BangBangSolution, samples: usize) -> Result<String, CliError> {
    let rows = sample_trajectory(solution, samples).map_err(|e| CliError::Solver(e.to_string()))?;
    let mut out = String::from("s,t,v,a,phase\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_value(r.s),
            format_value(r.t),
            format_value(r.v),
            format_value(r.a),
            phase_name(r.phase)
        );
    }
    Ok(out)
}

/// Renders the two pure-manoeuvre envelope curves of an infeasible scenario:
/// full acceleration from the initial speed and full braking into the final
/// speed, each sampled uniformly in s with arc-local times.
pub fn envelope_csv(config: &ScenarioConfig) -> Result<String, CliError> {
    let problem = config.problem()?;
    let n = config.samples;
    let inv = InversionSettings::DEFAULT;
    let mut out = String::from("s,t,v,a,phase\n");

    let accel_input = ArcInput::new(problem.a_plus, problem.v_i, problem.drag)
        .map_err(|e| CliError::Solver(e.to_string()))?;
    let accel = build_arc(accel_input).map_err(|e| CliError::Solver(e.to_string()))?;
    for i in 0..n {
        let s = problem.length * i as f64 / (n - 1) as f64;
        let t = time_at_space(&accel, s, &inv).map_err(|e| CliError::Solver(e.to_string()))?.t;
        let v = arc::velocity(&accel, t).map_err(|e| CliError::Solver(e.to_string()))?;
        let _ = writeln!(
            out,
            "{},{},{},{},envelope_accel",
            format_value(s),
            format_value(t),
            format_value(v),
            format_value(problem.a_plus)
        );
    }

    let brake_input = ArcInput::new(-problem.a_minus, problem.v_f, problem.drag)
        .map_err(|e| CliError::Solver(e.to_string()))?;
    let brake = build_arc(brake_input).map_err(|e| CliError::Solver(e.to_string()))?;
    for i in 0..n {
        let s = problem.length * i as f64 / (n - 1) as f64;
        let zeta = s - problem.length;
        let t = time_at_space(&brake, zeta, &inv).map_err(|e| CliError::Solver(e.to_string()))?.t;
        let v = arc::velocity(&brake, t).map_err(|e| CliError::Solver(e.to_string()))?;
        let _ = writeln!(
            out,
            "{},{},{},{},envelope_brake",
            format_value(s),
            format_value(t),
            format_value(v),
            format_value(-problem.a_minus)
        );
    }
    Ok(out)
}

/// Outcome of one sweep value.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub verdict: FeasibilityVerdict,
    pub s_sigma: Option<f64>,
    pub total_time: Option<f64>,
    pub vf_min: f64,
    pub vf_max: f64,
    pub csv_path: PathBuf,
}

/// Runs the sweep: one trajectory (or envelope) CSV per value, plus
/// `summary.csv`. Values are independent and run concurrently.
pub fn run_sweep(
    base: &ScenarioConfig,
    spec: &SweepSpec,
    out_dir: &Path,
) -> Result<Vec<SweepRow>, CliError> {
    fs::create_dir_all(out_dir)?;
    let mut results: Vec<Option<Result<SweepRow, CliError>>> = Vec::new();
    results.resize_with(spec.values.len(), || None);

    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (i, &value) in spec.values.iter().enumerate() {
            let cfg = spec.apply(base, value);
            let path = out_dir.join(format!("{}_{}.csv", spec.parameter.name(), format_value(value)));
            handles.push((i, scope.spawn(move || sweep_one(&cfg, value, path))));
        }
        for (i, h) in handles {
            results[i] = Some(h.join().expect("sweep worker panicked"));
        }
    });

    let rows = results
        .into_iter()
        .map(|r| r.expect("missing sweep result"))
        .collect::<Result<Vec<SweepRow>, CliError>>()?;

    let mut summary = String::from("param,value,verdict,s_sigma,T,vf_min,vf_max\n");
    for row in &rows {
        let _ = writeln!(
            summary,
            "{},{},{},{},{},{},{}",
            spec.parameter.name(),
            format_value(row.value),
            row.verdict,
            row.s_sigma.map(format_value).unwrap_or_default(),
            row.total_time.map(format_value).unwrap_or_default(),
            format_value(row.vf_min),
            format_value(row.vf_max),
        );
    }
    fs::write(out_dir.join("summary.csv"), summary)?;
    Ok(rows)
}

fn sweep_one(cfg: &ScenarioConfig, value: f64, path: PathBuf) -> Result<SweepRow, CliError> {
    let report = run_solve(cfg)?;
    let csv = match &report.solution {
        Some(sol) => trajectory_csv(sol, cfg.samples)?,
        None => envelope_csv(cfg)?,
    };
    fs::write(&path, csv)?;
    Ok(SweepRow {
        value,
        verdict: report.feasibility.verdict,
        s_sigma: report.solution.map(|s| s.s_sigma),
        total_time: report.solution.map(|s| s.total_time),
        vf_min: report.feasibility.vf_min,
        vf_max: report.feasibility.vf_max,
        csv_path: path,
    })
}

/// Table-2-style base scenario shared by the numerical tests.
pub fn base_scenario() -> ScenarioConfig {
    ScenarioConfig {
        v0: 6.0,
        vf: 5.0,
        length: 100.0,
        a_plus: 2.0,
        a_minus: 2.0,
        c0: 0.01,
        c1: 0.01,
        samples: 400,
    }
}

/// Runs the hidden oracle integration (debug aid): `(v, s)` at `t_end`.
pub fn run_oracle(config: &ScenarioConfig, accel: f64, t_end: f64) -> Result<(f64, f64), CliError> {
    let drag = DragParams::new(config.c0, config.c1).map_err(|e| CliError::Input(e.to_string()))?;
    let input = ArcInput::new(accel, config.v0, drag).map_err(|e| CliError::Input(e.to_string()))?;
    mintime_core::oracle::integrate_arc(&input, t_end, &mintime_core::oracle::OracleSettings::DEFAULT)
        .map_err(|e| CliError::Solver(e.to_string()))
}

/// Convenience used by tests: speed of the solved profile at abscissa `s`.
pub fn profile_speed(solution: &BangBangSolution, s: f64) -> Result<f64, CliError> {
    let inv = InversionSettings::DEFAULT;
    let v = if s < solution.s_sigma {
        velocity_at_space(&solution.left, s, &inv)
    } else {
        velocity_at_space(&solution.right, s - solution.length, &inv)
    };
    v.map_err(|e| CliError::Solver(e.to_string()))
}
