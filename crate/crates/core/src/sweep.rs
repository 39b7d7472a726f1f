//! Grids of steady-state observables over temperature and coupling axes.
//!
//! Every grid point is an independent solve. With the `parallel` feature the
//! points are distributed over a rayon pool; results are always returned in
//! row-major grid order (axis 1 outer, axis 2 inner), so output does not
//! depend on scheduling or worker count.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::models::ModelParams;
use crate::steady::solve_steady_state;
use crate::thermo::{
    eigenbasis_populations, gibbs_state, internal_energy, specific_heat, uhlmann_fidelity,
    von_neumann_entropy, Bath, Temperature,
};

/// Top-level population above which a truncated oscillator is flagged.
pub const TAIL_WARNING: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisName {
    T1,
    T2,
    J,
}

impl fmt::Display for AxisName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxisName::T1 => "T1",
            AxisName::T2 => "T2",
            AxisName::J => "J",
        })
    }
}

impl FromStr for AxisName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "T1" | "t1" => Ok(AxisName::T1),
            "T2" | "t2" => Ok(AxisName::T2),
            "J" | "j" => Ok(AxisName::J),
            other => Err(Error::InvalidParams(format!("unknown axis {other:?}, expected T1, T2 or J"))),
        }
    }
}

/// Evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    name: AxisName,
    start: f64,
    stop: f64,
    points: usize,
}

impl Axis {
    pub fn new(name: AxisName, start: f64, stop: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::InvalidParams(format!("axis {name} needs at least 2 points")));
        }
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(Error::InvalidParams(format!(
                "axis {name} needs finite start < stop, got {start}..{stop}"
            )));
        }
        if name != AxisName::J && start < 0.0 {
            return Err(Error::InvalidParams(format!("temperature axis {name} starts below zero")));
        }
        Ok(Self { name, start, stop, points })
    }

    pub fn name(&self) -> AxisName {
        self.name
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.stop } else { self.start + step * i as f64 })
            .collect()
    }
}

/// `name:start:stop:points`, e.g. `T1:0.1:10:100`.
impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [name, start, stop, points] = parts[..] else {
            return Err(Error::InvalidParams(format!("axis {s:?} is not name:start:stop:points")));
        };
        let num = |x: &str| {
            x.trim().parse::<f64>().map_err(|_| Error::InvalidParams(format!("bad number {x:?} in axis {s:?}")))
        };
        let points = points
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidParams(format!("bad point count {points:?} in axis {s:?}")))?;
        Axis::new(name.parse()?, num(start)?, num(stop)?, points)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.name, self.start, self.stop, self.points)
    }
}

/// Which observables a sweep computes. Columns that are not requested are
/// left empty in the CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OutputSet {
    pub energy: bool,
    pub entropy: bool,
    pub heat_t1: bool,
    pub heat_t2: bool,
    pub fidelity_t1: bool,
    pub fidelity_t2: bool,
    pub populations: bool,
}

impl OutputSet {
    pub fn all() -> Self {
        Self {
            energy: true,
            entropy: true,
            heat_t1: true,
            heat_t2: true,
            fidelity_t1: true,
            fidelity_t2: true,
            populations: true,
        }
    }

    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    /// Canonical names in column order.
    pub fn names(&self) -> Vec<&'static str> {
        let flags = [
            (self.energy, "U"),
            (self.entropy, "S"),
            (self.heat_t1, "C_T1"),
            (self.heat_t2, "C_T2"),
            (self.fidelity_t1, "F_T1"),
            (self.fidelity_t2, "F_T2"),
            (self.populations, "populations"),
        ];
        flags.iter().filter(|(on, _)| *on).map(|(_, n)| *n).collect()
    }
}

/// Comma-separated list of `U, S, C_T1, C_T2, F_T1, F_T2, populations`.
impl FromStr for OutputSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = OutputSet::default();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let flag = match item {
                "U" => &mut out.energy,
                "S" => &mut out.entropy,
                "C_T1" => &mut out.heat_t1,
                "C_T2" => &mut out.heat_t2,
                "F_T1" | "F_gibbs_T1" => &mut out.fidelity_t1,
                "F_T2" | "F_gibbs_T2" => &mut out.fidelity_t2,
                "populations" | "p" => &mut out.populations,
                other => return Err(Error::InvalidParams(format!("unknown output {other:?}"))),
            };
            *flag = true;
        }
        if out.is_empty() {
            return Err(Error::InvalidParams("no outputs requested".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for OutputSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names().join(","))
    }
}

/// A complete sweep description.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    params: ModelParams,
    axis1: Axis,
    axis2: Option<Axis>,
    outputs: OutputSet,
}

impl SweepSpec {
    pub fn new(params: ModelParams, axis1: Axis, axis2: Option<Axis>, outputs: OutputSet) -> Result<Self> {
        params.validate()?;
        if outputs.is_empty() {
            return Err(Error::InvalidParams("no outputs requested".into()));
        }
        for axis in std::iter::once(&axis1).chain(axis2.as_ref()) {
            if axis.name == AxisName::J {
                params.with_coupling(0.0)?;
            }
        }
        if axis2.is_some_and(|a| a.name == axis1.name) {
            return Err(Error::InvalidParams(format!("axis {} given twice", axis1.name)));
        }
        Ok(Self { params, axis1, axis2, outputs })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn axis1(&self) -> &Axis {
        &self.axis1
    }

    pub fn axis2(&self) -> Option<&Axis> {
        self.axis2.as_ref()
    }

    pub fn outputs(&self) -> OutputSet {
        self.outputs
    }

    pub fn len(&self) -> usize {
        self.axis1.points * self.axis2.map_or(1, |a| a.points)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Model parameters at every grid point, row-major.
    pub fn grid(&self) -> Result<Vec<ModelParams>> {
        let inner = self.axis2.map_or_else(|| vec![None], |a| a.values().into_iter().map(Some).collect());
        let mut out = Vec::with_capacity(self.len());
        for v1 in self.axis1.values() {
            let p = set_axis(self.params, self.axis1.name, v1)?;
            for v2 in &inner {
                out.push(match (self.axis2, v2) {
                    (Some(a), Some(v)) => set_axis(p, a.name, *v)?,
                    _ => p,
                });
            }
        }
        Ok(out)
    }
}

fn set_axis(p: ModelParams, name: AxisName, value: f64) -> Result<ModelParams> {
    let (t1, t2) = p.temperatures();
    match name {
        AxisName::T1 => Ok(p.with_temperatures(Temperature::new(value)?, t2)),
        AxisName::T2 => Ok(p.with_temperatures(t1, Temperature::new(value)?)),
        AxisName::J => p.with_coupling(value),
    }
}

/// One grid point. Observables that were not requested, or that failed, are
/// `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub model: &'static str,
    pub t1: f64,
    pub t2: f64,
    pub j: f64,
    pub energy: Option<f64>,
    pub entropy: Option<f64>,
    pub heat_t1: Option<f64>,
    pub heat_t2: Option<f64>,
    pub fidelity_t1: Option<f64>,
    pub fidelity_t2: Option<f64>,
    pub populations: Option<Vec<f64>>,
    /// Population of the highest Fock level, for truncated oscillators.
    pub top_population: Option<f64>,
    pub error: Option<Error>,
}

impl SweepRecord {
    fn empty(p: &ModelParams) -> Self {
        let (t1, t2) = p.temperatures();
        Self {
            model: p.name(),
            t1: t1.value(),
            t2: t2.value(),
            j: p.coupling(),
            energy: None,
            entropy: None,
            heat_t1: None,
            heat_t2: None,
            fidelity_t1: None,
            fidelity_t2: None,
            populations: None,
            top_population: None,
            error: None,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Solves one grid point. Solver failures are stored in the record rather
/// than returned.
pub fn evaluate_point(params: &ModelParams, outputs: OutputSet) -> SweepRecord {
    let mut rec = SweepRecord::empty(params);
    if let Err(e) = fill_record(&mut rec, params, outputs) {
        rec = SweepRecord { error: Some(e), ..SweepRecord::empty(params) };
    }
    rec
}

fn fill_record(rec: &mut SweepRecord, params: &ModelParams, outputs: OutputSet) -> Result<()> {
    let (t1, t2) = params.temperatures();
    let h = params.hamiltonian();
    let rho = solve_steady_state(&params.build()?)?;
    if let ModelParams::Oscillator(_) = params {
        rec.top_population = rho.populations().last().copied();
    }
    if outputs.energy {
        rec.energy = Some(internal_energy(&rho, &h)?);
    }
    if outputs.entropy {
        rec.entropy = Some(von_neumann_entropy(&rho)?);
    }
    if outputs.fidelity_t1 {
        rec.fidelity_t1 = Some(uhlmann_fidelity(&rho, &gibbs_state(&h, t1)?)?);
    }
    if outputs.fidelity_t2 {
        rec.fidelity_t2 = Some(uhlmann_fidelity(&rho, &gibbs_state(&h, t2)?)?);
    }
    if outputs.populations {
        let levels = eigenbasis_populations(&rho, &h)?;
        rec.populations = Some(levels.iter().map(|l| l.population).collect());
    }
    if outputs.heat_t1 {
        rec.heat_t1 = Some(specific_heat(params, Bath::First, t1, t2)?);
    }
    if outputs.heat_t2 {
        rec.heat_t2 = Some(specific_heat(params, Bath::Second, t1, t2)?);
    }
    Ok(())
}

/// How grid points are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Up to `workers` concurrent solves; `0` uses rayon's default pool.
    #[cfg(feature = "parallel")]
    Parallel { workers: usize },
}

impl Execution {
    /// Parallel when the feature is enabled and more than one worker is
    /// asked for (or `0`, meaning "all cores"); sequential otherwise.
    pub fn with_workers(workers: usize) -> Self {
        #[cfg(feature = "parallel")]
        if workers != 1 {
            return Execution::Parallel { workers };
        }
        let _ = workers;
        Execution::Sequential
    }
}

/// Evaluates every grid point of `spec`, in row-major order.
pub fn run_sweep(spec: &SweepSpec, execution: Execution) -> Result<Vec<SweepRecord>> {
    let grid = spec.grid()?;
    let outputs = spec.outputs;
    match execution {
        Execution::Sequential => Ok(grid.iter().map(|p| evaluate_point(p, outputs)).collect()),
        #[cfg(feature = "parallel")]
        Execution::Parallel { workers } => {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| Error::InvalidParams(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(|| grid.par_iter().map(|p| evaluate_point(p, outputs)).collect()))
        }
    }
}

/// Renders `x` with 12 significant digits in the style of C's `%.12g`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const CSV_COLUMNS: [&str; 10] =
    ["model", "T1", "T2", "J", "U", "S", "C_T1", "C_T2", "F_gibbs_T1", "F_gibbs_T2"];

/// Writes records as CSV with LF line endings. When `populations` is
/// requested the header gains `p1..pN` columns, `N` being the model dimension.
pub fn write_csv<W: Write>(out: W, spec: &SweepSpec, records: &[SweepRecord]) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidParams(format!("cannot write CSV: {e}"));
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let levels = if spec.outputs.populations { spec.params.dim() } else { 0 };

    let mut header: Vec<String> = CSV_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.extend((1..=levels).map(|k| format!("p{k}")));
    w.write_record(&header).map_err(io)?;

    let cell = |x: Option<f64>| x.map(format_number).unwrap_or_default();
    for r in records {
        let mut row = vec![
            r.model.to_string(),
            format_number(r.t1),
            format_number(r.t2),
            format_number(r.j),
            cell(r.energy),
            cell(r.entropy),
            cell(r.heat_t1),
            cell(r.heat_t2),
            cell(r.fidelity_t1),
            cell(r.fidelity_t2),
        ];
        match &r.populations {
            Some(p) => row.extend(p.iter().map(|&x| format_number(x))),
            None => row.extend(std::iter::repeat_n(String::new(), levels)),
        }
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidParams(format!("cannot write CSV: {e}")))?;
    Ok(())
}
