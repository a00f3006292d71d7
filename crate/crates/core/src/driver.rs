//! The full splitting time loop, snapshot sinks, and CSV snapshot I/O.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::domain::{Field, RunConfig, Scheme};
use crate::error::{Result, SolverError};
use crate::homogeneous::{cfl_dt, step_with_fluxes};
use crate::scalar::Real;
use crate::scenarios::Scenario;
use crate::sources::{
    source_step_friction, source_step_trapezoidal, source_step_upwind, SourceContext,
};
use crate::wetdry::{redefine_bottom, zero_front_discharge, zero_thin_film_discharge};

/// Receives fields at the scheduled snapshot times.
pub trait SnapshotSink<T> {
    fn on_snapshot(&mut self, field: &Field<T>) -> Result<()>;
}

/// Discards snapshots.
pub struct NullSink;

impl<T> SnapshotSink<T> for NullSink {
    fn on_snapshot(&mut self, _field: &Field<T>) -> Result<()> {
        Ok(())
    }
}

/// Keeps snapshots in memory, for tests and the verification harness.
#[derive(Default)]
pub struct MemorySink<T> {
    pub snapshots: Vec<Field<T>>,
}

impl<T: Real> SnapshotSink<T> for MemorySink<T> {
    fn on_snapshot(&mut self, field: &Field<T>) -> Result<()> {
        self.snapshots.push(field.clone());
        Ok(())
    }
}

/// Writes one CSV file per snapshot into a directory.
pub struct CsvDirSink {
    dir: PathBuf,
}

impl CsvDirSink {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| SolverError::io(dir.display().to_string(), e))?;
        Ok(Self { dir })
    }

    pub fn path_for(&self, time: f64) -> PathBuf {
        self.dir.join(format!("snapshot_t{time:.6}.csv"))
    }
}

impl<T: Real> SnapshotSink<T> for CsvDirSink {
    fn on_snapshot(&mut self, field: &Field<T>) -> Result<()> {
        write_snapshot_csv(field, &self.path_for(field.time.as_f64()))
    }
}

/// Mass bookkeeping over a run: final mass should equal initial mass plus
/// the time-integrated boundary mass influx whenever the source step leaves
/// depths alone.
#[derive(Debug, Clone, Copy, Default)]
pub struct MassLedger {
    pub initial: f64,
    pub r#final: f64,
    pub boundary_influx: f64,
}

impl MassLedger {
    pub fn defect(&self) -> f64 {
        self.r#final - (self.initial + self.boundary_influx)
    }
}

/// What a run did, in numbers.
#[derive(Debug, Clone, Default)]
pub struct SimulationSummary {
    pub steps: usize,
    pub final_time: f64,
    /// Smallest depth seen at any cell after any step.
    pub min_depth: f64,
    /// Largest |q| seen at any cell after any step.
    pub max_abs_q: f64,
    pub mass: MassLedger,
}

impl std::fmt::Display for SimulationSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "steps          = {}", self.steps)?;
        writeln!(f, "final_time     = {:.6}", self.final_time)?;
        writeln!(f, "min_depth      = {:.6e}", self.min_depth)?;
        writeln!(f, "max_abs_q      = {:.6e}", self.max_abs_q)?;
        writeln!(f, "mass_initial   = {:.12e}", self.mass.initial)?;
        writeln!(f, "mass_final     = {:.12e}", self.mass.r#final)?;
        writeln!(f, "mass_influx    = {:.12e}", self.mass.boundary_influx)?;
        write!(f, "mass_defect    = {:.6e}", self.mass.defect())
    }
}

const MAX_STEPS: usize = 5_000_000;

fn close_to<T: Real>(time: T, target: T) -> bool {
    let tol = T::epsilon() * T::lit(16.0) * target.abs().max(T::one());
    (time - target).abs() <= tol
}

/// Run one scenario to `config.t_end` under the configured scheme.
///
/// Loop order per step: optional bottom redefinition, CFL time step,
/// homogeneous step (ghost filling inside), scheme's source step, optional
/// front discharge zeroing, snapshot emission.
pub fn run_simulation<T: Real>(
    scenario: &Scenario<T>,
    config: &RunConfig<T>,
    sink: &mut dyn SnapshotSink<T>,
) -> Result<SimulationSummary> {
    config.validate()?;
    let mut field = scenario.initial_field(config.n_cells)?;

    let has_dry = field.states.iter().any(|s| s.is_dry(config.dry_eps));
    if has_dry && (config.scheme != Scheme::QTra3 || !config.wet_dry) {
        return Err(SolverError::InvalidConfig(format!(
            "scenario '{}' has dry cells; only qtra3 with wet/dry treatment handles them",
            scenario.name
        )));
    }

    let mut summary = SimulationSummary {
        final_time: field.time.as_f64(),
        min_depth: f64::INFINITY,
        ..Default::default()
    };
    summary.mass.initial = field.total_mass().as_f64();
    track(&mut summary, &field);

    let mut snap_idx = 0;
    emit_due(&mut field, config, sink, &mut snap_idx)?;

    while field.time < config.t_end && !close_to(field.time, config.t_end) {
        if summary.steps >= MAX_STEPS {
            return Err(SolverError::InvalidConfig(format!(
                "exceeded {MAX_STEPS} steps at t = {}",
                field.time.as_f64()
            )));
        }
        if config.wet_dry {
            field = redefine_bottom(&field, config.dry_eps);
        }
        let dt = cfl_dt(&field, config)?;
        if !(dt > T::zero()) {
            break;
        }
        let ctx = SourceContext::new(&field, &scenario.boundary)?;
        let (hat, bflux) = step_with_fluxes(&field, dt, &scenario.boundary, config)?;
        let mut next = match config.scheme {
            Scheme::QTra1 => source_step_trapezoidal(&hat, &ctx, dt, config)?,
            Scheme::QTra2 => source_step_upwind(&hat, &field, &ctx, dt, config)?,
            Scheme::QTra3 => source_step_friction(&hat, &field, &ctx, dt, config)?,
        };
        if config.wet_dry {
            next = zero_front_discharge(&next, config.dry_eps);
            next = zero_thin_film_discharge(&next, config.dry_eps);
        }
        summary.mass.boundary_influx += (dt * (bflux.left - bflux.right)).as_f64();
        summary.steps += 1;
        field = next;
        if close_to(field.time, config.t_end) {
            field.time = config.t_end;
        }
        track(&mut summary, &field);
        emit_due(&mut field, config, sink, &mut snap_idx)?;
    }

    summary.final_time = field.time.as_f64();
    summary.mass.r#final = field.total_mass().as_f64();
    Ok(summary)
}

/// Run and also hand back the final field.
pub fn run_to_end<T: Real>(
    scenario: &Scenario<T>,
    config: &RunConfig<T>,
) -> Result<(Field<T>, SimulationSummary)> {
    struct Last<T>(Option<Field<T>>);
    impl<T: Real> SnapshotSink<T> for Last<T> {
        fn on_snapshot(&mut self, field: &Field<T>) -> Result<()> {
            self.0 = Some(field.clone());
            Ok(())
        }
    }
    let mut cfg = config.clone();
    if !cfg.snapshot_times.last().map(|&t| t == cfg.t_end).unwrap_or(false) {
        cfg.snapshot_times.push(cfg.t_end);
    }
    let mut last = Last(None);
    let summary = run_simulation(scenario, &cfg, &mut last)?;
    let field = last.0.expect("final snapshot emitted");
    Ok((field, summary))
}

fn track<T: Real>(summary: &mut SimulationSummary, field: &Field<T>) {
    for s in &field.states {
        summary.min_depth = summary.min_depth.min(s.h.as_f64());
        summary.max_abs_q = summary.max_abs_q.max(s.q.abs().as_f64());
    }
}

fn emit_due<T: Real>(
    field: &mut Field<T>,
    config: &RunConfig<T>,
    sink: &mut dyn SnapshotSink<T>,
    snap_idx: &mut usize,
) -> Result<()> {
    while *snap_idx < config.snapshot_times.len() {
        let target = config.snapshot_times[*snap_idx];
        if field.time >= target || close_to(field.time, target) {
            field.time = target;
            sink.on_snapshot(field)?;
            *snap_idx += 1;
        } else {
            break;
        }
    }
    Ok(())
}

/// Write one snapshot as CSV: `x,b,h,q,eta` (17 significant digits, lossless
/// for f64), plus a `b_eff` column while a wet/dry bottom redefinition is in
/// force. `b` and `eta` always refer to the pristine bottom.
pub fn write_snapshot_csv<T: Real>(field: &Field<T>, path: &Path) -> Result<()> {
    let as_io = |e: std::io::Error| SolverError::io(path.display().to_string(), e);
    let mut out = Vec::with_capacity(field.n_cells() * 96 + 32);
    let b_eff = field.bathymetry.b_eff.as_deref();
    if b_eff.is_some() {
        writeln!(out, "x,b,h,q,eta,b_eff").map_err(as_io)?;
    } else {
        writeln!(out, "x,b,h,q,eta").map_err(as_io)?;
    }
    for j in 0..field.n_cells() {
        let x = field.grid.cell_centers[j].as_f64();
        let b = field.bathymetry.b[j].as_f64();
        let h = field.states[j].h.as_f64();
        let q = field.states[j].q.as_f64();
        let eta = (field.states[j].h + field.bathymetry.b[j]).as_f64();
        match b_eff {
            Some(be) => writeln!(
                out,
                "{x:.16e},{b:.16e},{h:.16e},{q:.16e},{eta:.16e},{:.16e}",
                be[j].as_f64()
            )
            .map_err(as_io)?,
            None => writeln!(out, "{x:.16e},{b:.16e},{h:.16e},{q:.16e},{eta:.16e}")
                .map_err(as_io)?,
        }
    }
    fs::write(path, out).map_err(as_io)
}

/// Parsed snapshot columns.
#[derive(Debug, Clone, Default)]
pub struct SnapshotData {
    pub x: Vec<f64>,
    pub b: Vec<f64>,
    pub h: Vec<f64>,
    pub q: Vec<f64>,
    pub eta: Vec<f64>,
    pub b_eff: Option<Vec<f64>>,
}

/// Read back a snapshot written by [`write_snapshot_csv`].
pub fn read_snapshot_csv(path: &Path) -> Result<SnapshotData> {
    let text =
        fs::read_to_string(path).map_err(|e| SolverError::io(path.display().to_string(), e))?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| SolverError::MalformedData {
        path: path.display().to_string(),
        reason: "empty file".into(),
    })?;
    let has_beff = header.trim_end() == "x,b,h,q,eta,b_eff";
    if !has_beff && header.trim_end() != "x,b,h,q,eta" {
        return Err(SolverError::MalformedData {
            path: path.display().to_string(),
            reason: format!("unexpected header '{header}'"),
        });
    }
    let mut data = SnapshotData {
        b_eff: has_beff.then(Vec::new),
        ..Default::default()
    };
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| SolverError::MalformedData {
                path: path.display().to_string(),
                reason: format!("line {}: {e}", lineno + 2),
            })?;
        let expected = if has_beff { 6 } else { 5 };
        if cols.len() != expected {
            return Err(SolverError::MalformedData {
                path: path.display().to_string(),
                reason: format!("line {}: expected {expected} columns", lineno + 2),
            });
        }
        data.x.push(cols[0]);
        data.b.push(cols[1]);
        data.h.push(cols[2]);
        data.q.push(cols[3]);
        data.eta.push(cols[4]);
        if let Some(be) = data.b_eff.as_mut() {
            be.push(cols[5]);
        }
    }
    Ok(data)
}
