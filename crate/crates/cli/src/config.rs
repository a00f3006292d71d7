//! Resolution of scenario and run configuration from flags plus an optional
//! flat key=value config file. Flags win over file values, file values win
//! over scenario defaults.

use std::path::{Path, PathBuf};

use swsplit::domain::Scheme;
use swsplit::scenarios::{self, load_bottom_profile};
use swsplit::{RunConfig64, Scenario64};

/// Flag-level inputs to the resolver; `None` means "not given".
#[derive(Debug, Default, Clone)]
pub struct RunRequest {
    pub test: Option<u8>,
    pub scheme: Option<Scheme>,
    pub cells: Option<usize>,
    pub cfl: Option<f64>,
    pub t_end: Option<f64>,
    pub snapshots: Option<Vec<f64>>,
    pub manning: Option<f64>,
    pub out: Option<PathBuf>,
    pub bottom_file: Option<PathBuf>,
    pub paper_literal_bump: bool,
}

/// A usage problem: reported on stderr, exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

/// Parse a flat key=value config file. Keys are the flag names without
/// dashes: test, scheme, cells, cfl, tend, snapshots, manning, out,
/// bottomfile, paperliteralbump.
pub fn parse_config_file(path: &Path) -> Result<RunRequest, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut req = RunRequest::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key=value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| usage(format!("config line {}: bad {what} '{value}'", lineno + 1));
        match key {
            "test" => req.test = Some(value.parse().map_err(|_| bad("test"))?),
            "scheme" => req.scheme = Some(value.parse().map_err(|e| usage(format!("config line {}: {e}", lineno + 1)))?),
            "cells" => req.cells = Some(value.parse().map_err(|_| bad("cells"))?),
            "cfl" => req.cfl = Some(value.parse().map_err(|_| bad("cfl"))?),
            "tend" => req.t_end = Some(value.parse().map_err(|_| bad("tend"))?),
            "manning" => req.manning = Some(value.parse().map_err(|_| bad("manning"))?),
            "out" => req.out = Some(PathBuf::from(value)),
            "bottomfile" => req.bottom_file = Some(PathBuf::from(value)),
            "paperliteralbump" => {
                req.paper_literal_bump = match value {
                    "true" | "1" | "yes" => true,
                    "false" | "0" | "no" => false,
                    _ => return Err(bad("flag")),
                }
            }
            "snapshots" => {
                let times: Result<Vec<f64>, _> =
                    value.split(',').map(|t| t.trim().parse::<f64>()).collect();
                req.snapshots = Some(times.map_err(|_| bad("snapshots"))?);
            }
            other => return Err(usage(format!("config line {}: unknown key '{other}'", lineno + 1))),
        }
    }
    Ok(req)
}

fn merged(flags: RunRequest, file: Option<RunRequest>) -> RunRequest {
    let Some(file) = file else { return flags };
    RunRequest {
        test: flags.test.or(file.test),
        scheme: flags.scheme.or(file.scheme),
        cells: flags.cells.or(file.cells),
        cfl: flags.cfl.or(file.cfl),
        t_end: flags.t_end.or(file.t_end),
        snapshots: flags.snapshots.or(file.snapshots),
        manning: flags.manning.or(file.manning),
        out: flags.out.or(file.out),
        bottom_file: flags.bottom_file.or(file.bottom_file),
        paper_literal_bump: flags.paper_literal_bump || file.paper_literal_bump,
    }
}

/// Resolved run: the scenario, its run configuration, and the output
/// directory.
pub struct ResolvedRun {
    pub scenario: Scenario64,
    pub config: RunConfig64,
    pub out_dir: PathBuf,
}

/// Merge flags over the optional config file, apply scenario defaults, and
/// validate everything that counts as a usage problem.
pub fn resolve(flags: RunRequest, file: Option<RunRequest>) -> Result<ResolvedRun, UsageError> {
    let req = merged(flags, file);
    let test = req.test.ok_or_else(|| usage("missing --test (or 'test=' in the config file)"))?;
    let scheme =
        req.scheme.ok_or_else(|| usage("missing --scheme (or 'scheme=' in the config file)"))?;
    if !(1..=4).contains(&test) {
        return Err(usage(format!("unknown test {test} (expected 1..4)")));
    }

    let scenario: Scenario64 = if test == 3 {
        match &req.bottom_file {
            Some(path) => {
                let points = load_bottom_profile(path)
                    .map_err(|e| usage(format!("bottom file: {e}")))?;
                scenarios::test3_tidal_wave_with_profile(&points)
            }
            None => scenarios::test3_tidal_wave(),
        }
    } else {
        scenarios::by_number(test, req.paper_literal_bump).map_err(|e| usage(e.to_string()))?
    };

    if scheme == Scheme::QTra3 && scenario.manning.is_none() && req.manning.is_none() {
        return Err(usage(format!(
            "test {test} has no friction; running qtra3 on it requires an explicit --manning (use --manning 0 for a frictionless run)"
        )));
    }
    if scheme != Scheme::QTra3 && scenario.wet_dry {
        return Err(usage(format!(
            "test {test} develops dry cells; only qtra3 handles the wet/dry treatment"
        )));
    }

    let mut config = scenario.default_config(scheme);
    if let Some(cells) = req.cells {
        config.n_cells = cells;
    }
    if let Some(cfl) = req.cfl {
        config.cfl = cfl;
    }
    if let Some(t_end) = req.t_end {
        config.t_end = t_end;
    }
    if let Some(m) = req.manning {
        config.manning = m;
    }
    config.snapshot_times = req.snapshots.unwrap_or_else(|| vec![config.t_end]);
    config.validate().map_err(|e| usage(e.to_string()))?;

    Ok(ResolvedRun {
        scenario,
        config,
        out_dir: req.out.unwrap_or_else(|| PathBuf::from("out")),
    })
}
