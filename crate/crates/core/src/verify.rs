//! C-property checker, convergence-order estimation, and scheme comparison.

use crate::boundary::BoundaryCondition;
use crate::domain::{make_grid, Bathymetry, BottomFn, Field, RunConfig, Scheme, State};
use crate::error::{Result, SolverError};
use crate::homogeneous::{cfl_dt, homogeneous_step};
use crate::scalar::Real;
use crate::scenarios::{analytic_error, ErrorNorm, Scenario};
use crate::sources::{
    source_step_friction, source_step_trapezoidal, source_step_upwind, SourceContext,
};

/// Absolute tolerance for the machine-precision C-property claims.
pub const EXACT_TOL: f64 = 1e-12;

/// Minimum measured order for the Θ(Δx²) classification.
pub const APPROX_ORDER_MIN: f64 = 1.8;

/// Outcome of a C-property check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    Exact,
    Approximate { order: f64 },
    Fails,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::Exact => write!(f, "Exact"),
            Classification::Approximate { order } => write!(f, "Approximate(order≈{order:.2})"),
            Classification::Fails => write!(f, "Fails"),
        }
    }
}

/// Per-grid stationary-defect measurements and the resulting classification.
#[derive(Debug, Clone)]
pub struct CPropertyReport {
    pub scheme: Scheme,
    pub n_steps: usize,
    pub n_cells: Vec<usize>,
    pub max_abs_q: Vec<f64>,
    pub max_abs_dh: Vec<f64>,
    pub classification: Classification,
}

impl std::fmt::Display for CPropertyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "C-property check: scheme={} steps={}",
            self.scheme, self.n_steps
        )?;
        writeln!(f, "{:>8} {:>14} {:>14}", "cells", "max|q|", "max|h-h0|")?;
        for i in 0..self.n_cells.len() {
            writeln!(
                f,
                "{:>8} {:>14.6e} {:>14.6e}",
                self.n_cells[i], self.max_abs_q[i], self.max_abs_dh[i]
            )?;
        }
        write!(f, "classification: {}", self.classification)
    }
}

impl CPropertyReport {
    /// Key=value lines for CI parsing.
    pub fn key_values(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("scheme={}\n", self.scheme));
        out.push_str(&format!("n_steps={}\n", self.n_steps));
        for i in 0..self.n_cells.len() {
            out.push_str(&format!(
                "grid_{}_max_abs_q={:e}\n",
                self.n_cells[i], self.max_abs_q[i]
            ));
            out.push_str(&format!(
                "grid_{}_max_abs_dh={:e}\n",
                self.n_cells[i], self.max_abs_dh[i]
            ));
        }
        let class = match self.classification {
            Classification::Exact => "exact".to_string(),
            Classification::Approximate { order } => format!("approximate\norder={order:.4}"),
            Classification::Fails => "fails".to_string(),
        };
        out.push_str(&format!("classification={class}\n"));
        out
    }
}

/// Initialize lake-at-rest over `bottom`, run `n_steps` full splitting steps
/// per grid size with wall boundaries, measure the stationary defect, and
/// classify.
pub fn check_c_property<T: Real>(
    scheme: Scheme,
    bottom: &BottomFn<T>,
    domain: (T, T),
    surface_level: T,
    grid_sizes: &[usize],
    n_steps: usize,
    config: &RunConfig<T>,
) -> Result<CPropertyReport> {
    let mut report = CPropertyReport {
        scheme,
        n_steps,
        n_cells: Vec::new(),
        max_abs_q: Vec::new(),
        max_abs_dh: Vec::new(),
        classification: Classification::Fails,
    };
    let bc = BoundaryCondition::walls();
    for &n in grid_sizes {
        let grid = make_grid(domain.0, domain.1, n)?;
        let bath = Bathymetry::from_fn(&grid, bottom.clone());
        let states: Vec<State<T>> = bath
            .b
            .iter()
            .map(|&b| State::new(surface_level - b, T::zero()))
            .collect();
        if let Some(s) = states.iter().find(|s| !(s.h > T::zero())) {
            return Err(SolverError::InvalidConfig(format!(
                "surface level {} does not cover the bottom (depth {})",
                surface_level.as_f64(),
                s.h.as_f64()
            )));
        }
        let h0: Vec<T> = states.iter().map(|s| s.h).collect();
        let mut field = Field::new(grid, states, bath)?;

        let mut cfg = config.clone();
        cfg.scheme = scheme;
        cfg.n_cells = n;
        cfg.t_end = T::max_value();
        cfg.snapshot_times.clear();

        for _ in 0..n_steps {
            let dt = cfl_dt(&field, &cfg)?;
            let ctx = SourceContext::new(&field, &bc)?;
            let hat = homogeneous_step(&field, dt, &bc, &cfg)?;
            field = match scheme {
                Scheme::QTra1 => source_step_trapezoidal(&hat, &ctx, dt, &cfg)?,
                Scheme::QTra2 => source_step_upwind(&hat, &field, &ctx, dt, &cfg)?,
                Scheme::QTra3 => source_step_friction(&hat, &field, &ctx, dt, &cfg)?,
            };
        }

        let mut max_q = 0.0f64;
        let mut max_dh = 0.0f64;
        for (s, &h_init) in field.states.iter().zip(&h0) {
            max_q = max_q.max(s.q.abs().as_f64());
            max_dh = max_dh.max((s.h - h_init).abs().as_f64());
        }
        report.n_cells.push(n);
        report.max_abs_q.push(max_q);
        report.max_abs_dh.push(max_dh);
    }

    report.classification = classify(&report, domain.1.as_f64() - domain.0.as_f64());
    Ok(report)
}

fn classify(report: &CPropertyReport, length: f64) -> Classification {
    let q_ok = report.max_abs_q.iter().all(|&q| q <= EXACT_TOL);
    let dh_exact = report.max_abs_dh.iter().all(|&d| d <= EXACT_TOL);
    if q_ok && dh_exact {
        return Classification::Exact;
    }
    if !q_ok {
        return Classification::Fails;
    }
    // q holds at machine precision; grade the depth drift in Δx
    if report.max_abs_dh.iter().any(|&d| d <= 0.0) {
        return Classification::Exact;
    }
    let pts: Vec<(f64, f64)> = report
        .n_cells
        .iter()
        .zip(&report.max_abs_dh)
        .map(|(&n, &d)| (length / n as f64, d))
        .collect();
    match convergence_order(&pts) {
        Ok(order) if order >= APPROX_ORDER_MIN => Classification::Approximate { order },
        _ => Classification::Fails,
    }
}

/// Least-squares slope of log(error) against log(dx).
pub fn convergence_order(errors: &[(f64, f64)]) -> Result<f64> {
    if errors.len() < 2 {
        return Err(SolverError::InvalidConfig(
            "convergence order needs at least two (dx, error) points".into(),
        ));
    }
    if errors.windows(2).any(|w| w[1].0 >= w[0].0) {
        return Err(SolverError::InvalidConfig(
            "dx values must decrease strictly".into(),
        ));
    }
    if errors.iter().any(|&(_, e)| e <= 0.0) {
        return Err(SolverError::InvalidConfig(
            "errors must be positive to define an order".into(),
        ));
    }
    let n = errors.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(dx, e) in errors {
        let (x, y) = (dx.ln(), e.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    Ok((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

/// Pairwise L1/Linf surface differences between schemes at the scenario's
/// end time.
#[derive(Debug, Clone)]
pub struct SchemeComparison {
    pub schemes: Vec<Scheme>,
    pub l1: Vec<Vec<f64>>,
    pub linf: Vec<Vec<f64>>,
}

impl std::fmt::Display for SchemeComparison {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "pairwise surface differences at t_end")?;
        for i in 0..self.schemes.len() {
            for j in (i + 1)..self.schemes.len() {
                writeln!(
                    f,
                    "{} vs {}: L1 = {:.6e}, Linf = {:.6e}",
                    self.schemes[i], self.schemes[j], self.l1[i][j], self.linf[i][j]
                )?;
            }
        }
        Ok(())
    }
}

/// Run every scheme on the scenario and tabulate pairwise surface
/// differences over wet cells at the final time.
pub fn compare_schemes<T: Real>(
    scenario: &Scenario<T>,
    schemes: &[Scheme],
    config: &RunConfig<T>,
) -> Result<SchemeComparison> {
    if schemes.contains(&Scheme::QTra3) && scenario.manning.is_none() && config.manning <= T::zero()
    {
        return Err(SolverError::InvalidConfig(
            "qtra3 in a comparison requires a Manning coefficient".into(),
        ));
    }
    let mut fields = Vec::with_capacity(schemes.len());
    for &scheme in schemes {
        let mut cfg = config.clone();
        cfg.scheme = scheme;
        let (field, _) = crate::driver::run_to_end(scenario, &cfg)?;
        fields.push(field);
    }
    let m = schemes.len();
    let mut l1 = vec![vec![0.0; m]; m];
    let mut linf = vec![vec![0.0; m]; m];
    let dry_eps = config.dry_eps;
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let (fa, fb) = (&fields[i], &fields[j]);
            let (ea, eb) = (fa.free_surface(), fb.free_surface());
            let mut sum = T::zero();
            let mut max = T::zero();
            for c in 0..fa.n_cells() {
                if fa.states[c].is_dry(dry_eps) && fb.states[c].is_dry(dry_eps) {
                    continue;
                }
                let d = (ea[c] - eb[c]).abs();
                sum = sum + d;
                max = max.max(d);
            }
            l1[i][j] = (sum * fa.grid.dx).as_f64();
            linf[i][j] = max.as_f64();
        }
    }
    Ok(SchemeComparison { schemes: schemes.to_vec(), l1, linf })
}

/// Surface error against the scenario's analytic reference after a full run.
pub fn run_error_vs_reference<T: Real>(
    scenario: &Scenario<T>,
    config: &RunConfig<T>,
    norm: ErrorNorm,
) -> Result<T> {
    let (field, _) = crate::driver::run_to_end(scenario, config)?;
    analytic_error(&field, scenario, norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn convergence_order_examples() {
        let o = convergence_order(&[(0.1, 1e-2), (0.05, 2.5e-3)]).unwrap();
        assert!((o - 2.0).abs() < 1e-12);
        let o = convergence_order(&[(0.1, 1e-2), (0.05, 5e-3)]).unwrap();
        assert!((o - 1.0).abs() < 1e-12);
        let o = convergence_order(&[(0.1, 3e-4), (0.05, 3e-4)]).unwrap();
        assert!(o.abs() < 1e-12);
    }

    #[test]
    fn convergence_order_rejects_bad_input() {
        assert!(convergence_order(&[(0.1, 1e-2)]).is_err());
        assert!(convergence_order(&[(0.05, 1e-2), (0.1, 1e-3)]).is_err());
        assert!(convergence_order(&[(0.1, 1e-2), (0.05, 0.0)]).is_err());
    }

    #[test]
    fn flat_bottom_is_exact_for_every_scheme() {
        let bottom: BottomFn<f64> = Arc::new(|_| 0.0);
        for scheme in [Scheme::QTra1, Scheme::QTra2, Scheme::QTra3] {
            let cfg = RunConfig::new(scheme);
            let report = check_c_property(
                scheme,
                &bottom,
                (0.0, 1.0),
                1.0,
                &[20, 40],
                5,
                &cfg,
            )
            .unwrap();
            assert_eq!(report.classification, Classification::Exact, "{scheme}");
            assert!(report.max_abs_q.iter().all(|&q| q == 0.0));
            assert!(report.max_abs_dh.iter().all(|&d| d == 0.0));
        }
    }

    #[test]
    fn qtra2_is_exact_on_a_bump() {
        let bottom: BottomFn<f64> = Arc::new(crate::scenarios::scaled_bump);
        let cfg = RunConfig::new(Scheme::QTra2);
        let report =
            check_c_property(Scheme::QTra2, &bottom, (0.0, 1.0), 1.0, &[25, 50], 10, &cfg)
                .unwrap();
        assert_eq!(report.classification, Classification::Exact);
    }

    #[test]
    fn surface_below_bottom_is_rejected() {
        let bottom: BottomFn<f64> = Arc::new(|_| 2.0);
        let cfg = RunConfig::new(Scheme::QTra2);
        assert!(check_c_property(
            Scheme::QTra2,
            &bottom,
            (0.0, 1.0),
            1.0,
            &[10],
            1,
            &cfg
        )
        .is_err());
    }

    #[test]
    fn check_is_deterministic() {
        let bottom: BottomFn<f64> = Arc::new(crate::scenarios::scaled_bump);
        let cfg = RunConfig::new(Scheme::QTra1);
        let a = check_c_property(Scheme::QTra1, &bottom, (0.0, 1.0), 1.0, &[30, 60], 5, &cfg)
            .unwrap();
        let b = check_c_property(Scheme::QTra1, &bottom, (0.0, 1.0), 1.0, &[30, 60], 5, &cfg)
            .unwrap();
        assert_eq!(a.max_abs_q, b.max_abs_q);
        assert_eq!(a.max_abs_dh, b.max_abs_dh);
    }

    #[test]
    fn comparing_a_scheme_with_itself_is_zero() {
        let s = crate::scenarios::test2_stationary::<f64>();
        let mut cfg = s.default_config(Scheme::QTra2);
        cfg.n_cells = 25;
        cfg.t_end = 0.02;
        let cmp = compare_schemes(&s, &[Scheme::QTra2, Scheme::QTra2], &cfg).unwrap();
        assert_eq!(cmp.l1[0][1], 0.0);
        assert_eq!(cmp.linf[0][1], 0.0);
    }

    #[test]
    fn schemes_disagree_on_the_stationary_case() {
        let s = crate::scenarios::test2_stationary::<f64>();
        let mut cfg = s.default_config(Scheme::QTra2);
        cfg.n_cells = 25;
        cfg.t_end = 0.05;
        let cmp = compare_schemes(&s, &[Scheme::QTra1, Scheme::QTra2], &cfg).unwrap();
        assert!(cmp.l1[0][1] > 0.0);
        assert!(cmp.linf[0][1] > cmp.l1[0][1]);
        assert!(format!("{cmp}").contains("qtra1 vs qtra2"));
    }

    #[test]
    fn qtra3_comparison_needs_manning() {
        let s = crate::scenarios::test2_stationary::<f64>();
        let cfg = s.default_config(Scheme::QTra2);
        assert!(compare_schemes(&s, &[Scheme::QTra2, Scheme::QTra3], &cfg).is_err());
    }
}
