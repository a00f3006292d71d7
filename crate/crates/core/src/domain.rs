//! Shared domain types: conserved state, grid geometry, bottom topography,
//! one time level of the solution, and the run configuration.

use std::sync::Arc;

use crate::error::{Result, SolverError};
use crate::scalar::Real;

/// Default dry-cell threshold in meters. Gates eigendecompositions and all
/// wet/dry logic.
pub const DEFAULT_DRY_EPS: f64 = 1e-6;

/// Conserved pair at one cell: water depth `h` \[m\] and discharge per unit
/// width `q = h u` \[m²/s\].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State<T> {
    pub h: T,
    pub q: T,
}

impl<T: Real> State<T> {
    pub fn new(h: T, q: T) -> Self {
        Self { h, q }
    }

    /// Depth-averaged velocity u = q/h. Only meaningful above the dry
    /// threshold; callers gate on wetness first.
    #[inline]
    pub fn velocity(&self) -> T {
        self.q / self.h
    }

    #[inline]
    pub fn is_dry(&self, dry_eps: T) -> bool {
        self.h < dry_eps
    }

    /// Wall reflection: same depth, reversed discharge.
    #[inline]
    pub fn mirror(&self) -> Self {
        Self { h: self.h, q: -self.q }
    }

    /// Arithmetic mean of two states; the Q-scheme evaluates its viscosity
    /// matrix here.
    #[inline]
    pub fn mean(a: Self, b: Self) -> Self {
        let half = T::lit(0.5);
        Self { h: half * (a.h + b.h), q: half * (a.q + b.q) }
    }
}

/// Uniform 1D grid of cells I_j = [x_{j-1/2}, x_{j+1/2}].
#[derive(Debug, Clone)]
pub struct Grid<T> {
    pub n_cells: usize,
    pub x_left: T,
    pub x_right: T,
    pub dx: T,
    pub cell_centers: Vec<T>,
}

/// Build a uniform grid with centered cell coordinates.
pub fn make_grid<T: Real>(x_left: T, x_right: T, n_cells: usize) -> Result<Grid<T>> {
    if n_cells < 2 {
        return Err(SolverError::InvalidGrid(format!(
            "need at least 2 cells, got {n_cells}"
        )));
    }
    if !(x_right > x_left) {
        return Err(SolverError::InvalidGrid(format!(
            "degenerate domain [{}, {}]",
            x_left.as_f64(),
            x_right.as_f64()
        )));
    }
    let dx = (x_right - x_left) / T::from_usize(n_cells).unwrap();
    let half = T::lit(0.5);
    let cell_centers = (0..n_cells)
        .map(|j| x_left + (T::from_usize(j).unwrap() + half) * dx)
        .collect();
    Ok(Grid { n_cells, x_left, x_right, dx, cell_centers })
}

/// Continuous bottom function used to discretize and to re-sample profiles.
pub type BottomFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Bottom elevations collocated with the cell centers.
///
/// `b` is the pristine discretized bottom and never mutates after
/// construction. `b_eff`, when present, is this step's wet/dry redefinition
/// of the bottom; sources read it, output keeps reporting `b`.
#[derive(Clone)]
pub struct Bathymetry<T> {
    pub b: Vec<T>,
    pub b_eff: Option<Vec<T>>,
    pub analytic: Option<BottomFn<T>>,
}

impl<T: Real> Bathymetry<T> {
    /// Discretize a continuous bottom at the grid's cell centers.
    pub fn from_fn(grid: &Grid<T>, f: BottomFn<T>) -> Self {
        let b = grid.cell_centers.iter().map(|&x| f(x)).collect();
        Self { b, b_eff: None, analytic: Some(f) }
    }

    pub fn from_values(b: Vec<T>) -> Self {
        Self { b, b_eff: None, analytic: None }
    }

    pub fn flat(grid: &Grid<T>) -> Self {
        Self::from_values(vec![T::zero(); grid.n_cells])
    }

    /// Bottom the solver should act on: the redefined one when a wet/dry
    /// step installed it, the pristine one otherwise.
    #[inline]
    pub fn effective(&self) -> &[T] {
        self.b_eff.as_deref().unwrap_or(&self.b)
    }
}

impl<T: std::fmt::Debug> std::fmt::Debug for Bathymetry<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Bathymetry")
            .field("b", &self.b)
            .field("b_eff", &self.b_eff)
            .field("analytic", &self.analytic.is_some())
            .finish()
    }
}

/// One time level of the solution on a grid.
#[derive(Debug, Clone)]
pub struct Field<T> {
    pub grid: Grid<T>,
    pub states: Vec<State<T>>,
    pub bathymetry: Bathymetry<T>,
    pub time: T,
}

impl<T: Real> Field<T> {
    pub fn new(grid: Grid<T>, states: Vec<State<T>>, bathymetry: Bathymetry<T>) -> Result<Self> {
        if states.len() != grid.n_cells || bathymetry.b.len() != grid.n_cells {
            return Err(SolverError::InvalidGrid(format!(
                "length mismatch: {} cells, {} states, {} bottom values",
                grid.n_cells,
                states.len(),
                bathymetry.b.len()
            )));
        }
        for (j, s) in states.iter().enumerate() {
            let eta = s.h + bathymetry.b[j];
            if !(s.h >= T::zero()) || !s.q.is_finite() || !eta.is_finite() {
                return Err(SolverError::PositivityFailure {
                    cell: j,
                    h: s.h.as_f64(),
                    time: 0.0,
                });
            }
        }
        Ok(Self { grid, states, bathymetry, time: T::zero() })
    }

    pub fn n_cells(&self) -> usize {
        self.grid.n_cells
    }

    /// Free surface η_j = h_j + b_j against the pristine bottom.
    pub fn free_surface(&self) -> Vec<T> {
        self.states
            .iter()
            .zip(&self.bathymetry.b)
            .map(|(s, &b)| s.h + b)
            .collect()
    }

    /// Total water volume per unit width, Σ h_j Δx.
    pub fn total_mass(&self) -> T {
        self.states.iter().map(|s| s.h).sum::<T>() * self.grid.dx
    }

    pub fn depths(&self) -> Vec<T> {
        self.states.iter().map(|s| s.h).collect()
    }
}

/// Free-function form of the surface accessor.
pub fn free_surface<T: Real>(field: &Field<T>) -> Vec<T> {
    field.free_surface()
}

/// Which splitting scheme integrates the source term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Trapezoidal source step with the central bottom slope.
    QTra1,
    /// Upwinded source ODEs through D_L/D_R, averaged.
    QTra2,
    /// Q-tra2 plus semi-implicit Manning friction.
    QTra3,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::QTra1 => "qtra1",
            Scheme::QTra2 => "qtra2",
            Scheme::QTra3 => "qtra3",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "qtra1" | "q-tra1" => Ok(Scheme::QTra1),
            "qtra2" | "q-tra2" => Ok(Scheme::QTra2),
            "qtra3" | "q-tra3" => Ok(Scheme::QTra3),
            other => Err(format!("unknown scheme '{other}' (expected qtra1|qtra2|qtra3)")),
        }
    }
}

/// Run parameters shared by every module.
#[derive(Debug, Clone)]
pub struct RunConfig<T> {
    pub scheme: Scheme,
    /// Cell count for the driver's discretization.
    pub n_cells: usize,
    /// CFL number in (0, 1].
    pub cfl: T,
    /// Gravitational acceleration [m/s²].
    pub g: T,
    /// Manning roughness coefficient, used by QTra3 only.
    pub manning: T,
    /// Depth below which a cell counts as dry \[m\].
    pub dry_eps: T,
    /// Simulation end time \[s\].
    pub t_end: T,
    /// Times at which the driver emits snapshots, sorted ascending.
    pub snapshot_times: Vec<T>,
    /// Enables bottom redefinition, front discharge zeroing and front-safe
    /// positivity clipping.
    pub wet_dry: bool,
    /// Replaces sign(λ) by λ/max(|λ|, eigen_eps) near critical states.
    pub sonic_regularization: bool,
}

impl<T: Real> RunConfig<T> {
    pub fn new(scheme: Scheme) -> Self {
        Self {
            scheme,
            n_cells: 100,
            cfl: T::lit(0.5),
            g: T::lit(9.81),
            manning: T::zero(),
            dry_eps: T::lit(DEFAULT_DRY_EPS),
            t_end: T::one(),
            snapshot_times: Vec::new(),
            wet_dry: false,
            sonic_regularization: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_cells < 2 {
            return Err(SolverError::InvalidConfig(format!(
                "need at least 2 cells, got {}",
                self.n_cells
            )));
        }
        if !(self.cfl > T::zero() && self.cfl <= T::one()) {
            return Err(SolverError::InvalidConfig(format!(
                "cfl must lie in (0, 1], got {}",
                self.cfl.as_f64()
            )));
        }
        if !(self.g > T::zero()) {
            return Err(SolverError::InvalidConfig("g must be positive".into()));
        }
        if !(self.dry_eps > T::zero()) {
            return Err(SolverError::InvalidConfig("dry_eps must be positive".into()));
        }
        if self.manning < T::zero() {
            return Err(SolverError::InvalidConfig("manning must be nonnegative".into()));
        }
        if self.t_end < T::zero() {
            return Err(SolverError::InvalidConfig("t_end must be nonnegative".into()));
        }
        let mut prev = None;
        for &t in &self.snapshot_times {
            if t > self.t_end {
                return Err(SolverError::InvalidConfig(format!(
                    "snapshot time {} exceeds t_end {}",
                    t.as_f64(),
                    self.t_end.as_f64()
                )));
            }
            if let Some(p) = prev {
                if t < p {
                    return Err(SolverError::InvalidConfig(
                        "snapshot times must be sorted ascending".into(),
                    ));
                }
            }
            prev = Some(t);
        }
        Ok(())
    }
}
