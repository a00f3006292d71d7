//! Ghost-cell boundary conditions: reflective wall, prescribed surface level
//! (tidal forcing), prescribed discharge over an interval, and transmissive.

use std::sync::Arc;

use crate::domain::{Field, State};
use crate::error::{Result, SolverError};
use crate::scalar::Real;

/// Time-dependent boundary data.
pub type BoundaryFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// What happens at one end of the domain.
#[derive(Clone)]
pub enum BoundarySpec<T> {
    /// Reflective wall: mirrored depth and bottom, reversed discharge.
    Wall,
    /// Surface elevation prescribed as a function of time; the ghost depth is
    /// f(t) minus the mirrored ghost bottom, discharge extrapolated.
    PrescribedDepth(BoundaryFn<T>),
    /// Discharge prescribed over `active`; outside the interval the end acts
    /// as a wall. Depth extrapolated.
    PrescribedDischarge { q: BoundaryFn<T>, active: (T, T) },
    /// Copy the adjacent state and bottom.
    Transmissive,
}

impl<T> std::fmt::Debug for BoundarySpec<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            BoundarySpec::Wall => "Wall",
            BoundarySpec::PrescribedDepth(_) => "PrescribedDepth",
            BoundarySpec::PrescribedDischarge { .. } => "PrescribedDischarge",
            BoundarySpec::Transmissive => "Transmissive",
        };
        f.write_str(name)
    }
}

/// Boundary specs for both ends.
#[derive(Debug, Clone)]
pub struct BoundaryCondition<T> {
    pub left: BoundarySpec<T>,
    pub right: BoundarySpec<T>,
}

impl<T> BoundaryCondition<T> {
    pub fn walls() -> Self {
        Self { left: BoundarySpec::Wall, right: BoundarySpec::Wall }
    }
}

/// One ghost cell per side, ready for flux evaluation.
#[derive(Debug, Clone, Copy)]
pub struct Ghosts<T> {
    pub left: State<T>,
    pub right: State<T>,
    pub b_left: T,
    pub b_right: T,
}

/// Fill both ghost cells at time `t`.
pub fn fill_ghosts<T: Real>(
    field: &Field<T>,
    bc: &BoundaryCondition<T>,
    t: T,
) -> Result<Ghosts<T>> {
    let n = field.n_cells();
    let b = field.bathymetry.effective();
    let (sl, sr) = (field.states[0], field.states[n - 1]);
    let (left, b_left) = ghost_one(&bc.left, sl, b[0], t)?;
    let (right, b_right) = ghost_one(&bc.right, sr, b[n - 1], t)?;
    Ok(Ghosts { left, right, b_left, b_right })
}

fn ghost_one<T: Real>(
    spec: &BoundarySpec<T>,
    adjacent: State<T>,
    b_adjacent: T,
    t: T,
) -> Result<(State<T>, T)> {
    match spec {
        BoundarySpec::Wall => Ok((adjacent.mirror(), b_adjacent)),
        BoundarySpec::Transmissive => Ok((adjacent, b_adjacent)),
        BoundarySpec::PrescribedDepth(f) => {
            let h = f(t) - b_adjacent;
            if h < T::zero() {
                return Err(SolverError::BoundaryConsistency {
                    surface: f(t).as_f64(),
                    bottom: b_adjacent.as_f64(),
                });
            }
            Ok((State::new(h, adjacent.q), b_adjacent))
        }
        BoundarySpec::PrescribedDischarge { q, active } => {
            if t >= active.0 && t <= active.1 {
                Ok((State::new(adjacent.h, q(t)), b_adjacent))
            } else {
                Ok((adjacent.mirror(), b_adjacent))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{make_grid, Bathymetry, Field};
    use crate::flux::numerical_flux;

    fn uniform_field(h: f64, q: f64) -> Field<f64> {
        let grid = make_grid(0.0, 1.0, 4).unwrap();
        let states = vec![State::new(h, q); 4];
        let bath = Bathymetry::flat(&grid);
        Field::new(grid, states, bath).unwrap()
    }

    #[test]
    fn wall_reflects() {
        let field = uniform_field(2.0, 0.7);
        let g = fill_ghosts(&field, &BoundaryCondition::walls(), 0.0).unwrap();
        assert_eq!(g.left.h, 2.0);
        assert_eq!(g.left.q, -0.7);
        assert_eq!(g.right.q, -0.7);
    }

    #[test]
    fn wall_mass_flux_is_zero() {
        let u = State::new(1.7, 0.9);
        let phi = numerical_flux(u, u.mirror(), 9.81).unwrap();
        assert!(f64::abs(phi[0]) < 1e-13);
    }

    #[test]
    fn transmissive_keeps_uniform_fields_uniform() {
        let field = uniform_field(1.3, 0.2);
        let bc = BoundaryCondition {
            left: BoundarySpec::Transmissive,
            right: BoundarySpec::Transmissive,
        };
        let g = fill_ghosts(&field, &bc, 0.0).unwrap();
        assert_eq!(g.left, field.states[0]);
        assert_eq!(g.right, field.states[3]);
    }

    #[test]
    fn tidal_surface_at_reference_times() {
        // Test-3 forcing: surface 16 + phi(t), phi(t) = 4 + 4 sin(pi(4t/86400 - 1/2))
        let phi = |t: f64| 4.0 + 4.0 * (std::f64::consts::PI * (4.0 * t / 86400.0 - 0.5)).sin();
        assert!(phi(0.0).abs() < 1e-12);
        assert!((phi(10800.0) - 4.0).abs() < 1e-12);

        let field = uniform_field(16.0, 0.0);
        let f: BoundaryFn<f64> = Arc::new(move |t| 16.0 + phi(t));
        let bc = BoundaryCondition {
            left: BoundarySpec::PrescribedDepth(f),
            right: BoundarySpec::Wall,
        };
        let g0 = fill_ghosts(&field, &bc, 0.0).unwrap();
        assert!((g0.left.h + g0.b_left - 16.0).abs() < 1e-12);
        let g1 = fill_ghosts(&field, &bc, 10800.0).unwrap();
        assert!((g1.left.h + g1.b_left - 20.0).abs() < 1e-12);
    }

    #[test]
    fn prescribed_depth_below_bottom_errors() {
        let grid = make_grid(0.0, 1.0, 4).unwrap();
        let states = vec![State::new(1.0, 0.0); 4];
        let bath = Bathymetry::from_values(vec![5.0; 4]);
        let field = Field::new(grid, states, bath).unwrap();
        let bc = BoundaryCondition {
            left: BoundarySpec::PrescribedDepth(Arc::new(|_| 1.0)),
            right: BoundarySpec::Wall,
        };
        assert!(matches!(
            fill_ghosts(&field, &bc, 0.0),
            Err(SolverError::BoundaryConsistency { .. })
        ));
    }

    #[test]
    fn prescribed_discharge_switches_to_wall() {
        let field = uniform_field(0.4, 0.1);
        let bc = BoundaryCondition {
            left: BoundarySpec::PrescribedDischarge {
                q: Arc::new(|_| 0.8),
                active: (0.0, 0.2),
            },
            right: BoundarySpec::Wall,
        };
        let g = fill_ghosts(&field, &bc, 0.1).unwrap();
        assert_eq!(g.left.q, 0.8);
        assert_eq!(g.left.h, 0.4);
        let g = fill_ghosts(&field, &bc, 0.3).unwrap();
        assert_eq!(g.left.q, -0.1);
    }
}
