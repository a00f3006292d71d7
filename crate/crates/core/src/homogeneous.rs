//! One conservative step of the homogeneous system through the conservation
//! formula W_j ← W_j − (Δt/Δx)(F_{j+1/2} − F_{j−1/2}), plus CFL time-step
//! selection.

use crate::boundary::{fill_ghosts, BoundaryCondition};
use crate::domain::{Field, RunConfig, State};
use crate::error::{Result, SolverError};
use crate::flux::{abs_q_matrix, numerical_flux};
use crate::scalar::Real;
use crate::wetdry::{interface_modes, IfaceMode, FRONT_SCALE};

/// Mass flux through the two boundary interfaces of one step, for the mass
/// ledger.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryMassFlux<T> {
    pub left: T,
    pub right: T,
}

/// Negative depths beyond this are treated as instability, closer ones as
/// clippable. Draining wet/dry fronts overshoot much further than roundoff.
pub fn positivity_tolerance<T: Real>(config: &RunConfig<T>) -> T {
    if config.wet_dry {
        T::lit(FRONT_SCALE) * config.dry_eps
    } else {
        T::lit(1e-12)
    }
}

/// Largest stable time step: Δt = cfl·Δx / max_j(|u_j| + √(g h_j)) over wet
/// cells, clamped so the step neither overshoots `t_end` nor skips the next
/// scheduled snapshot.
pub fn cfl_dt<T: Real>(field: &Field<T>, config: &RunConfig<T>) -> Result<T> {
    let mut speed_max = T::zero();
    for s in &field.states {
        if !s.is_dry(config.dry_eps) {
            let speed = s.velocity().abs() + (config.g * s.h).sqrt();
            speed_max = speed_max.max(speed);
        }
    }
    if !(speed_max > T::zero()) {
        return Err(SolverError::AllDry);
    }
    let mut dt = config.cfl * field.grid.dx / speed_max;
    dt = dt.min(config.t_end - field.time);
    if let Some(next) = next_stop(config, field.time) {
        dt = dt.min(next - field.time);
    }
    Ok(dt)
}

/// First scheduled snapshot strictly ahead of `time`.
pub fn next_stop<T: Real>(config: &RunConfig<T>, time: T) -> Option<T> {
    config.snapshot_times.iter().copied().find(|&ts| ts > time)
}

/// Advance the field by one homogeneous step.
pub fn homogeneous_step<T: Real>(
    field: &Field<T>,
    dt: T,
    bc: &BoundaryCondition<T>,
    config: &RunConfig<T>,
) -> Result<Field<T>> {
    step_with_fluxes(field, dt, bc, config).map(|(f, _)| f)
}

/// Same as [`homogeneous_step`] but also reports the boundary mass fluxes.
pub fn step_with_fluxes<T: Real>(
    field: &Field<T>,
    dt: T,
    bc: &BoundaryCondition<T>,
    config: &RunConfig<T>,
) -> Result<(Field<T>, BoundaryMassFlux<T>)> {
    let n = field.n_cells();
    let ghosts = fill_ghosts(field, bc, field.time)?;

    let mut ext: Vec<State<T>> = Vec::with_capacity(n + 2);
    ext.push(ghosts.left);
    ext.extend_from_slice(&field.states);
    ext.push(ghosts.right);

    let modes = if config.wet_dry {
        let h_ext: Vec<T> = ext.iter().map(|s| s.h).collect();
        let b = &field.bathymetry.b;
        let mut b_ext: Vec<T> = Vec::with_capacity(n + 2);
        b_ext.push(b[0]);
        b_ext.extend_from_slice(b);
        b_ext.push(b[n - 1]);
        interface_modes(&h_ext, &b_ext, config.dry_eps)
    } else {
        vec![IfaceMode::Normal; n + 1]
    };

    let mut fluxes: Vec<[T; 2]> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        fluxes.push(interface_flux(ext[i], ext[i + 1], modes[i], config)?);
    }

    let lam = dt / field.grid.dx;
    let clip = positivity_tolerance(config);
    let mut states = Vec::with_capacity(n);
    for j in 0..n {
        let mut h = field.states[j].h - lam * (fluxes[j + 1][0] - fluxes[j][0]);
        let mut q = field.states[j].q - lam * (fluxes[j + 1][1] - fluxes[j][1]);
        if h < -clip {
            return Err(SolverError::PositivityFailure {
                cell: j,
                h: h.as_f64(),
                time: field.time.as_f64(),
            });
        }
        if h < T::zero() {
            h = T::zero();
            q = T::zero();
        }
        states.push(State::new(h, q));
    }

    let mut out = field.clone();
    out.states = states;
    out.time = field.time + dt;
    let boundary = BoundaryMassFlux { left: fluxes[0][0], right: fluxes[n][0] };
    Ok((out, boundary))
}

fn interface_flux<T: Real>(
    u: State<T>,
    v: State<T>,
    mode: IfaceMode,
    config: &RunConfig<T>,
) -> Result<[T; 2]> {
    let g = config.g;
    match mode {
        IfaceMode::Inert => Ok([T::zero(); 2]),
        IfaceMode::WallFromLeft => numerical_flux(u, u.mirror(), g),
        IfaceMode::WallFromRight => numerical_flux(v.mirror(), v, g),
        IfaceMode::Normal => {
            if !config.wet_dry {
                return numerical_flux(u, v, g);
            }
            // flooding interfaces may carry a dry side; guard its advection
            let eps = config.dry_eps;
            let mean_h = T::lit(0.5) * (u.h + v.h);
            if mean_h <= eps {
                return Ok([T::zero(); 2]);
            }
            let fu = guarded_flux(u, g, eps);
            let fv = guarded_flux(v, g, eps);
            let visc = abs_q_matrix(u, v, g)?.mul_vec([v.h - u.h, v.q - u.q]);
            let half = T::lit(0.5);
            Ok([
                half * (fu[0] + fv[0]) - half * visc[0],
                half * (fu[1] + fv[1]) - half * visc[1],
            ])
        }
    }
}

/// Physical flux with the momentum advection dropped on dry states, where
/// q is zero and q²/h is 0/0.
fn guarded_flux<T: Real>(w: State<T>, g: T, dry_eps: T) -> [T; 2] {
    let pressure = T::lit(0.5) * g * w.h * w.h;
    if w.h > dry_eps {
        [w.q, w.q * w.q / w.h + pressure]
    } else {
        [w.q, pressure]
    }
}
