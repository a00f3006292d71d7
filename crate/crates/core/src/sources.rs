//! The three source-term steps that close one splitting step: trapezoidal
//! (Q-tra1), upwinded left/right average (Q-tra2), and semi-implicit Manning
//! friction on top of the upwinding (Q-tra3).

use crate::boundary::{fill_ghosts, BoundaryCondition};
use crate::domain::{Field, RunConfig, State};
use crate::error::{Result, SolverError};
use crate::flux::InterfaceDecomposition;
use crate::homogeneous::positivity_tolerance;
use crate::scalar::Real;
use crate::wetdry::{interface_modes, IfaceMode};

/// Discrete bottom slopes and the pre-step depths the source formulas need.
///
/// One-sided slopes use mirrored ghost bottoms at the ends (b_{-1} = b_0,
/// b_n = b_{n-1}), so the end-cell one-sided slopes vanish at walls. Slopes
/// are taken on the effective bottom so a wet/dry redefinition feeds through.
pub struct SourceContext<T> {
    pub b_prime_central: Vec<T>,
    pub b_prime_left: Vec<T>,
    pub b_prime_right: Vec<T>,
    /// Depths at t^n, before the homogeneous step.
    pub h_prev: Vec<T>,
    /// Ghost states of the previous field, for interface means at the ends.
    pub ghost_left: State<T>,
    pub ghost_right: State<T>,
}

impl<T: Real> SourceContext<T> {
    pub fn new(prev_field: &Field<T>, bc: &BoundaryCondition<T>) -> Result<Self> {
        let n = prev_field.n_cells();
        let dx = prev_field.grid.dx;
        let b = prev_field.bathymetry.effective();
        let ghosts = fill_ghosts(prev_field, bc, prev_field.time)?;

        let b_at = |j: isize| -> T {
            if j < 0 {
                b[0]
            } else if j as usize >= n {
                b[n - 1]
            } else {
                b[j as usize]
            }
        };
        let two_dx = T::lit(2.0) * dx;
        let mut central = Vec::with_capacity(n);
        let mut left = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        for j in 0..n as isize {
            central.push((b_at(j + 1) - b_at(j - 1)) / two_dx);
            left.push((b_at(j) - b_at(j - 1)) / dx);
            right.push((b_at(j + 1) - b_at(j)) / dx);
        }
        Ok(Self {
            b_prime_central: central,
            b_prime_left: left,
            b_prime_right: right,
            h_prev: prev_field.depths(),
            ghost_left: ghosts.left,
            ghost_right: ghosts.right,
        })
    }
}

/// Q-tra1 source step: h untouched (the source has no mass component), q
/// integrated with the trapezoidal rule over the pre-step and hat depths,
/// central bottom slope.
pub fn source_step_trapezoidal<T: Real>(
    hat_field: &Field<T>,
    ctx: &SourceContext<T>,
    dt: T,
    config: &RunConfig<T>,
) -> Result<Field<T>> {
    let half_dt = T::lit(0.5) * dt;
    let mut out = hat_field.clone();
    for j in 0..out.n_cells() {
        let hat = hat_field.states[j];
        out.states[j].q =
            hat.q - config.g * ctx.b_prime_central[j] * half_dt * (ctx.h_prev[j] + hat.h);
    }
    Ok(out)
}

/// Q-tra2 source step: integrate the upwinded ODEs for both families with
/// coefficients frozen at the previous step's interface means, then average.
pub fn source_step_upwind<T: Real>(
    hat_field: &Field<T>,
    prev_field: &Field<T>,
    ctx: &SourceContext<T>,
    dt: T,
    config: &RunConfig<T>,
) -> Result<Field<T>> {
    upwind_like_step(hat_field, prev_field, ctx, dt, config, None)
}

/// Q-tra3 source step: as Q-tra2 plus Manning friction, explicit in the
/// h-row and semi-implicit in the q-row.
pub fn source_step_friction<T: Real>(
    hat_field: &Field<T>,
    prev_field: &Field<T>,
    ctx: &SourceContext<T>,
    dt: T,
    config: &RunConfig<T>,
) -> Result<Field<T>> {
    upwind_like_step(hat_field, prev_field, ctx, dt, config, Some(config.manning))
}

struct Family<T> {
    d12: T,
    d22: T,
    h_bar: T,
    b_prime: T,
    q_sum: T,
    h_sum: T,
}

fn upwind_like_step<T: Real>(
    hat_field: &Field<T>,
    prev_field: &Field<T>,
    ctx: &SourceContext<T>,
    dt: T,
    config: &RunConfig<T>,
    manning: Option<T>,
) -> Result<Field<T>> {
    let n = hat_field.n_cells();
    let g = config.g;
    let eps = config.dry_eps;
    let half = T::lit(0.5);

    let mut ext: Vec<State<T>> = Vec::with_capacity(n + 2);
    ext.push(ctx.ghost_left);
    ext.extend_from_slice(&prev_field.states);
    ext.push(ctx.ghost_right);

    let modes = if config.wet_dry {
        let h_ext: Vec<T> = ext.iter().map(|s| s.h).collect();
        let b = &prev_field.bathymetry.b;
        let mut b_ext: Vec<T> = Vec::with_capacity(n + 2);
        b_ext.push(b[0]);
        b_ext.extend_from_slice(b);
        b_ext.push(b[n - 1]);
        interface_modes(&h_ext, &b_ext, eps)
    } else {
        vec![IfaceMode::Normal; n + 1]
    };

    let clip = positivity_tolerance(config);
    let mut out = hat_field.clone();
    for j in 0..n {
        if prev_field.states[j].is_dry(eps) {
            continue;
        }
        let hat = hat_field.states[j];
        let mut acc_h = T::zero();
        let mut acc_q = T::zero();
        for (is_left, iface, b_prime) in [
            (true, j, ctx.b_prime_left[j]),
            (false, j + 1, ctx.b_prime_right[j]),
        ] {
            let fam = if modes[iface] != IfaceMode::Normal {
                None
            } else {
                let (wl, wr) = (ext[iface], ext[iface + 1]);
                let h_bar = half * (wl.h + wr.h);
                if h_bar <= eps {
                    None
                } else {
                    let d = InterfaceDecomposition::at(wl, wr, g, config.sonic_regularization)?;
                    let m = if is_left { d.d_left } else { d.d_right };
                    Some(Family {
                        d12: m.at(0, 1),
                        d22: m.at(1, 1),
                        h_bar,
                        b_prime,
                        q_sum: wl.q + wr.q,
                        h_sum: wl.h + wr.h,
                    })
                }
            };
            let result = match (&fam, manning) {
                (None, _) => hat,
                (Some(f), None) => upwind_family(hat, f, dt, g),
                (Some(f), Some(m)) => friction_family(hat, f, dt, g, m, j)?,
            };
            acc_h = acc_h + result.h;
            acc_q = acc_q + result.q;
        }
        let mut h = half * acc_h;
        let mut q = half * acc_q;
        if h < -clip {
            return Err(SolverError::PositivityFailure {
                cell: j,
                h: h.as_f64(),
                time: hat_field.time.as_f64(),
            });
        }
        if h < T::zero() {
            h = T::zero();
            q = T::zero();
        }
        out.states[j] = State::new(h, q);
    }
    Ok(out)
}

fn upwind_family<T: Real>(hat: State<T>, f: &Family<T>, dt: T, g: T) -> State<T> {
    let s = dt * g * f.h_bar * f.b_prime;
    State::new(hat.h - f.d12 * s, hat.q - f.d22 * s)
}

fn friction_family<T: Real>(
    hat: State<T>,
    f: &Family<T>,
    dt: T,
    g: T,
    manning: T,
    cell: usize,
) -> Result<State<T>> {
    let s = dt * g * f.h_bar * f.b_prime;
    let u_abs = (f.q_sum / f.h_sum).abs();
    let h_pow = f.h_bar.powf(T::lit(-4.0 / 3.0));
    let m2u = manning * manning * u_abs;
    let h = (hat.h - f.d12 * s) - f.d12 * (dt * g * h_pow * (T::lit(0.5) * f.q_sum) * m2u);
    let (q, den) = semi_implicit_discharge(hat.q, f.d22, s, dt, g, h_pow, m2u);
    if !(den > T::zero()) {
        return Err(SolverError::FrictionStability { cell, denominator: den.as_f64() });
    }
    Ok(State::new(h, q))
}

/// Closed form of the semi-implicit q-row: only the leading q is implicit,
/// the velocity factor stays frozen at the previous step's interface values.
/// Returns (q, denominator).
pub(crate) fn semi_implicit_discharge<T: Real>(
    hat_q: T,
    d22: T,
    s: T,
    dt: T,
    g: T,
    h_pow: T,
    m2u: T,
) -> (T, T) {
    let den = T::one() + d22 * (dt * g * h_pow * m2u);
    ((hat_q - d22 * s) / den, den)
}
