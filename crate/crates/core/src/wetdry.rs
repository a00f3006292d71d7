//! Wet/dry front treatment: discretized-bottom redefinition, discharge
//! zeroing at fronts, interface masking for non-flooding fronts, and the
//! thin-film discharge guard.

use crate::domain::Field;
use crate::scalar::Real;

/// Depths below `FRONT_SCALE * dry_eps` count as thin film: their discharge
/// is zeroed and negative depths down to that magnitude are clipped instead
/// of aborting. Draining fronts legitimately overshoot zero by far more than
/// roundoff.
pub const FRONT_SCALE: f64 = 100.0;

/// Redefine the discretized bottom next to wet/dry fronts so no spurious
/// pressure force acts across them.
///
/// Single ascending sweep over pre-sweep surface values, always starting
/// from the pristine bottom; the result lands in `bathymetry.b_eff` and the
/// pristine `b` is untouched.
pub fn redefine_bottom<T: Real>(field: &Field<T>, dry_eps: T) -> Field<T> {
    let n = field.n_cells();
    let b = &field.bathymetry.b;
    let mut b_eff = b.clone();
    let mut changed = false;
    for j in 1..n {
        let (prev, cur) = (&field.states[j - 1], &field.states[j]);
        let eta_prev = prev.h + b[j - 1];
        let eta_cur = cur.h + b[j];
        let dry_prev = prev.is_dry(dry_eps);
        let dry_cur = cur.is_dry(dry_eps);
        if dry_cur && !dry_prev && eta_prev < eta_cur {
            b_eff[j] = b[j - 1] + prev.h;
            changed = true;
        } else if !dry_cur && dry_prev && eta_prev > eta_cur {
            b_eff[j] = b[j - 1] - cur.h;
            changed = true;
        }
    }
    let mut out = field.clone();
    out.bathymetry.b_eff = if changed { Some(b_eff) } else { None };
    out
}

/// Zero the discharge wherever fluid sits at a wet/dry front.
///
/// Dry cells get q = 0 unconditionally; wet cells lose an estimated q that
/// points into a dry neighbor.
pub fn zero_front_discharge<T: Real>(field: &Field<T>, dry_eps: T) -> Field<T> {
    let n = field.n_cells();
    let dry: Vec<bool> = field.states.iter().map(|s| s.is_dry(dry_eps)).collect();
    let mut out = field.clone();
    for j in 0..n {
        let q = out.states[j].q;
        let into_left = q < T::zero() && j > 0 && dry[j - 1];
        let into_right = q > T::zero() && j + 1 < n && dry[j + 1];
        if dry[j] || into_left || into_right {
            out.states[j].q = T::zero();
        }
    }
    out
}

/// Kill the discharge of thin films (h below `FRONT_SCALE * dry_eps`); thin
/// layers otherwise pick up advected momentum and u = q/h diverges as the
/// front drains.
pub fn zero_thin_film_discharge<T: Real>(field: &Field<T>, dry_eps: T) -> Field<T> {
    let h_thin = T::lit(FRONT_SCALE) * dry_eps;
    let mut out = field.clone();
    for s in &mut out.states {
        if s.h < h_thin {
            s.q = T::zero();
        }
    }
    out
}

/// How an interface participates in the step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IfaceMode {
    /// Regular Q-scheme flux and source family.
    Normal,
    /// Both sides dry: no flux, no source family.
    Inert,
    /// Left side wet against a higher dry bottom: the interface acts as a
    /// wall seen from the left cell.
    WallFromLeft,
    /// Right side wet against a higher dry bottom on its left.
    WallFromRight,
}

/// Classify the n+1 interfaces of a field extended by its two ghosts.
///
/// A wet cell facing a dry neighbor whose pristine bottom is above the wet
/// surface must not exchange anything across that interface; mirroring the
/// wet state keeps the mass flux exactly zero and, combined with an inert
/// source family, holds lake-at-rest against a dry shelf bit-exactly. Once
/// the wet surface exceeds the dry bottom the interface floods normally.
pub fn interface_modes<T: Real>(
    h_ext: &[T],
    b_pristine_ext: &[T],
    dry_eps: T,
) -> Vec<IfaceMode> {
    let n_ifaces = h_ext.len() - 1;
    let mut modes = Vec::with_capacity(n_ifaces);
    for i in 0..n_ifaces {
        let (hl, hr) = (h_ext[i], h_ext[i + 1]);
        let (wet_l, wet_r) = (hl >= dry_eps, hr >= dry_eps);
        let mode = match (wet_l, wet_r) {
            (true, true) => IfaceMode::Normal,
            (false, false) => IfaceMode::Inert,
            (true, false) => {
                if hl + b_pristine_ext[i] <= b_pristine_ext[i + 1] {
                    IfaceMode::WallFromLeft
                } else {
                    IfaceMode::Normal
                }
            }
            (false, true) => {
                if hr + b_pristine_ext[i + 1] <= b_pristine_ext[i] {
                    IfaceMode::WallFromRight
                } else {
                    IfaceMode::Normal
                }
            }
        };
        modes.push(mode);
    }
    modes
}
