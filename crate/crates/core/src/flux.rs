//! Physical flux, Jacobian eigenstructure, the Q-scheme numerical flux and
//! the upwind projection matrices D_L/D_R.
//!
//! All 2x2 algebra is closed-form; no general linear solver is involved, so
//! results are deterministic and cheap.

use crate::domain::{State, DEFAULT_DRY_EPS};
use crate::error::{Result, SolverError};
use crate::scalar::Real;

/// Plain 2x2 matrix with closed-form arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T>(pub [[T; 2]; 2]);

impl<T: Real> Mat2<T> {
    pub fn identity() -> Self {
        Mat2([[T::one(), T::zero()], [T::zero(), T::one()]])
    }

    pub fn zero() -> Self {
        Mat2([[T::zero(); 2]; 2])
    }

    pub fn diag(a: T, b: T) -> Self {
        Mat2([[a, T::zero()], [T::zero(), b]])
    }

    #[inline]
    pub fn mul_vec(&self, v: [T; 2]) -> [T; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = [[T::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        Mat2(out)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = [[T::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.0[i][j] + rhs.0[i][j];
            }
        }
        Mat2(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = [[T::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.0[i][j] - rhs.0[i][j];
            }
        }
        Mat2(out)
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> T {
        let mut m = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((self.0[i][j] - rhs.0[i][j]).abs());
            }
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> T {
        self.0[i][j]
    }
}

/// Eigenstructure of the flux Jacobian at one state.
///
/// `x` columns are (1, λ₁) and (1, λ₂); `x_inv` is the closed-form inverse.
#[derive(Debug, Clone, Copy)]
pub struct EigenDecomposition<T> {
    pub lambda1: T,
    pub lambda2: T,
    pub x: Mat2<T>,
    pub x_inv: Mat2<T>,
}

/// Per-interface bundle: eigenstructure at the interface mean, the Q-scheme
/// viscosity matrix |Q| and the upwind projectors D_L/D_R. The same
/// eigenvectors feed all three, which is what keeps the upwinded source in
/// step with the flux.
#[derive(Debug, Clone, Copy)]
pub struct InterfaceDecomposition<T> {
    pub eig: EigenDecomposition<T>,
    pub abs_q: Mat2<T>,
    pub d_left: Mat2<T>,
    pub d_right: Mat2<T>,
}

/// Physical flux F(W) = (q, q²/h + ½ g h²).
pub fn physical_flux<T: Real>(w: State<T>, g: T) -> Result<[T; 2]> {
    if !(w.h > T::zero()) {
        return Err(SolverError::DryState { h: w.h.as_f64() });
    }
    Ok([w.q, w.q * w.q / w.h + T::lit(0.5) * g * w.h * w.h])
}

/// Flux Jacobian A(W).
pub fn jacobian<T: Real>(w: State<T>, g: T) -> Mat2<T> {
    let u = w.q / w.h;
    Mat2([[T::zero(), T::one()], [g * w.h - u * u, T::lit(2.0) * u]])
}

/// Eigenvalues λ = u ± √(gh) and the eigenvector matrices.
pub fn eigendecompose<T: Real>(w: State<T>, g: T) -> Result<EigenDecomposition<T>> {
    if w.h <= T::lit(DEFAULT_DRY_EPS) {
        return Err(SolverError::DryState { h: w.h.as_f64() });
    }
    let u = w.q / w.h;
    let c = (g * w.h).sqrt();
    let lambda1 = u + c;
    let lambda2 = u - c;
    let x = Mat2([[T::one(), T::one()], [lambda1, lambda2]]);
    let inv_det = T::one() / (lambda2 - lambda1);
    let x_inv = Mat2([
        [lambda2 * inv_det, -inv_det],
        [-lambda1 * inv_det, inv_det],
    ]);
    Ok(EigenDecomposition { lambda1, lambda2, x, x_inv })
}

/// |Q(U,V)| = X |Λ| X⁻¹ evaluated at the arithmetic-mean state (U+V)/2.
pub fn abs_q_matrix<T: Real>(u: State<T>, v: State<T>, g: T) -> Result<Mat2<T>> {
    let eig = eigendecompose(State::mean(u, v), g)?;
    Ok(eig
        .x
        .mul(&Mat2::diag(eig.lambda1.abs(), eig.lambda2.abs()))
        .mul(&eig.x_inv))
}

/// Q-scheme (van Leer) flux φ(U,V) = (F(U)+F(V))/2 − ½|Q(U,V)|(V−U).
pub fn numerical_flux<T: Real>(u: State<T>, v: State<T>, g: T) -> Result<[T; 2]> {
    let fu = physical_flux(u, g)?;
    let fv = physical_flux(v, g)?;
    let visc = abs_q_matrix(u, v, g)?.mul_vec([v.h - u.h, v.q - u.q]);
    let half = T::lit(0.5);
    Ok([
        half * (fu[0] + fv[0]) - half * visc[0],
        half * (fu[1] + fv[1]) - half * visc[1],
    ])
}

fn sign_matrix<T: Real>(eig: &EigenDecomposition<T>, regularize: bool) -> Result<Mat2<T>> {
    // eigen_eps scales with the local wave speed c = (λ1 − λ2)/2
    let c = T::lit(0.5) * (eig.lambda1 - eig.lambda2);
    let eps = T::lit(1e-8) * c;
    let sgn = |l: T| -> Result<T> {
        if regularize {
            Ok(l / l.abs().max(eps))
        } else if l.abs() < eps {
            Err(SolverError::SonicDegeneracy { lambda: l.as_f64(), eps: eps.as_f64() })
        } else {
            Ok(l.signum())
        }
    };
    let s = Mat2::diag(sgn(eig.lambda1)?, sgn(eig.lambda2)?);
    Ok(eig.x.mul(&s).mul(&eig.x_inv))
}

/// D_L = I + |Q|Q⁻¹ and D_R = I − |Q|Q⁻¹ at the mean of `u` and `v`.
///
/// |Q|Q⁻¹ is computed as X·sign(Λ)·X⁻¹, which is algebraically identical and
/// never inverts Q. Near-critical eigenvalues are regularized by
/// sign(λ) → λ/max(|λ|, 1e-8·c).
pub fn upwind_matrices<T: Real>(u: State<T>, v: State<T>, g: T) -> Result<(Mat2<T>, Mat2<T>)> {
    upwind_matrices_impl(u, v, g, true)
}

/// Like [`upwind_matrices`] but raises a sonic-degeneracy error instead of
/// regularizing when an eigenvalue is within eigen_eps of zero.
pub fn upwind_matrices_strict<T: Real>(
    u: State<T>,
    v: State<T>,
    g: T,
) -> Result<(Mat2<T>, Mat2<T>)> {
    upwind_matrices_impl(u, v, g, false)
}

fn upwind_matrices_impl<T: Real>(
    u: State<T>,
    v: State<T>,
    g: T,
    regularize: bool,
) -> Result<(Mat2<T>, Mat2<T>)> {
    let eig = eigendecompose(State::mean(u, v), g)?;
    let s = sign_matrix(&eig, regularize)?;
    let i = Mat2::identity();
    Ok((i.add(&s), i.sub(&s)))
}

impl<T: Real> InterfaceDecomposition<T> {
    /// All interface matrices at the mean of `u` and `v` in one pass.
    pub fn at(u: State<T>, v: State<T>, g: T, regularize: bool) -> Result<Self> {
        let eig = eigendecompose(State::mean(u, v), g)?;
        let abs_q = eig
            .x
            .mul(&Mat2::diag(eig.lambda1.abs(), eig.lambda2.abs()))
            .mul(&eig.x_inv);
        let s = sign_matrix(&eig, regularize)?;
        let i = Mat2::identity();
        Ok(Self { eig, abs_q, d_left: i.add(&s), d_right: i.sub(&s) })
    }
}
