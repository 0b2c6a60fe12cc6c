//! Concurrence.
//!
//! [`concurrence`] is the general two-qubit formula and the authoritative
//! definition; [`concurrence_x`] and [`family_concurrence`] are closed forms
//! that the tests hold to it.

use std::fmt;

use crate::dynamics::exact_propagate;
use crate::error::Result;
use crate::linalg::{pauli, psd_sqrt, singular_values, tensor_product, CMatrix4};
use crate::states::{as_x_state, DensityMatrix, Family, FamilyKind, XState};

/// Threshold above which a state counts as entangled.
pub const ENTANGLED_TOL: f64 = 1e-12;

/// A concurrence value in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Concurrence(f64);

impl Concurrence {
    /// Clips a signed Wootters value at zero.
    pub fn from_signed(v: f64) -> Self {
        Concurrence(v.max(0.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_entangled(self) -> bool {
        self.0 > ENTANGLED_TOL
    }
}

impl fmt::Display for Concurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn spin_flip_matrix(m: &CMatrix4) -> CMatrix4 {
    let yy = tensor_product(&pauli::sigma_y(), &pauli::sigma_y());
    yy * m.conj() * yy
}

/// `ρ̃ = (σ₂⊗σ₂) ρ̄ (σ₂⊗σ₂)`.
pub fn spin_flip(rho: &DensityMatrix) -> CMatrix4 {
    spin_flip_matrix(rho.matrix())
}

/// Square roots of the eigenvalues of `√ρ ρ̃ √ρ`, descending.
///
/// These are computed as the singular values of `√ρ · √ρ̃` (whose Gram matrix
/// is `√ρ ρ̃ √ρ`, and `√ρ̃` is the spin flip of `√ρ`), which keeps the small
/// ones accurate to `eps` instead of `sqrt(eps)` for rank-deficient states.
pub fn wootters_lambdas(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let root = psd_sqrt(rho.matrix())?;
    let flipped_root = spin_flip_matrix(&root);
    Ok(singular_values(&(root * flipped_root)))
}

/// `λ₁ - λ₂ - λ₃ - λ₄` before clipping at zero.
pub fn concurrence_signed(rho: &DensityMatrix) -> Result<f64> {
    let l = wootters_lambdas(rho)?;
    Ok(l[0] - l[1] - l[2] - l[3])
}

pub fn concurrence(rho: &DensityMatrix) -> Result<Concurrence> {
    Ok(Concurrence::from_signed(concurrence_signed(rho)?))
}

/// `(C₁, C₂)` for an X state, unclipped:
/// `C₁ = 2(|ρ₁₄| - √(ρ₂₂ρ₃₃))`, `C₂ = 2(|ρ₂₃| - √(ρ₁₁ρ₄₄))`.
pub fn x_concurrence_terms(x: &XState) -> (f64, f64) {
    let c1 = 2.0 * (x.a14.norm() - (x.d22 * x.d33).sqrt());
    let c2 = 2.0 * (x.a23.norm() - (x.d11 * x.d44).sqrt());
    (c1, c2)
}

pub fn concurrence_x(x: &XState) -> Concurrence {
    let (c1, c2) = x_concurrence_terms(x);
    Concurrence::from_signed(c1.max(c2))
}

/// Signed closed-form concurrence along a family trajectory.
///
/// With `x = e^{-τ}` and `s = √(1-C²)`:
///
/// | family     | value                                   |
/// |------------|-----------------------------------------|
/// | pure ψ     | `C x`                                   |
/// | pure φ     | `x [C - (1+s)(1-x)]`                    |
/// | Werner Φ   | `x [p - 1 + x(1+p)/2]`                  |
/// | Werner Ψ   | `x [p - √((1-p)(1-x) + (1-p)² x²/4)]`   |
pub fn family_concurrence_signed(f: &Family, tau: f64) -> Result<f64> {
    let v = f.checked_param()?;
    let x = (-tau).exp();
    let one_minus_x = -(-tau).exp_m1();
    Ok(match f.kind {
        FamilyKind::PurePsi => v * x,
        FamilyKind::PurePhi => {
            let s = (1.0 - v * v).max(0.0).sqrt();
            x * (v - (1.0 + s) * one_minus_x)
        }
        FamilyKind::WernerPhi => x * (v - 1.0 + 0.5 * x * (1.0 + v)),
        FamilyKind::WernerPsi => {
            let q = 1.0 - v;
            x * (v - (q * one_minus_x + 0.25 * q * q * x * x).sqrt())
        }
    })
}

pub fn family_concurrence(f: &Family, tau: f64) -> Result<Concurrence> {
    family_concurrence_signed(f, tau).map(Concurrence::from_signed)
}

/// `concurrence_x(as_x_state(exact_propagate(ρ0, τ)))` for the family's
/// initial state; the composition the closed forms must agree with.
pub fn family_concurrence_by_propagation(f: &Family, tau: f64) -> Result<Concurrence> {
    let rho = exact_propagate(&f.initial_state()?, tau);
    Ok(concurrence_x(&as_x_state(&rho)?))
}
