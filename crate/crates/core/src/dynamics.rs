//! Spontaneous-emission dynamics of two independent atoms.
//!
//! Time is dimensionless throughout, `τ = Γ₀ t`, and closed forms are written
//! in `x = e^{-τ}`. Three routes are provided:
//!
//! * [`lindblad_apply`]: the generator `L(ρ)` built from the lowering
//!   operators;
//! * [`exact_propagate`]: the solved matrix elements for identical atoms;
//! * [`rk4_evolve`]: a fixed-step integrator of `dρ/dτ = L(ρ)` that serves as
//!   the independent check of the closed form.
//!
//! The solved coherences `ρ₁₂, ρ₁₃` decay as `x^{3/2}` and the feed terms in
//! `ρ₂₄, ρ₃₄` carry `x^{3/2}`; both follow from the generator and are
//! confirmed against the integrator in the tests.

use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{pauli, tensor_product, CMatrix4};
use crate::states::DensityMatrix;

/// Per-atom emission rates in units of `Γ₀`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmissionRates {
    pub gamma_a: f64,
    pub gamma_b: f64,
}

impl EmissionRates {
    pub fn new(gamma_a: f64, gamma_b: f64) -> Result<Self> {
        for (name, v) in [("gamma_a", gamma_a), ("gamma_b", gamma_b)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    lo: 0.0,
                    hi: f64::INFINITY,
                });
            }
        }
        Ok(EmissionRates { gamma_a, gamma_b })
    }

    /// Two identical atoms at the reference rate, `(1, 1)`.
    pub fn identical() -> Self {
        EmissionRates {
            gamma_a: 1.0,
            gamma_b: 1.0,
        }
    }
}

impl Default for EmissionRates {
    fn default() -> Self {
        Self::identical()
    }
}

struct Operators {
    lower: [CMatrix4; 2],
    raise: [CMatrix4; 2],
    excited: [CMatrix4; 2],
}

fn operators() -> &'static Operators {
    static OPS: OnceLock<Operators> = OnceLock::new();
    OPS.get_or_init(|| {
        let id = pauli::identity();
        let sm = pauli::sigma_minus();
        let lower = [tensor_product(&sm, &id), tensor_product(&id, &sm)];
        let raise = [lower[0].dagger(), lower[1].dagger()];
        let excited = [raise[0] * lower[0], raise[1] * lower[1]];
        Operators { lower, raise, excited }
    })
}

/// `L(ρ) = Σ_K (γ_K/2) [2σ₋ᴷ ρ σ₊ᴷ - σ₊ᴷσ₋ᴷ ρ - ρ σ₊ᴷσ₋ᴷ]` on any 4×4 matrix.
pub fn lindblad_apply_matrix(rho: &CMatrix4, rates: EmissionRates) -> CMatrix4 {
    let ops = operators();
    let mut out = CMatrix4::zeros();
    for (k, gamma) in [rates.gamma_a, rates.gamma_b].into_iter().enumerate() {
        if gamma == 0.0 {
            continue;
        }
        let jump = (ops.lower[k] * *rho * ops.raise[k]).scale_re(2.0);
        let anti = ops.excited[k] * *rho + *rho * ops.excited[k];
        out = out + (jump - anti).scale_re(0.5 * gamma);
    }
    out
}

pub fn lindblad_apply(rho: &DensityMatrix, rates: EmissionRates) -> CMatrix4 {
    lindblad_apply_matrix(rho.matrix(), rates)
}

/// The unique stationary state `|00⟩⟨00|`.
pub fn asymptotic_state() -> DensityMatrix {
    DensityMatrix::ground()
}

/// Closed-form state at time `τ` for two identical atoms (`γ_A = γ_B = 1`).
///
/// With `x = e^{-τ}`:
///
/// ```text
/// ρ₁₁ = x² ρ₁₁        ρ₁₂ = x^{3/2} ρ₁₂      ρ₁₃ = x^{3/2} ρ₁₃     ρ₁₄ = x ρ₁₄
/// ρ₂₂ = x ρ₂₂ + x(1-x) ρ₁₁                   ρ₂₃ = x ρ₂₃
/// ρ₃₃ = x ρ₃₃ + x(1-x) ρ₁₁
/// ρ₂₄ = x^{1/2}(ρ₁₃ + ρ₂₄) - x^{3/2} ρ₁₃
/// ρ₃₄ = x^{1/2}(ρ₁₂ + ρ₃₄) - x^{3/2} ρ₁₂
/// ρ₄₄ = ρ₄₄ + (1-x)(ρ₂₂ + ρ₃₃) + (1-x)² ρ₁₁
/// ```
///
/// The populations are the trace-one rearrangement of
/// `ρ₂₂ = x(ρ₂₂+ρ₁₁) - x²ρ₁₁` and `ρ₄₄ = 1 + x²ρ₁₁ - x(1-ρ₄₄+ρ₁₁)`, which
/// avoids cancellation at small `τ`. `τ = 0` returns the input unchanged.
///
/// # Panics
/// If `tau` is negative or not finite.
pub fn exact_propagate(rho0: &DensityMatrix, tau: f64) -> DensityMatrix {
    assert!(
        tau.is_finite() && tau >= 0.0,
        "tau must be finite and non-negative, got {tau}"
    );
    if tau == 0.0 {
        return *rho0;
    }
    let r = rho0.matrix();
    let e = |i: usize, j: usize| r.0[i][j];
    let x = (-tau).exp();
    let x2 = (-2.0 * tau).exp();
    let xh = (-0.5 * tau).exp();
    let x3h = (-1.5 * tau).exp();
    let one_minus_x = -(-tau).exp_m1();

    let p11 = e(0, 0).re;
    let p22 = e(1, 1).re;
    let p33 = e(2, 2).re;
    let p44 = e(3, 3).re;

    let mut m = CMatrix4::zeros();
    m.0[0][0] = C64::new(x2 * p11, 0.0);
    m.0[1][1] = C64::new(x * p22 + x * one_minus_x * p11, 0.0);
    m.0[2][2] = C64::new(x * p33 + x * one_minus_x * p11, 0.0);
    m.0[3][3] = C64::new(p44 + one_minus_x * (p22 + p33) + one_minus_x * one_minus_x * p11, 0.0);
    m.0[0][1] = e(0, 1) * x3h;
    m.0[0][2] = e(0, 2) * x3h;
    m.0[0][3] = e(0, 3) * x;
    m.0[1][2] = e(1, 2) * x;
    m.0[1][3] = (e(0, 2) + e(1, 3)) * xh - e(0, 2) * x3h;
    m.0[2][3] = (e(0, 1) + e(2, 3)) * xh - e(0, 1) * x3h;
    for i in 0..4 {
        for j in 0..i {
            m.0[i][j] = m.0[j][i].conj();
        }
    }
    DensityMatrix::from_matrix_unchecked(m)
}

/// [`exact_propagate`] for equal rates `γ_A = γ_B = γ`, by rescaling time.
pub fn exact_propagate_with_rates(rho0: &DensityMatrix, tau: f64, rates: EmissionRates) -> Result<DensityMatrix> {
    if rates.gamma_a != rates.gamma_b {
        return Err(Error::UnequalRates {
            gamma_a: rates.gamma_a,
            gamma_b: rates.gamma_b,
        });
    }
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::OutOfRange {
            name: "tau",
            value: tau,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok(exact_propagate(rho0, tau * rates.gamma_a))
}

/// Classical fixed-step RK4 for `dρ/dτ = L(ρ)`.
///
/// The last step is shortened to land exactly on `tau`, and the state is
/// re-hermitized after every step.
///
/// # Panics
/// If `step` is not positive or `tau` is negative.
pub fn rk4_evolve(rho0: &DensityMatrix, tau: f64, step: f64, rates: EmissionRates) -> DensityMatrix {
    assert!(step.is_finite() && step > 0.0, "step must be positive, got {step}");
    assert!(
        tau.is_finite() && tau >= 0.0,
        "tau must be finite and non-negative, got {tau}"
    );
    let f = |m: &CMatrix4| lindblad_apply_matrix(m, rates);

    let mut rho = *rho0.matrix();
    let mut t = 0.0;
    let full_steps = (tau / step).floor() as u64;
    for n in 0..=full_steps {
        let h = if n < full_steps { step } else { tau - t };
        if h <= 0.0 {
            break;
        }
        let k1 = f(&rho);
        let k2 = f(&(rho + k1.scale_re(0.5 * h)));
        let k3 = f(&(rho + k2.scale_re(0.5 * h)));
        let k4 = f(&(rho + k3.scale_re(h)));
        let incr = (k1 + k2.scale_re(2.0) + k3.scale_re(2.0) + k4).scale_re(h / 6.0);
        rho = (rho + incr).hermitian_part();
        t = if n < full_steps { (n + 1) as f64 * step } else { tau };
    }
    DensityMatrix::from_matrix_unchecked(rho)
}

/// Default RK4 step.
pub const RK4_STEP: f64 = 1e-3;
