//! Entanglement and Bell nonlocality of two independently decaying two-level
//! atoms.
//!
//! States live in the product basis `|11⟩, |10⟩, |01⟩, |00⟩` (1 = excited,
//! atom A is the left factor). Time is dimensionless, `τ = γ₀ t`.

mod error;

pub mod chsh;
pub mod critical_times;
pub mod dynamics;
pub mod entanglement;
pub mod linalg;
pub mod sampling;
pub mod states;
pub mod trajectory;

pub use chsh::{m_value, MValue};
pub use critical_times::{CriticalTime, OrderingReport, TimesReport};
pub use dynamics::{exact_propagate, rk4_evolve, EmissionRates};
pub use entanglement::{concurrence, Concurrence};
pub use error::{Error, Result};
pub use states::{DensityMatrix, Family, FamilyKind, XState};
pub use trajectory::{Trajectory, TrajectoryRow};
