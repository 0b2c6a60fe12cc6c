//! Disentanglement and locality times.
//!
//! The disentanglement time `t_d` is when concurrence reaches zero for good;
//! the locality time `t_loc` is when `m(ρ)` drops to 1 for good. Both come in
//! two flavours: closed forms per state family, and a numeric solver that
//! works on any initial state by scanning the propagated trajectory.
//!
//! The numeric solver works in `x = e^{-τ}`, which maps `τ ∈ [0, ∞)` onto
//! `x ∈ (0, 1]`. A descending geometric grid of [`SCAN_POINTS`] points down
//! to [`SCAN_X_MIN`] brackets the largest root, which is then bisected.

use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::chsh::m_value;
use crate::dynamics::exact_propagate;
use crate::entanglement::concurrence_signed;
use crate::error::{check_range, Result};
use crate::states::{DensityMatrix, Family, FamilyKind, Sign};
use crate::trajectory::format_float;

pub const SCAN_POINTS: usize = 4096;
pub const SCAN_X_MIN: f64 = 1e-12;
/// Bisection stops once the bracket is narrower than this, relative to `x`.
pub const BISECT_X_TOL: f64 = 1e-12;
/// At `τ = 0` the property must exceed this to count as present.
pub const START_TOL: f64 = 1e-12;
/// Closed and numeric times further apart than this are flagged.
pub const DISCREPANCY_TOL: f64 = 1e-6;

/// Golden-ratio threshold `(√5 - 1)/2` for the Werner Ψ family.
pub fn golden_threshold() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// `C` above which the pure-state locality time follows `ln(2C²)/2`.
pub fn pure_locality_branch_point() -> f64 {
    2.0 * (2f64.sqrt() - 1.0)
}

/// Outcome of a critical-time computation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CriticalTime {
    /// The property is lost at this dimensionless time (`τ > 0`).
    Finite(f64),
    /// The property only fades as `τ → ∞`.
    Asymptotic,
    /// The property is absent already at `τ = 0`.
    Immediate,
}

impl CriticalTime {
    pub fn tau(self) -> Option<f64> {
        match self {
            CriticalTime::Finite(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, CriticalTime::Finite(_))
    }

    pub fn label(self) -> &'static str {
        match self {
            CriticalTime::Finite(_) => "finite",
            CriticalTime::Asymptotic => "asymptotic",
            CriticalTime::Immediate => "immediate",
        }
    }

    pub fn same_class(self, other: CriticalTime) -> bool {
        self.label() == other.label()
    }

    fn render(self, time_scale: f64) -> String {
        match self {
            CriticalTime::Finite(t) => format!("finite {:.9}", t / time_scale),
            other => other.label().to_string(),
        }
    }
}

impl fmt::Display for CriticalTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(1.0))
    }
}

/// Closed-form disentanglement time of a family.
pub fn disentanglement_time_closed(f: &Family) -> Result<CriticalTime> {
    let v = f.checked_param()?;
    let third = 1.0 / 3.0;
    Ok(match f.kind {
        FamilyKind::PurePhi => {
            if v == 0.0 {
                CriticalTime::Immediate
            } else if v == 1.0 {
                CriticalTime::Asymptotic
            } else {
                CriticalTime::Finite((0.5 * (1.0 + ((1.0 + v) / (1.0 - v)).sqrt())).ln())
            }
        }
        FamilyKind::PurePsi => {
            if v == 0.0 {
                CriticalTime::Immediate
            } else {
                CriticalTime::Asymptotic
            }
        }
        FamilyKind::WernerPhi => {
            if v <= third {
                CriticalTime::Immediate
            } else if v == 1.0 {
                CriticalTime::Asymptotic
            } else {
                CriticalTime::Finite((0.5 * (1.0 + v) / (1.0 - v)).ln())
            }
        }
        FamilyKind::WernerPsi => {
            if v <= third {
                CriticalTime::Immediate
            } else if v < golden_threshold() {
                let num = (1.0 - v) * (1.0 + (v * (1.0 + v)).sqrt());
                let den = 2.0 * (1.0 - v - v * v);
                CriticalTime::Finite((num / den).ln())
            } else {
                CriticalTime::Asymptotic
            }
        }
    })
}

/// Closed-form locality time of a family.
///
/// Pure families share the piecewise form
/// `ln(1 + C²/4)` for `C ≤ 2(√2-1)` and `ln(2C²)/2` above; Werner families
/// lose violation at `ln(2p²)/2` when `p > 1/√2`.
pub fn locality_time_closed(f: &Family) -> Result<CriticalTime> {
    let v = f.checked_param()?;
    Ok(match f.kind {
        FamilyKind::PurePhi | FamilyKind::PurePsi => {
            if v == 0.0 {
                CriticalTime::Immediate
            } else if v <= pure_locality_branch_point() {
                CriticalTime::Finite((0.25 * v * v).ln_1p())
            } else {
                CriticalTime::Finite(0.5 * (2.0 * v * v).ln())
            }
        }
        FamilyKind::WernerPhi | FamilyKind::WernerPsi => {
            if v <= std::f64::consts::FRAC_1_SQRT_2 {
                CriticalTime::Immediate
            } else {
                CriticalTime::Finite(0.5 * (2.0 * v * v).ln())
            }
        }
    })
}

fn scan_x(f: impl Fn(f64) -> Result<f64>) -> Result<CriticalTime> {
    if f(1.0)? <= START_TOL {
        return Ok(CriticalTime::Immediate);
    }
    let log_min = SCAN_X_MIN.ln();
    let mut above = 1.0;
    for k in 1..SCAN_POINTS {
        let x = (log_min * k as f64 / SCAN_POINTS as f64).exp();
        if f(x)? <= 0.0 {
            let root = bisect(&f, x, above)?;
            return Ok(CriticalTime::Finite(-root.ln()));
        }
        above = x;
    }
    Ok(CriticalTime::Asymptotic)
}

/// Shrinks `[lo, hi]` with `f(lo) <= 0 < f(hi)` around the sign change.
fn bisect(f: &impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    while hi - lo > BISECT_X_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Disentanglement time of an arbitrary state from the signed Wootters
/// concurrence along its closed-form trajectory.
pub fn disentanglement_time_numeric(rho0: &DensityMatrix) -> Result<CriticalTime> {
    scan_x(|x| concurrence_signed(&exact_propagate(rho0, -x.ln())))
}

/// Locality time of an arbitrary state from `m(ρ(τ)) - 1`.
///
/// `m` tends to 1 from below for this dynamics, so [`CriticalTime::Asymptotic`]
/// only comes back if the state still violates at the end of the grid.
pub fn locality_time_numeric(rho0: &DensityMatrix) -> Result<CriticalTime> {
    scan_x(|x| Ok(m_value(&exact_propagate(rho0, -x.ln()))?.value() - 1.0))
}

/// Both critical times of a family and how far apart they are.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderingReport {
    pub t_loc: CriticalTime,
    pub t_d: CriticalTime,
    /// `t_d - t_loc` when both are finite.
    pub gap: Option<f64>,
}

pub fn ordering_report(f: &Family) -> Result<OrderingReport> {
    let t_d = disentanglement_time_closed(f)?;
    let t_loc = locality_time_closed(f)?;
    let gap = match (t_d, t_loc) {
        (CriticalTime::Finite(d), CriticalTime::Finite(l)) => Some(d - l),
        _ => None,
    };
    Ok(OrderingReport { t_loc, t_d, gap })
}

/// Closed-form and numeric critical times side by side.
#[derive(Clone, Debug, PartialEq)]
pub struct TimesReport {
    pub label: String,
    pub t_d_closed: Option<CriticalTime>,
    pub t_d_numeric: CriticalTime,
    pub t_loc_closed: Option<CriticalTime>,
    pub t_loc_numeric: CriticalTime,
}

/// How a closed form and a numeric result compare.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Agreement {
    /// No closed form available.
    NotApplicable,
    /// Same class, and finite times within [`DISCREPANCY_TOL`].
    Agree {
        delta: f64,
    },
    Differ {
        delta: Option<f64>,
    },
}

fn compare(closed: Option<CriticalTime>, numeric: CriticalTime) -> Agreement {
    let Some(closed) = closed else {
        return Agreement::NotApplicable;
    };
    match (closed, numeric) {
        (CriticalTime::Finite(a), CriticalTime::Finite(b)) => {
            let delta = b - a;
            if delta.abs() <= DISCREPANCY_TOL {
                Agreement::Agree { delta }
            } else {
                Agreement::Differ { delta: Some(delta) }
            }
        }
        (a, b) if a.same_class(b) => Agreement::Agree { delta: 0.0 },
        _ => Agreement::Differ { delta: None },
    }
}

impl TimesReport {
    pub fn for_family(f: &Family, sign: Sign) -> Result<Self> {
        let rho0 = f.initial_state_with_sign(sign)?;
        Ok(TimesReport {
            label: f.to_string(),
            t_d_closed: Some(disentanglement_time_closed(f)?),
            t_d_numeric: disentanglement_time_numeric(&rho0)?,
            t_loc_closed: Some(locality_time_closed(f)?),
            t_loc_numeric: locality_time_numeric(&rho0)?,
        })
    }

    pub fn for_state(label: impl Into<String>, rho0: &DensityMatrix) -> Result<Self> {
        Ok(TimesReport {
            label: label.into(),
            t_d_closed: None,
            t_d_numeric: disentanglement_time_numeric(rho0)?,
            t_loc_closed: None,
            t_loc_numeric: locality_time_numeric(rho0)?,
        })
    }

    pub fn t_d_agreement(&self) -> Agreement {
        compare(self.t_d_closed, self.t_d_numeric)
    }

    pub fn t_loc_agreement(&self) -> Agreement {
        compare(self.t_loc_closed, self.t_loc_numeric)
    }

    pub fn has_discrepancy(&self) -> bool {
        matches!(self.t_d_agreement(), Agreement::Differ { .. })
            || matches!(self.t_loc_agreement(), Agreement::Differ { .. })
    }

    /// Text report; finite times are divided by `gamma0` when given.
    pub fn render(&self, gamma0: Option<f64>) -> String {
        let scale = gamma0.unwrap_or(1.0);
        let unit = if gamma0.is_some() { "t" } else { "tau" };
        let mut s = String::new();
        let _ = writeln!(s, "state:          {}", self.label);
        let _ = writeln!(s, "time unit:      {unit}");
        let line = |s: &mut String, name: &str, t: Option<CriticalTime>| {
            let v = t.map_or("n/a".to_string(), |t| t.render(scale));
            let _ = writeln!(s, "{name:<16}{v}");
        };
        line(&mut s, "t_d closed:", self.t_d_closed);
        line(&mut s, "t_d numeric:", Some(self.t_d_numeric));
        let _ = writeln!(s, "t_d check:      {}", render_agreement(self.t_d_agreement(), scale));
        line(&mut s, "t_loc closed:", self.t_loc_closed);
        line(&mut s, "t_loc numeric:", Some(self.t_loc_numeric));
        let _ = writeln!(s, "t_loc check:    {}", render_agreement(self.t_loc_agreement(), scale));
        let gap = match (self.t_d_numeric, self.t_loc_numeric) {
            (CriticalTime::Finite(d), CriticalTime::Finite(l)) => format!("{:.9}", (d - l) / scale),
            _ => "n/a".to_string(),
        };
        let _ = write!(s, "gap t_d-t_loc:  {gap}");
        s
    }
}

fn render_agreement(a: Agreement, scale: f64) -> String {
    match a {
        Agreement::NotApplicable => "n/a".to_string(),
        Agreement::Agree { delta } => format!("agree (delta {:.3e})", delta / scale),
        Agreement::Differ { delta: Some(d) } => format!("DISCREPANCY (numeric - closed = {:.9})", d / scale),
        Agreement::Differ { delta: None } => "DISCREPANCY (classification differs)".to_string(),
    }
}

impl fmt::Display for TimesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMethod {
    Closed,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub t_d: CriticalTime,
    pub t_loc: CriticalTime,
}

/// Evenly spaced parameter grid `from..=to` with `points` entries.
pub fn parameter_grid(from: f64, to: f64, points: usize) -> Result<Vec<f64>> {
    check_range("from", from, 0.0, 1.0)?;
    check_range("to", to, 0.0, 1.0)?;
    check_range("points", points as f64, 1.0, f64::INFINITY)?;
    if points == 1 {
        return Ok(vec![from]);
    }
    let n = (points - 1) as f64;
    Ok((0..points)
        .map(|k| {
            if k == points - 1 {
                to
            } else {
                from + (to - from) * k as f64 / n
            }
        })
        .collect())
}

/// Critical times over a parameter grid; rows come back in grid order.
pub fn sweep(kind: FamilyKind, from: f64, to: f64, points: usize, method: SweepMethod) -> Result<Vec<SweepRow>> {
    parameter_grid(from, to, points)?
        .into_par_iter()
        .map(|param| {
            let f = Family::new(kind, param);
            let (t_d, t_loc) = match method {
                SweepMethod::Closed => (disentanglement_time_closed(&f)?, locality_time_closed(&f)?),
                SweepMethod::Numeric => {
                    let rho0 = f.initial_state()?;
                    (disentanglement_time_numeric(&rho0)?, locality_time_numeric(&rho0)?)
                }
            };
            Ok(SweepRow { param, t_d, t_loc })
        })
        .collect()
}

/// CSV with header `param,t_d,t_loc,classification,locality`; non-finite
/// times are empty fields, the two class columns hold
/// `immediate|finite|asymptotic` for `t_d` and `t_loc` respectively.
pub fn sweep_csv(rows: &[SweepRow], gamma0: Option<f64>) -> String {
    let scale = gamma0.unwrap_or(1.0);
    let mut s = String::from("param,t_d,t_loc,classification,locality\n");
    let time = |t: CriticalTime| t.tau().map_or(String::new(), |v| format_float(v / scale));
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            format_float(r.param),
            time(r.t_d),
            time(r.t_loc),
            r.t_d.label(),
            r.t_loc.label()
        );
    }
    s
}

/// Midpoints between consecutive rows whose classification changes.
pub fn classification_boundaries(
    rows: &[SweepRow],
    pick: impl Fn(&SweepRow) -> CriticalTime,
) -> Vec<(f64, &'static str, &'static str)> {
    rows.windows(2)
        .filter_map(|w| {
            let (a, b) = (pick(&w[0]), pick(&w[1]));
            (!a.same_class(b)).then(|| (0.5 * (w[0].param + w[1].param), a.label(), b.label()))
        })
        .collect()
}
