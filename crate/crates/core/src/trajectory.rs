//! Sampled trajectories and the reference figure tables.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::chsh::{m_value, x_chsh_terms};
use crate::dynamics::exact_propagate;
use crate::entanglement::{concurrence, x_concurrence_terms};
use crate::error::{Error, Result};
use crate::states::{as_x_state, DensityMatrix, Family};

/// Formats a float with 17 significant digits, which round-trips any `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub tau: f64,
    pub concurrence: f64,
    pub m: f64,
    /// X-form terms; absent when the propagated state is not of X form.
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub u1: Option<f64>,
    pub u2: Option<f64>,
    pub entangled: bool,
    pub violates: bool,
}

impl TrajectoryRow {
    pub fn at(tau: f64, rho: &DensityMatrix) -> Result<Self> {
        let c = concurrence(rho)?;
        let m = m_value(rho)?;
        let (c1, c2, u1, u2) = match as_x_state(rho) {
            Ok(x) => {
                let (c1, c2) = x_concurrence_terms(&x);
                let (u1, u2) = x_chsh_terms(&x);
                (Some(c1), Some(c2), Some(u1), Some(u2))
            }
            Err(Error::NotXForm { .. }) => (None, None, None, None),
            Err(e) => return Err(e),
        };
        Ok(TrajectoryRow {
            tau,
            concurrence: c.value(),
            m: m.value(),
            c1,
            c2,
            u1,
            u2,
            entangled: c.is_entangled(),
            violates: m.violates(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    /// Free-form description of the initial state.
    pub source: String,
    pub rows: Vec<TrajectoryRow>,
}

/// `τ_k = k·step` for every `k` with `τ_k ≤ tau_max` (plus a relative slack
/// of `1e-9` steps so that e.g. `3.0 / 0.01` keeps its last point).
pub fn time_grid(tau_max: f64, step: f64) -> Result<Vec<f64>> {
    crate::error::check_range("tau-max", tau_max, 0.0, f64::MAX)?;
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::OutOfRange {
            name: "step",
            value: step,
            lo: f64::MIN_POSITIVE,
            hi: f64::MAX,
        });
    }
    let n = (tau_max / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| k as f64 * step).collect())
}

pub const CSV_HEADER: &str = "tau,concurrence,m,c1,c2,u1,u2,entangled,violates";

impl Trajectory {
    /// Rows at `τ = 0, step, 2·step, …`, each propagated directly from `rho0`.
    pub fn sample(rho0: &DensityMatrix, tau_max: f64, step: f64) -> Result<Self> {
        let rows = time_grid(tau_max, step)?
            .into_par_iter()
            .map(|tau| TrajectoryRow::at(tau, &exact_propagate(rho0, tau)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Trajectory {
            source: String::new(),
            rows,
        })
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    /// CSV table. With `gamma0` the first column is physical time
    /// `t = τ/γ₀` and is headed `t` instead of `tau`.
    pub fn to_csv(&self, gamma0: Option<f64>) -> String {
        let mut s = String::new();
        match gamma0 {
            Some(_) => s.push_str(&CSV_HEADER.replacen("tau", "t", 1)),
            None => s.push_str(CSV_HEADER),
        }
        s.push('\n');
        let opt = |v: Option<f64>| v.map_or(String::new(), format_float);
        for r in &self.rows {
            let time = r.tau / gamma0.unwrap_or(1.0);
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                format_float(time),
                format_float(r.concurrence),
                format_float(r.m),
                opt(r.c1),
                opt(r.c2),
                opt(r.u1),
                opt(r.u2),
                r.entangled,
                r.violates
            );
        }
        s
    }

    /// JSON array of row objects keyed like the CSV columns; absent X-form
    /// terms are `null`.
    pub fn to_json(&self, gamma0: Option<f64>) -> String {
        #[derive(Serialize)]
        struct Row {
            #[serde(skip_serializing_if = "Option::is_none")]
            tau: Option<f64>,
            #[serde(skip_serializing_if = "Option::is_none")]
            t: Option<f64>,
            concurrence: f64,
            m: f64,
            c1: Option<f64>,
            c2: Option<f64>,
            u1: Option<f64>,
            u2: Option<f64>,
            entangled: bool,
            violates: bool,
        }
        let rows: Vec<Row> = self
            .rows
            .iter()
            .map(|r| Row {
                tau: gamma0.is_none().then_some(r.tau),
                t: gamma0.map(|g| r.tau / g),
                concurrence: r.concurrence,
                m: r.m,
                c1: r.c1,
                c2: r.c2,
                u1: r.u1,
                u2: r.u2,
                entangled: r.entangled,
                violates: r.violates,
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("trajectory serializes")
    }
}

/// The two reference figures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    /// Pure ψ and φ states at `C = 0.8`.
    Fig1,
    /// Werner Ψ and Φ states at `p = 0.75`.
    Fig2,
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fig1" => Ok(FigureId::Fig1),
            "fig2" => Ok(FigureId::Fig2),
            other => Err(format!("unknown figure '{other}' (expected fig1 or fig2)")),
        }
    }
}

pub const FIGURE_TAU_MAX: f64 = 3.0;
pub const FIGURE_STEP: f64 = 0.01;

#[derive(Clone, Debug, PartialEq)]
pub struct FigureTable {
    pub header: [&'static str; 3],
    pub rows: Vec<[f64; 3]>,
}

impl FigureTable {
    pub fn to_csv(&self, gamma0: Option<f64>) -> String {
        let mut s = String::new();
        let first = if gamma0.is_some() { "t" } else { self.header[0] };
        let _ = writeln!(s, "{first},{},{}", self.header[1], self.header[2]);
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{}",
                format_float(r[0] / gamma0.unwrap_or(1.0)),
                format_float(r[1]),
                format_float(r[2])
            );
        }
        s
    }
}

/// Concurrence curves over `τ ∈ [0, 3]` in steps of `0.01`.
pub fn figure_data(id: FigureId) -> Result<FigureTable> {
    let (header, a, b) = match id {
        FigureId::Fig1 => (["tau", "c_psi", "c_phi"], Family::pure_psi(0.8), Family::pure_phi(0.8)),
        FigureId::Fig2 => (
            ["tau", "c_werner_psi", "c_werner_phi"],
            Family::werner_psi(0.75),
            Family::werner_phi(0.75),
        ),
    };
    let (ra, rb) = (a.initial_state()?, b.initial_state()?);
    let rows = time_grid(FIGURE_TAU_MAX, FIGURE_STEP)?
        .into_par_iter()
        .map(|tau| {
            let ca = concurrence(&exact_propagate(&ra, tau))?.value();
            let cb = concurrence(&exact_propagate(&rb, tau))?.value();
            Ok([tau, ca, cb])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FigureTable { header, rows })
}
