//! Random states and local unitaries for property checks.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::linalg::{CMatrix2, CMatrix4};
use crate::states::{DensityMatrix, XState};

/// X state with diagonals flat on the simplex, coherence magnitudes uniform
/// (by area) in the PSD-allowed disc, and uniform phases.
pub fn random_x_state<R: Rng + ?Sized>(rng: &mut R) -> XState {
    let d = flat_simplex(rng);
    let a14 = disc_point(rng, (d[0] * d[3]).sqrt());
    let a23 = disc_point(rng, (d[1] * d[2]).sqrt());
    XState {
        d11: d[0],
        d22: d[1],
        d33: d[2],
        d44: d[3],
        a14,
        a23,
    }
}

/// X state where only one of the two coherences is nonzero.
pub fn random_single_coherence_x_state<R: Rng + ?Sized>(rng: &mut R) -> XState {
    let mut x = random_x_state(rng);
    if rng.gen_bool(0.5) {
        x.a14 = C64::new(0.0, 0.0);
    } else {
        x.a23 = C64::new(0.0, 0.0);
    }
    x
}

/// Full-rank dense state `G G† / tr(G G†)` from a complex Ginibre `G`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let g = CMatrix4::from_fn(|_, _| C64::new(gaussian(rng), gaussian(rng)));
    let m = g * g.dagger();
    let tr = m.trace().re;
    DensityMatrix::from_matrix_unchecked(m.scale_re(1.0 / tr).hermitian_part())
}

/// Haar-distributed 2×2 unitary (up to global phase, which is drawn uniformly).
pub fn random_unitary2<R: Rng + ?Sized>(rng: &mut R) -> CMatrix2 {
    let q: [f64; 4] = std::array::from_fn(|_| gaussian(rng));
    let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    let [a, b, c, d] = q.map(|v| v / n);
    let alpha = C64::new(a, b);
    let beta = C64::new(c, d);
    let phase = C64::from_polar(1.0, rng.gen::<f64>() * TAU);
    CMatrix2::from_fn(|i, j| {
        let e = match (i, j) {
            (0, 0) => alpha,
            (0, 1) => -beta.conj(),
            (1, 0) => beta,
            _ => alpha.conj(),
        };
        e * phase
    })
}

fn flat_simplex<R: Rng + ?Sized>(rng: &mut R) -> [f64; 4] {
    let mut cuts = [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()];
    cuts.sort_by(f64::total_cmp);
    let d = [cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], 1.0 - cuts[2]];
    // last entry absorbs rounding
    let head = d[0] + d[1] + d[2];
    [d[0], d[1], d[2], 1.0 - head]
}

fn disc_point<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> C64 {
    let r = radius * rng.gen::<f64>().sqrt();
    C64::from_polar(r, rng.gen::<f64>() * TAU)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller, cosine branch only
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}
