//! Small dense complex linear algebra.
//!
//! Everything here works on fixed-size stack matrices: 2×2 single-atom
//! operators, 4×4 two-atom operators, the 3×3 real correlation products, and
//! the 8×8 Hermitian dilation used for singular values. Eigenproblems are
//! solved with cyclic complex Jacobi rotations, which for these sizes is both
//! fast and accurate to a few ulps relative to each diagonal block.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Entrywise tolerance for the Hermitian precondition of the eigensolvers.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues in `[-PSD_CLIP, 0)` are treated as round-off and clipped.
pub const PSD_CLIP: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Row-major `N × N` complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMatrix<const N: usize>(pub [[C64; N]; N]);

pub type CMatrix2 = CMatrix<2>;
pub type CMatrix4 = CMatrix<4>;

impl<const N: usize> CMatrix<N> {
    pub fn zeros() -> Self {
        CMatrix([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = [[ZERO; N]; N];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(i, j);
            }
        }
        CMatrix(m)
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(|i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn diag(d: [f64; N]) -> Self {
        Self::from_fn(|i, j| if i == j { C64::new(d[i], 0.0) } else { ZERO })
    }

    /// `v v†` for a column vector `v`.
    pub fn outer(v: &[C64; N]) -> Self {
        Self::from_fn(|i, j| v[i] * v[j].conj())
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(|i, j| (self.0[i][j] + self.0[j][i].conj()) * 0.5)
    }

    /// Largest entrywise `|M_ij - conj(M_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..N {
            for j in i..N {
                d = d.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        d
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..N {
            for j in 0..N {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn apply(&self, v: &[C64; N]) -> [C64; N] {
        let mut out = [ZERO; N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..N).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    /// Column `k` as a vector.
    pub fn column(&self, k: usize) -> [C64; N] {
        let mut out = [ZERO; N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i][k];
        }
        out
    }

    /// Largest entrywise deviation of `U U†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        (*self * self.dagger()).max_abs_diff(&Self::identity())
    }
}

impl<const N: usize> Default for CMatrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Index<(usize, usize)> for CMatrix<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMatrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for CMatrix<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<const N: usize> Sub for CMatrix<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<const N: usize> Mul for CMatrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = [[ZERO; N]; N];
        for (row, lhs) in out.iter_mut().zip(&self.0) {
            for (&a, rhs_row) in lhs.iter().zip(&rhs.0) {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        CMatrix(out)
    }
}

/// Kronecker product of two single-atom operators; atom A is the slow index.
pub fn tensor_product(a: &CMatrix2, b: &CMatrix2) -> CMatrix4 {
    CMatrix4::from_fn(|r, c| a.0[r / 2][c / 2] * b.0[r % 2][c % 2])
}

/// Pauli operators in the `(|1⟩, |0⟩)` basis, excited state first.
pub mod pauli {
    use super::{CMatrix2, I, ONE, ZERO};

    pub fn identity() -> CMatrix2 {
        CMatrix2::identity()
    }

    pub fn sigma_x() -> CMatrix2 {
        CMatrix2::from_real([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn sigma_y() -> CMatrix2 {
        super::CMatrix([[ZERO, -I], [I, ZERO]])
    }

    pub fn sigma_z() -> CMatrix2 {
        CMatrix2::from_real([[1.0, 0.0], [0.0, -1.0]])
    }

    /// Lowering operator `(σ₁ - iσ₂)/2`, takes `|1⟩` to `|0⟩`.
    pub fn sigma_minus() -> CMatrix2 {
        super::CMatrix([[ZERO, ZERO], [ONE, ZERO]])
    }

    pub fn sigma_plus() -> CMatrix2 {
        super::CMatrix([[ZERO, ONE], [ZERO, ZERO]])
    }

    /// `σ₁, σ₂, σ₃` in order.
    pub fn all() -> [CMatrix2; 3] {
        [sigma_x(), sigma_y(), sigma_z()]
    }
}

/// Real symmetric 3×3 matrix stored as its upper triangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymMatrix3 {
    upper: [f64; 6],
}

impl SymMatrix3 {
    fn slot(i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        match (i, j) {
            (0, 0) => 0,
            (0, 1) => 1,
            (0, 2) => 2,
            (1, 1) => 3,
            (1, 2) => 4,
            (2, 2) => 5,
            _ => panic!("index ({i}, {j}) out of range for a 3x3 matrix"),
        }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut upper = [0.0; 6];
        for i in 0..3 {
            for j in i..3 {
                upper[Self::slot(i, j)] = f(i, j);
            }
        }
        SymMatrix3 { upper }
    }

    pub fn diag(d: [f64; 3]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn identity() -> Self {
        Self::diag([1.0; 3])
    }

    /// `AᵀA` for an arbitrary real 3×3 `A`.
    pub fn gram(a: &[[f64; 3]; 3]) -> Self {
        Self::from_fn(|i, j| (0..3).map(|k| a[k][i] * a[k][j]).sum())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[Self::slot(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.upper[Self::slot(i, j)] = v;
    }

    pub fn to_full(&self) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.get(i, j);
            }
        }
        m
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Copy, Debug)]
pub struct HermitianEigen<const N: usize> {
    /// Descending.
    pub values: [f64; N],
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix<N>,
}

impl<const N: usize> HermitianEigen<N> {
    /// `Σ f(λ_k) v_k v_k†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix<N> {
        let mut out = CMatrix::<N>::zeros();
        for k in 0..N {
            let w = f(self.values[k]);
            if w == 0.0 {
                continue;
            }
            let v = self.vectors.column(k);
            for (row, &vi) in out.0.iter_mut().zip(&v) {
                let vi = vi * w;
                for (o, vj) in row.iter_mut().zip(&v) {
                    *o += vi * vj.conj();
                }
            }
        }
        out
    }
}

/// Eigenvalues (descending) and eigenvectors of a Hermitian matrix.
///
/// Fails with [`Error::NotHermitian`] when any `|h_ij - conj(h_ji)|` exceeds
/// [`HERMITIAN_TOL`]; the Hermitian part is diagonalized otherwise.
pub fn hermitian_eigen<const N: usize>(h: &CMatrix<N>) -> Result<HermitianEigen<N>> {
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = h.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let (values, vectors) = jacobi(h.hermitian_part());

    let mut order: [usize; N] = std::array::from_fn(|k| k);
    // stable: equal eigenvalues keep their Jacobi order
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let sorted_values = order.map(|k| values[k]);
    let sorted_vectors = CMatrix::<N>::from_fn(|i, j| vectors.0[i][order[j]]);
    Ok(HermitianEigen {
        values: sorted_values,
        vectors: sorted_vectors,
    })
}

/// Cyclic Jacobi on an exactly Hermitian input, row-major pivot order.
///
/// An off-diagonal entry is negligible once `|h_pq| <= eps·sqrt(|h_pp h_qq|)`;
/// the sweep loop ends when a full sweep finds nothing to rotate. Structural
/// zeros are never touched, so block-diagonal inputs stay block-diagonal.
fn jacobi<const N: usize>(mut a: CMatrix<N>) -> ([f64; N], CMatrix<N>) {
    let mut v = CMatrix::<N>::identity();
    for i in 0..N {
        a.0[i][i].im = 0.0;
    }

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a.0[p][q];
                let b = apq.norm();
                if b == 0.0 {
                    continue;
                }
                let app = a.0[p][p].re;
                let aqq = a.0[q][q].re;
                if b <= f64::EPSILON * (app.abs() * aqq.abs()).sqrt() || b < f64::MIN_POSITIVE {
                    a.0[p][q] = ZERO;
                    a.0[q][p] = ZERO;
                    continue;
                }
                rotated = true;

                let phase = apq / b;
                let theta = (aqq - app) / (2.0 * b);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane
                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(s, 0.0);
                let g_qp = phase.conj() * (-s);
                let g_qq = phase.conj() * c;

                for k in 0..N {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a.0[k][p];
                    let akq = a.0[k][q];
                    let new_kp = akp * g_pp + akq * g_qp;
                    let new_kq = akp * g_pq + akq * g_qq;
                    a.0[k][p] = new_kp;
                    a.0[k][q] = new_kq;
                    a.0[p][k] = new_kp.conj();
                    a.0[q][k] = new_kq.conj();
                }
                a.0[p][p] = C64::new(app - t * b, 0.0);
                a.0[q][q] = C64::new(aqq + t * b, 0.0);
                a.0[p][q] = ZERO;
                a.0[q][p] = ZERO;

                for k in 0..N {
                    let vkp = v.0[k][p];
                    let vkq = v.0[k][q];
                    v.0[k][p] = vkp * g_pp + vkq * g_qp;
                    v.0[k][q] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (std::array::from_fn(|k| a.0[k][k].re), v)
}

/// Eigenvalues of a real symmetric 3×3 matrix, descending.
pub fn sym3_eigen(u: &SymMatrix3) -> [f64; 3] {
    let m = CMatrix::<3>::from_fn(|i, j| C64::new(u.get(i, j), 0.0));
    let (mut values, _) = jacobi(m);
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Principal square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues in `[-PSD_CLIP, 0)` are clipped to zero; anything more negative
/// is reported as [`Error::NotPsd`].
pub fn psd_sqrt<const N: usize>(h: &CMatrix<N>) -> Result<CMatrix<N>> {
    let eig = hermitian_eigen(h)?;
    let min = eig.values[N - 1];
    if min < -PSD_CLIP {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    // eigenvalues within rounding of zero are zero
    let floor = 4.0 * N as f64 * f64::EPSILON * eig.values[0].abs();
    Ok(eig
        .reconstruct_with(|l| if l <= floor { 0.0 } else { l.sqrt() })
        .hermitian_part())
}

/// Singular values of a 4×4 complex matrix, descending.
///
/// Taken as the non-negative half of the spectrum of the Hermitian dilation
/// `[[0, A], [A†, 0]]`, so small singular values come out with absolute error
/// of order `eps·‖A‖` rather than `sqrt(eps)·‖A‖`.
pub fn singular_values(a: &CMatrix4) -> [f64; 4] {
    let mut d = CMatrix::<8>::zeros();
    for i in 0..4 {
        for j in 0..4 {
            d.0[i][4 + j] = a.0[i][j];
            d.0[4 + j][i] = a.0[i][j].conj();
        }
    }
    let (mut values, _) = jacobi(d);
    values.sort_by(|x, y| y.total_cmp(x));
    [values[0], values[1], values[2], values[3]].map(|s| s.max(0.0))
}
