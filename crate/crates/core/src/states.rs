//! Two-atom density matrices and the state families studied here.
//!
//! The product basis is fixed to `|11⟩, |10⟩, |01⟩, |00⟩` (atom A first,
//! excited level `|1⟩` first). Every matrix index in the crate, and every
//! serialized matrix, uses this order.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::linalg::{hermitian_eigen, pauli, tensor_product, CMatrix2, CMatrix4, ZERO};

/// Tolerance on `|ρ_ij - conj(ρ_ji)|`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on `|tr ρ - 1|`.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted for a physical state.
pub const MIN_EIGENVALUE: f64 = -1e-10;
/// Off-pattern magnitude accepted by [`as_x_state`].
pub const X_PATTERN_TOL: f64 = 1e-10;
/// Norm tolerance for pure states and unitarity tolerance for local operators.
pub const NORM_TOL: f64 = 1e-12;

pub const BASIS_LABELS: [&str; 4] = ["11", "10", "01", "00"];

/// Defects of a candidate density matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub hermitian_defect: f64,
    pub trace_defect: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.hermitian_defect <= HERMITIAN_TOL
            && self.trace_defect <= TRACE_TOL
            && self.min_eigenvalue >= MIN_EIGENVALUE
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "hermitian_defect: {:e}", self.hermitian_defect)?;
        writeln!(f, "trace_defect:     {:e}", self.trace_defect)?;
        writeln!(f, "min_eigenvalue:   {:e}", self.min_eigenvalue)?;
        write!(f, "valid:            {}", self.passes())
    }
}

/// Measures how far an arbitrary 4×4 matrix is from being a density matrix.
pub fn validate(m: &CMatrix4) -> ValidationReport {
    let min_eigenvalue = if m.is_finite() {
        hermitian_eigen(&m.hermitian_part())
            .map(|e| e.values[3])
            .unwrap_or(f64::NAN)
    } else {
        f64::NAN
    };
    ValidationReport {
        hermitian_defect: m.hermitian_defect(),
        trace_defect: (m.trace() - 1.0).norm(),
        min_eigenvalue,
    }
}

/// A Hermitian, unit-trace, positive semidefinite 4×4 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(CMatrix4);

impl DensityMatrix {
    pub fn new(m: CMatrix4) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let report = validate(&m);
        if report.hermitian_defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                defect: report.hermitian_defect,
            });
        }
        if report.trace_defect > TRACE_TOL {
            return Err(Error::BadTrace { trace: m.trace().re });
        }
        if report.min_eigenvalue.is_nan() || report.min_eigenvalue < MIN_EIGENVALUE {
            return Err(Error::NotPsd {
                min_eigenvalue: report.min_eigenvalue,
            });
        }
        Ok(DensityMatrix(m))
    }

    /// Wraps a matrix the caller knows to be a state (e.g. the output of a
    /// trace- and positivity-preserving map applied to a valid state).
    pub(crate) fn from_matrix_unchecked(m: CMatrix4) -> Self {
        DensityMatrix(m)
    }

    pub fn matrix(&self) -> &CMatrix4 {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix4 {
        self.0
    }

    /// Entry `ρ_ij` with zero-based indices.
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0 .0[i][j]
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.0)
    }

    /// `I₄/4`.
    pub fn maximally_mixed() -> Self {
        DensityMatrix(CMatrix4::diag([0.25; 4]))
    }

    /// Both atoms in the ground state, `|00⟩⟨00|`.
    pub fn ground() -> Self {
        DensityMatrix(CMatrix4::diag([0.0, 0.0, 0.0, 1.0]))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        DensityMatrix::new(parse_matrix_json(s)?)
    }

    pub fn to_json(&self) -> String {
        matrix_to_json(&self.0)
    }
}

/// On-disk state format: `{"matrix": [[[re, im], ...4], ...4]}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    matrix: Vec<Vec<[f64; 2]>>,
}

/// Parses the JSON state format and checks its shape only.
pub fn parse_matrix_json(s: &str) -> Result<CMatrix4> {
    let file: StateFile = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
    if file.matrix.len() != 4 {
        return Err(Error::Format(format!("expected 4 rows, found {}", file.matrix.len())));
    }
    let mut m = CMatrix4::zeros();
    for (i, row) in file.matrix.iter().enumerate() {
        if row.len() != 4 {
            return Err(Error::Format(format!("row {i} has {} entries, expected 4", row.len())));
        }
        for (j, [re, im]) in row.iter().enumerate() {
            m.0[i][j] = C64::new(*re, *im);
        }
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(m)
}

pub fn matrix_to_json(m: &CMatrix4) -> String {
    let file = StateFile {
        matrix: m
            .0
            .iter()
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
            .collect(),
    };
    serde_json::to_string(&file).expect("plain numeric arrays always serialize")
}

/// A normalized vector in the two-atom space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState([C64; 4]);

impl PureState {
    pub fn new(amplitudes: [C64; 4]) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(PureState(amplitudes))
    }

    fn from_real(a: [f64; 4]) -> Self {
        PureState(a.map(|x| C64::new(x, 0.0)))
    }

    pub fn amplitudes(&self) -> &[C64; 4] {
        &self.0
    }

    /// Computational basis vector `k` in the `|11⟩, |10⟩, |01⟩, |00⟩` order.
    pub fn basis(k: usize) -> Self {
        let mut a = [ZERO; 4];
        a[k] = C64::new(1.0, 0.0);
        PureState(a)
    }
}

/// The four Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BellKind {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

/// Werner states are labelled by the Bell state they mix in.
pub type WernerKind = BellKind;

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PsiPlus,
        BellKind::PsiMinus,
        BellKind::PhiPlus,
        BellKind::PhiMinus,
    ];

    pub fn state(self) -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            BellKind::PsiPlus => PureState::from_real([0.0, s, s, 0.0]),
            BellKind::PsiMinus => PureState::from_real([0.0, s, -s, 0.0]),
            BellKind::PhiPlus => PureState::from_real([s, 0.0, 0.0, s]),
            BellKind::PhiMinus => PureState::from_real([s, 0.0, 0.0, -s]),
        }
    }
}

pub fn projector(v: &PureState) -> DensityMatrix {
    DensityMatrix(CMatrix4::outer(v.amplitudes()))
}

fn phi_amplitudes(c: f64) -> (f64, f64) {
    let s = (1.0 - c * c).max(0.0).sqrt();
    let small = c * std::f64::consts::FRAC_1_SQRT_2 / (1.0 + s).sqrt();
    (((1.0 + s) / 2.0).sqrt(), small)
}

/// `(√(1+s), 0, 0, √(1-s))/√2` with `s = √(1-C²)`; its concurrence is `C`.
pub fn phi_state(c: f64) -> Result<PureState> {
    check_range("C", c, 0.0, 1.0)?;
    let (big, small) = phi_amplitudes(c);
    Ok(PureState::from_real([big, 0.0, 0.0, small]))
}

/// `(σ₁ ⊗ I) φ`: the same amplitudes moved onto `|01⟩` and `|10⟩`.
pub fn psi_state(c: f64) -> Result<PureState> {
    check_range("C", c, 0.0, 1.0)?;
    let (big, small) = phi_amplitudes(c);
    Ok(PureState::from_real([0.0, small, big, 0.0]))
}

/// `(1-p) I₄/4 + p |B⟩⟨B|`.
pub fn werner(kind: WernerKind, p: f64) -> Result<DensityMatrix> {
    check_range("p", p, 0.0, 1.0)?;
    let bell = projector(&kind.state()).into_matrix();
    let mixed = CMatrix4::diag([0.25; 4]);
    Ok(DensityMatrix(mixed.scale_re(1.0 - p) + bell.scale_re(p)))
}

/// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†`.
pub fn local_conjugate(rho: &DensityMatrix, ua: &CMatrix2, ub: &CMatrix2) -> Result<DensityMatrix> {
    for u in [ua, ub] {
        let defect = u.unitarity_defect();
        if defect.is_nan() || defect > NORM_TOL {
            return Err(Error::NotUnitary { defect });
        }
    }
    let u = tensor_product(ua, ub);
    let out = u * rho.0 * u.dagger();
    Ok(DensityMatrix(out.hermitian_part()))
}

/// The X-shaped class: diagonal plus anti-diagonal, closed under the
/// spontaneous-emission dynamics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XState {
    pub d11: f64,
    pub d22: f64,
    pub d33: f64,
    pub d44: f64,
    /// `ρ₁₄`; `ρ₄₁` is its conjugate.
    pub a14: C64,
    /// `ρ₂₃`; `ρ₃₂` is its conjugate.
    pub a23: C64,
}

impl XState {
    pub fn new(d: [f64; 4], a14: C64, a23: C64) -> Result<Self> {
        let x = XState {
            d11: d[0],
            d22: d[1],
            d33: d[2],
            d44: d[3],
            a14,
            a23,
        };
        x.check()?;
        Ok(x)
    }

    fn check(&self) -> Result<()> {
        let d = self.diagonal();
        if d.iter().any(|v| !v.is_finite()) || !(self.a14.norm().is_finite() && self.a23.norm().is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(&v) = d.iter().find(|&&v| v < 0.0) {
            return Err(Error::NotPsd { min_eigenvalue: v });
        }
        let trace: f64 = d.iter().sum();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::BadTrace { trace });
        }
        let g14 = self.d11 * self.d44 - self.a14.norm_sqr();
        let g23 = self.d22 * self.d33 - self.a23.norm_sqr();
        if g14 < -NORM_TOL || g23 < -NORM_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: g14.min(g23),
            });
        }
        Ok(())
    }

    pub fn diagonal(&self) -> [f64; 4] {
        [self.d11, self.d22, self.d33, self.d44]
    }

    pub fn to_matrix(&self) -> CMatrix4 {
        let mut m = CMatrix4::diag(self.diagonal());
        m.0[0][3] = self.a14;
        m.0[3][0] = self.a14.conj();
        m.0[1][2] = self.a23;
        m.0[2][1] = self.a23.conj();
        m
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix(self.to_matrix())
    }
}

/// Reads off the X-state parameters, failing if anything outside the
/// diagonal and anti-diagonal exceeds [`X_PATTERN_TOL`].
pub fn as_x_state(rho: &DensityMatrix) -> Result<XState> {
    let m = &rho.0 .0;
    let mut defect: f64 = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            if i != j && i + j != 3 {
                defect = defect.max(z.norm());
            }
        }
    }
    if defect > X_PATTERN_TOL {
        return Err(Error::NotXForm { defect });
    }
    Ok(XState {
        d11: m[0][0].re,
        d22: m[1][1].re,
        d33: m[2][2].re,
        d44: m[3][3].re,
        a14: m[0][3],
        a23: m[1][2],
    })
}

/// Largest magnitude outside the X pattern.
pub fn off_pattern_magnitude(m: &CMatrix4) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j && i + j != 3 {
                worst = worst.max(m.0[i][j].norm());
            }
        }
    }
    worst
}

/// Sign of the Bell state in a Werner family.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

/// The four initial-state families whose critical times have closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// `P_φ(C)`, weight on `|11⟩` and `|00⟩`.
    PurePhi,
    /// `P_ψ(C)`, weight on `|10⟩` and `|01⟩`.
    PurePsi,
    /// Werner state built on `Φ±`.
    WernerPhi,
    /// Werner state built on `Ψ±`.
    WernerPsi,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] = [
        FamilyKind::PurePhi,
        FamilyKind::PurePsi,
        FamilyKind::WernerPhi,
        FamilyKind::WernerPsi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::PurePhi => "pure-phi",
            FamilyKind::PurePsi => "pure-psi",
            FamilyKind::WernerPhi => "werner-phi",
            FamilyKind::WernerPsi => "werner-psi",
        }
    }

    /// Name of the family parameter: `C` for pure states, `p` for Werner.
    pub fn param_name(self) -> &'static str {
        if self.is_pure() {
            "C"
        } else {
            "p"
        }
    }

    pub fn is_pure(self) -> bool {
        matches!(self, FamilyKind::PurePhi | FamilyKind::PurePsi)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown family '{s}'"))
    }
}

/// A family member: kind plus its parameter (`C` or `p`, both in `[0, 1]`).
///
/// Construction does not check the parameter; every operation taking a
/// `Family` reports [`Error::OutOfRange`] instead.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Family {
    pub kind: FamilyKind,
    pub param: f64,
}

impl Family {
    pub fn new(kind: FamilyKind, param: f64) -> Self {
        Family { kind, param }
    }

    pub fn pure_phi(c: f64) -> Self {
        Family::new(FamilyKind::PurePhi, c)
    }

    pub fn pure_psi(c: f64) -> Self {
        Family::new(FamilyKind::PurePsi, c)
    }

    pub fn werner_phi(p: f64) -> Self {
        Family::new(FamilyKind::WernerPhi, p)
    }

    pub fn werner_psi(p: f64) -> Self {
        Family::new(FamilyKind::WernerPsi, p)
    }

    pub fn checked_param(&self) -> Result<f64> {
        check_range(self.kind.param_name(), self.param, 0.0, 1.0)
    }

    pub fn initial_state(&self) -> Result<DensityMatrix> {
        self.initial_state_with_sign(Sign::Plus)
    }

    /// The sign only selects `±` in the Werner Bell state; pure families
    /// ignore it.
    pub fn initial_state_with_sign(&self, sign: Sign) -> Result<DensityMatrix> {
        let v = self.checked_param()?;
        match (self.kind, sign) {
            (FamilyKind::PurePhi, _) => Ok(projector(&phi_state(v)?)),
            (FamilyKind::PurePsi, _) => Ok(projector(&psi_state(v)?)),
            (FamilyKind::WernerPhi, Sign::Plus) => werner(BellKind::PhiPlus, v),
            (FamilyKind::WernerPhi, Sign::Minus) => werner(BellKind::PhiMinus, v),
            (FamilyKind::WernerPsi, Sign::Plus) => werner(BellKind::PsiPlus, v),
            (FamilyKind::WernerPsi, Sign::Minus) => werner(BellKind::PsiMinus, v),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}={}", self.kind, self.kind.param_name(), self.param)
    }
}

/// `σ₁ ⊗ I`, the local flip relating `P_φ` and `P_ψ`.
pub fn flip_a() -> (CMatrix2, CMatrix2) {
    (pauli::sigma_x(), pauli::identity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{I, ONE};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ground_projector_is_asymptotic_state() {
        assert_eq!(projector(&PureState::basis(3)), DensityMatrix::ground());
    }

    #[test]
    fn phi_projector_corners() {
        let p = projector(&phi_state(0.8).unwrap());
        assert!(close(p.get(0, 0).re, 0.8, 1e-15));
        assert!(close(p.get(0, 3).re, 0.4, 1e-15));
        assert!(close(p.get(3, 0).re, 0.4, 1e-15));
        assert!(close(p.get(3, 3).re, 0.2, 1e-15));
        assert!(p.validate().passes());
    }

    #[test]
    fn bell_phi_plus_corners() {
        let p = projector(&BellKind::PhiPlus.state());
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!(close(p.get(i, j).re, 0.5, 1e-15));
        }
        assert_eq!(phi_state(1.0).unwrap(), BellKind::PhiPlus.state());
    }

    #[test]
    fn phi_limits_and_value() {
        assert_eq!(phi_state(0.0).unwrap(), PureState::basis(0));
        let a = phi_state(0.8).unwrap();
        assert!(close(a.amplitudes()[0].re, 0.894427190999916, 1e-12));
        assert!(close(a.amplitudes()[3].re, 0.447213595499958, 1e-12));
        assert!(phi_state(1.2).is_err());
        assert!(phi_state(-0.1).is_err());
    }

    #[test]
    fn psi_is_flipped_phi() {
        assert_eq!(psi_state(1.0).unwrap(), BellKind::PsiPlus.state());
        assert_eq!(psi_state(0.0).unwrap(), PureState::basis(2));
        let a = psi_state(0.8).unwrap();
        assert!(close(a.amplitudes()[1].re, 0.447213595499958, 1e-12));
        assert!(close(a.amplitudes()[2].re, 0.894427190999916, 1e-12));

        let (ua, ub) = flip_a();
        for c in [0.0, 0.3, 0.8, 1.0] {
            let phi = projector(&phi_state(c).unwrap());
            let psi = projector(&psi_state(c).unwrap());
            let flipped = local_conjugate(&phi, &ua, &ub).unwrap();
            assert!(flipped.matrix().max_abs_diff(psi.matrix()) < 1e-15);
        }
    }

    #[test]
    fn flipping_atom_b_gives_displayed_psi_layout() {
        // (I ⊗ σ₁) φ puts √(1+s) on |10⟩, the other layout of the same state
        let phi = projector(&phi_state(0.8).unwrap());
        let other = local_conjugate(&phi, &pauli::identity(), &pauli::sigma_x()).unwrap();
        assert!(close(other.get(1, 1).re, 0.8, 1e-15));
        assert!(close(other.get(2, 2).re, 0.2, 1e-15));
        assert!(close(other.get(1, 2).re, 0.4, 1e-15));
    }

    #[test]
    fn werner_cases() {
        let w = werner(BellKind::PhiPlus, 0.0).unwrap();
        assert_eq!(w, DensityMatrix::maximally_mixed());
        let w = werner(BellKind::PhiPlus, 1.0).unwrap();
        assert!(w.matrix().max_abs_diff(projector(&BellKind::PhiPlus.state()).matrix()) < 1e-15);
        let w = werner(BellKind::PsiPlus, 0.75).unwrap();
        let x = as_x_state(&w).unwrap();
        assert!(close(x.d11, 1.0 / 16.0, 1e-15));
        assert!(close(x.d22, 7.0 / 16.0, 1e-15));
        assert!(close(x.d33, 7.0 / 16.0, 1e-15));
        assert!(close(x.d44, 1.0 / 16.0, 1e-15));
        assert!(close(x.a23.re, 3.0 / 8.0, 1e-15));
        assert_eq!(x.a14, ZERO);
        assert!(werner(BellKind::PsiPlus, 1.5).is_err());
    }

    #[test]
    fn werner_local_relations() {
        let p = 0.6;
        let psi_minus = werner(BellKind::PsiMinus, p).unwrap();
        let isy = pauli::sigma_y().scale(I);
        let phi_plus = local_conjugate(&psi_minus, &pauli::identity(), &isy).unwrap();
        assert!(
            phi_plus
                .matrix()
                .max_abs_diff(werner(BellKind::PhiPlus, p).unwrap().matrix())
                < 1e-15
        );
        let phi_minus = local_conjugate(&psi_minus, &pauli::identity(), &pauli::sigma_x()).unwrap();
        assert!(
            phi_minus
                .matrix()
                .max_abs_diff(werner(BellKind::PhiMinus, p).unwrap().matrix())
                < 1e-15
        );
    }

    #[test]
    fn identity_conjugation_is_noop() {
        let w = werner(BellKind::PsiMinus, 0.4).unwrap();
        let id = pauli::identity();
        assert_eq!(local_conjugate(&w, &id, &id).unwrap(), w);
    }

    #[test]
    fn non_unitary_rejected() {
        let w = DensityMatrix::maximally_mixed();
        let bad = pauli::sigma_x().scale_re(1.01);
        assert!(matches!(
            local_conjugate(&w, &bad, &pauli::identity()),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn x_form_extraction() {
        let x = as_x_state(&projector(&BellKind::PhiPlus.state())).unwrap();
        assert!(close(x.d11, 0.5, 1e-15) && close(x.d44, 0.5, 1e-15));
        assert!(close(x.a14.re, 0.5, 1e-15));
        assert_eq!(x.d22, 0.0);
        assert_eq!(x.a23, ZERO);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = PureState::new([ONE * s, ONE * s, ZERO, ZERO]).unwrap();
        assert!(matches!(as_x_state(&projector(&v)), Err(Error::NotXForm { .. })));
    }

    #[test]
    fn x_round_trip_is_exact() {
        let x = XState::new([0.1, 0.2, 0.3, 0.4], C64::new(0.1, -0.05), C64::new(0.0, 0.2)).unwrap();
        assert_eq!(as_x_state(&x.to_density()).unwrap(), x);
    }

    #[test]
    fn x_state_rejects_non_psd() {
        let err = XState::new([0.1, 0.2, 0.3, 0.4], C64::new(0.3, 0.0), ZERO);
        assert!(matches!(err, Err(Error::NotPsd { .. })));
    }

    #[test]
    fn validation_reports() {
        let r = DensityMatrix::ground().validate();
        assert_eq!(r.hermitian_defect, 0.0);
        assert_eq!(r.trace_defect, 0.0);
        assert_eq!(r.min_eigenvalue, 0.0);

        let r = DensityMatrix::maximally_mixed().validate();
        assert_eq!(r.trace_defect, 0.0);
        assert!(close(r.min_eigenvalue, 0.25, 1e-15));

        let m = CMatrix4::diag([0.26, 0.25, 0.25, 0.25]);
        let r = validate(&m);
        assert!(close(r.trace_defect, 0.01, 1e-15));
        assert!(!r.passes());
        assert!(matches!(DensityMatrix::new(m), Err(Error::BadTrace { .. })));
    }

    #[test]
    fn not_normalized() {
        assert!(matches!(
            PureState::new([ONE, ONE, ZERO, ZERO]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn json_round_trip_and_shape_errors() {
        let w = werner(BellKind::PsiMinus, 0.3).unwrap();
        let back = DensityMatrix::from_json(&w.to_json()).unwrap();
        assert_eq!(back, w);

        assert!(matches!(
            parse_matrix_json(r#"{"matrix": [[[1, 0]]]}"#),
            Err(Error::Format(_))
        ));
        assert!(matches!(parse_matrix_json("not json"), Err(Error::Format(_))));
        assert!(matches!(
            parse_matrix_json(r#"{"matrix": [], "extra": 1}"#),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn family_names_round_trip() {
        for k in FamilyKind::ALL {
            assert_eq!(k.name().parse::<FamilyKind>().unwrap(), k);
        }
        assert!("werner".parse::<FamilyKind>().is_err());
        assert!(Family::werner_psi(1.2).initial_state().is_err());
    }
}
