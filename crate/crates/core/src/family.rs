//! Parametric unitary families `k ↦ U(k)` with analytic derivatives.
//!
//! Three closed shapes are supported:
//!
//! * `DiagPhase`: `U(k) = diag(e^{ikℓ₁}, …, e^{ikℓ_N}) · S` for a constant
//!   unitary `S` and positive lengths `ℓ_j`;
//! * `ExpPath`: `U(k) = e^{ikh} · u₀` for Hermitian `h` and unitary `u₀`;
//! * `Scalar`: the 1×1 family `e^{iωk}`.
//!
//! Because every family is one of these shapes, `U'(k)` and the generator
//! `D(k) = -i U'(k) U(k)^{-1}` are available in closed form and are bounded
//! on compacts by construction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, ComplexMatrix, I, UNITARY_TOL};

#[derive(Debug, Clone)]
pub enum FamilyKind {
    DiagPhase { lengths: Vec<f64>, s: ComplexMatrix },
    ExpPath { h: ComplexMatrix, u0: ComplexMatrix },
    Scalar { omega: f64 },
}

/// A validated unitary family. Construct through [`UnitaryFamily::diag_phase`],
/// [`UnitaryFamily::exp_path`] or [`UnitaryFamily::scalar`].
#[derive(Debug, Clone)]
pub struct UnitaryFamily {
    kind: FamilyKind,
    // Spectral data of h for ExpPath: e^{ikh} = V e^{ikθ} V^H.
    h_spectrum: Option<(Vec<f64>, ComplexMatrix)>,
}

impl UnitaryFamily {
    pub fn diag_phase(lengths: Vec<f64>, s: ComplexMatrix) -> Result<Self> {
        if lengths.len() != s.dim() {
            return Err(Error::DimensionMismatch {
                expected: s.dim(),
                found: lengths.len(),
            });
        }
        if let Some(bad) = lengths.iter().find(|&&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidParameter(format!("lengths must be positive, got {bad}")));
        }
        s.check_unitary()?;
        Ok(UnitaryFamily {
            kind: FamilyKind::DiagPhase { lengths, s },
            h_spectrum: None,
        })
    }

    pub fn exp_path(h: ComplexMatrix, u0: ComplexMatrix) -> Result<Self> {
        if h.dim() != u0.dim() {
            return Err(Error::DimensionMismatch {
                expected: u0.dim(),
                found: h.dim(),
            });
        }
        let defect = h.hermiticity_defect();
        if defect > UNITARY_TOL {
            return Err(Error::NotHermitian { defect });
        }
        u0.check_unitary()?;
        let spectrum = eigh(&h);
        Ok(UnitaryFamily {
            kind: FamilyKind::ExpPath { h, u0 },
            h_spectrum: Some(spectrum),
        })
    }

    pub fn scalar(omega: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter(format!("omega must be positive, got {omega}")));
        }
        Ok(UnitaryFamily {
            kind: FamilyKind::Scalar { omega },
            h_spectrum: None,
        })
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            FamilyKind::DiagPhase { lengths, .. } => lengths.len(),
            FamilyKind::ExpPath { h, .. } => h.dim(),
            FamilyKind::Scalar { .. } => 1,
        }
    }

    /// `U(k)`.
    pub fn evaluate(&self, k: f64) -> ComplexMatrix {
        match &self.kind {
            FamilyKind::DiagPhase { lengths, s } => {
                let n = s.dim();
                let mut out = ComplexMatrix::zeros(n);
                for (i, &l) in lengths.iter().enumerate() {
                    let e = Complex64::from_polar(1.0, k * l);
                    for j in 0..n {
                        out[(i, j)] = e * s[(i, j)];
                    }
                }
                out
            }
            FamilyKind::ExpPath { u0, .. } => &self.exp_ikh(k) * u0,
            FamilyKind::Scalar { omega } => {
                ComplexMatrix::from_diag(&[Complex64::from_polar(1.0, omega * k)])
            }
        }
    }

    /// `U'(k)`, analytic.
    pub fn derivative(&self, k: f64) -> ComplexMatrix {
        match &self.kind {
            FamilyKind::DiagPhase { lengths, s } => {
                let n = s.dim();
                let mut out = ComplexMatrix::zeros(n);
                for (i, &l) in lengths.iter().enumerate() {
                    let e = I * l * Complex64::from_polar(1.0, k * l);
                    for j in 0..n {
                        out[(i, j)] = e * s[(i, j)];
                    }
                }
                out
            }
            FamilyKind::ExpPath { h, u0 } => (&(h * &self.exp_ikh(k)) * u0).scale(I),
            FamilyKind::Scalar { omega } => {
                ComplexMatrix::from_diag(&[I * *omega * Complex64::from_polar(1.0, omega * k)])
            }
        }
    }

    /// Generator `D(k) = -i U'(k) U(k)^{-1}`. Every supported shape has a
    /// constant generator, returned exactly.
    pub fn generator(&self, _k: f64) -> ComplexMatrix {
        match &self.kind {
            FamilyKind::DiagPhase { lengths, .. } => ComplexMatrix::from_real_diag(lengths),
            FamilyKind::ExpPath { h, .. } => h.clone(),
            FamilyKind::Scalar { omega } => ComplexMatrix::from_real_diag(&[*omega]),
        }
    }

    /// Upper bound on every eigenphase velocity `|θ'(k)| ≤ ||D||₂`.
    pub fn max_speed(&self) -> f64 {
        match &self.kind {
            FamilyKind::DiagPhase { lengths, .. } => lengths.iter().cloned().fold(0.0, f64::max),
            FamilyKind::ExpPath { .. } => {
                let (vals, _) = self.h_spectrum.as_ref().expect("exp_path spectrum");
                vals.iter().map(|v| v.abs()).fold(0.0, f64::max)
            }
            FamilyKind::Scalar { omega } => *omega,
        }
    }

    /// Scan step giving at least 40 samples per turn of the fastest phase.
    pub fn default_step(&self) -> f64 {
        let speed = self.max_speed();
        if speed > 0.0 {
            2.0 * std::f64::consts::PI / speed / 40.0
        } else {
            0.1
        }
    }

    fn exp_ikh(&self, k: f64) -> ComplexMatrix {
        let (vals, v) = self.h_spectrum.as_ref().expect("exp_path spectrum");
        let diag: Vec<Complex64> = vals.iter().map(|&t| Complex64::from_polar(1.0, k * t)).collect();
        ComplexMatrix::conjugate_diag(v, &diag)
    }

    /// Description suitable for serialization (and round trip through
    /// [`FamilySpec::build`]).
    pub fn spec(&self) -> FamilySpec {
        match &self.kind {
            FamilyKind::DiagPhase { lengths, s } => FamilySpec::DiagPhase {
                lengths: lengths.clone(),
                s: s.clone(),
            },
            FamilyKind::ExpPath { h, u0 } => FamilySpec::ExpPath {
                h: h.clone(),
                u0: u0.clone(),
            },
            FamilyKind::Scalar { omega } => FamilySpec::Scalar { omega: *omega },
        }
    }
}

/// The matrix family `A(k)` paired against the unitary family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum ObservableFamily {
    Constant { a: ComplexMatrix },
    DerivativeOfU,
    Identity,
}

impl ObservableFamily {
    /// `A(k)` for the given unitary family.
    pub fn evaluate(&self, f: &UnitaryFamily, k: f64) -> Result<ComplexMatrix> {
        match self {
            ObservableFamily::Constant { a } => {
                if a.dim() != f.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: f.dim(),
                        found: a.dim(),
                    });
                }
                Ok(a.clone())
            }
            ObservableFamily::DerivativeOfU => Ok(f.derivative(k)),
            ObservableFamily::Identity => Ok(ComplexMatrix::identity(f.dim())),
        }
    }

    /// Frobenius-norm bound on `A(k)` (uniform in k for every variant).
    pub fn norm_bound(&self, f: &UnitaryFamily) -> f64 {
        match self {
            ObservableFamily::Constant { a } => a.frobenius_norm(),
            ObservableFamily::DerivativeOfU => f.generator(0.0).frobenius_norm(),
            ObservableFamily::Identity => (f.dim() as f64).sqrt(),
        }
    }
}

/// `A(k)`; free-function form of [`ObservableFamily::evaluate`].
pub fn observable(a: &ObservableFamily, f: &UnitaryFamily, k: f64) -> Result<ComplexMatrix> {
    a.evaluate(f, k)
}

/// JSON description of a family:
/// `{"variant": "diag_phase", "lengths": [...], "s": {"re": [[...]], "im": [[...]]}}`,
/// `{"variant": "exp_path", "h": {...}, "u0": {...}}` or
/// `{"variant": "scalar", "omega": 1.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum FamilySpec {
    DiagPhase { lengths: Vec<f64>, s: ComplexMatrix },
    ExpPath { h: ComplexMatrix, u0: ComplexMatrix },
    Scalar { omega: f64 },
}

impl FamilySpec {
    pub fn build(&self) -> Result<UnitaryFamily> {
        match self.clone() {
            FamilySpec::DiagPhase { lengths, s } => UnitaryFamily::diag_phase(lengths, s),
            FamilySpec::ExpPath { h, u0 } => UnitaryFamily::exp_path(h, u0),
            FamilySpec::Scalar { omega } => UnitaryFamily::scalar(omega),
        }
    }
}
