//! Both sides of the trace formula at a single parameter value.
//!
//! The atom weight at a crossing is `<v|A(k₀)|v> / |<v|U'(k₀)|v>|`. The
//! Fourier side is regularized by Abel summation,
//!
//! ```text
//! (1/2π) Σ_m t^{|m|} tr(U(k)^m A(k)) = (1/2π) Σ_λ (1 - t²)/|t - λ(k)|² <λ|A(k)|λ>,
//! ```
//!
//! and both forms are implemented: the closed Poisson-kernel form is the
//! production path, the truncated power sum is its check.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::{ObservableFamily, UnitaryFamily};
use crate::linalg::{eig_unitary, ComplexMatrix};
use crate::spectral_flow::{Crossing, MIN_SPEED};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbelParams {
    t: f64,
    m_max: usize,
}

impl AbelParams {
    pub fn new(t: f64, m_max: usize) -> Result<Self> {
        check_abel_t(t)?;
        if m_max == 0 {
            return Err(Error::InvalidParameter("m_max must be positive".into()));
        }
        Ok(AbelParams { t, m_max })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }
}

pub(crate) fn check_abel_t(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("Abel parameter must lie in (0, 1), got {t}")))
    }
}

/// Atom weight `<v|A(k₀)|v> / |<v|U'(k₀)|v>|` of a validated crossing.
pub fn crossing_weight(f: &UnitaryFamily, a: &ObservableFamily, c: &Crossing) -> Result<Complex64> {
    let speed = f.derivative(c.k0).expectation(&c.eigvec).norm();
    if speed <= MIN_SPEED {
        return Err(Error::ZeroSpeed { k0: c.k0, speed });
    }
    Ok(a.evaluate(f, c.k0)?.expectation(&c.eigvec) / speed)
}

/// Poisson kernel `(1 - t²)/|t - e^{iθ}|²`, written to stay accurate when
/// both `1 - t` and θ are small.
pub fn poisson_kernel(theta: f64, t: f64) -> f64 {
    let half = (0.5 * theta).sin();
    let denom = (1.0 - t) * (1.0 - t) + 4.0 * t * half * half;
    (1.0 - t) * (1.0 + t) / denom
}

/// Closed form `(1/2π) Σ_λ (1 - t²)/|t - λ(k)|² <λ|A(k)|λ>`.
pub fn abel_kernel_eval(f: &UnitaryFamily, a: &ObservableFamily, k: f64, t: f64) -> Result<Complex64> {
    check_abel_t(t)?;
    let pairs = eig_unitary(&f.evaluate(k))?;
    let sum = match a {
        ObservableFamily::Identity => {
            Complex64::new(pairs.iter().map(|p| poisson_kernel(p.phase, t)).sum(), 0.0)
        }
        _ => {
            let am = a.evaluate(f, k)?;
            pairs
                .iter()
                .map(|p| am.expectation(&p.vector) * poisson_kernel(p.phase, t))
                .sum()
        }
    };
    Ok(sum / (2.0 * PI))
}

/// Truncated `(1/2π) Σ_{|m| ≤ m_max} t^{|m|} tr(U(k)^m A(k))`, negative
/// powers through `U^H`.
pub fn abel_sum_direct(f: &UnitaryFamily, a: &ObservableFamily, k: f64, p: &AbelParams) -> Result<Complex64> {
    let u = f.evaluate(k);
    let am = a.evaluate(f, k)?;
    let uh = u.adjoint();
    let mut sum = am.trace();
    let mut pos = ComplexMatrix::identity(u.dim());
    let mut neg = ComplexMatrix::identity(u.dim());
    let mut weight = 1.0;
    for _ in 1..=p.m_max {
        pos = &pos * &u;
        neg = &neg * &uh;
        weight *= p.t;
        sum += (pos.trace_of_product(&am) + neg.trace_of_product(&am)) * weight;
    }
    Ok(sum / (2.0 * PI))
}

/// Bound on what [`abel_sum_direct`] leaves out:
/// `n ||A|| t^{m_max+1} / (π (1 - t))`.
pub fn abel_tail_bound(n: usize, a_norm: f64, p: &AbelParams) -> f64 {
    n as f64 * a_norm * p.t.powi(p.m_max as i32 + 1) / (PI * (1.0 - p.t))
}

/// Symmetric Cesàro mean `(1/(2N+1)) Σ_{m=-N}^{N} u^m`, which tends to the
/// orthogonal projection onto `ker(u - I)`.
pub fn cesaro_projection(u: &ComplexMatrix, n_terms: usize) -> Result<ComplexMatrix> {
    u.check_unitary()?;
    if n_terms == 0 {
        return Err(Error::InvalidParameter("n_terms must be positive".into()));
    }
    let n = u.dim();
    let uh = u.adjoint();
    let mut sum = ComplexMatrix::identity(n);
    let mut pos = ComplexMatrix::identity(n);
    let mut neg = ComplexMatrix::identity(n);
    for _ in 0..n_terms {
        pos = &pos * u;
        neg = &neg * &uh;
        sum = &(&sum + &pos) + &neg;
    }
    Ok(sum.scale(Complex64::new(1.0 / (2 * n_terms + 1) as f64, 0.0)))
}
