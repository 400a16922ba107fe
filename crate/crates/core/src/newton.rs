//! Characteristic polynomial route: `h(λ) = det(λI - U) = Σ cᵢ λⁱ`, the
//! Newton identities `Σ cᵢ tr(U^{i+j}) = 0`, and the remainder
//! `R(N, k) = h(1, k) · Σ_{|j|≤N} tr(U(k)^j)`, which stays bounded in `N`
//! even where the partial sums blow up.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::UnitaryFamily;
use crate::linalg::ComplexMatrix;

/// Faddeev–LeVerrier loses accuracy quickly with dimension.
pub const MAX_DIM: usize = 16;
/// `|h(1, k)|` at or below this is treated as a crossing.
pub const NEAR_SINGULAR: f64 = 1e-12;

/// Monic `h(λ) = Σ_{i=0}^{n} cᵢ λⁱ`, `c_n = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly {
    coeffs: Vec<Complex64>,
}

impl CharPoly {
    /// `c₀, …, c_n`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * lambda + c)
    }

    /// `h(1) = Σ cᵢ = det(I - U)`.
    pub fn at_one(&self) -> Complex64 {
        self.coeffs.iter().sum()
    }

    /// `max_i |cᵢ - c₀ conj(c_{n-i})|`; zero for unitary `U`, whose
    /// characteristic polynomial is self-inversive.
    pub fn self_inversive_defect(&self) -> f64 {
        let n = self.degree();
        let c0 = self.coeffs[0];
        (0..=n).map(|i| (self.coeffs[i] - c0 * self.coeffs[n - i].conj()).norm()).fold(0.0, f64::max)
    }
}

/// Faddeev–LeVerrier: `M_k = U M_{k-1} + c_{n-k+1} I`,
/// `c_{n-k} = -tr(U M_k) / k`.
pub fn char_poly(u: &ComplexMatrix) -> Result<CharPoly> {
    let n = u.dim();
    if n > MAX_DIM {
        return Err(Error::InvalidParameter(format!("characteristic polynomial capped at n = {MAX_DIM}, got {n}")));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut m = ComplexMatrix::zeros(n);
    for k in 1..=n {
        let mut next = u * &m;
        for i in 0..n {
            next[(i, i)] += coeffs[n - k + 1];
        }
        coeffs[n - k] = -u.trace_of_product(&next) / k as f64;
        m = next;
    }
    Ok(CharPoly { coeffs })
}

/// `tr(u^j)` for `j_min ≤ j ≤ j_max`; negative powers through `u^H`.
pub fn power_traces(u: &ComplexMatrix, j_min: i64, j_max: i64) -> Result<Vec<Complex64>> {
    if j_min > j_max {
        return Err(Error::InvalidParameter(format!("empty power range {j_min}..={j_max}")));
    }
    let mut out = Vec::with_capacity((j_max - j_min + 1) as usize);
    if j_min < 0 {
        let uh = u.adjoint();
        let mut p = ComplexMatrix::identity(u.dim());
        let mut neg = Vec::with_capacity(j_min.unsigned_abs() as usize);
        for _ in 0..j_min.unsigned_abs() {
            p = &p * &uh;
            neg.push(p.trace());
        }
        out.extend((j_min..=j_max.min(-1)).map(|j| neg[(-j - 1) as usize]));
    }
    if j_max >= 0 {
        let mut p = ComplexMatrix::identity(u.dim());
        for j in 0..=j_max {
            if j > 0 {
                p = &p * u;
            }
            if j >= j_min {
                out.push(p.trace());
            }
        }
    }
    Ok(out)
}

/// `|Σ_{i=0}^{n} cᵢ tr(u^{i+j})|`.
pub fn newton_residual(u: &ComplexMatrix, j: i64) -> Result<f64> {
    let cp = char_poly(u)?;
    let traces = power_traces(u, j, j + cp.degree() as i64)?;
    Ok(cp.coeffs.iter().zip(&traces).map(|(c, t)| c * t).sum::<Complex64>().norm())
}

/// `||Σ cᵢ uⁱ||_F`.
pub fn cayley_hamilton_residual(u: &ComplexMatrix) -> Result<f64> {
    let cp = char_poly(u)?;
    let n = u.dim();
    let mut power = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::zeros(n);
    for (i, &c) in cp.coeffs.iter().enumerate() {
        if i > 0 {
            power = &power * u;
        }
        sum = &sum + &power.scale(c);
    }
    Ok(sum.frobenius_norm())
}

/// One evaluation of the partial-sum representation at a fixed `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderSample {
    pub n: usize,
    pub partial_sum: Complex64,
    pub remainder: Complex64,
}

/// `(Σ_{|j|≤N} tr U(k)^j, R)` with `R = h(1, k) · partial_sum`.
pub fn partial_sum_remainder(f: &UnitaryFamily, k: f64, n_max: usize) -> Result<(Complex64, Complex64)> {
    let s = remainder_sweep(f, k, &[n_max])?[0];
    Ok((s.partial_sum, s.remainder))
}

/// [`partial_sum_remainder`] at every `N` in `ns` (ascending) from a single
/// pass over the powers.
pub fn remainder_sweep(f: &UnitaryFamily, k: f64, ns: &[usize]) -> Result<Vec<RemainderSample>> {
    let u = f.evaluate(k);
    let h1 = char_poly(&u)?.at_one();
    if h1.norm() <= NEAR_SINGULAR {
        return Err(Error::NearSingular { k, abs_h1: h1.norm() });
    }
    Ok(sweep_unchecked(&u, h1, ns))
}

/// `|h(1, k)|`, `Σ_{|j|≤N} tr U^j` and `R` without the crossing check; used by
/// scans, which must emit rows right through a crossing.
pub fn remainder_terms(u: &ComplexMatrix, n: usize) -> Result<(f64, Complex64, Complex64)> {
    let h1 = char_poly(u)?.at_one();
    let s = sweep_unchecked(u, h1, &[n])[0];
    Ok((h1.norm(), s.partial_sum, s.remainder))
}

fn sweep_unchecked(u: &ComplexMatrix, h1: Complex64, ns: &[usize]) -> Vec<RemainderSample> {
    let uh = u.adjoint();
    let mut pos = ComplexMatrix::identity(u.dim());
    let mut neg = ComplexMatrix::identity(u.dim());
    let mut partial = pos.trace();
    let mut out = Vec::with_capacity(ns.len());
    let mut j = 0;
    for &n in ns {
        while j < n {
            pos = &pos * u;
            neg = &neg * &uh;
            partial += pos.trace() + neg.trace();
            j += 1;
        }
        out.push(RemainderSample { n, partial_sum: partial, remainder: h1 * partial });
    }
    out
}
