//! Exponential-sum expansion of `tr(U(k)^m A)` for `U(k) = diag(e^{ikℓ}) S`.
//!
//! `(DS)^m = Σ_n e^{ik n·ℓ} M_n` where `n` counts how often each index is
//! visited along a path of length `m`. The `M_n` are built by one dynamic
//! program per sign of `m`, so no path is ever enumerated.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::{FamilyKind, ObservableFamily, UnitaryFamily};
use crate::linalg::ComplexMatrix;

/// Coefficients at or below this modulus are dropped.
pub const COEFF_FLOOR: f64 = 1e-15;

/// One term `coeff · e^{ik·freq}` of `tr(U(k)^order A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpSumTerm {
    pub freq: f64,
    pub coeff: Complex64,
    pub multi_index: Vec<i64>,
    pub order: i64,
}

impl ExpSumTerm {
    pub fn eval(&self, k: f64) -> Complex64 {
        self.coeff * Complex64::from_polar(1.0, k * self.freq)
    }
}

/// `(lengths, S, A)` for a family/observable pair the expansion supports.
fn expansion_inputs(f: &UnitaryFamily, a: &ObservableFamily) -> Result<(Vec<f64>, ComplexMatrix, ComplexMatrix)> {
    let (lengths, s) = match f.kind() {
        FamilyKind::DiagPhase { lengths, s } => (lengths.clone(), s.clone()),
        FamilyKind::Scalar { omega } => (vec![*omega], ComplexMatrix::identity(1)),
        FamilyKind::ExpPath { .. } => {
            return Err(Error::UnsupportedFamily(
                "crystalline expansion needs U(k) = diag(e^{ikl}) S; exp_path families have no such form".into(),
            ))
        }
    };
    let am = match a {
        ObservableFamily::DerivativeOfU => {
            return Err(Error::UnsupportedFamily("crystalline expansion needs a k-independent observable".into()))
        }
        _ => a.evaluate(f, 0.0)?,
    };
    Ok((lengths, s, am))
}

/// All terms of orders `-m_max..=m_max`, ordered by order and then by
/// multi-index.
pub fn crystalline_expand(f: &UnitaryFamily, a: &ObservableFamily, m_max: usize) -> Result<Vec<ExpSumTerm>> {
    let (lengths, s, am) = expansion_inputs(f, a)?;
    let n = lengths.len();
    let sh = s.adjoint();

    let mut negative = Vec::with_capacity(m_max);
    let mut positive = Vec::with_capacity(m_max + 1);
    let mut pos: BTreeMap<Vec<i64>, ComplexMatrix> = BTreeMap::from([(vec![0; n], ComplexMatrix::identity(n))]);
    let mut neg = pos.clone();
    positive.push(collect_terms(&pos, &am, &lengths, 0));
    for m in 1..=m_max as i64 {
        // (DS)^{m} = D · S · (DS)^{m-1}: row i picks up e^{ikℓ_i}.
        let mut next = BTreeMap::new();
        for (key, mat) in &pos {
            let prod = &s * mat;
            for i in 0..n {
                let mut k2 = key.clone();
                k2[i] += 1;
                let entry = next.entry(k2).or_insert_with(|| ComplexMatrix::zeros(n));
                for j in 0..n {
                    entry[(i, j)] += prod[(i, j)];
                }
            }
        }
        pos = next;
        positive.push(collect_terms(&pos, &am, &lengths, m));

        // U^{-m} = U^{-(m-1)} · S^H · D̄: column i picks up e^{-ikℓ_i}.
        let mut next = BTreeMap::new();
        for (key, mat) in &neg {
            let prod = mat * &sh;
            for i in 0..n {
                let mut k2 = key.clone();
                k2[i] -= 1;
                let entry = next.entry(k2).or_insert_with(|| ComplexMatrix::zeros(n));
                for r in 0..n {
                    entry[(r, i)] += prod[(r, i)];
                }
            }
        }
        neg = next;
        negative.push(collect_terms(&neg, &am, &lengths, -m));
    }
    Ok(negative.into_iter().rev().chain(positive).flatten().collect())
}

fn collect_terms(
    mats: &BTreeMap<Vec<i64>, ComplexMatrix>,
    am: &ComplexMatrix,
    lengths: &[f64],
    order: i64,
) -> Vec<ExpSumTerm> {
    mats.iter()
        .filter_map(|(key, mat)| {
            let coeff = mat.trace_of_product(am);
            (coeff.norm() > COEFF_FLOOR).then(|| ExpSumTerm {
                freq: key.iter().zip(lengths).map(|(&c, &l)| c as f64 * l).sum(),
                coeff,
                multi_index: key.clone(),
                order,
            })
        })
        .collect()
}

/// `Σ coeff · e^{ik·freq}` over the terms of one order.
pub fn exp_sum_at(terms: &[ExpSumTerm], order: i64, k: f64) -> Complex64 {
    terms.iter().filter(|t| t.order == order).map(|t| t.eval(k)).sum()
}

/// Abel-weighted sum `Σ_m t^{|m|} Σ_{terms of order m} coeff · e^{ik·freq}`.
pub fn abel_exp_sum(terms: &[ExpSumTerm], k: f64, t: f64) -> Complex64 {
    terms.iter().map(|term| term.eval(k) * t.powi(term.order.unsigned_abs() as i32)).sum()
}
