//! JSON form of a measure and its exponential-sum side. Reals are written as
//! 17-significant-digit strings so a reader recovers the exact bits.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Atom, AtomicMeasure, ExpSumTerm, COEFF_FLOOR, WEIGHT_FLOOR};
use crate::error::{Error, Result};
use crate::family::FamilySpec;
use crate::output::{fmt17, parse17, write_atomic};
use crate::spectral_flow::{MERGE_TOL, MIN_SPEED, PHASE_TOL};

pub const FORMAT: &str = "unitrace-measure/1";

/// `(freq, re, im, multi_index, order)`.
pub type TermRow = (String, String, String, Vec<i64>, i64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureDocument {
    /// `(k0, re w, im w)`.
    pub atoms: Vec<[String; 3]>,
    pub terms: Vec<TermRow>,
    pub metadata: Metadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub format: String,
    pub family: Option<FamilySpec>,
    pub k_range: [String; 2],
    pub tolerances: BTreeMap<String, String>,
}

pub fn measure_document(mu: &AtomicMeasure, terms: &[ExpSumTerm], family: Option<&FamilySpec>) -> MeasureDocument {
    let atoms = mu
        .atoms()
        .iter()
        .map(|a| [fmt17(a.position), fmt17(a.weight.re), fmt17(a.weight.im)])
        .collect();
    let terms = terms
        .iter()
        .map(|t| (fmt17(t.freq), fmt17(t.coeff.re), fmt17(t.coeff.im), t.multi_index.clone(), t.order))
        .collect();
    let tolerances = [
        ("crossing_merge", MERGE_TOL),
        ("crossing_phase", PHASE_TOL),
        ("min_speed", MIN_SPEED),
        ("weight_floor", WEIGHT_FLOOR),
        ("coeff_floor", COEFF_FLOOR),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), fmt17(v)))
    .collect();
    let (lo, hi) = mu.k_range();
    MeasureDocument {
        atoms,
        terms,
        metadata: Metadata {
            format: FORMAT.into(),
            family: family.cloned(),
            k_range: [fmt17(lo), fmt17(hi)],
            tolerances,
        },
    }
}

pub fn export_measure(mu: &AtomicMeasure, terms: &[ExpSumTerm], family: Option<&FamilySpec>, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&measure_document(mu, terms, family))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

impl MeasureDocument {
    pub fn decode(&self) -> Result<(AtomicMeasure, Vec<ExpSumTerm>)> {
        if self.metadata.format != FORMAT {
            return Err(Error::Config(format!("unknown measure format {:?}", self.metadata.format)));
        }
        let atoms = self
            .atoms
            .iter()
            .map(|[k, re, im]| {
                Ok(Atom {
                    position: parse17(k)?,
                    weight: Complex64::new(parse17(re)?, parse17(im)?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let range = (parse17(&self.metadata.k_range[0])?, parse17(&self.metadata.k_range[1])?);
        let terms = self
            .terms
            .iter()
            .map(|(freq, re, im, idx, order)| {
                Ok(ExpSumTerm {
                    freq: parse17(freq)?,
                    coeff: Complex64::new(parse17(re)?, parse17(im)?),
                    multi_index: idx.clone(),
                    order: *order,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((AtomicMeasure::new(atoms, range)?, terms))
    }
}

pub fn import_measure(path: &Path) -> Result<(AtomicMeasure, Vec<ExpSumTerm>)> {
    let doc: MeasureDocument = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    doc.decode()
}
