//! Between-group measures over a [`Partition`].
//!
//! Each measure ignores within-group dependence: the block-diagonal part of
//! the covariance (or concentration) matrix plays the role the diagonal plays
//! in the unstructured measures.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{FieldKind, HermitianMatrix};
use crate::partition::Partition;

/// `sum_k ln det H[g_k, g_k]`, i.e. `ln det blockdiag(H)`.
pub(crate) fn log_det_blockdiag(h: &HermitianMatrix, part: &Partition) -> Result<f64> {
    part.check_dim(h.dim())?;
    let mut acc = 0.0;
    for g in part.groups() {
        acc += h.submatrix(g)?.log_det()?;
    }
    Ok(acc)
}

/// `ln det blockdiag(H) - ln det H`, without the field factor.
pub(crate) fn block_gap(h: &HermitianMatrix, part: &Partition) -> Result<f64> {
    part.check_dim(h.dim())?;
    let full = h.log_det()?;
    Ok(log_det_blockdiag(h, part)? - full)
}

/// Structured total correlation: `factor * (ln det blockdiag S - ln det S)`.
pub fn sigma_tc(s: &HermitianMatrix, part: &Partition) -> Result<f64> {
    part.check_dim(s.dim())?;
    if part.len() == 1 {
        s.cholesky()?;
        return Ok(0.0);
    }
    Ok(s.kind().factor() * block_gap(s, part)?)
}

/// Structured dual total correlation, the same gap on `S^-1`.
pub fn sigma_dtc(s: &HermitianMatrix, part: &Partition) -> Result<f64> {
    part.check_dim(s.dim())?;
    let c = s.inverse()?;
    if part.len() == 1 {
        return Ok(0.0);
    }
    Ok(s.kind().factor() * block_gap(&c, part)?)
}

/// Structured O-information. Positive values mean redundancy dominates the
/// interactions between groups.
pub fn sigma_oinfo(s: &HermitianMatrix, part: &Partition) -> Result<f64> {
    Ok(sigma_tc(s, part)? - sigma_dtc(s, part)?)
}

pub fn sigma_tse(s: &HermitianMatrix, part: &Partition) -> Result<f64> {
    Ok(sigma_tc(s, part)? + sigma_dtc(s, part)?)
}

/// Structured redundancy-synergy index of group `k`: the between-group total
/// correlation of the other groups, minus the same quantity conditioned on
/// group `k`. Negative values mean group `k` adds synergy between groups.
pub fn sigma_rsi(s: &HermitianMatrix, part: &Partition, k: usize) -> Result<f64> {
    part.check_dim(s.dim())?;
    let (rest, sub) = part.without_group(k)?;
    if rest.is_empty() {
        return Ok(0.0);
    }
    s.cholesky()?;
    let marginal = s.submatrix(&rest)?;
    let conditional = s.schur_complement(&rest, part.group(k)?)?;
    Ok(sigma_tc(&marginal, &sub)? - sigma_tc(&conditional, &sub)?)
}

/// The four between-group measures of one matrix and partition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructuredReport {
    pub sigma_tc: f64,
    pub sigma_dtc: f64,
    pub sigma_oinfo: f64,
    pub sigma_tse: f64,
    pub groups: usize,
    pub kind: FieldKind,
}

impl StructuredReport {
    pub fn compute(s: &HermitianMatrix, part: &Partition) -> Result<Self> {
        part.check_dim(s.dim())?;
        if part.len() == 2 {
            log::warn!("partition has 2 groups; structured O-information is identically 0");
        }
        let tc = sigma_tc(s, part)?;
        let dtc = sigma_dtc(s, part)?;
        Ok(Self::from_parts(tc, dtc, part.len(), s.kind()))
    }

    pub fn from_parts(tc: f64, dtc: f64, groups: usize, kind: FieldKind) -> Self {
        Self { sigma_tc: tc, sigma_dtc: dtc, sigma_oinfo: tc - dtc, sigma_tse: tc + dtc, groups, kind }
    }
}
