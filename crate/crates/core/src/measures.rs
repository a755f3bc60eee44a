//! Whole-system and single-variable measures.
//!
//! With `R = std(S)` the coherence (correlation) matrix and `P = std(S^-1)`
//! the scaled concentration matrix:
//!
//! * total correlation `TC = -ln det R`
//! * dual total correlation `DTC = -ln det P`
//! * O-information `TC - DTC`, TSE complexity `TC + DTC`
//!
//! each times ½ for real data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{FieldKind, HermitianMatrix};

/// `factor * (-ln det std(S))`.
pub fn total_correlation(s: &HermitianMatrix) -> Result<f64> {
    // Factor first: a non-PD S must fail even when std(S) happens to be PD.
    s.cholesky()?;
    Ok(-s.kind().factor() * s.standardize()?.log_det()?)
}

/// `factor * (-ln det std(S^-1))`.
pub fn dual_total_correlation(s: &HermitianMatrix) -> Result<f64> {
    let precision = s.inverse()?;
    Ok(-s.kind().factor() * precision.standardize()?.log_det()?)
}

/// `TC - DTC`; positive values mean redundancy dominates.
pub fn o_information(s: &HermitianMatrix) -> Result<f64> {
    Ok(MeasureReport::from_parts(total_correlation(s)?, dual_total_correlation(s)?, s.kind(), s.dim()).oinfo)
}

/// `TC + DTC`.
pub fn tse_complexity(s: &HermitianMatrix) -> Result<f64> {
    Ok(MeasureReport::from_parts(total_correlation(s)?, dual_total_correlation(s)?, s.kind(), s.dim()).tse)
}

/// The four whole-system measures of one matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub tc: f64,
    pub dtc: f64,
    pub oinfo: f64,
    pub tse: f64,
    pub kind: FieldKind,
    pub p: usize,
}

impl MeasureReport {
    pub fn compute(s: &HermitianMatrix) -> Result<Self> {
        if s.dim() < 3 {
            log::warn!("p = {} is below the usual minimum of 3; O-information is identically 0", s.dim());
        }
        let tc = total_correlation(s)?;
        let dtc = dual_total_correlation(s)?;
        Ok(Self::from_parts(tc, dtc, s.kind(), s.dim()))
    }

    /// Assembles a report so that `oinfo == tc - dtc` and `tse == tc + dtc`
    /// hold exactly.
    pub fn from_parts(tc: f64, dtc: f64, kind: FieldKind, p: usize) -> Self {
        Self { tc, dtc, oinfo: tc - dtc, tse: tc + dtc, kind, p }
    }
}

/// Redundancy-synergy index of the variables `x` with respect to the single
/// variable `y`: `TC(X) - TC(X | y)`. Negative values indicate synergy.
pub fn rsi(s: &HermitianMatrix, x: &[usize], y: usize) -> Result<f64> {
    if x.len() < 2 {
        return Err(Error::TooFewVariables { required: 2, found: x.len() });
    }
    if y >= s.dim() {
        return Err(Error::IndexOutOfRange { index: y, dim: s.dim() });
    }
    if x.contains(&y) {
        return Err(Error::IndexOverlap(y));
    }
    let marginal = s.submatrix(x)?.standardize()?.log_det()?;
    let conditional = s.schur_complement(x, &[y])?.standardize()?.log_det()?;
    Ok(s.kind().factor() * (-marginal + conditional))
}

/// RSI of all other variables with respect to variable `i`. Negative values
/// mean `i` contributes synergy to the system.
pub fn lambda_rsi(s: &HermitianMatrix, i: usize) -> Result<f64> {
    let p = s.dim();
    if p < 3 {
        return Err(Error::TooFewVariables { required: 3, found: p });
    }
    if i >= p {
        return Err(Error::IndexOutOfRange { index: i, dim: p });
    }
    let rest: Vec<usize> = (0..p).filter(|&j| j != i).collect();
    rsi(s, &rest, i)
}

/// First-order O-information gradient `O(S) - O(S without i)`. Variable `i`
/// is marginalized out, not conditioned on.
pub fn oinfo_gradient(s: &HermitianMatrix, i: usize) -> Result<f64> {
    let p = s.dim();
    if p < 3 {
        return Err(Error::TooFewVariables { required: 3, found: p });
    }
    let reduced = s.delete_index(i)?;
    Ok(o_information(s)? - o_information(&reduced)?)
}

/// Nagao trace statistic `½ tr[(I - R)^2]` standing in for `TC`.
pub fn tc_trace_approx(s: &HermitianMatrix) -> Result<f64> {
    s.cholesky()?;
    Ok(s.kind().factor() * half_trace_sq_offdiag(&s.standardize()?))
}

/// Nagao trace statistic `½ tr[(I - P)^2]` standing in for `DTC`.
pub fn dtc_trace_approx(s: &HermitianMatrix) -> Result<f64> {
    Ok(s.kind().factor() * half_trace_sq_offdiag(&s.inverse()?.standardize()?))
}

// For unit-diagonal Hermitian R, tr[(I - R)^2] is the sum of |R_ij|^2 over i != j.
fn half_trace_sq_offdiag(r: &HermitianMatrix) -> f64 {
    let p = r.dim();
    let mut acc = 0.0;
    for i in 0..p {
        for j in 0..p {
            if i != j {
                acc += r.get(i, j).norm_sqr();
            }
        }
    }
    0.5 * acc
}

/// Differential entropy of a zero-mean Gaussian with covariance `S`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyValue {
    pub value: f64,
    pub kind: FieldKind,
}

/// `p + p ln(pi) + ln det S` for complex data, half of that for real data.
///
/// The real-case constant follows the same ½ convention as every other
/// measure here rather than the textbook `½ p ln(2 pi e)`; only entropy
/// differences are used downstream, where the constant cancels.
pub fn gaussian_entropy(s: &HermitianMatrix) -> Result<EntropyValue> {
    let p = s.dim() as f64;
    let value = s.kind().factor() * (p + p * std::f64::consts::PI.ln() + s.log_det()?);
    Ok(EntropyValue { value, kind: s.kind() })
}
