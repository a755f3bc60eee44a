//! How much the connections between one node (or one group) and the rest of
//! the system contribute to each measure.
//!
//! The contribution is the measure of the intact system minus the measure of
//! a "disconnected" system in which the target and the rest are made both
//! independent and conditionally independent. The closed forms used by the
//! public functions are checked against the literal construction in
//! [`definitional`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{FieldKind, HermitianMatrix};
use crate::partition::Partition;
use crate::structured::block_gap;

/// What is being disconnected from the rest of the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConnectionTarget {
    Node(usize),
    Group(usize),
}

/// The four contributions for one target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConnectionReport {
    pub target: ConnectionTarget,
    pub tc: f64,
    pub dtc: f64,
    pub oinfo: f64,
    pub tse: f64,
    pub kind: FieldKind,
}

impl ConnectionReport {
    pub fn from_parts(target: ConnectionTarget, tc: f64, dtc: f64, kind: FieldKind) -> Self {
        Self { target, tc, dtc, oinfo: tc - dtc, tse: tc + dtc, kind }
    }

    /// Contributions of the connections between node `i` and all others.
    pub fn node(s: &HermitianMatrix, i: usize) -> Result<Self> {
        if s.dim() < 3 {
            log::warn!("p = {} is below the usual minimum of 3", s.dim());
        }
        Ok(Self::from_parts(ConnectionTarget::Node(i), pi_tc(s, i)?, pi_dtc(s, i)?, s.kind()))
    }

    /// Contributions of the connections between group `k` and all other
    /// groups.
    pub fn group(s: &HermitianMatrix, part: &Partition, k: usize) -> Result<Self> {
        if part.len() == 2 {
            log::warn!("partition has 2 groups; group contributions to O-information are identically 0");
        }
        let tc = kappa_tc(s, part, k)?;
        let dtc = kappa_dtc(s, part, k)?;
        Ok(Self::from_parts(ConnectionTarget::Group(k), tc, dtc, s.kind()))
    }
}

fn split_node(s: &HermitianMatrix, i: usize) -> Result<Vec<usize>> {
    let p = s.dim();
    if i >= p {
        return Err(Error::IndexOutOfRange { index: i, dim: p });
    }
    if p < 2 {
        return Err(Error::TooFewVariables { required: 2, found: p });
    }
    Ok((0..p).filter(|&j| j != i).collect())
}

// ln det diag(H) - ln det H
fn diag_gap(h: &HermitianMatrix) -> Result<f64> {
    let log_det = h.log_det()?;
    Ok(h.diag().iter().map(|d| d.ln()).sum::<f64>() - log_det)
}

/// Contribution of node `i`'s connections to total correlation.
pub fn pi_tc(s: &HermitianMatrix, i: usize) -> Result<f64> {
    let rest = split_node(s, i)?;
    let intact = diag_gap(s)?;
    let rest_given_i = s.schur_complement(&rest, &[i])?;
    Ok(s.kind().factor() * (intact - diag_gap(&rest_given_i)?))
}

/// Contribution of node `i`'s connections to dual total correlation.
pub fn pi_dtc(s: &HermitianMatrix, i: usize) -> Result<f64> {
    let rest = split_node(s, i)?;
    let intact = diag_gap(&s.inverse()?)?;
    let rest_precision = s.submatrix(&rest)?.inverse()?;
    Ok(s.kind().factor() * (intact - diag_gap(&rest_precision)?))
}

/// Negative values mean node `i`'s connections carry synergy.
pub fn pi_oinfo(s: &HermitianMatrix, i: usize) -> Result<f64> {
    Ok(pi_tc(s, i)? - pi_dtc(s, i)?)
}

pub fn pi_tse(s: &HermitianMatrix, i: usize) -> Result<f64> {
    Ok(pi_tc(s, i)? + pi_dtc(s, i)?)
}

/// Contribution of the connections between group `k` and the other groups to
/// structured total correlation.
pub fn kappa_tc(s: &HermitianMatrix, part: &Partition, k: usize) -> Result<f64> {
    part.check_dim(s.dim())?;
    let (rest, sub) = part.without_group(k)?;
    let intact = block_gap(s, part)?;
    if rest.is_empty() {
        return Ok(0.0);
    }
    let rest_given_k = s.schur_complement(&rest, part.group(k)?)?;
    Ok(s.kind().factor() * (intact - block_gap(&rest_given_k, &sub)?))
}

/// Contribution of the connections between group `k` and the other groups to
/// structured dual total correlation.
pub fn kappa_dtc(s: &HermitianMatrix, part: &Partition, k: usize) -> Result<f64> {
    part.check_dim(s.dim())?;
    let (rest, sub) = part.without_group(k)?;
    let intact = block_gap(&s.inverse()?, part)?;
    if rest.is_empty() {
        return Ok(0.0);
    }
    let rest_precision = s.submatrix(&rest)?.inverse()?;
    Ok(s.kind().factor() * (intact - block_gap(&rest_precision, &sub)?))
}

pub fn kappa_oinfo(s: &HermitianMatrix, part: &Partition, k: usize) -> Result<f64> {
    Ok(kappa_tc(s, part, k)? - kappa_dtc(s, part, k)?)
}

pub fn kappa_tse(s: &HermitianMatrix, part: &Partition, k: usize) -> Result<f64> {
    Ok(kappa_tc(s, part, k)? + kappa_dtc(s, part, k)?)
}

/// Contributions computed literally: build the disconnected covariance or
/// concentration matrix with exact zero off-blocks, evaluate the measure on
/// it, and subtract from the intact measure.
pub mod definitional {
    use super::*;
    use crate::linalg::C64;
    use crate::measures::{dual_total_correlation, total_correlation};
    use crate::structured::{sigma_dtc, sigma_tc};

    /// `blockdiag(a, b)` as a single matrix, `a` first.
    pub fn join_blocks(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
        let (na, nb) = (a.dim(), b.dim());
        let n = na + nb;
        let mut data = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..na {
            for j in 0..na {
                data[i * n + j] = a.get(i, j);
            }
        }
        for i in 0..nb {
            for j in 0..nb {
                data[(na + i) * n + na + j] = b.get(i, j);
            }
        }
        HermitianMatrix::new(n, data, a.kind())
    }

    /// Target indices first, then the rest: the Schur complement of each
    /// block given the other.
    fn disconnect(h: &HermitianMatrix, target: &[usize], rest: &[usize]) -> Result<HermitianMatrix> {
        let a = h.schur_complement(target, rest)?;
        let b = h.schur_complement(rest, target)?;
        join_blocks(&a, &b)
    }

    /// Disconnected covariance for node `i`:
    /// `blockdiag(var(x_i | rest), var(rest | x_i))`.
    pub fn disconnected_covariance(s: &HermitianMatrix, i: usize) -> Result<HermitianMatrix> {
        let rest = split_node(s, i)?;
        disconnect(s, &[i], &rest)
    }

    /// Disconnected concentration for node `i`, built from Schur complements
    /// of `C = S^-1`.
    pub fn disconnected_concentration(s: &HermitianMatrix, i: usize) -> Result<HermitianMatrix> {
        let rest = split_node(s, i)?;
        disconnect(&s.inverse()?, &[i], &rest)
    }

    fn factor_gap(h: &HermitianMatrix) -> Result<f64> {
        Ok(h.kind().factor() * diag_gap(h)?)
    }

    pub fn pi_tc(s: &HermitianMatrix, i: usize) -> Result<f64> {
        let disc = disconnected_covariance(s, i)?;
        Ok(total_correlation(s)? - factor_gap(&disc)?)
    }

    pub fn pi_dtc(s: &HermitianMatrix, i: usize) -> Result<f64> {
        let disc = disconnected_concentration(s, i)?;
        Ok(dual_total_correlation(s)? - factor_gap(&disc)?)
    }

    /// Group order after disconnection: group `k`, then the remaining groups.
    fn reordered(part: &Partition, k: usize) -> Result<(Vec<usize>, Vec<usize>, Partition)> {
        let target = part.group(k)?.to_vec();
        let (rest, sub) = part.without_group(k)?;
        let n = target.len();
        let mut groups = vec![(0..n).collect::<Vec<_>>()];
        groups.extend(sub.groups().iter().map(|g| g.iter().map(|&j| j + n).collect()));
        Ok((target, rest, Partition::from_groups(groups)?))
    }

    // Intact structured measure minus the block gap of the disconnected
    // matrix, which is a covariance for TC and a concentration for DTC.
    fn kappa_from(h: &HermitianMatrix, part: &Partition, k: usize, intact: f64) -> Result<f64> {
        let (target, rest, joined) = reordered(part, k)?;
        if rest.is_empty() {
            return Ok(0.0);
        }
        let disc = disconnect(h, &target, &rest)?;
        Ok(intact - h.kind().factor() * block_gap(&disc, &joined)?)
    }

    pub fn kappa_tc(s: &HermitianMatrix, part: &Partition, k: usize) -> Result<f64> {
        part.check_dim(s.dim())?;
        kappa_from(s, part, k, sigma_tc(s, part)?)
    }

    pub fn kappa_dtc(s: &HermitianMatrix, part: &Partition, k: usize) -> Result<f64> {
        part.check_dim(s.dim())?;
        kappa_from(&s.inverse()?, part, k, sigma_dtc(s, part)?)
    }

    pub fn node_report(s: &HermitianMatrix, i: usize) -> Result<ConnectionReport> {
        Ok(ConnectionReport::from_parts(ConnectionTarget::Node(i), pi_tc(s, i)?, pi_dtc(s, i)?, s.kind()))
    }

    pub fn group_report(s: &HermitianMatrix, part: &Partition, k: usize) -> Result<ConnectionReport> {
        let tc = kappa_tc(s, part, k)?;
        let dtc = kappa_dtc(s, part, k)?;
        Ok(ConnectionReport::from_parts(ConnectionTarget::Group(k), tc, dtc, s.kind()))
    }
}
