//! Independent reference computations for every closed form, and a corpus
//! runner that compares them.
//!
//! Each oracle reaches the same quantity by a different route: entropies of
//! marginals and conditionals instead of standardized determinants, the full
//! Wishart Kullback-Leibler divergence instead of its collapsed log-det form,
//! and literal disconnected matrices instead of the closed contribution
//! formulas.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contributions::{self, definitional};
use crate::error::{Error, Result};
use crate::gaussian::BoxMuller;
use crate::linalg::{FieldKind, HermitianMatrix, C64};
use crate::measures::{dual_total_correlation, gaussian_entropy, total_correlation};
use crate::partition::Partition;
use crate::structured::sigma_tc;

/// Default pass threshold for `verify`.
pub const VERIFY_TOLERANCE: f64 = 1e-8;

/// `sum_i H(x_i) - H(X)` from Gaussian entropies.
pub fn tc_entropy_oracle(s: &HermitianMatrix) -> Result<f64> {
    let joint = gaussian_entropy(s)?.value;
    let mut marginals = 0.0;
    for i in 0..s.dim() {
        marginals += gaussian_entropy(&s.submatrix(&[i])?)?.value;
    }
    Ok(marginals - joint)
}

/// `H(X) - sum_i H(x_i | rest)` computed twice: with `var(x_i | rest)` taken
/// as `1 / [S^-1]_ii`, and as the Schur complement of `{i}` given the rest.
/// Returns `(via_inverse, via_schur)`.
pub fn dtc_conditional_oracle(s: &HermitianMatrix) -> Result<(f64, f64)> {
    let p = s.dim();
    let kind = s.kind();
    let joint = gaussian_entropy(s)?.value;
    let precision_diag = s.inverse()?.diag();
    let (mut via_inverse, mut via_schur) = (joint, joint);
    for (i, &d) in precision_diag.iter().enumerate() {
        let v = HermitianMatrix::diagonal(&[1.0 / d], kind)?;
        via_inverse -= gaussian_entropy(&v)?.value;
        let rest: Vec<usize> = (0..p).filter(|&j| j != i).collect();
        let c = s.schur_complement(&[i], &rest)?;
        via_schur -= gaussian_entropy(&c)?.value;
    }
    Ok((via_inverse, via_schur))
}

/// Reference matrix for the Wishart divergence.
#[derive(Debug, Clone, PartialEq)]
pub enum WishartReference {
    Diagonal,
    BlockDiagonal(Partition),
}

impl WishartReference {
    fn matrix(&self, s: &HermitianMatrix) -> Result<HermitianMatrix> {
        match self {
            Self::Diagonal => Ok(s.diag_part()),
            Self::BlockDiagonal(part) => s.blockdiag_part(part),
        }
    }
}

/// `tr(Ref^-1 S)`, which equals `p` for both reference kinds.
pub fn wishart_trace(s: &HermitianMatrix, reference: &WishartReference) -> Result<f64> {
    let r_inv = reference.matrix(s)?.inverse()?;
    let p = s.dim();
    let mut tr = 0.0;
    for i in 0..p {
        for k in 0..p {
            tr += (r_inv.get(i, k) * s.get(k, i)).re;
        }
    }
    Ok(tr)
}

/// Equal-df Wishart divergence of `S` from its reference:
/// `factor * [tr(Ref^-1 S) - p + ln det Ref - ln det S]`.
pub fn wishart_kl_oracle(s: &HermitianMatrix, reference: &WishartReference) -> Result<f64> {
    let tr = wishart_trace(s, reference)?;
    let r = reference.matrix(s)?;
    let gap = tr - s.dim() as f64 + r.log_det()? - s.log_det()?;
    Ok(s.kind().factor() * gap)
}

/// Total correlation of the precision matrix.
pub fn dtc_as_tc_of_precision(s: &HermitianMatrix) -> Result<f64> {
    total_correlation(&s.inverse()?)
}

/// `G G* + 0.1 I` with standard normal `G` (complex: independent real and
/// imaginary parts).
pub fn random_pd(p: usize, kind: FieldKind, seed: u64) -> HermitianMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut normal = BoxMuller::default();
    let g: Vec<C64> = (0..p * p)
        .map(|_| {
            let re = normal.sample(&mut rng);
            let im = if kind == FieldKind::Complex { normal.sample(&mut rng) } else { 0.0 };
            C64::new(re, im)
        })
        .collect();
    let mut data = vec![C64::new(0.0, 0.0); p * p];
    for i in 0..p {
        for j in 0..p {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..p {
                acc += g[i * p + k] * g[j * p + k].conj();
            }
            data[i * p + j] = acc;
        }
        data[i * p + i] += 0.1;
    }
    HermitianMatrix::new(p, data, kind).expect("Gram matrix plus ridge is Hermitian with positive diagonal")
}

/// `I + eps E` with `E` Hermitian, zero diagonal and largest entry magnitude
/// exactly 1; off-diagonal parts uniform in `[-1, 1]` before rescaling.
pub fn near_identity(p: usize, eps: f64, kind: FieldKind, seed: u64) -> HermitianMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut uniform = || 2.0 * rng.random::<f64>() - 1.0;
    let mut e = vec![C64::new(0.0, 0.0); p * p];
    for i in 0..p {
        for j in (i + 1)..p {
            let im = if kind == FieldKind::Complex { uniform() } else { 0.0 };
            e[i * p + j] = C64::new(uniform(), im);
        }
    }
    let max = e.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let mut data = vec![C64::new(0.0, 0.0); p * p];
    for i in 0..p {
        data[i * p + i] = C64::new(1.0, 0.0);
        for j in (i + 1)..p {
            let v = e[i * p + j] * (eps / max);
            data[i * p + j] = v;
            data[j * p + i] = v.conj();
        }
    }
    HermitianMatrix::new(p, data, kind).expect("Hermitian by construction")
}

/// A corpus entry with its reproducible identity.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusCase {
    pub id: String,
    pub seed: u64,
    pub matrix: HermitianMatrix,
}

/// `size` random matrices alternating real and complex, `p` cycling through
/// `2..=10`; case `n` uses seed `seed + n`.
pub fn standard_corpus(size: usize, seed: u64) -> Vec<CorpusCase> {
    (0..size)
        .map(|n| {
            let kind = if n % 2 == 0 { FieldKind::Real } else { FieldKind::Complex };
            let p = 2 + (n / 2) % 9;
            let case_seed = seed.wrapping_add(n as u64);
            CorpusCase {
                id: format!("{kind}-p{p}-seed{case_seed}"),
                seed: case_seed,
                matrix: random_pd(p, kind, case_seed),
            }
        })
        .collect()
}

/// Consecutive groups of two (the last may hold one).
pub fn pairs_partition(p: usize) -> Partition {
    let sizes: Vec<usize> = (0..p).step_by(2).map(|start| (p - start).min(2)).collect();
    Partition::contiguous(&sizes).expect("sizes sum to p")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleDiscrepancy {
    pub case_id: String,
    pub primary: f64,
    pub oracle: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub name: String,
    pub cases: usize,
    pub max_abs_diff: f64,
    pub passed: bool,
    /// Largest discrepancies, worst first.
    pub worst: Vec<OracleDiscrepancy>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub corpus_size: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub passed: bool,
    pub oracles: Vec<OracleSummary>,
}

const WORST_KEPT: usize = 3;

/// Oracle names in report order.
pub const ORACLE_NAMES: [&str; 11] = [
    "tc_vs_entropy",
    "dtc_vs_conditional_entropy",
    "conditional_variance_inverse_vs_schur",
    "tc_vs_wishart_kl",
    "wishart_trace_equals_p",
    "sigma_tc_vs_wishart_kl_blockdiag",
    "dtc_vs_tc_of_precision",
    "pi_tc_vs_disconnected",
    "pi_dtc_vs_disconnected",
    "kappa_tc_vs_disconnected",
    "kappa_dtc_vs_disconnected",
];

/// `(primary, oracle)` for every oracle on one matrix, in [`ORACLE_NAMES`]
/// order. `pick` selects the node and group targets.
pub fn oracle_pairs(s: &HermitianMatrix, pick: usize) -> Result<Vec<(f64, f64)>> {
    let p = s.dim();
    let tc = total_correlation(s)?;
    let dtc = dual_total_correlation(s)?;
    let (via_inverse, via_schur) = dtc_conditional_oracle(s)?;
    let part = pairs_partition(p);
    let block = WishartReference::BlockDiagonal(part.clone());
    let i = pick % p;
    let k = pick % part.len();
    Ok(vec![
        (tc, tc_entropy_oracle(s)?),
        (dtc, via_inverse),
        (via_inverse, via_schur),
        (tc, wishart_kl_oracle(s, &WishartReference::Diagonal)?),
        (p as f64, wishart_trace(s, &WishartReference::Diagonal)?),
        (sigma_tc(s, &part)?, wishart_kl_oracle(s, &block)?),
        (dtc, dtc_as_tc_of_precision(s)?),
        (contributions::pi_tc(s, i)?, definitional::pi_tc(s, i)?),
        (contributions::pi_dtc(s, i)?, definitional::pi_dtc(s, i)?),
        (contributions::kappa_tc(s, &part, k)?, definitional::kappa_tc(s, &part, k)?),
        (contributions::kappa_dtc(s, &part, k)?, definitional::kappa_dtc(s, &part, k)?),
    ])
}

/// Runs every oracle over the standard corpus.
pub fn verify(corpus_size: usize, seed: u64, tolerance: f64) -> Result<VerificationReport> {
    if corpus_size == 0 {
        return Err(Error::InvalidArgument("corpus size must be positive".into()));
    }
    let corpus = standard_corpus(corpus_size, seed);
    let results: Vec<Vec<(f64, f64)>> =
        corpus.par_iter().enumerate().map(|(n, case)| oracle_pairs(&case.matrix, n)).collect::<Result<_>>()?;
    let oracles = ORACLE_NAMES
        .iter()
        .enumerate()
        .map(|(o, name)| {
            let mut all: Vec<OracleDiscrepancy> = corpus
                .iter()
                .zip(&results)
                .map(|(case, pairs)| {
                    let (primary, oracle) = pairs[o];
                    OracleDiscrepancy { case_id: case.id.clone(), primary, oracle, abs_diff: (primary - oracle).abs() }
                })
                .collect();
            // NaN sorts first so that it is never hidden.
            all.sort_by(|a, b| match (a.abs_diff.is_nan(), b.abs_diff.is_nan()) {
                (true, false) => std::cmp::Ordering::Less,
                (false, true) => std::cmp::Ordering::Greater,
                _ => b.abs_diff.total_cmp(&a.abs_diff),
            });
            let max_abs_diff = all.first().map_or(0.0, |d| d.abs_diff);
            all.truncate(WORST_KEPT);
            OracleSummary {
                name: name.to_string(),
                cases: corpus.len(),
                max_abs_diff,
                passed: max_abs_diff <= tolerance,
                worst: all,
            }
        })
        .collect::<Vec<_>>();
    let passed = oracles.iter().all(|o| o.passed);
    Ok(VerificationReport { corpus_size, seed, tolerance, passed, oracles })
}
