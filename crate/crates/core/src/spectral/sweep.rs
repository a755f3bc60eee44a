//! Evaluates a configurable set of measures at every frequency bin.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::CrossSpectra;
use crate::contributions::{kappa_dtc, kappa_tc, pi_dtc, pi_tc};
use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::measures::{dual_total_correlation, lambda_rsi, oinfo_gradient, total_correlation, MeasureReport};
use crate::partition::Partition;
use crate::structured::{sigma_dtc, sigma_rsi, sigma_tc, StructuredReport};

/// A measure, or a family of per-node / per-group measures, in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMeasure {
    Tc,
    Dtc,
    Oinfo,
    Tse,
    LambdaRsi,
    OinfoGradient,
    PiTc,
    PiDtc,
    PiOinfo,
    PiTse,
    SigmaTc,
    SigmaDtc,
    SigmaOinfo,
    SigmaTse,
    SigmaRsi,
    KappaTc,
    KappaDtc,
    KappaOinfo,
    KappaTse,
}

impl SweepMeasure {
    pub const ALL: [SweepMeasure; 19] = [
        Self::Tc,
        Self::Dtc,
        Self::Oinfo,
        Self::Tse,
        Self::LambdaRsi,
        Self::OinfoGradient,
        Self::PiTc,
        Self::PiDtc,
        Self::PiOinfo,
        Self::PiTse,
        Self::SigmaTc,
        Self::SigmaDtc,
        Self::SigmaOinfo,
        Self::SigmaTse,
        Self::SigmaRsi,
        Self::KappaTc,
        Self::KappaDtc,
        Self::KappaOinfo,
        Self::KappaTse,
    ];

    /// The default set: the four whole-system measures.
    pub const GLOBAL: [SweepMeasure; 4] = [Self::Tc, Self::Dtc, Self::Oinfo, Self::Tse];

    pub fn name(self) -> &'static str {
        match self {
            Self::Tc => "tc",
            Self::Dtc => "dtc",
            Self::Oinfo => "oinfo",
            Self::Tse => "tse",
            Self::LambdaRsi => "lambda_rsi",
            Self::OinfoGradient => "oinfo_gradient",
            Self::PiTc => "pi_tc",
            Self::PiDtc => "pi_dtc",
            Self::PiOinfo => "pi_oinfo",
            Self::PiTse => "pi_tse",
            Self::SigmaTc => "sigma_tc",
            Self::SigmaDtc => "sigma_dtc",
            Self::SigmaOinfo => "sigma_oinfo",
            Self::SigmaTse => "sigma_tse",
            Self::SigmaRsi => "sigma_rsi",
            Self::KappaTc => "kappa_tc",
            Self::KappaDtc => "kappa_dtc",
            Self::KappaOinfo => "kappa_oinfo",
            Self::KappaTse => "kappa_tse",
        }
    }

    fn per_node(self) -> bool {
        matches!(self, Self::LambdaRsi | Self::OinfoGradient | Self::PiTc | Self::PiDtc | Self::PiOinfo | Self::PiTse)
    }

    fn per_group(self) -> bool {
        matches!(self, Self::SigmaRsi | Self::KappaTc | Self::KappaDtc | Self::KappaOinfo | Self::KappaTse)
    }

    fn needs_partition(self) -> bool {
        self.per_group() || matches!(self, Self::SigmaTc | Self::SigmaDtc | Self::SigmaOinfo | Self::SigmaTse)
    }
}

impl fmt::Display for SweepMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown measure '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub measures: Vec<SweepMeasure>,
    #[serde(default)]
    pub partition: Option<Partition>,
    /// Ridge applied to every bin before evaluation.
    #[serde(default)]
    pub ridge: Option<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { measures: SweepMeasure::GLOBAL.to_vec(), partition: None, ridge: None }
    }
}

impl SweepConfig {
    /// Output column names (after `freq_hz`), in evaluation order. Per-node
    /// and per-group families expand to `<name>_<index>`.
    pub fn columns(&self, p: usize) -> Result<Vec<String>> {
        let groups = self.partition.as_ref().map_or(0, Partition::len);
        let mut cols = Vec::new();
        for &m in &self.measures {
            if m.needs_partition() && self.partition.is_none() {
                return Err(Error::PartitionMismatch(format!("measure '{m}' requires a partition")));
            }
            if m.per_node() {
                cols.extend((0..p).map(|i| format!("{m}_{i}")));
            } else if m.per_group() {
                cols.extend((0..groups).map(|k| format!("{m}_{k}")));
            } else {
                cols.push(m.name().to_string());
            }
        }
        Ok(cols)
    }

    fn evaluate(&self, s: &HermitianMatrix) -> Result<Vec<f64>> {
        let s = match self.ridge {
            Some(eps) => s.ridge(eps)?,
            None => s.clone(),
        };
        let p = s.dim();
        let global = if self.measures.iter().any(|m| SweepMeasure::GLOBAL.contains(m)) {
            Some(MeasureReport::from_parts(total_correlation(&s)?, dual_total_correlation(&s)?, s.kind(), p))
        } else {
            None
        };
        let structured = match &self.partition {
            Some(part) if self.measures.iter().any(|m| m.needs_partition() && !m.per_group()) => {
                Some(StructuredReport::from_parts(sigma_tc(&s, part)?, sigma_dtc(&s, part)?, part.len(), s.kind()))
            }
            _ => None,
        };
        let mut out = Vec::new();
        for &m in &self.measures {
            match m {
                SweepMeasure::Tc => out.push(global.unwrap().tc),
                SweepMeasure::Dtc => out.push(global.unwrap().dtc),
                SweepMeasure::Oinfo => out.push(global.unwrap().oinfo),
                SweepMeasure::Tse => out.push(global.unwrap().tse),
                SweepMeasure::SigmaTc => out.push(structured.unwrap().sigma_tc),
                SweepMeasure::SigmaDtc => out.push(structured.unwrap().sigma_dtc),
                SweepMeasure::SigmaOinfo => out.push(structured.unwrap().sigma_oinfo),
                SweepMeasure::SigmaTse => out.push(structured.unwrap().sigma_tse),
                SweepMeasure::LambdaRsi => {
                    for i in 0..p {
                        out.push(lambda_rsi(&s, i)?);
                    }
                }
                SweepMeasure::OinfoGradient => {
                    for i in 0..p {
                        out.push(oinfo_gradient(&s, i)?);
                    }
                }
                SweepMeasure::PiTc | SweepMeasure::PiDtc | SweepMeasure::PiOinfo | SweepMeasure::PiTse => {
                    for i in 0..p {
                        let (tc, dtc) = (pi_tc(&s, i)?, pi_dtc(&s, i)?);
                        out.push(combine(m, tc, dtc));
                    }
                }
                SweepMeasure::SigmaRsi => {
                    let part = self.partition.as_ref().expect("checked by columns");
                    for k in 0..part.len() {
                        out.push(sigma_rsi(&s, part, k)?);
                    }
                }
                SweepMeasure::KappaTc | SweepMeasure::KappaDtc | SweepMeasure::KappaOinfo | SweepMeasure::KappaTse => {
                    let part = self.partition.as_ref().expect("checked by columns");
                    for k in 0..part.len() {
                        let (tc, dtc) = (kappa_tc(&s, part, k)?, kappa_dtc(&s, part, k)?);
                        out.push(combine(m, tc, dtc));
                    }
                }
            }
        }
        Ok(out)
    }
}

fn combine(m: SweepMeasure, tc: f64, dtc: f64) -> f64 {
    match m {
        SweepMeasure::PiTc | SweepMeasure::KappaTc => tc,
        SweepMeasure::PiDtc | SweepMeasure::KappaDtc => dtc,
        SweepMeasure::PiOinfo | SweepMeasure::KappaOinfo => tc - dtc,
        _ => tc + dtc,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub freq_hz: f64,
    pub values: Vec<f64>,
}

/// Measures by frequency. Bins that could not be evaluated hold NaN values
/// and have an entry in `warnings`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
    pub warnings: Vec<String>,
}

impl SweepTable {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// One column as a vector, in row order.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r.values[j]).collect())
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.freq_hz).collect()
    }

    pub fn nearest_row(&self, freq_hz: f64) -> Option<&SweepRow> {
        super::nearest(&self.frequencies(), freq_hz).map(|i| &self.rows[i])
    }

    /// Divides every value by `ln 2`.
    pub fn to_bits(&self) -> Self {
        let mut out = self.clone();
        for r in &mut out.rows {
            r.values.iter_mut().for_each(|v| *v /= std::f64::consts::LN_2);
        }
        out
    }
}

/// Evaluates `config` at every bin of `cs`, in parallel, keeping bin order.
///
/// Configuration errors (unknown partition size, missing partition) abort;
/// numerical failures at a single bin produce a NaN row and a warning.
pub fn spectral_measure_sweep(cs: &CrossSpectra, config: &SweepConfig) -> Result<SweepTable> {
    let p = cs.dim();
    if let Some(part) = &config.partition {
        part.check_dim(p)?;
    }
    let columns = config.columns(p)?;
    if p < 3 {
        log::warn!("p = {p} is below the usual minimum of 3; O-information is identically 0");
    }
    if config.partition.as_ref().is_some_and(|part| part.len() == 2) {
        log::warn!("partition has 2 groups; structured O-information is identically 0");
    }
    let results: Vec<Result<Vec<f64>>> = cs.matrices.par_iter().map(|s| config.evaluate(s)).collect();
    let mut rows = Vec::with_capacity(cs.len());
    let mut warnings = Vec::new();
    for (&freq_hz, res) in cs.frequencies.iter().zip(results) {
        let values = match res {
            Ok(v) => v,
            Err(e) => {
                let msg = format!("{freq_hz} Hz: {e}");
                log::warn!("skipping bin {msg}");
                warnings.push(msg);
                vec![f64::NAN; columns.len()]
            }
        };
        rows.push(SweepRow { freq_hz, values });
    }
    Ok(SweepTable { columns, rows, warnings })
}
