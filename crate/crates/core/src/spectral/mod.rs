//! Multichannel time series, cross-spectra and per-frequency measure sweeps.

mod ar;
mod elliptical;
mod estimate;
mod sweep;
pub mod toy;

pub use ar::{ArModel, SimulationSpec, Sinusoid, Stability, DEFAULT_BURN_IN, STABILITY_MARGIN};
pub use elliptical::{sample_multivariate_t, sample_scatter};
pub use estimate::{hann_taper, parametric_cross_spectra, periodogram_cross_spectra};
pub use sweep::{spectral_measure_sweep, SweepConfig, SweepMeasure, SweepRow, SweepTable};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;

/// Real-valued multichannel data cut into equal-length epochs.
///
/// `data` is epoch-major, then sample, then channel:
/// `data[(e * samples_per_epoch + t) * p + c]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesEpochs {
    pub epochs: usize,
    pub samples_per_epoch: usize,
    pub p: usize,
    pub data: Vec<f64>,
    pub fs: f64,
    pub seed: Option<u64>,
}

impl TimeSeriesEpochs {
    pub fn new(epochs: usize, samples_per_epoch: usize, p: usize, data: Vec<f64>, fs: f64) -> Result<Self> {
        if epochs == 0 || samples_per_epoch == 0 || p == 0 {
            return Err(Error::InvalidArgument("epochs, samples and channels must all be positive".into()));
        }
        if !(fs > 0.0 && fs.is_finite()) {
            return Err(Error::InvalidArgument(format!("sampling rate must be positive, got {fs}")));
        }
        let expected = epochs * samples_per_epoch * p;
        if data.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: data.len() });
        }
        if let Some(idx) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { row: idx / p, col: idx % p });
        }
        Ok(Self { epochs, samples_per_epoch, p, data, fs, seed: None })
    }

    /// Splits consecutive rows (one value per channel) into epochs of
    /// `epoch_len` samples.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], epoch_len: usize, fs: f64) -> Result<Self> {
        if epoch_len == 0 {
            return Err(Error::InvalidArgument("epoch length must be positive".into()));
        }
        if rows.is_empty() || !rows.len().is_multiple_of(epoch_len) {
            return Err(Error::EpochMismatch { rows: rows.len(), epoch_len });
        }
        let p = rows[0].as_ref().len();
        let mut data = Vec::with_capacity(rows.len() * p);
        for row in rows {
            let row = row.as_ref();
            if row.len() != p {
                return Err(Error::DimensionMismatch { expected: p, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Self::new(rows.len() / epoch_len, epoch_len, p, data, fs)
    }

    #[inline]
    pub fn get(&self, epoch: usize, t: usize, channel: usize) -> f64 {
        self.data[(epoch * self.samples_per_epoch + t) * self.p + channel]
    }

    /// Samples of one epoch, row-major `samples x p`.
    pub fn epoch(&self, e: usize) -> &[f64] {
        let n = self.samples_per_epoch * self.p;
        &self.data[e * n..(e + 1) * n]
    }

    /// All samples as rows, epochs concatenated.
    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.p)
    }
}

/// One Hermitian cross-spectral matrix per frequency, frequencies ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSpectra {
    pub frequencies: Vec<f64>,
    pub matrices: Vec<HermitianMatrix>,
    /// Number of epochs averaged; 0 for model-derived spectra.
    pub epochs_averaged: usize,
}

impl CrossSpectra {
    pub fn new(frequencies: Vec<f64>, matrices: Vec<HermitianMatrix>, epochs_averaged: usize) -> Result<Self> {
        if frequencies.len() != matrices.len() {
            return Err(Error::DimensionMismatch { expected: frequencies.len(), found: matrices.len() });
        }
        if frequencies.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::InvalidArgument("frequencies must be strictly ascending".into()));
        }
        if let Some(first) = matrices.first() {
            if let Some(m) = matrices.iter().find(|m| m.dim() != first.dim()) {
                return Err(Error::DimensionMismatch { expected: first.dim(), found: m.dim() });
            }
        }
        Ok(Self { frequencies, matrices, epochs_averaged })
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// Channel count, 0 when empty.
    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(0, HermitianMatrix::dim)
    }

    /// Index of the bin closest to `freq_hz`.
    pub fn nearest_bin(&self, freq_hz: f64) -> Option<usize> {
        nearest(&self.frequencies, freq_hz)
    }
}

pub(crate) fn nearest(frequencies: &[f64], freq_hz: f64) -> Option<usize> {
    frequencies
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - freq_hz).abs().total_cmp(&(b.1 - freq_hz).abs()))
        .map(|(i, _)| i)
}
