//! Cross-spectral estimators: tapered periodogram and AR transfer function.

use rayon::prelude::*;
use rustfft::FftPlanner;

use super::{ArModel, CrossSpectra, TimeSeriesEpochs};
use crate::error::{Error, Result};
use crate::linalg::{HermitianMatrix, C64};

/// Periodic Hann window `w_t = ½ (1 - cos(2 pi t / T))`.
pub fn hann_taper(len: usize) -> Vec<f64> {
    (0..len).map(|t| 0.5 * (1.0 - (std::f64::consts::TAU * t as f64 / len as f64).cos())).collect()
}

/// Epoch-averaged Hann-tapered periodogram on bins `1..=T/2`, normalized by
/// the epoch count and the taper power `sum w_t^2`.
pub fn periodogram_cross_spectra(ts: &TimeSeriesEpochs) -> Result<CrossSpectra> {
    let (t_len, p) = (ts.samples_per_epoch, ts.p);
    if t_len < 2 || t_len % 2 != 0 {
        return Err(Error::InvalidArgument(format!("samples per epoch must be even and at least 2, got {t_len}")));
    }
    if ts.data.len() != ts.epochs * t_len * p {
        return Err(Error::DimensionMismatch { expected: ts.epochs * t_len * p, found: ts.data.len() });
    }
    let taper = hann_taper(t_len);
    let power: f64 = taper.iter().map(|w| w * w).sum();
    let bins = t_len / 2;
    let fft = FftPlanner::<f64>::new().plan_fft_forward(t_len);

    // Per epoch: bins x p Fourier coefficients, collected in epoch order.
    let coeffs: Vec<Vec<C64>> = (0..ts.epochs)
        .into_par_iter()
        .map(|e| {
            let epoch = ts.epoch(e);
            let mut out = vec![C64::new(0.0, 0.0); bins * p];
            let mut buf = vec![C64::new(0.0, 0.0); t_len];
            for c in 0..p {
                for (t, b) in buf.iter_mut().enumerate() {
                    *b = C64::new(epoch[t * p + c] * taper[t], 0.0);
                }
                fft.process(&mut buf);
                for b in 0..bins {
                    out[b * p + c] = buf[b + 1];
                }
            }
            out
        })
        .collect();

    let scale = 1.0 / (ts.epochs as f64 * power);
    let matrices = (0..bins)
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![C64::new(0.0, 0.0); p * p];
            for x in &coeffs {
                let xb = &x[b * p..(b + 1) * p];
                for i in 0..p {
                    for j in i..p {
                        acc[i * p + j] += xb[i] * xb[j].conj();
                    }
                }
            }
            for i in 0..p {
                for j in i..p {
                    acc[i * p + j] *= scale;
                    acc[j * p + i] = acc[i * p + j].conj();
                }
                acc[i * p + i].im = 0.0;
            }
            HermitianMatrix::from_complex(p, acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let frequencies = (1..=bins).map(|b| b as f64 * ts.fs / t_len as f64).collect();
    CrossSpectra::new(frequencies, matrices, ts.epochs)
}

/// Model spectra `S(f) = A(f)^-1 Sigma A(f)^-*` with
/// `A(f) = I - sum_k A_k exp(-i 2 pi f k / fs)`. Sinusoidal drives are not
/// part of the transfer function and are ignored.
pub fn parametric_cross_spectra(model: &ArModel, frequencies: &[f64]) -> Result<CrossSpectra> {
    model.ensure_stable()?;
    let p = model.p;
    let sigma_inv = model.innovation_matrix()?.inverse()?;
    let matrices = frequencies
        .par_iter()
        .map(|&f| {
            let mut a = vec![C64::new(0.0, 0.0); p * p];
            for i in 0..p {
                a[i * p + i] = C64::new(1.0, 0.0);
            }
            for (k, lag) in model.coeffs.iter().enumerate() {
                let phase = C64::from_polar(1.0, -std::f64::consts::TAU * f * (k + 1) as f64 / model.fs);
                for i in 0..p {
                    for j in 0..p {
                        a[i * p + j] -= phase * lag[i][j];
                    }
                }
            }
            // S^-1 = A* Sigma^-1 A
            let mut sa = vec![C64::new(0.0, 0.0); p * p];
            for i in 0..p {
                for k in 0..p {
                    let s = sigma_inv.get(i, k);
                    for j in 0..p {
                        sa[i * p + j] += s * a[k * p + j];
                    }
                }
            }
            let mut prec = vec![C64::new(0.0, 0.0); p * p];
            for i in 0..p {
                for j in i..p {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..p {
                        acc += a[k * p + i].conj() * sa[k * p + j];
                    }
                    prec[i * p + j] = acc;
                    prec[j * p + i] = acc.conj();
                }
                prec[i * p + i].im = 0.0;
            }
            HermitianMatrix::from_complex(p, prec)?.inverse()
        })
        .collect::<Result<Vec<_>>>()?;
    CrossSpectra::new(frequencies.to_vec(), matrices, 0)
}
