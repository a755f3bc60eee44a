//! Vector autoregressive models: validation, stability and simulation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TimeSeriesEpochs;
use crate::error::{Error, Result};
use crate::gaussian::BoxMuller;
use crate::linalg::HermitianMatrix;

/// Samples discarded at the start of every simulated epoch.
pub const DEFAULT_BURN_IN: usize = 1000;

/// A model is stable when its spectral radius is below `1 - STABILITY_MARGIN`.
pub const STABILITY_MARGIN: f64 = 1e-6;

const MAX_SQUARINGS: usize = 64;
const RADIUS_TOLERANCE: f64 = 1e-12;

/// Sine wave added to one node's innovation. Without a phase, a fresh
/// uniform phase is drawn for every epoch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sinusoid {
    pub node: usize,
    pub amp: f64,
    pub freq_hz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
}

/// `x(t) = sum_k A_k x(t-k) + e(t)`, with `e(t) ~ N(0, innovation_cov)` plus
/// optional sinusoids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArModel {
    pub p: usize,
    pub order: usize,
    /// `coeffs[k][i][j]`: effect of `x_j(t-k-1)` on `x_i(t)`.
    pub coeffs: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub innovation_cov: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sinusoids: Option<Vec<Sinusoid>>,
    pub fs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stability {
    pub stable: bool,
    pub radius: f64,
}

/// Run parameters for [`ArModel::simulate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationSpec {
    pub epochs: usize,
    pub samples: usize,
    pub seed: u64,
    pub burn_in: usize,
}

impl SimulationSpec {
    pub fn new(epochs: usize, samples: usize, seed: u64) -> Self {
        Self { epochs, samples, seed, burn_in: DEFAULT_BURN_IN }
    }
}

impl ArModel {
    pub fn new(coeffs: Vec<Vec<Vec<f64>>>, fs: f64) -> Result<Self> {
        let order = coeffs.len();
        let p = coeffs.first().map_or(0, Vec::len);
        let model = Self { p, order, coeffs, innovation_cov: None, sinusoids: None, fs };
        model.validate()?;
        Ok(model)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: Self =
            serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("model config: {e}")))?;
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::InvalidArgument("model needs at least one node".into()));
        }
        if self.order == 0 {
            return Err(Error::InvalidArgument("model order must be at least 1".into()));
        }
        if !(self.fs > 0.0 && self.fs.is_finite()) {
            return Err(Error::InvalidArgument(format!("sampling rate must be positive, got {}", self.fs)));
        }
        if self.coeffs.len() != self.order {
            return Err(Error::DimensionMismatch { expected: self.order, found: self.coeffs.len() });
        }
        for lag in &self.coeffs {
            check_square(lag, self.p)?;
        }
        if let Some(cov) = &self.innovation_cov {
            check_square(cov, self.p)?;
        }
        self.innovation_matrix()?.cholesky()?;
        for s in self.sinusoids.iter().flatten() {
            if s.node >= self.p {
                return Err(Error::IndexOutOfRange { index: s.node, dim: self.p });
            }
            if !(s.amp.is_finite() && s.freq_hz.is_finite() && s.phase.is_none_or(f64::is_finite)) {
                return Err(Error::InvalidArgument("sinusoid parameters must be finite".into()));
            }
        }
        Ok(())
    }

    /// Innovation covariance, identity when unset.
    pub fn innovation_matrix(&self) -> Result<HermitianMatrix> {
        match &self.innovation_cov {
            None => Ok(HermitianMatrix::identity(self.p, crate::linalg::FieldKind::Real)),
            Some(rows) => HermitianMatrix::from_real_rows(rows),
        }
    }

    /// Companion matrix of size `p * order`, row-major.
    pub fn companion(&self) -> Vec<f64> {
        let n = self.p * self.order;
        let mut m = vec![0.0; n * n];
        for (k, lag) in self.coeffs.iter().enumerate() {
            for (i, row) in lag.iter().enumerate() {
                for (j, &a) in row.iter().enumerate() {
                    m[i * n + k * self.p + j] = a;
                }
            }
        }
        for i in self.p..n {
            m[i * n + i - self.p] = 1.0;
        }
        m
    }

    /// Spectral radius of the companion matrix from Gelfand's formula
    /// `rho = lim ||M^n||^(1/n)`, with `n` doubled by repeated squaring and
    /// the norm tracked in log space.
    pub fn stability(&self) -> Result<Stability> {
        self.validate()?;
        let n = self.p * self.order;
        let mut m = self.companion();
        let norm = frobenius(&m);
        if norm == 0.0 {
            return Ok(Stability { stable: true, radius: 0.0 });
        }
        m.iter_mut().for_each(|x| *x /= norm);
        let mut log_norm = norm.ln();
        let mut estimate = norm;
        for k in 1..=MAX_SQUARINGS {
            let sq = square(&m, n);
            let norm = frobenius(&sq);
            if norm == 0.0 {
                return Ok(Stability { stable: true, radius: 0.0 });
            }
            m = sq;
            m.iter_mut().for_each(|x| *x /= norm);
            log_norm = 2.0 * log_norm + norm.ln();
            let next = (log_norm / 2f64.powi(k as i32)).exp();
            if (next - estimate).abs() <= RADIUS_TOLERANCE * next.max(1.0) {
                return Ok(Stability { stable: next < 1.0 - STABILITY_MARGIN, radius: next });
            }
            estimate = next;
        }
        Err(Error::ConvergenceFailure { estimate })
    }

    pub fn ensure_stable(&self) -> Result<f64> {
        let s = self.stability()?;
        if !s.stable {
            return Err(Error::UnstableModel { radius: s.radius });
        }
        Ok(s.radius)
    }

    /// Simulates independent epochs. Epoch `e` draws from its own generator
    /// seeded with `seed + e`, so output does not depend on thread count.
    pub fn simulate(&self, spec: &SimulationSpec) -> Result<TimeSeriesEpochs> {
        self.ensure_stable()?;
        if spec.epochs == 0 || spec.samples == 0 {
            return Err(Error::InvalidArgument("epochs and samples must be positive".into()));
        }
        let chol = self.innovation_matrix()?.cholesky()?;
        let lower: Vec<f64> = chol.lower().iter().map(|z| z.re).collect();
        let epochs: Vec<Vec<f64>> = (0..spec.epochs)
            .into_par_iter()
            .map(|e| self.simulate_epoch(spec, spec.seed.wrapping_add(e as u64), &lower))
            .collect();
        let data = epochs.concat();
        let mut ts = TimeSeriesEpochs::new(spec.epochs, spec.samples, self.p, data, self.fs)?;
        ts.seed = Some(spec.seed);
        Ok(ts)
    }

    fn simulate_epoch(&self, spec: &SimulationSpec, seed: u64, lower: &[f64]) -> Vec<f64> {
        let p = self.p;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sines: Vec<(usize, f64, f64, f64)> = self
            .sinusoids
            .iter()
            .flatten()
            .map(|s| {
                let phase = s.phase.unwrap_or_else(|| rng.random::<f64>() * std::f64::consts::TAU);
                (s.node, s.amp, s.freq_hz, phase)
            })
            .collect();
        let mut normal = BoxMuller::default();
        let total = spec.burn_in + spec.samples;
        // history[k] holds x(t-k-1)
        let mut history = vec![vec![0.0; p]; self.order];
        let mut out = Vec::with_capacity(spec.samples * p);
        let mut z = vec![0.0; p];
        for t in 0..total {
            for zi in z.iter_mut() {
                *zi = normal.sample(&mut rng);
            }
            let mut x = vec![0.0; p];
            for i in 0..p {
                let mut v = 0.0;
                for (j, zj) in z.iter().enumerate().take(i + 1) {
                    v += lower[i * p + j] * zj;
                }
                for (k, lag) in self.coeffs.iter().enumerate() {
                    for (a, h) in lag[i].iter().zip(&history[k]) {
                        v += a * h;
                    }
                }
                x[i] = v;
            }
            for &(node, amp, freq, phase) in &sines {
                x[node] += amp * (std::f64::consts::TAU * freq * t as f64 / self.fs + phase).sin();
            }
            history.rotate_right(1);
            history[0].copy_from_slice(&x);
            if t >= spec.burn_in {
                out.extend_from_slice(&x);
            }
        }
        out
    }
}

fn check_square(rows: &[Vec<f64>], p: usize) -> Result<()> {
    if rows.len() != p {
        return Err(Error::DimensionMismatch { expected: p, found: rows.len() });
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != p {
            return Err(Error::DimensionMismatch { expected: p, found: row.len() });
        }
        if let Some(j) = row.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { row: i, col: j });
        }
    }
    Ok(())
}

fn frobenius(m: &[f64]) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn square(m: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let a = m[i * n + k];
            if a == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += a * m[k * n + j];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(a: &[f64]) -> ArModel {
        ArModel::new(a.iter().map(|&x| vec![vec![x]]).collect(), 100.0).unwrap()
    }

    #[test]
    fn scalar_radius() {
        let s = scalar(&[0.5]).stability().unwrap();
        assert!(s.stable);
        assert!((s.radius - 0.5).abs() < 1e-12);
        let s = scalar(&[1.0]).stability().unwrap();
        assert!(!s.stable);
        assert!(matches!(scalar(&[1.0]).ensure_stable(), Err(Error::UnstableModel { .. })));
    }

    #[test]
    fn ar2_complex_roots() {
        let s = scalar(&[1.6, -0.9]).stability().unwrap();
        assert!(s.stable);
        assert!((s.radius - 0.9f64.sqrt()).abs() < 1e-9, "{}", s.radius);
    }

    #[test]
    fn nilpotent_companion_has_zero_radius() {
        let m = ArModel::new(vec![vec![vec![0.0, 0.0], vec![0.7, 0.0]]], 1.0).unwrap();
        assert_eq!(m.stability().unwrap().radius, 0.0);
    }

    #[test]
    fn config_validation() {
        assert!(ArModel::from_json(r#"{"p":2,"order":1,"coeffs":[[[0.1,0.0]]],"fs":1}"#).is_err());
        assert!(ArModel::from_json(r#"{"p":1,"order":1,"coeffs":[[[0.1]]],"fs":1,"innovation_cov":[[-1]]}"#).is_err());
        let m = ArModel::from_json(
            r#"{"p":1,"order":1,"coeffs":[[[0.1]]],"fs":10,"sinusoids":[{"node":0,"amp":1,"freq_hz":2}]}"#,
        )
        .unwrap();
        assert_eq!(m.sinusoids.unwrap()[0].phase, None);
    }

    #[test]
    fn white_noise_covariance() {
        let m = ArModel::new(vec![vec![vec![0.0; 3]; 3]], 256.0).unwrap();
        let ts = m.simulate(&SimulationSpec::new(200, 256, 3)).unwrap();
        let n = (ts.epochs * ts.samples_per_epoch) as f64;
        for i in 0..3 {
            for j in 0..3 {
                let c: f64 = ts.rows().map(|r| r[i] * r[j]).sum::<f64>() / n;
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((c - target).abs() < 0.05, "({i},{j}) {c}");
            }
        }
    }

    #[test]
    fn ar1_stationary_variance() {
        let ts = scalar(&[0.9]).simulate(&SimulationSpec::new(200, 256, 11)).unwrap();
        let n = ts.data.len() as f64;
        let var = ts.data.iter().map(|x| x * x).sum::<f64>() / n;
        let target = 1.0 / (1.0 - 0.81);
        assert!((var - target).abs() / target < 0.1, "{var}");
    }

    #[test]
    fn same_seed_same_bits() {
        let m = scalar(&[1.6, -0.9]);
        let spec = SimulationSpec { epochs: 4, samples: 64, seed: 9, burn_in: 50 };
        assert_eq!(m.simulate(&spec).unwrap(), m.simulate(&spec).unwrap());
        let other = SimulationSpec { seed: 10, ..spec };
        assert_ne!(m.simulate(&spec).unwrap().data, m.simulate(&other).unwrap().data);
    }
}
