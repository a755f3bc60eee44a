//! Multivariate Student t samples, used to check that the measures apply
//! unchanged to elliptical data.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution};

use crate::error::{Error, Result};
use crate::gaussian::BoxMuller;
use crate::linalg::{FieldKind, HermitianMatrix};

/// `n` draws of `z / sqrt(g / dof)` with `z ~ N(0, S)` and `g ~ chi2(dof)`,
/// returned row-major `n x p`. `S` must be real.
pub fn sample_multivariate_t(s: &HermitianMatrix, dof: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    if dof.is_nan() || dof <= 2.0 {
        return Err(Error::InvalidDof(dof));
    }
    if s.kind() != FieldKind::Real {
        return Err(Error::InvalidArgument("multivariate t sampling needs a real scatter matrix".into()));
    }
    let p = s.dim();
    let chol = s.cholesky()?;
    let chi = ChiSquared::new(dof).map_err(|_| Error::InvalidDof(dof))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut normal = BoxMuller::default();
    let mut out = Vec::with_capacity(n * p);
    let mut z = vec![0.0; p];
    for _ in 0..n {
        for zi in z.iter_mut() {
            *zi = normal.sample(&mut rng);
        }
        let w = (chi.sample(&mut rng) / dof).sqrt();
        for i in 0..p {
            let mut v = 0.0;
            for (j, zj) in z.iter().enumerate().take(i + 1) {
                v += chol.get(i, j).re * zj;
            }
            out.push(v / w);
        }
    }
    Ok(out)
}

/// Zero-mean sample scatter `(1/n) sum x x^T` of row-major samples.
pub fn sample_scatter(samples: &[f64], p: usize) -> Result<HermitianMatrix> {
    if p == 0 || samples.is_empty() || !samples.len().is_multiple_of(p) {
        return Err(Error::DimensionMismatch { expected: p, found: samples.len() });
    }
    let n = samples.len() / p;
    let mut acc = vec![0.0; p * p];
    for x in samples.chunks(p) {
        for i in 0..p {
            for j in i..p {
                acc[i * p + j] += x[i] * x[j];
            }
        }
    }
    for i in 0..p {
        for j in i..p {
            acc[i * p + j] /= n as f64;
            acc[j * p + i] = acc[i * p + j];
        }
    }
    HermitianMatrix::from_real(p, &acc)
}
