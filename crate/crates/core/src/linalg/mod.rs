//! Dense Hermitian positive definite matrix algebra.
//!
//! Complex arithmetic is the only internal representation. A real symmetric
//! matrix is a [`HermitianMatrix`] whose [`FieldKind`] is `Real`; every
//! operation preserves that flag and keeps imaginary parts at exactly zero.
//!
//! Log-determinants and inverses go through a Cholesky factorization, never
//! through an explicit determinant, so large dimensions do not overflow.

mod cholesky;
mod ops;

pub use cholesky::CholeskyFactor;

use serde::{Deserialize, Serialize};

pub type C64 = num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative asymmetry accepted on construction: `max |H - H*| <= tol * max |H|`.
pub const SYMMETRY_TOLERANCE: f64 = 1e-8;

/// A Cholesky pivot must exceed this fraction of the mean diagonal.
pub const PD_RELATIVE_THRESHOLD: f64 = 1e-12;

/// Real or complex data. Controls the global ½ factor of every measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Real,
    Complex,
}

impl FieldKind {
    /// ½ for real data, 1 for complex data.
    #[inline]
    pub fn factor(self) -> f64 {
        match self {
            FieldKind::Real => 0.5,
            FieldKind::Complex => 1.0,
        }
    }
}

impl std::fmt::Display for FieldKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FieldKind::Real => "real",
            FieldKind::Complex => "complex",
        })
    }
}

/// A `p x p` Hermitian (or real symmetric) matrix with a strictly positive
/// diagonal, stored row-major.
///
/// Positive definiteness is not checked on construction; it is checked when
/// the matrix is factorized.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    p: usize,
    data: Vec<C64>,
    kind: FieldKind,
}

impl HermitianMatrix {
    /// Validates and symmetrizes `data` (row-major, length `p * p`).
    ///
    /// Inputs whose asymmetry is within [`SYMMETRY_TOLERANCE`] of the largest
    /// entry are replaced by `(H + H*) / 2`; anything worse is rejected.
    pub fn new(p: usize, data: Vec<C64>, kind: FieldKind) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be at least 1".into()));
        }
        if data.len() != p * p {
            return Err(Error::DimensionMismatch { expected: p * p, found: data.len() });
        }
        let mut max_abs = 0.0_f64;
        for (idx, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: idx / p, col: idx % p });
            }
            max_abs = max_abs.max(z.norm());
        }
        let tolerance = SYMMETRY_TOLERANCE * max_abs;
        let mut asymmetry = 0.0_f64;
        for i in 0..p {
            for j in i..p {
                asymmetry = asymmetry.max((data[i * p + j] - data[j * p + i].conj()).norm());
            }
        }
        if asymmetry > tolerance {
            return Err(Error::NotHermitian { asymmetry, tolerance });
        }
        let mut sym = vec![C64::new(0.0, 0.0); p * p];
        for i in 0..p {
            for j in i..p {
                let v = (data[i * p + j] + data[j * p + i].conj()) * 0.5;
                sym[i * p + j] = v;
                sym[j * p + i] = v.conj();
            }
        }
        if kind == FieldKind::Real {
            for i in 0..p {
                for j in 0..p {
                    if sym[i * p + j].im != 0.0 {
                        return Err(Error::ImaginaryPart { row: i, col: j });
                    }
                }
            }
        }
        for i in 0..p {
            // (z + conj(z)) / 2 has an exactly zero imaginary part.
            sym[i * p + i].im = 0.0;
            if sym[i * p + i].re <= 0.0 {
                return Err(Error::NonPositiveDiagonal(i));
            }
        }
        Ok(Self { p, data: sym, kind })
    }

    /// Real symmetric matrix from row-major real entries.
    pub fn from_real(p: usize, data: &[f64]) -> Result<Self> {
        Self::new(p, data.iter().map(|&x| C64::new(x, 0.0)).collect(), FieldKind::Real)
    }

    /// Real symmetric matrix from a list of rows.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let p = rows.len();
        let mut data = Vec::with_capacity(p * p);
        for row in rows {
            let row = row.as_ref();
            if row.len() != p {
                return Err(Error::DimensionMismatch { expected: p, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Self::from_real(p, &data)
    }

    /// Complex Hermitian matrix from row-major entries.
    pub fn from_complex(p: usize, data: Vec<C64>) -> Result<Self> {
        Self::new(p, data, FieldKind::Complex)
    }

    pub fn identity(p: usize, kind: FieldKind) -> Self {
        let mut data = vec![C64::new(0.0, 0.0); p * p];
        for i in 0..p {
            data[i * p + i] = C64::new(1.0, 0.0);
        }
        Self { p, data, kind }
    }

    pub fn diagonal(values: &[f64], kind: FieldKind) -> Result<Self> {
        let p = values.len();
        let mut data = vec![C64::new(0.0, 0.0); p * p];
        for (i, &v) in values.iter().enumerate() {
            data[i * p + i] = C64::new(v, 0.0);
        }
        Self::new(p, data, kind)
    }

    /// Builds a matrix from values that are Hermitian by construction
    /// (upper triangle mirrored). Imaginary parts are cleared for `Real`.
    pub(crate) fn from_upper(p: usize, mut data: Vec<C64>, kind: FieldKind) -> Self {
        for i in 0..p {
            data[i * p + i].im = 0.0;
            for j in (i + 1)..p {
                data[j * p + i] = data[i * p + j].conj();
            }
        }
        if kind == FieldKind::Real {
            for z in &mut data {
                z.im = 0.0;
            }
        }
        Self { p, data, kind }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.p + j]
    }

    /// Row-major entries.
    #[inline]
    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    /// Real diagonal.
    pub fn diag(&self) -> Vec<f64> {
        (0..self.p).map(|i| self.data[i * self.p + i].re).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Reinterprets the matrix under another field kind. Going to `Real`
    /// requires every imaginary part to be zero.
    pub fn with_kind(&self, kind: FieldKind) -> Result<Self> {
        if kind == FieldKind::Real {
            if let Some(idx) = self.data.iter().position(|z| z.im != 0.0) {
                return Err(Error::ImaginaryPart { row: idx / self.p, col: idx % self.p });
            }
        }
        Ok(Self { p: self.p, data: self.data.clone(), kind })
    }

    /// Multiplies every entry by a positive constant.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {c}")));
        }
        Ok(Self { p: self.p, data: self.data.iter().map(|z| z * c).collect(), kind: self.kind })
    }

    /// Ridge repair: adds `eps * mean(diag) * I`.
    pub fn ridge(&self, eps: f64) -> Result<Self> {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::InvalidArgument(format!("ridge must be non-negative, got {eps}")));
        }
        let shift = eps * self.mean_diag();
        let mut out = self.clone();
        for i in 0..self.p {
            out.data[i * self.p + i].re += shift;
        }
        Ok(out)
    }

    pub(crate) fn mean_diag(&self) -> f64 {
        self.diag().iter().sum::<f64>() / self.p as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_asymmetry_is_symmetrized() {
        let h = HermitianMatrix::from_real(2, &[2.0, 1.0 + 1e-12, 1.0, 2.0]).unwrap();
        assert_eq!(h.get(0, 1), h.get(1, 0));
        assert!((h.get(0, 1).re - (1.0 + 0.5e-12)).abs() < 1e-15);
    }

    #[test]
    fn large_asymmetry_is_rejected() {
        let err = HermitianMatrix::from_real(2, &[1.0, 0.5, 0.501, 1.0]).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn complex_conjugate_pairs_are_accepted() {
        let h = HermitianMatrix::from_complex(
            2,
            vec![C64::new(2.0, 0.0), C64::new(0.5, 0.3), C64::new(0.5, -0.3), C64::new(1.0, 0.0)],
        )
        .unwrap();
        assert_eq!(h.get(1, 0), C64::new(0.5, -0.3));
        assert!(HermitianMatrix::from_complex(
            2,
            vec![C64::new(2.0, 0.0), C64::new(0.5, 0.3), C64::new(0.5, 0.3), C64::new(1.0, 0.0)],
        )
        .is_err());
    }

    #[test]
    fn real_kind_rejects_imaginary_parts() {
        let data = vec![C64::new(2.0, 0.0), C64::new(0.5, 0.3), C64::new(0.5, -0.3), C64::new(1.0, 0.0)];
        let err = HermitianMatrix::new(2, data, FieldKind::Real).unwrap_err();
        assert!(matches!(err, Error::ImaginaryPart { .. }));
    }

    #[test]
    fn diagonal_must_be_positive() {
        let err = HermitianMatrix::from_real(2, &[1.0, 0.0, 0.0, 0.0]).unwrap_err();
        assert_eq!(err, Error::NonPositiveDiagonal(1));
        let err = HermitianMatrix::from_real(2, &[1.0, 0.0, 0.0, f64::NAN]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn kind_factor() {
        assert_eq!(FieldKind::Real.factor(), 0.5);
        assert_eq!(FieldKind::Complex.factor(), 1.0);
    }

    #[test]
    fn ridge_shifts_diagonal_by_mean() {
        let h = HermitianMatrix::from_real(2, &[2.0, 1.0, 1.0, 4.0]).unwrap();
        let r = h.ridge(0.1).unwrap();
        assert_eq!(r.diag(), vec![2.3, 4.3]);
        assert_eq!(r.get(0, 1), h.get(0, 1));
    }
}
