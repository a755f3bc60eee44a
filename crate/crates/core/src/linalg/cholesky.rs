use super::{FieldKind, HermitianMatrix, C64, PD_RELATIVE_THRESHOLD};
use crate::error::{Error, Result};

/// Lower-triangular `L` with `L L* = H` and a strictly positive real diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    p: usize,
    l: Vec<C64>,
    kind: FieldKind,
}

impl CholeskyFactor {
    #[inline]
    pub fn dim(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.l[i * self.p + j]
    }

    /// Row-major lower-triangular entries (upper part is zero).
    pub fn lower(&self) -> &[C64] {
        &self.l
    }

    /// `2 * sum(ln L_ii)`.
    pub fn log_det(&self) -> f64 {
        2.0 * (0..self.p).map(|i| self.l[i * self.p + i].re.ln()).sum::<f64>()
    }

    /// `L L*`.
    pub fn reconstruct(&self) -> HermitianMatrix {
        let p = self.p;
        let mut out = vec![C64::new(0.0, 0.0); p * p];
        for i in 0..p {
            for j in i..p {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..=i {
                    acc += self.l[i * p + k] * self.l[j * p + k].conj();
                }
                out[i * p + j] = acc;
            }
        }
        HermitianMatrix::from_upper(p, out, self.kind)
    }

    /// Solves `L X = B` in place for a row-major `p x m` right-hand side.
    pub(crate) fn forward_solve(&self, b: &mut [C64], m: usize) {
        let p = self.p;
        debug_assert_eq!(b.len(), p * m);
        for i in 0..p {
            for k in 0..i {
                let lik = self.l[i * p + k];
                if lik == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..m {
                    let v = b[k * m + c];
                    b[i * m + c] -= lik * v;
                }
            }
            let d = self.l[i * p + i].re;
            for c in 0..m {
                b[i * m + c] /= d;
            }
        }
    }

    /// `L^{-1}`, row-major lower triangular.
    fn inverse_lower(&self) -> Vec<C64> {
        let p = self.p;
        let mut w = vec![C64::new(0.0, 0.0); p * p];
        for i in 0..p {
            w[i * p + i] = C64::new(1.0, 0.0);
        }
        self.forward_solve(&mut w, p);
        w
    }

    /// `(L L*)^{-1} = L^{-*} L^{-1}`.
    pub fn inverse(&self) -> HermitianMatrix {
        let p = self.p;
        let w = self.inverse_lower();
        let mut out = vec![C64::new(0.0, 0.0); p * p];
        for i in 0..p {
            for j in i..p {
                let mut acc = C64::new(0.0, 0.0);
                for k in j..p {
                    acc += w[k * p + i].conj() * w[k * p + j];
                }
                out[i * p + j] = acc;
            }
        }
        HermitianMatrix::from_upper(p, out, self.kind)
    }
}

impl HermitianMatrix {
    /// Cholesky factorization. Fails with `NotPositiveDefinite` when a pivot
    /// does not exceed [`PD_RELATIVE_THRESHOLD`] times the mean diagonal.
    pub fn cholesky(&self) -> Result<CholeskyFactor> {
        let p = self.p;
        let threshold = PD_RELATIVE_THRESHOLD * self.mean_diag();
        let mut l = vec![C64::new(0.0, 0.0); p * p];
        for j in 0..p {
            let mut d = self.data[j * p + j].re;
            for k in 0..j {
                d -= l[j * p + k].norm_sqr();
            }
            if d.is_nan() || d <= threshold {
                return Err(Error::NotPositiveDefinite { pivot: j, value: d });
            }
            let djj = d.sqrt();
            l[j * p + j] = C64::new(djj, 0.0);
            for i in (j + 1)..p {
                let mut acc = self.data[i * p + j];
                for k in 0..j {
                    acc -= l[i * p + k] * l[j * p + k].conj();
                }
                l[i * p + j] = acc / djj;
            }
        }
        if self.kind == FieldKind::Real {
            for z in &mut l {
                z.im = 0.0;
            }
        }
        Ok(CholeskyFactor { p, l, kind: self.kind })
    }

    /// Natural log of the determinant, from the Cholesky pivots.
    pub fn log_det(&self) -> Result<f64> {
        Ok(self.cholesky()?.log_det())
    }

    /// Inverse of a positive definite matrix, returned exactly Hermitian.
    pub fn inverse(&self) -> Result<Self> {
        Ok(self.cholesky()?.inverse())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: &[&[f64]]) -> HermitianMatrix {
        HermitianMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn identity_factor_is_identity() {
        let l = HermitianMatrix::identity(3, FieldKind::Real).cholesky().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(l.get(i, j).re, if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn two_by_two_hand_factor() {
        let l = real(&[&[4.0, 2.0], &[2.0, 5.0]]).cholesky().unwrap();
        assert_eq!(l.get(0, 0).re, 2.0);
        assert_eq!(l.get(1, 0).re, 1.0);
        assert_eq!(l.get(1, 1).re, 2.0);
        assert_eq!(l.get(0, 1).re, 0.0);
    }

    #[test]
    fn indefinite_fails_at_second_pivot() {
        let err = real(&[&[1.0, 2.0], &[2.0, 1.0]]).cholesky().unwrap_err();
        match err {
            Error::NotPositiveDefinite { pivot, value } => {
                assert_eq!(pivot, 1);
                assert_eq!(value, -3.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn log_det_examples() {
        assert_eq!(HermitianMatrix::identity(5, FieldKind::Real).log_det().unwrap(), 0.0);
        let d = HermitianMatrix::diagonal(&[2.0, 3.0], FieldKind::Real).unwrap();
        assert!((d.log_det().unwrap() - 6f64.ln()).abs() < 1e-15);
        // equicorrelation r = 0.5, p = 3: (1 - r)^2 (1 + 2r) = 0.5
        let e = real(&[&[1.0, 0.5, 0.5], &[0.5, 1.0, 0.5], &[0.5, 0.5, 1.0]]);
        assert!((e.log_det().unwrap() - 0.5f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn inverse_examples() {
        let s = real(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0], &[1.0, 1.0, 3.0]]);
        let c = s.inverse().unwrap();
        let expected = [[2.0, 1.0, -1.0], [1.0, 2.0, -1.0], [-1.0, -1.0, 1.0]];
        for (i, row) in expected.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert!((c.get(i, j).re - e).abs() < 1e-13);
                assert_eq!(c.get(i, j).im, 0.0);
            }
        }
        let d = HermitianMatrix::diagonal(&[2.0, 4.0], FieldKind::Real).unwrap().inverse().unwrap();
        assert!((d.get(0, 0).re - 0.5).abs() < 1e-15 && (d.get(1, 1).re - 0.25).abs() < 1e-15);
        let i4 = HermitianMatrix::identity(4, FieldKind::Complex);
        assert_eq!(i4.inverse().unwrap(), i4);
    }

    #[test]
    fn threshold_is_relative_to_mean_diagonal() {
        // Nearly singular relative to its scale.
        let s = real(&[&[1e6, 1e6], &[1e6, 1e6 + 1e-7]]);
        assert!(matches!(s.cholesky(), Err(Error::NotPositiveDefinite { pivot: 1, .. })));
        // Same shape, but the ridge repair restores definiteness.
        assert!(s.ridge(1e-6).unwrap().cholesky().is_ok());
    }
}
