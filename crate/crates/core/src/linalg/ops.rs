use super::{HermitianMatrix, C64};
use crate::error::{Error, Result};
use crate::partition::Partition;

impl HermitianMatrix {
    /// `(diag H)^{-1/2} H (diag H)^{-1/2}`: unit diagonal, entries
    /// `H_ij / sqrt(H_ii H_jj)`.
    pub fn standardize(&self) -> Result<Self> {
        let p = self.p;
        let d = self.diag();
        if let Some(i) = d.iter().position(|&x| x.is_nan() || x <= 0.0) {
            return Err(Error::NonPositiveDiagonal(i));
        }
        let s: Vec<f64> = d.iter().map(|x| x.sqrt()).collect();
        let mut out = vec![C64::new(0.0, 0.0); p * p];
        for i in 0..p {
            out[i * p + i] = C64::new(1.0, 0.0);
            for j in (i + 1)..p {
                out[i * p + j] = self.data[i * p + j] / (s[i] * s[j]);
            }
        }
        Ok(Self::from_upper(p, out, self.kind))
    }

    /// Off-diagonal entries zeroed.
    pub fn diag_part(&self) -> Self {
        let p = self.p;
        let mut out = vec![C64::new(0.0, 0.0); p * p];
        for i in 0..p {
            out[i * p + i] = self.data[i * p + i];
        }
        Self { p, data: out, kind: self.kind }
    }

    /// Entries outside the diagonal blocks of `part` zeroed.
    pub fn blockdiag_part(&self, part: &Partition) -> Result<Self> {
        part.check_dim(self.p)?;
        let p = self.p;
        let mut out = vec![C64::new(0.0, 0.0); p * p];
        for g in part.groups() {
            for &i in g {
                for &j in g {
                    out[i * p + j] = self.data[i * p + j];
                }
            }
        }
        Ok(Self { p, data: out, kind: self.kind })
    }

    /// Principal submatrix on `idx`, in the given order. Indices must be
    /// distinct; any ordering (including a permutation of all indices) is
    /// allowed.
    pub fn submatrix(&self, idx: &[usize]) -> Result<Self> {
        self.check_indices(idx)?;
        let n = idx.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty index set".into()));
        }
        let mut out = Vec::with_capacity(n * n);
        for &i in idx {
            for &j in idx {
                out.push(self.data[i * self.p + j]);
            }
        }
        Ok(Self { p: n, data: out, kind: self.kind })
    }

    /// Conditional covariance `H_kk - H_kg H_gg^{-1} H_gk`.
    pub fn schur_complement(&self, keep: &[usize], given: &[usize]) -> Result<Self> {
        self.check_indices(keep)?;
        self.check_indices(given)?;
        let mut in_keep = vec![false; self.p];
        for &i in keep {
            in_keep[i] = true;
        }
        if let Some(&i) = given.iter().find(|&&i| in_keep[i]) {
            return Err(Error::IndexOverlap(i));
        }
        let h_kk = self.submatrix(keep)?;
        if given.is_empty() {
            return Ok(h_kk);
        }
        let factor = self.submatrix(given)?.cholesky()?;
        let (nk, ng) = (keep.len(), given.len());
        // B = L_g^{-1} H_gk, then H_kk - B* B.
        let mut b = Vec::with_capacity(ng * nk);
        for &g in given {
            for &k in keep {
                b.push(self.data[g * self.p + k]);
            }
        }
        factor.forward_solve(&mut b, nk);
        let mut out = h_kk.data;
        for i in 0..nk {
            for j in i..nk {
                let mut acc = C64::new(0.0, 0.0);
                for r in 0..ng {
                    acc += b[r * nk + i].conj() * b[r * nk + j];
                }
                out[i * nk + j] -= acc;
            }
        }
        Ok(Self::from_upper(nk, out, self.kind))
    }

    /// Principal submatrix without variable `i`.
    pub fn delete_index(&self, i: usize) -> Result<Self> {
        if i >= self.p {
            return Err(Error::IndexOutOfRange { index: i, dim: self.p });
        }
        let idx: Vec<usize> = (0..self.p).filter(|&j| j != i).collect();
        self.submatrix(&idx)
    }

    /// Principal submatrix without group `k`; remaining groups keep their
    /// original order.
    pub fn delete_group(&self, part: &Partition, k: usize) -> Result<Self> {
        part.check_dim(self.p)?;
        let (idx, _) = part.without_group(k)?;
        self.submatrix(&idx)
    }

    fn check_indices(&self, idx: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.p];
        for &i in idx {
            if i >= self.p {
                return Err(Error::IndexOutOfRange { index: i, dim: self.p });
            }
            if seen[i] {
                return Err(Error::IndexOverlap(i));
            }
            seen[i] = true;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FieldKind;

    fn real(rows: &[&[f64]]) -> HermitianMatrix {
        HermitianMatrix::from_real_rows(rows).unwrap()
    }

    fn collider() -> HermitianMatrix {
        real(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0], &[1.0, 1.0, 3.0]])
    }

    fn assert_close(a: &HermitianMatrix, b: &[&[f64]], tol: f64) {
        for (i, row) in b.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert!((a.get(i, j).re - v).abs() <= tol, "({i},{j}): {} vs {v}", a.get(i, j));
            }
        }
    }

    #[test]
    fn standardize_examples() {
        let d = HermitianMatrix::diagonal(&[2.0, 7.0, 3.0], FieldKind::Real).unwrap();
        assert_eq!(d.standardize().unwrap(), HermitianMatrix::identity(3, FieldKind::Real));
        let s = real(&[&[4.0, 2.0], &[2.0, 4.0]]).standardize().unwrap();
        assert_close(&s, &[&[1.0, 0.5], &[0.5, 1.0]], 0.0);
        let c = collider().standardize().unwrap();
        assert_eq!(c.standardize().unwrap(), c);
    }

    #[test]
    fn blockdiag_degenerate_partitions() {
        let s = collider();
        assert_eq!(s.blockdiag_part(&Partition::singletons(3)).unwrap(), s.diag_part());
        assert_eq!(s.blockdiag_part(&Partition::whole(3)).unwrap(), s);
        assert!(s.blockdiag_part(&Partition::singletons(4)).is_err());
    }

    #[test]
    fn blockdiag_zeroes_cross_blocks() {
        let data: Vec<f64> = (0..16)
            .map(|k| {
                let (i, j) = (k / 4, k % 4);
                if i == j {
                    4.0
                } else {
                    0.5
                }
            })
            .collect();
        let s = HermitianMatrix::from_real(4, &data).unwrap();
        let b = s.blockdiag_part(&Partition::contiguous(&[2, 2]).unwrap()).unwrap();
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert_eq!(b.get(i, j).re, 0.0);
            assert_eq!(b.get(j, i).re, 0.0);
        }
        assert_eq!(b.get(0, 1).re, 0.5);
        assert_eq!(b.get(2, 3).re, 0.5);
    }

    #[test]
    fn schur_examples() {
        let s = collider();
        assert_eq!(s.schur_complement(&[0, 1], &[]).unwrap(), s.submatrix(&[0, 1]).unwrap());
        let c = s.schur_complement(&[0, 1], &[2]).unwrap();
        assert_close(&c, &[&[2.0 / 3.0, -1.0 / 3.0], &[-1.0 / 3.0, 2.0 / 3.0]], 1e-15);
        let bd = real(&[&[2.0, 1.0, 0.0], &[1.0, 2.0, 0.0], &[0.0, 0.0, 5.0]]);
        assert_eq!(bd.schur_complement(&[0, 1], &[2]).unwrap(), bd.submatrix(&[0, 1]).unwrap());
        assert_eq!(s.schur_complement(&[0, 1], &[1]).unwrap_err(), Error::IndexOverlap(1));
        assert!(matches!(s.schur_complement(&[0], &[7]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn deletion_examples() {
        let i3 = HermitianMatrix::identity(3, FieldKind::Real);
        assert_eq!(i3.delete_index(1).unwrap(), HermitianMatrix::identity(2, FieldKind::Real));
        let d = collider().delete_index(0).unwrap();
        assert_close(&d, &[&[1.0, 1.0], &[1.0, 3.0]], 0.0);
        let part = Partition::singletons(3);
        assert_eq!(collider().delete_group(&part, 2).unwrap(), collider().delete_index(2).unwrap());
        assert!(matches!(collider().delete_index(3), Err(Error::IndexOutOfRange { .. })));
        assert!(collider().delete_group(&part, 3).is_err());
    }
}
