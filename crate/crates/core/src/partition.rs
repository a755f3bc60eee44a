//! Ordered partitions of `{0, .., p-1}` into non-empty disjoint groups.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Groups of variable indices. Groups need not be contiguous.
///
/// Serialized as a plain list of index lists, e.g. `[[0, 1, 2], [3, 4]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct Partition {
    groups: Vec<Vec<usize>>,
    p: usize,
}

impl Partition {
    /// Validates that `groups` are non-empty, pairwise disjoint, and cover
    /// exactly `{0, .., p-1}`.
    pub fn new(groups: Vec<Vec<usize>>, p: usize) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::PartitionMismatch("partition has no groups".into()));
        }
        let mut seen = vec![false; p];
        for (k, g) in groups.iter().enumerate() {
            if g.is_empty() {
                return Err(Error::PartitionMismatch(format!("group {k} is empty")));
            }
            for &i in g {
                if i >= p {
                    return Err(Error::PartitionMismatch(format!(
                        "index {i} in group {k} is out of range for dimension {p}"
                    )));
                }
                if seen[i] {
                    return Err(Error::PartitionMismatch(format!("index {i} appears more than once")));
                }
                seen[i] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::PartitionMismatch(format!("index {missing} is not covered")));
        }
        Ok(Self { groups, p })
    }

    /// Partition whose dimension is the total number of listed indices.
    pub fn from_groups(groups: Vec<Vec<usize>>) -> Result<Self> {
        let p = groups.iter().map(Vec::len).sum();
        Self::new(groups, p)
    }

    /// Consecutive blocks of the given sizes.
    pub fn contiguous(sizes: &[usize]) -> Result<Self> {
        let mut start = 0;
        let groups = sizes
            .iter()
            .map(|&n| {
                let g: Vec<usize> = (start..start + n).collect();
                start += n;
                g
            })
            .collect();
        Self::new(groups, start)
    }

    /// One group per variable.
    pub fn singletons(p: usize) -> Self {
        Self { groups: (0..p).map(|i| vec![i]).collect(), p }
    }

    /// A single group holding every variable.
    pub fn whole(p: usize) -> Self {
        Self { groups: vec![(0..p).collect()], p }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.p
    }

    /// Number of groups `K`.
    #[inline]
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group(&self, k: usize) -> Result<&[usize]> {
        self.groups.get(k).map(Vec::as_slice).ok_or(Error::IndexOutOfRange { index: k, dim: self.groups.len() })
    }

    pub fn check_dim(&self, p: usize) -> Result<()> {
        if self.p != p {
            return Err(Error::PartitionMismatch(format!(
                "partition covers {} variables but the matrix has dimension {p}",
                self.p
            )));
        }
        Ok(())
    }

    /// Indices of every group except `k` (groups in original order), and the
    /// partition those groups induce on the reduced index space.
    pub fn without_group(&self, k: usize) -> Result<(Vec<usize>, Partition)> {
        self.group(k)?;
        let mut position = vec![usize::MAX; self.p];
        let mut remaining = Vec::with_capacity(self.p);
        for (j, g) in self.groups.iter().enumerate() {
            if j == k {
                continue;
            }
            for &i in g {
                position[i] = remaining.len();
                remaining.push(i);
            }
        }
        let groups = self
            .groups
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, g)| g.iter().map(|&i| position[i]).collect())
            .collect();
        let p = remaining.len();
        Ok((remaining, Partition { groups, p }))
    }
}

impl TryFrom<Vec<Vec<usize>>> for Partition {
    type Error = Error;

    fn try_from(groups: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_groups(groups)
    }
}

impl From<Partition> for Vec<Vec<usize>> {
    fn from(p: Partition) -> Self {
        p.groups
    }
}
