//! Set partitions of `{0, ..., k-1}` in restricted-growth order.

use crate::error::{out_of_range, Result};

/// Enumeration ceiling; `Bell(12) = 4_213_597`.
pub const MAX_PARTITION_SIZE: usize = 12;

/// A partition into nonempty blocks. Blocks are ordered by smallest element
/// and hold their elements in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Builds the partition whose element `i` lies in block `labels[i]`.
    /// `labels` must be a restricted growth string.
    fn from_labels(labels: &[usize]) -> Self {
        let n_blocks = labels.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); n_blocks];
        for (i, &b) in labels.iter().enumerate() {
            blocks[b].push(i);
        }
        Self { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Number of elements covered.
    pub fn size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}

/// Restricted growth strings `a` with `a[0] = 0` and
/// `a[i] <= 1 + max(a[..i])`, visited in lexicographic order.
#[derive(Debug, Clone)]
pub(crate) struct Labelings {
    labels: Vec<usize>,
    // prefix_max[i] = max(labels[..=i])
    prefix_max: Vec<usize>,
    started: bool,
}

impl Labelings {
    pub(crate) fn new(k: usize) -> Self {
        Self {
            labels: vec![0; k],
            prefix_max: vec![0; k],
            started: false,
        }
    }

    /// Advances to the next labeling; returns false when exhausted.
    pub(crate) fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            return true;
        }
        let k = self.labels.len();
        for i in (1..k).rev() {
            if self.labels[i] <= self.prefix_max[i - 1] {
                self.labels[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.labels[i]);
                for j in i + 1..k {
                    self.labels[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return true;
            }
        }
        false
    }

    pub(crate) fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub(crate) fn n_blocks(&self) -> usize {
        self.prefix_max.last().map_or(0, |m| m + 1)
    }
}

/// Iterator over all partitions of a `k`-set.
#[derive(Debug, Clone)]
pub struct SetPartitions {
    inner: Labelings,
    k: usize,
    done: bool,
}

impl Iterator for SetPartitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        if self.k == 0 || !self.inner.advance() {
            self.done = true;
            return None;
        }
        Some(SetPartition::from_labels(self.inner.labels()))
    }
}

/// All partitions of `{0, ..., k-1}` for `1 <= k <= 12`, each exactly once.
pub fn enumerate_set_partitions(k: usize) -> Result<SetPartitions> {
    check_size(k)?;
    Ok(SetPartitions {
        inner: Labelings::new(k),
        k,
        done: false,
    })
}

pub(crate) fn check_size(k: usize) -> Result<()> {
    if k == 0 || k > MAX_PARTITION_SIZE {
        return Err(out_of_range("k", k, format!("1..={MAX_PARTITION_SIZE}")));
    }
    Ok(())
}

/// Bell numbers via the Bell triangle.
pub fn bell_number(k: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..k {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().expect("nonempty row"));
        for v in &row {
            let last = *next.last().expect("nonempty row");
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_set_partitions(1).unwrap().count(), 1);
        assert_eq!(enumerate_set_partitions(3).unwrap().count(), 5);
        assert!(enumerate_set_partitions(0).is_err());
        assert!(enumerate_set_partitions(13).is_err());
    }

    #[test]
    fn partitions_of_three_in_canonical_order() {
        let all: Vec<_> = enumerate_set_partitions(3)
            .unwrap()
            .map(|p| p.blocks().to_vec())
            .collect();
        assert_eq!(
            all,
            vec![
                vec![vec![0, 1, 2]],
                vec![vec![0, 1], vec![2]],
                vec![vec![0, 2], vec![1]],
                vec![vec![0], vec![1, 2]],
                vec![vec![0], vec![1], vec![2]],
            ]
        );
    }

    #[test]
    fn partitions_are_distinct_and_valid() {
        let mut seen = HashSet::new();
        for p in enumerate_set_partitions(6).unwrap() {
            assert_eq!(p.size(), 6);
            let mut covered: Vec<usize> = p.blocks().iter().flatten().copied().collect();
            covered.sort_unstable();
            assert_eq!(covered, (0..6).collect::<Vec<_>>());
            for w in p.blocks().windows(2) {
                assert!(w[0][0] < w[1][0]);
            }
            for b in p.blocks() {
                assert!(b.windows(2).all(|w| w[0] < w[1]));
            }
            assert!(seen.insert(p));
        }
        assert_eq!(seen.len(), 203);
    }

    #[test]
    fn bell_triangle() {
        let expected = [1u128, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570, 4213597];
        for (k, b) in expected.iter().enumerate() {
            assert_eq!(bell_number(k), *b);
        }
    }
}
