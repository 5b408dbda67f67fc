//! Partition form of the correlation expansion on compressed tables.
//!
//! For the pattern whose first `m` arguments are one, a block `B` of a set
//! partition contributes `G_{|B|}` evaluated with `|B ∩ {0..m}|` ones. By
//! exchangeability that pattern represents every pattern with `m` ones.

use crate::combinatorics::binomial_row;
use crate::error::{out_of_range, Error, Result};
use crate::scalar::{sum, CompensatedSum, Field};
use crate::table::{ExchangeableJoint, SymmetricTable, TableKind};

use super::partition::{check_size, Labelings};

/// Probability table of order `k`: `values[m] = sum_j C(N-k, j) w[m+j]`.
pub fn marginalize<T: Field>(joint: &ExchangeableJoint<T>, k: usize) -> Result<SymmetricTable<T>> {
    let n = joint.n();
    if k == 0 || k > n {
        return Err(out_of_range("k", k, format!("1..={n}")));
    }
    let w = joint.pattern_weights();
    let row = binomial_row::<T>(n - k);
    let values = (0..=k)
        .map(|m| sum(row.iter().enumerate().map(|(j, b)| b.clone() * w[m + j].clone())))
        .collect();
    Ok(SymmetricTable::probability_unchecked(values))
}

/// Probability tables of orders `1..=k`.
pub fn marginals<T: Field>(joint: &ExchangeableJoint<T>, k: usize) -> Result<Vec<SymmetricTable<T>>> {
    (1..=k).map(|order| marginalize(joint, order)).collect()
}

pub(crate) fn check_ladder<T: Field>(tables: &[SymmetricTable<T>], kind: TableKind) -> Result<()> {
    for (i, t) in tables.iter().enumerate() {
        if t.order() != i + 1 {
            return Err(Error::BadShape(format!(
                "table {i} has order {}, expected {}",
                t.order(),
                i + 1
            )));
        }
        if t.kind() != kind && t.order() > 1 {
            return Err(Error::BadShape(format!("table of order {} has wrong kind", i + 1)));
        }
    }
    Ok(())
}

/// `sum` over partitions of `{0..k}` of products of block tables, for every
/// number of leading ones `m`. Single-block partitions are skipped unless
/// `include_single_block`.
fn partition_sum<T: Field>(
    g: &[SymmetricTable<T>],
    k: usize,
    include_single_block: bool,
) -> Vec<T> {
    let mut acc: Vec<CompensatedSum<T>> = vec![CompensatedSum::new(); k + 1];
    let mut labelings = Labelings::new(k);
    let mut sizes = vec![0usize; k];
    let mut ones = vec![0usize; k];
    while labelings.advance() {
        let n_blocks = labelings.n_blocks();
        if n_blocks == 1 && !include_single_block {
            continue;
        }
        let labels = labelings.labels();
        sizes[..n_blocks].fill(0);
        ones[..n_blocks].fill(0);
        for &b in labels {
            sizes[b] += 1;
        }
        for m in 0..=k {
            if m > 0 {
                ones[labels[m - 1]] += 1;
            }
            let term = (0..n_blocks).fold(T::one(), |prod, b| {
                prod * g[sizes[b] - 1].value(ones[b]).clone()
            });
            acc[m].add(term);
        }
    }
    acc.into_iter().map(|a| a.value()).collect()
}

/// Correlation tables `G_1..G_k` from probability tables `P_1..P_k`:
/// `G_k = P_k - sum over partitions with at least two blocks of G-products`.
pub fn correlation_tables_partition<T: Field>(
    p_tables: &[SymmetricTable<T>],
) -> Result<Vec<SymmetricTable<T>>> {
    let k = p_tables.len();
    check_size(k)?;
    check_ladder(p_tables, TableKind::Probability)?;
    let mut g: Vec<SymmetricTable<T>> = Vec::with_capacity(k);
    g.push(SymmetricTable::correlation(p_tables[0].values().to_vec()));
    for order in 2..=k {
        let products = partition_sum(&g, order, false);
        let values = p_tables[order - 1]
            .values()
            .iter()
            .zip(products)
            .map(|(p, s)| p.clone() - s)
            .collect();
        g.push(SymmetricTable::correlation(values));
    }
    Ok(g)
}

/// `G_k` by the partition form; `k = p_tables.len()`.
pub fn correlation_partition<T: Field>(p_tables: &[SymmetricTable<T>]) -> Result<SymmetricTable<T>> {
    Ok(correlation_tables_partition(p_tables)?
        .pop()
        .expect("at least one order"))
}

/// `P_k` as the sum over all set partitions of products of `G` blocks.
pub fn probability_from_correlations<T: Field>(
    g_tables: &[SymmetricTable<T>],
) -> Result<SymmetricTable<T>> {
    let k = g_tables.len();
    check_size(k)?;
    check_ladder(g_tables, TableKind::Correlation)?;
    Ok(SymmetricTable::probability_unchecked(partition_sum(
        g_tables, k, true,
    )))
}

/// `P_1..P_k` from `G_1..G_k`.
pub fn probability_tables_from_correlations<T: Field>(
    g_tables: &[SymmetricTable<T>],
) -> Result<Vec<SymmetricTable<T>>> {
    (1..=g_tables.len())
        .map(|order| probability_from_correlations(&g_tables[..order]))
        .collect()
}
