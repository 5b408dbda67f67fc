//! Correlation (Ursell) expansion of exchangeable probability tables.

mod expansion;
mod partition;
mod recursive;

pub use expansion::{
    correlation_partition, correlation_tables_partition, marginalize, marginals,
    probability_from_correlations, probability_tables_from_correlations,
};
pub use partition::{bell_number, enumerate_set_partitions, SetPartition, SetPartitions, MAX_PARTITION_SIZE};
pub use recursive::{correlation_recursive, correlation_recursive_expanded, MAX_RECURSIVE_ORDER};

use crate::error::Result;
use crate::model::correlation_coefficient;
use crate::scalar::Field;
use crate::table::ExchangeableJoint;

/// Measures `C_1..C_k` of a joint: marginals, partition-form correlation
/// tables, then `N^l G_l(1, ..., 1)`.
pub fn measured_coefficients<T: Field>(joint: &ExchangeableJoint<T>, k: usize) -> Result<Vec<T>> {
    let p = marginals(joint, k)?;
    correlation_tables_partition(&p)?
        .iter()
        .map(|g| correlation_coefficient(g, joint.n()))
        .collect()
}
