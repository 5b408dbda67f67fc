//! Exchangeable tables: functions on `{0,1}^k` that depend only on the
//! number of ones, and full joints of `N` exchangeable binary events.

use crate::combinatorics::binomial_row;
use crate::error::{out_of_range, Error, Result};
use crate::scalar::{from_f64, sum, Field};

/// Largest order for which the per-pattern view is materialized.
pub const MAX_EXPANDED_ORDER: usize = 12;

/// Tolerance on the normalization of probability tables and joints.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Probability,
    Correlation,
}

/// Symmetric function on `{0,1}^k`, stored as `values[m]` for `m` ones.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTable<T> {
    kind: TableKind,
    values: Vec<T>,
}

impl<T: Field> SymmetricTable<T> {
    /// Probability table; checks nonnegativity and `sum_m C(k,m) values[m] = 1`.
    pub fn probability(values: Vec<T>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::BadShape("table order must be at least 1".into()));
        }
        if let Some(m) = values.iter().position(|v| *v < T::zero()) {
            return Err(Error::BadShape(format!("negative probability at m = {m}")));
        }
        let k = values.len() - 1;
        let total = weighted_total(&values, &binomial_row(k));
        if (total - T::one()).abs() > from_f64(NORMALIZATION_TOLERANCE) {
            return Err(Error::BadShape("probability table is not normalized".into()));
        }
        Ok(Self {
            kind: TableKind::Probability,
            values,
        })
    }

    /// Correlation table; any finite values are accepted.
    pub fn correlation(values: Vec<T>) -> Self {
        assert!(values.len() >= 2, "table order must be at least 1");
        Self {
            kind: TableKind::Correlation,
            values,
        }
    }

    pub(crate) fn probability_unchecked(values: Vec<T>) -> Self {
        Self {
            kind: TableKind::Probability,
            values,
        }
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    /// Value at any pattern with `m` ones.
    pub fn value(&self, m: usize) -> &T {
        &self.values[m]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Value at an explicit argument pattern `(r_1, ..., r_k)`.
    pub fn at(&self, pattern: &[bool]) -> T {
        assert_eq!(pattern.len(), self.order(), "pattern length must equal order");
        self.values[pattern.iter().filter(|&&r| r).count()].clone()
    }

    /// Value at the pattern whose bit `i` holds `r_{i+1}`.
    pub fn at_mask(&self, mask: u32) -> T {
        self.values[mask.count_ones() as usize].clone()
    }

    /// Per-pattern view with `2^k` entries, indexed by bit mask.
    pub fn expanded(&self) -> Result<Vec<T>> {
        let k = self.order();
        if k > MAX_EXPANDED_ORDER {
            return Err(out_of_range("order", k, format!("<= {MAX_EXPANDED_ORDER}")));
        }
        Ok((0..1u32 << k).map(|mask| self.at_mask(mask)).collect())
    }

    /// Sum over the last argument; for probability tables this is the marginal
    /// of order `k - 1`.
    pub fn sum_last(&self) -> Vec<T> {
        self.values
            .windows(2)
            .map(|w| w[0].clone() + w[1].clone())
            .collect()
    }
}

/// Joint law of `N` exchangeable events: `pattern_weight[m]` is the
/// probability of one specific outcome pattern with `m` ones.
#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeableJoint<T> {
    pattern_weight: Vec<T>,
}

impl<T: Field> ExchangeableJoint<T> {
    pub fn new(pattern_weight: Vec<T>) -> Result<Self> {
        if pattern_weight.len() < 2 {
            return Err(Error::BadShape("joint needs at least one event".into()));
        }
        if let Some(m) = pattern_weight.iter().position(|v| *v < T::zero()) {
            return Err(Error::BadShape(format!("negative pattern weight at m = {m}")));
        }
        let n = pattern_weight.len() - 1;
        let total = weighted_total(&pattern_weight, &binomial_row(n));
        if (total - T::one()).abs() > from_f64(NORMALIZATION_TOLERANCE) {
            return Err(Error::BadShape("joint is not normalized".into()));
        }
        Ok(Self { pattern_weight })
    }

    /// Build from the count distribution `P(exactly m events)`.
    pub fn from_count_probabilities(counts: &[T]) -> Result<Self> {
        let n = counts.len().saturating_sub(1);
        let row = binomial_row::<T>(n);
        Self::new(
            counts
                .iter()
                .zip(&row)
                .map(|(p, b)| p.clone() / b.clone())
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.pattern_weight.len() - 1
    }

    pub fn pattern_weights(&self) -> &[T] {
        &self.pattern_weight
    }
}

fn weighted_total<T: Field>(values: &[T], weights: &[T]) -> T {
    sum(values.iter().zip(weights).map(|(v, w)| v.clone() * w.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probability_table_checks() {
        assert!(SymmetricTable::probability(vec![0.25, 0.25, 0.25]).is_ok());
        assert!(SymmetricTable::probability(vec![0.5, 0.25, 0.25]).is_err());
        assert!(SymmetricTable::probability(vec![1.5, -0.5]).is_err());
        assert!(SymmetricTable::probability(vec![1.0]).is_err());
    }

    #[test]
    fn expanded_view_indexes_by_ones() {
        let t = SymmetricTable::correlation(vec![1.0, 2.0, 3.0, 4.0]);
        let e = t.expanded().unwrap();
        assert_eq!(e.len(), 8);
        assert_eq!(e[0b000], 1.0);
        assert_eq!(e[0b100], 2.0);
        assert_eq!(e[0b011], 3.0);
        assert_eq!(e[0b111], 4.0);
        assert_eq!(t.at(&[true, false, true]), 3.0);
        let big = SymmetricTable::correlation(vec![0.0; 14]);
        assert!(big.expanded().is_err());
    }

    #[test]
    fn joint_checks() {
        assert!(ExchangeableJoint::new(vec![0.5, 0.0, 0.0, 0.5]).is_ok());
        assert!(ExchangeableJoint::new(vec![0.5, 0.1, 0.0, 0.5]).is_err());
        assert!(ExchangeableJoint::new(vec![1.2, -0.1, 0.0, 0.0]).is_err());
        let j = ExchangeableJoint::from_count_probabilities(&[0.25, 0.5, 0.25]).unwrap();
        assert_eq!(j.pattern_weights(), &[0.25, 0.25, 0.25]);
        assert_eq!(j.n(), 2);
    }
}
