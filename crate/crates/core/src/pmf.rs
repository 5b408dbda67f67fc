use num_complex::Complex;

use crate::scalar::{from_f64, from_usize, sum, to_f64, Field};

/// A pmf value below `-ADMISSIBILITY_TOLERANCE` marks the model inadmissible.
pub const ADMISSIBILITY_TOLERANCE: f64 = 1e-9;

/// Count distribution on `0..=s_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf<T> {
    values: Vec<T>,
    tail_bound: T,
    error_estimate: T,
}

impl<T: Field> Pmf<T> {
    pub fn new(values: Vec<T>, tail_bound: T) -> Self {
        Self::with_error_estimate(values, tail_bound, T::zero())
    }

    pub fn with_error_estimate(values: Vec<T>, tail_bound: T, error_estimate: T) -> Self {
        assert!(!values.is_empty(), "pmf needs at least one value");
        Self {
            values,
            tail_bound,
            error_estimate,
        }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// `p(s)`, zero past the stored support.
    pub fn get(&self, s: usize) -> T {
        self.values.get(s).cloned().unwrap_or_else(T::zero)
    }

    pub fn s_max(&self) -> usize {
        self.values.len() - 1
    }

    /// Upper bound on the mass beyond `s_max`.
    pub fn tail_bound(&self) -> &T {
        &self.tail_bound
    }

    /// Estimated absolute rounding error per entry.
    pub fn error_estimate(&self) -> &T {
        &self.error_estimate
    }

    pub fn total(&self) -> T {
        sum(self.values.iter().cloned())
    }

    pub fn mean(&self) -> T {
        sum(self
            .values
            .iter()
            .enumerate()
            .map(|(s, p)| from_usize::<T>(s) * p.clone()))
    }

    pub fn variance(&self) -> T {
        let mean = self.mean();
        sum(self.values.iter().enumerate().map(|(s, p)| {
            let d = from_usize::<T>(s) - mean.clone();
            d.clone() * d * p.clone()
        }))
    }

    /// Most negative entry, if any entry is negative.
    pub fn most_negative(&self) -> Option<(usize, T)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, p)| **p < T::zero())
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("comparable pmf values"))
            .map(|(s, p)| (s, p.clone()))
    }

    /// False if some entry is below `-ADMISSIBILITY_TOLERANCE`.
    pub fn admissible(&self) -> bool {
        let floor = -from_f64::<T>(ADMISSIBILITY_TOLERANCE);
        self.values.iter().all(|p| *p >= floor)
    }

    pub fn to_f64(&self) -> Pmf<f64> {
        Pmf {
            values: self.values.iter().map(to_f64).collect(),
            tail_bound: to_f64(&self.tail_bound),
            error_estimate: to_f64(&self.error_estimate),
        }
    }
}

/// Characteristic function sampled on a grid of real arguments.
#[derive(Debug, Clone, PartialEq)]
pub struct CfGrid<T> {
    pub u: Vec<T>,
    pub chi: Vec<Complex<T>>,
}
