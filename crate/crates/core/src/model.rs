//! The correlation-coefficient model and the closed forms derived from it.

use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Error, Result};
use crate::scalar::{from_f64, from_usize, powi, to_f64, Field};
use crate::table::{SymmetricTable, TableKind};

/// Non-fatal findings attached to a validated model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelWarning {
    /// The top coefficient is zero, so the model is really of lower order.
    VanishingTopCoefficient,
}

impl std::fmt::Display for ModelWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelWarning::VanishingTopCoefficient => write!(f, "C_{{l_max}}=0"),
        }
    }
}

/// Correlation coefficients `C_1, ..., C_{l_max}` with an optional event count `N`.
///
/// Coefficients are addressed 1-based through [`CorrelationModel::coefficient`];
/// [`CorrelationModel::coefficients`] exposes them as a slice starting at `C_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationModel<T> {
    c: Vec<T>,
    n: Option<usize>,
    warning: Option<ModelWarning>,
}

/// Checks shape and finiteness and returns the validated model.
pub fn validate_model<T: Field>(
    l_max: usize,
    c: Vec<T>,
    n: Option<usize>,
) -> Result<CorrelationModel<T>> {
    if l_max == 0 {
        return Err(Error::BadShape("l_max must be at least 1".into()));
    }
    if c.len() != l_max {
        return Err(Error::BadShape(format!(
            "l_max = {l_max} but {} coefficients given",
            c.len()
        )));
    }
    if let Some(i) = c.iter().position(|x| !x.is_finite_value()) {
        return Err(Error::NonFinite { index: i + 1 });
    }
    if let Some(n) = n {
        if n < l_max {
            return Err(Error::BadShape(format!("n = {n} < l_max = {l_max}")));
        }
    }
    let warning = c[l_max - 1]
        .is_zero()
        .then_some(ModelWarning::VanishingTopCoefficient);
    Ok(CorrelationModel { c, n, warning })
}

impl<T: Field> CorrelationModel<T> {
    /// Model of order `c.len()`.
    pub fn new(c: Vec<T>, n: Option<usize>) -> Result<Self> {
        validate_model(c.len(), c, n)
    }

    pub fn l_max(&self) -> usize {
        self.c.len()
    }

    pub fn coefficients(&self) -> &[T] {
        &self.c
    }

    /// `C_l` for `1 <= l <= l_max`, zero above `l_max`.
    pub fn coefficient(&self, l: usize) -> T {
        assert!(l >= 1, "coefficients are indexed from 1");
        self.c.get(l - 1).cloned().unwrap_or_else(T::zero)
    }

    pub fn n(&self) -> Option<usize> {
        self.n
    }

    pub fn warning(&self) -> Option<ModelWarning> {
        self.warning
    }

    pub(crate) fn require_n(&self) -> Result<usize> {
        self.n
            .ok_or_else(|| Error::BadShape("operation needs an event count n".into()))
    }

    /// Same coefficients with a different event count.
    pub fn with_n(&self, n: Option<usize>) -> Result<Self> {
        validate_model(self.l_max(), self.c.clone(), n)
    }

    /// Converts coefficients into another scalar type.
    pub fn cast<U: Field>(&self) -> CorrelationModel<U> {
        CorrelationModel {
            c: self
                .c
                .iter()
                .map(|x| from_f64::<U>(to_f64(x)))
                .collect(),
            n: self.n,
            warning: self.warning,
        }
    }
}

/// `G_k` with `q` zero arguments: `(-1)^q C_k / N^k`, valid for `k >= 2`.
pub fn reduced_correlation<T: Field>(model: &CorrelationModel<T>, k: usize, q: usize) -> Result<T> {
    let n = model.require_n()?;
    if k < 2 || k > model.l_max() {
        return Err(out_of_range("k", k, format!("2..={}", model.l_max())));
    }
    if q > k {
        return Err(out_of_range("q", q, format!("0..={k}")));
    }
    let magnitude = model.coefficient(k) / powi(&from_usize::<T>(n), k);
    Ok(if q.is_multiple_of(2) { magnitude } else { -magnitude })
}

/// `G_1(0)`, `G_1(1)` = `1 - C_1/N`, `C_1/N`.
pub fn first_order_correlation<T: Field>(model: &CorrelationModel<T>) -> Result<[T; 2]> {
    let n = model.require_n()?;
    let one = model.coefficient(1) / from_usize::<T>(n);
    Ok([T::one() - one.clone(), one])
}

/// The correlation table of order `k` implied by the model, indexed by number of ones.
pub fn reduced_correlation_table<T: Field>(
    model: &CorrelationModel<T>,
    k: usize,
) -> Result<SymmetricTable<T>> {
    if k == 1 {
        return Ok(SymmetricTable::correlation(
            first_order_correlation(model)?.to_vec(),
        ));
    }
    let values = (0..=k)
        .map(|m| reduced_correlation(model, k, k - m))
        .collect::<Result<Vec<_>>>()?;
    Ok(SymmetricTable::correlation(values))
}

/// `C_k = N^k G_k(1, ..., 1)`.
pub fn correlation_coefficient<T: Field>(table: &SymmetricTable<T>, n: usize) -> Result<T> {
    let k = table.order();
    if k > n {
        return Err(out_of_range("order", k, format!("<= n = {n}")));
    }
    if table.kind() != TableKind::Correlation && k > 1 {
        return Err(Error::BadShape(
            "correlation coefficient needs a correlation table".into(),
        ));
    }
    Ok(powi(&from_usize::<T>(n), k) * table.value(k).clone())
}

/// JSON form `{"l_max": int, "c": [C_1, ...], "n": int|null}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRecord {
    pub l_max: usize,
    pub c: Vec<f64>,
    #[serde(default)]
    pub n: Option<usize>,
}

impl TryFrom<ModelRecord> for CorrelationModel<f64> {
    type Error = Error;

    fn try_from(record: ModelRecord) -> Result<Self> {
        validate_model(record.l_max, record.c, record.n)
    }
}

impl From<&CorrelationModel<f64>> for ModelRecord {
    fn from(model: &CorrelationModel<f64>) -> Self {
        ModelRecord {
            l_max: model.l_max(),
            c: model.c.clone(),
            n: model.n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        let m = validate_model(1, vec![2.0], None).unwrap();
        assert_eq!(m.warning(), None);
        let m = validate_model(2, vec![1.0, 0.0], None).unwrap();
        assert_eq!(m.warning(), Some(ModelWarning::VanishingTopCoefficient));
        assert_eq!(m.warning().unwrap().to_string(), "C_{l_max}=0");
        assert_eq!(
            validate_model(2, vec![1.0, f64::NAN], None),
            Err(Error::NonFinite { index: 2 })
        );
        assert!(matches!(
            validate_model(3, vec![1.0, 2.0], None),
            Err(Error::BadShape(_))
        ));
        assert!(matches!(
            validate_model(3, vec![1.0, 2.0, 3.0], Some(2)),
            Err(Error::BadShape(_))
        ));
        assert!(matches!(
            validate_model::<f64>(0, vec![], None),
            Err(Error::BadShape(_))
        ));
        assert!(matches!(
            CorrelationModel::new(vec![f64::INFINITY], None),
            Err(Error::NonFinite { index: 1 })
        ));
    }

    #[test]
    fn reduced_correlation_examples() {
        let m = CorrelationModel::<f64>::new(vec![1.0, 0.5, 2.0], Some(10)).unwrap();
        assert!((reduced_correlation(&m, 2, 0).unwrap() - 0.005).abs() < 1e-18);
        assert!((reduced_correlation(&m, 2, 1).unwrap() + 0.005).abs() < 1e-18);
        assert!((reduced_correlation(&m, 3, 2).unwrap() - 0.002).abs() < 1e-18);
        assert!(reduced_correlation(&m, 1, 0).is_err());
        assert!(reduced_correlation(&m, 4, 0).is_err());
        assert!(reduced_correlation(&m, 2, 3).is_err());
        let limit = m.with_n(None).unwrap();
        assert!(reduced_correlation(&limit, 2, 0).is_err());
    }

    #[test]
    fn flip_antisymmetry_is_exact() {
        let m = CorrelationModel::new(vec![0.7, -1.3, 2.9, 0.1], Some(13)).unwrap();
        for k in 2..=4 {
            for q in 0..k {
                assert_eq!(
                    reduced_correlation(&m, k, q).unwrap(),
                    -reduced_correlation(&m, k, q + 1).unwrap()
                );
            }
        }
    }

    #[test]
    fn correlation_coefficient_examples() {
        let t = SymmetricTable::<f64>::correlation(vec![0.05, -0.05, 0.05]);
        assert!((correlation_coefficient(&t, 4).unwrap() - 0.8).abs() < 1e-15);
        let p: f64 = 0.37;
        let t1 = SymmetricTable::correlation(vec![1.0 - p, p]);
        assert!((correlation_coefficient(&t1, 9).unwrap() - 9.0 * p).abs() < 1e-15);
        assert!(correlation_coefficient(&t, 1).is_err());
    }

    #[test]
    fn coefficient_round_trip_through_reduced_table() {
        let m = CorrelationModel::new(vec![1.25, -0.5, 0.75], Some(8)).unwrap();
        for k in 1..=3 {
            let t = reduced_correlation_table(&m, k).unwrap();
            assert_eq!(correlation_coefficient(&t, 8).unwrap(), m.coefficient(k));
        }
    }

    #[test]
    fn record_round_trip() {
        let json = r#"{"l_max": 2, "c": [2.0, 0.5], "n": null}"#;
        let record: ModelRecord = serde_json::from_str(json).unwrap();
        let model = CorrelationModel::try_from(record.clone()).unwrap();
        assert_eq!(model.coefficients(), &[2.0, 0.5]);
        assert_eq!(ModelRecord::from(&model), record);
        let bad: ModelRecord = serde_json::from_str(r#"{"l_max": 3, "c": [1.0]}"#).unwrap();
        assert!(CorrelationModel::try_from(bad).is_err());
    }
}
