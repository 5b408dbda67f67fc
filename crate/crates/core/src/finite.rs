//! Exact count distribution for finite `N`.
//!
//! With `A(x, y) = sum_{d,t} a[d][t] x^d y^t` built from the model, the count
//! pmf is `p_N(s) = N! [x^N y^s] exp(A(x, y))`. Each product of correlation
//! factors in the expansion of `P_N` is one term of the exponential series:
//! `x` counts arguments, `y` counts arguments equal to one, and the `1/k!`
//! of the series absorbs the interchangeable identical factors.
//!
//! The `x`-coefficients `E_m(y)` of `exp(A)` obey
//! `m E_m = sum_d d A_d E_{m-d}`. Tracking `F_m = m! E_m` instead keeps every
//! intermediate bounded: `F_m = sum_d d (m-1)_{(d-1)} A_d F_{m-d}`, where
//! `(m-1)_{(d-1)}` is a falling factorial, so the `N!` is absorbed one step
//! at a time and `F_N(y)` is the count generating polynomial.

use std::collections::VecDeque;

use crate::combinatorics::{binomial_row, factorial, falling_factorial};
use crate::error::{out_of_range, Error, Result};
use crate::model::CorrelationModel;
use crate::pmf::Pmf;
use crate::scalar::{from_usize, powi, CompensatedSum, Field, Real};
use crate::table::ExchangeableJoint;
use crate::DoubleDouble;

/// Largest event count accepted by [`finite_count_pmf`].
pub const MAX_FINITE_N: usize = 100_000;

/// `A(x, y)`; `coefficient(d, t)` multiplies `x^d y^t` for `1 <= d <= l_max`, `t <= d`.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariatePolynomial<T> {
    // rows[d - 1][t]
    rows: Vec<Vec<T>>,
}

impl<T: Field> BivariatePolynomial<T> {
    pub fn l_max(&self) -> usize {
        self.rows.len()
    }

    pub fn coefficient(&self, d: usize, t: usize) -> T {
        self.rows
            .get(d.wrapping_sub(1))
            .and_then(|r| r.get(t))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    /// The `y`-polynomial multiplying `x^d`.
    pub fn x_coefficient(&self, d: usize) -> &[T] {
        &self.rows[d - 1]
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        let mut acc = CompensatedSum::new();
        for (i, row) in self.rows.iter().enumerate() {
            let inner = row
                .iter()
                .rev()
                .fold(T::zero(), |a, c| a * y.clone() + c.clone());
            acc.add(powi(x, i + 1) * inner);
        }
        acc.value()
    }
}

/// Exponent polynomial: `a[1][1] = C_1/N`, `a[1][0] = 1 - C_1/N` and
/// `a[l][l-q] = (-1)^q C_l / (N^l q! (l-q)!)` for `l >= 2`.
pub fn build_exponent<T: Field>(model: &CorrelationModel<T>) -> Result<BivariatePolynomial<T>> {
    let n = model.require_n()?;
    let big_n = from_usize::<T>(n);
    let mut rows = Vec::with_capacity(model.l_max());
    let c1 = model.coefficient(1) / big_n.clone();
    rows.push(vec![T::one() - c1.clone(), c1]);
    for l in 2..=model.l_max() {
        let scale = model.coefficient(l) / powi(&big_n, l);
        let row = (0..=l)
            .map(|t| {
                let q = l - t;
                let v = scale.clone() / (factorial::<T>(q) * factorial::<T>(t));
                if q % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect();
        rows.push(row);
    }
    Ok(BivariatePolynomial { rows })
}

/// `p_N(s) = C(N, s) w[s]`: the direct sum over outcome patterns.
pub fn count_pmf_from_joint<T: Field>(joint: &ExchangeableJoint<T>) -> Pmf<T> {
    let row = binomial_row::<T>(joint.n());
    Pmf::new(
        joint
            .pattern_weights()
            .iter()
            .zip(row)
            .map(|(w, b)| w.clone() * b)
            .collect(),
        T::zero(),
    )
}

/// Exact count pmf of `N` events from the truncated coefficient model.
///
/// Cost is `O(N^2 l_max^2)`. Normalization and the mean `C_1` hold for any
/// coefficients; negative entries are reported by [`Pmf::admissible`], not
/// as errors. The error estimate is `u N M_N`, where `M_N` runs the same
/// recurrence on absolute coefficient sums.
pub fn finite_count_pmf<T: Field>(model: &CorrelationModel<T>) -> Result<Pmf<T>> {
    let n = model.require_n()?;
    if n > MAX_FINITE_N {
        return Err(out_of_range("n", n, format!("<= {MAX_FINITE_N}")));
    }
    let exponent = build_exponent(model)?;
    let l_max = exponent.l_max();
    let abs_norms: Vec<T> = (1..=l_max)
        .map(|d| {
            exponent
                .x_coefficient(d)
                .iter()
                .fold(T::zero(), |a, c| a + c.abs())
        })
        .collect();

    // history[j] holds F_{m-1-j}; abs_history likewise for M.
    let mut history: VecDeque<Vec<T>> = VecDeque::with_capacity(l_max + 1);
    let mut abs_history: VecDeque<T> = VecDeque::with_capacity(l_max + 1);
    history.push_front(vec![T::one()]);
    abs_history.push_front(T::one());

    for m in 1..=n {
        let mut next: Vec<CompensatedSum<T>> = vec![CompensatedSum::new(); m + 1];
        let mut abs_next = T::zero();
        for d in 1..=l_max.min(m) {
            let prev = &history[d - 1];
            let weight = from_usize::<T>(d) * falling_factorial::<T>(m - 1, d - 1);
            let a_d = exponent.x_coefficient(d);
            for (t, a) in a_d.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let wa = weight.clone() * a.clone();
                for (i, f) in prev.iter().enumerate() {
                    next[i + t].add(wa.clone() * f.clone());
                }
            }
            abs_next = abs_next + weight * abs_norms[d - 1].clone() * abs_history[d - 1].clone();
        }
        let next: Vec<T> = next.into_iter().map(|s| s.value()).collect();
        if !abs_next.is_finite_value() || next.iter().any(|v| !v.is_finite_value()) {
            return Err(Error::Overflow { n: m });
        }
        history.push_front(next);
        abs_history.push_front(abs_next);
        history.truncate(l_max);
        abs_history.truncate(l_max);
    }

    let values = history.pop_front().expect("F_N computed");
    let magnitude = abs_history.pop_front().expect("M_N computed");
    let estimate = T::unit_roundoff() * from_usize::<T>(n.max(1)) * magnitude;
    Ok(Pmf::with_error_estimate(values, T::zero(), estimate))
}

/// Scalar used by [`finite_count_pmf_f64`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    Double,
    DoubleDouble,
    /// Double first; repeat in double-double if the error estimate exceeds
    /// [`ESCALATION_THRESHOLD`].
    #[default]
    Auto,
}

/// Error estimate above which [`Precision::Auto`] switches to double-double.
pub const ESCALATION_THRESHOLD: f64 = 1e-10;

/// [`finite_count_pmf`] for an `f64` model under a precision policy. Results
/// computed in double-double are rounded to `f64` at the end.
pub fn finite_count_pmf_f64(model: &CorrelationModel<f64>, precision: Precision) -> Result<Pmf<f64>> {
    let extended = || -> Result<Pmf<f64>> {
        let pmf = finite_count_pmf(&model.cast::<DoubleDouble>())?.to_f64();
        let largest = pmf.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let estimate = pmf.error_estimate() + f64::EPSILON * largest;
        Ok(Pmf::with_error_estimate(pmf.into_values(), 0.0, estimate))
    };
    match precision {
        Precision::Double => finite_count_pmf(model),
        Precision::DoubleDouble => extended(),
        Precision::Auto => {
            let pmf = finite_count_pmf(model)?;
            if *pmf.error_estimate() > ESCALATION_THRESHOLD {
                extended()
            } else {
                Ok(pmf)
            }
        }
    }
}

/// `p_N(N)` from the sum over factor multiplicities `k_1, ..., k_{l_max}`
/// with `sum_l l k_l = N`, each weighted by
/// `prod_l (1/l!)^{k_l} M(n_l; l, k_l) (C_l / N^l)^{k_l}`,
/// `n_l = N - sum_{l' < l} l' k_{l'}`.
///
/// Independent of [`finite_count_pmf`]; the number of multiplicity vectors
/// grows like `N^{l_max - 1}`, so this is a cross-check, not a fast path.
pub fn p_full_count<T: Real>(model: &CorrelationModel<T>) -> Result<T> {
    let n = model.require_n()?;
    if n > MAX_FINITE_N {
        return Err(out_of_range("n", n, format!("<= {MAX_FINITE_N}")));
    }
    let big_n = from_usize::<T>(n);
    let mut ln_fact = Vec::with_capacity(n + 1);
    ln_fact.push(T::zero());
    for i in 1..=n {
        let prev = ln_fact[i - 1];
        ln_fact.push(prev + from_usize::<T>(i).ln());
    }
    let l_max = model.l_max();
    // value of G_l(1, ..., 1)
    let g_all_ones: Vec<T> = (1..=l_max)
        .map(|l| model.coefficient(l) / powi(&big_n, l))
        .collect();

    let ln_m = |n_l: usize, l: usize, k: usize| ln_fact[n_l] - ln_fact[n_l - l * k] - ln_fact[k];

    let mut acc = CompensatedSum::new();
    let mut ks = vec![0usize; l_max + 1];
    // Enumerate k_2..k_{l_max}; k_1 takes the remaining arguments.
    fn visit(
        l: usize,
        remaining: usize,
        ks: &mut [usize],
        f: &mut dyn FnMut(&[usize]),
    ) {
        if l == 1 {
            ks[1] = remaining;
            f(ks);
            return;
        }
        for k in 0..=remaining / l {
            ks[l] = k;
            visit(l - 1, remaining - l * k, ks, f);
        }
        ks[l] = 0;
    }
    visit(l_max, n, &mut ks, &mut |ks: &[usize]| {
        let mut log_mag = T::zero();
        let mut negative = false;
        let mut n_l = n;
        for l in 1..=l_max {
            let k = ks[l];
            if k == 0 {
                continue;
            }
            let g = g_all_ones[l - 1];
            if g.is_zero() {
                return;
            }
            log_mag = log_mag + ln_m(n_l, l, k) - from_usize::<T>(k) * ln_fact[l]
                + from_usize::<T>(k) * g.abs().ln();
            if g < T::zero() && k % 2 == 1 {
                negative = !negative;
            }
            n_l -= l * k;
        }
        let term = log_mag.exp();
        acc.add(if negative { -term } else { term });
    });
    Ok(acc.value())
}
