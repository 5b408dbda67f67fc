//! The `N -> ∞` count law.
//!
//! Its probability generating function is `exp(Q(z))` with
//! `Q(z) = sum_l sum_{t<=l} (-1)^{l-t} (C_l / l!) C(l, t) z^t`, which by the
//! binomial theorem equals `sum_l C_l (z - 1)^l / l!`. The characteristic
//! function is `exp(Q(e^{iu}))` and the pmf is the power-series
//! coefficient sequence of `exp(Q)`.

use num_complex::Complex;

use crate::combinatorics::{binomial, factorial, falling_factorial};
use crate::error::{out_of_range, Error, Result};
use crate::model::CorrelationModel;
use crate::pmf::{CfGrid, Pmf};
use crate::scalar::{from_f64, from_usize, sum, to_f64, CompensatedSum, Field, Real};

/// Maximum support explored by [`limit_pmf`] before giving up.
pub const MAX_SUPPORT: usize = 1_000_000;

/// Highest order accepted by [`factorial_cumulants_from_pmf`].
pub const MAX_CUMULANT_ORDER: usize = 6;

/// Largest tail mass accepted by [`factorial_cumulants_from_pmf`].
pub const CUMULANT_TAIL_LIMIT: f64 = 1e-10;

/// Tolerance on the agreement between the two constructions of `Q`.
pub const EXPONENT_ROUTE_TOLERANCE: f64 = 1e-14;

/// Coefficients of `Q(z)` in powers of `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentPolynomial<T> {
    q: Vec<T>,
}

impl<T: Field> ExponentPolynomial<T> {
    pub fn coefficients(&self) -> &[T] {
        &self.q
    }

    pub fn degree(&self) -> usize {
        self.q.len() - 1
    }

    pub fn eval(&self, z: &T) -> T {
        self.q
            .iter()
            .rev()
            .fold(T::zero(), |a, c| a * z.clone() + c.clone())
    }
}

impl<T: Real> ExponentPolynomial<T> {
    pub fn eval_complex(&self, z: Complex<T>) -> Complex<T> {
        self.q
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |a, c| {
                a * z + Complex::new(*c, T::zero())
            })
    }
}

/// `Q` from the double sum over `l` and `t`.
pub fn exponent_double_sum<T: Field>(c: &[T]) -> Vec<T> {
    let l_max = c.len();
    (0..=l_max)
        .map(|t| {
            sum((t.max(1)..=l_max).map(|l| {
                let v = c[l - 1].clone() / factorial::<T>(l) * binomial::<T>(l, t);
                if (l - t) % 2 == 0 {
                    v
                } else {
                    -v
                }
            }))
        })
        .collect()
}

/// `Q(z) = b(z - 1)` with `b(w) = sum_l C_l w^l / l!`, by Horner composition.
pub fn exponent_shifted<T: Field>(c: &[T]) -> Vec<T> {
    let l_max = c.len();
    let b: Vec<T> = std::iter::once(T::zero())
        .chain(c.iter().enumerate().map(|(i, x)| x.clone() / factorial::<T>(i + 1)))
        .collect();
    // acc(z) <- acc(z) * (z - 1) + b_j
    let mut acc: Vec<T> = vec![T::zero(); l_max + 1];
    for bj in b.iter().rev() {
        let mut next = vec![T::zero(); l_max + 1];
        for (i, a) in acc.iter().enumerate() {
            if i < l_max {
                next[i + 1] = next[i + 1].clone() + a.clone();
            }
            next[i] = next[i].clone() - a.clone();
        }
        next[0] = next[0].clone() + bj.clone();
        acc = next;
    }
    acc
}

/// Builds `Q` by both routes and checks that they agree.
pub fn exponent_polynomial<T: Field>(model: &CorrelationModel<T>) -> ExponentPolynomial<T> {
    let q = exponent_double_sum(model.coefficients());
    let shifted = exponent_shifted(model.coefficients());
    let scale = model
        .coefficients()
        .iter()
        .fold(T::one(), |a, c| a + c.abs());
    let tolerance = from_f64::<T>(EXPONENT_ROUTE_TOLERANCE) * scale;
    for (a, b) in q.iter().zip(&shifted) {
        assert!(
            (a.clone() - b.clone()).abs() <= tolerance,
            "exponent routes disagree: {a:?} vs {b:?}"
        );
    }
    ExponentPolynomial { q }
}

/// `χ(u) = exp(Q(e^{iu}))` on each grid point.
pub fn char_fn<T: Real>(model: &CorrelationModel<T>, u_grid: &[T]) -> CfGrid<T> {
    let q = exponent_polynomial(model);
    let chi = u_grid
        .iter()
        .map(|&u| q.eval_complex(Complex::new(T::zero(), u).exp()).exp())
        .collect();
    CfGrid {
        u: u_grid.to_vec(),
        chi,
    }
}

/// `sum_s p(s) e^{ius}` for a pmf.
pub fn pmf_fourier_sum<T: Real>(pmf: &Pmf<T>, u: T) -> Complex<T> {
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for (s, &p) in pmf.values().iter().enumerate() {
        let phase = u * from_usize::<T>(s);
        re.add(p * phase.cos());
        im.add(p * phase.sin());
    }
    Complex::new(re.value(), im.value())
}

/// Limiting pmf from the series recurrence for `exp(Q)`:
/// `p(0) = e^{q_0}`, `n p(n) = sum_{j=1}^{min(n, l_max)} j q_j p(n-j)`.
///
/// The support starts at `⌈C_1 + 10 sqrt(max(C_1 + C_2, 1))⌉` and doubles
/// until `|1 - sum p| <= mass_tolerance` with a negligible last entry. Trailing
/// exact zeros are dropped.
pub fn limit_pmf<T: Real>(model: &CorrelationModel<T>, mass_tolerance: f64) -> Result<Pmf<T>> {
    if !(mass_tolerance > 0.0 && mass_tolerance <= 1e-6) {
        return Err(Error::BadShape(format!(
            "mass tolerance {mass_tolerance:e} outside (0, 1e-6]"
        )));
    }
    let q = exponent_polynomial(model);
    let qc = q.coefficients();
    let l_max = q.degree();
    let c1 = to_f64(&model.coefficient(1));
    let c2 = if l_max >= 2 { to_f64(&model.coefficient(2)) } else { 0.0 };
    let start = (c1.max(0.0) + 10.0 * (c1 + c2).max(1.0).sqrt()).ceil();
    let mut s_max = if start.is_finite() { (start as usize).max(1) } else { MAX_SUPPORT };
    let tol = from_f64::<T>(mass_tolerance);

    let mut p: Vec<T> = vec![qc[0].exp()];
    if !p[0].is_finite() {
        return Err(Error::Overflow { n: 0 });
    }
    let mut total = CompensatedSum::new();
    total.add(p[0]);
    loop {
        for n in p.len()..=s_max {
            let acc = sum((1..=n.min(l_max)).map(|j| from_usize::<T>(j) * qc[j] * p[n - j]));
            let v = acc / from_usize::<T>(n);
            total.add(v);
            p.push(v);
        }
        let deficit = T::one() - total.value();
        let last = p[s_max].abs();
        if !deficit.is_finite() {
            return Err(Error::NonConvergent {
                cap: s_max,
                tolerance: mass_tolerance,
            });
        }
        if deficit.abs() <= tol && last <= tol {
            while p.len() > 1 && p.last().is_some_and(|v| v.is_zero()) {
                p.pop();
            }
            let tail = if deficit > T::zero() { deficit } else { T::zero() };
            let estimate = T::unit_roundoff() * from_usize::<T>(p.len());
            return Ok(Pmf::with_error_estimate(p, tail, estimate));
        }
        if s_max >= MAX_SUPPORT {
            return Err(Error::NonConvergent {
                cap: MAX_SUPPORT,
                tolerance: mass_tolerance,
            });
        }
        s_max = (2 * s_max).min(MAX_SUPPORT);
    }
}

/// Cumulants from moments `m_1..m_L` (with `m_0 = 1`):
/// `k_n = m_n - sum_{j=1}^{n-1} C(n-1, j-1) k_j m_{n-j}`.
pub fn cumulants_from_moments<T: Field>(moments: &[T]) -> Vec<T> {
    let mut k: Vec<T> = Vec::with_capacity(moments.len());
    for n in 1..=moments.len() {
        let correction = sum((1..n).map(|j| {
            binomial::<T>(n - 1, j - 1) * k[j - 1].clone() * moments[n - j - 1].clone()
        }));
        k.push(moments[n - 1].clone() - correction);
    }
    k
}

/// Factorial moments `E[s (s-1) ... (s-r+1)]` for `r = 1..=order`, normalized
/// by the stored mass.
pub fn factorial_moments<T: Field>(pmf: &Pmf<T>, order: usize) -> Vec<T> {
    let total = pmf.total();
    (1..=order)
        .map(|r| {
            sum(pmf
                .values()
                .iter()
                .enumerate()
                .skip(r)
                .map(|(s, p)| falling_factorial::<T>(s, r) * p.clone()))
                / total.clone()
        })
        .collect()
}

/// Factorial cumulants `c_1..c_{l_max}`: the coefficients of
/// `w^l / l!` in `log sum_s p(s) (1 + w)^s`. For a limiting pmf they
/// reproduce the model's `C_l`.
pub fn factorial_cumulants_from_pmf<T: Field>(pmf: &Pmf<T>, l_max: usize) -> Result<Vec<T>> {
    if l_max == 0 || l_max > MAX_CUMULANT_ORDER {
        return Err(out_of_range("l_max", l_max, format!("1..={MAX_CUMULANT_ORDER}")));
    }
    let tail = to_f64(pmf.tail_bound());
    if tail > CUMULANT_TAIL_LIMIT {
        return Err(Error::TailTooHeavy { tail_bound: tail });
    }
    Ok(cumulants_from_moments(&factorial_moments(pmf, l_max)))
}

/// Model whose limit law is compound Poisson with jump-size rates
/// `rates[t-1] >= 0` for jumps of size `t`: `C_l = sum_{t>=l} rates_t t!/(t-l)!`.
/// Such models are admissible by construction.
pub fn compound_poisson_model<T: Field>(rates: &[T]) -> Result<CorrelationModel<T>> {
    let l_max = rates.len();
    let c = (1..=l_max)
        .map(|l| {
            sum((l..=l_max).map(|t| rates[t - 1].clone() * falling_factorial::<T>(t, l)))
        })
        .collect();
    CorrelationModel::new(c, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(c: &[f64]) -> CorrelationModel<f64> {
        CorrelationModel::new(c.to_vec(), None).unwrap()
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(exponent_polynomial(&model(&[2.0, 0.5])).coefficients(), &[-1.75, 1.5, 0.25]);
        assert_eq!(exponent_polynomial(&model(&[3.0])).coefficients(), &[-3.0, 3.0]);
        assert_eq!(exponent_polynomial(&model(&[0.0, 1.0])).coefficients(), &[0.5, -1.0, 0.5]);
        assert_eq!(exponent_shifted(&[2.0, 0.5]), vec![-1.75, 1.5, 0.25]);
    }

    #[test]
    fn char_fn_examples() {
        let cf = char_fn(&model(&[2.0, 0.5, -0.1]), &[0.0]);
        assert!((cf.chi[0] - Complex::new(1.0, 0.0)).norm() < 1e-14);
        let cf = char_fn(&model(&[1.0]), &[std::f64::consts::PI]);
        assert!((cf.chi[0].re - 0.1353352832366127).abs() < 1e-15);
        assert!(cf.chi[0].im.abs() < 1e-15);
    }

    #[test]
    fn limit_pmf_examples() {
        let e1 = (-1.0f64).exp();
        let p = limit_pmf(&model(&[1.0]), 1e-12).unwrap();
        assert!((p.get(0) - e1).abs() < 1e-16);
        assert!((p.get(1) - e1).abs() < 1e-16);
        assert!((p.get(2) - e1 / 2.0).abs() < 1e-16);

        let p = limit_pmf(&model(&[2.0, 0.5]), 1e-12).unwrap();
        let p0 = (-1.75f64).exp();
        let p1 = 1.5 * p0;
        let p2 = 0.5 * (1.5 * p1 + 2.0 * 0.25 * p0);
        assert!((p.get(0) - 0.1737739435).abs() < 1e-10);
        assert!((p.get(1) - 0.2606609).abs() < 1e-7);
        assert!((p.get(2) - 0.2389392).abs() < 1e-7);
        assert!((p.get(2) - p2).abs() < 1e-16);
        assert!(p.tail_bound() <= &1e-12);

        let p = limit_pmf(&model(&[0.0]), 1e-12).unwrap();
        assert_eq!(p.values(), &[1.0]);
    }

    #[test]
    fn limit_pmf_rejects_bad_tolerance() {
        assert!(limit_pmf(&model(&[1.0]), 0.0).is_err());
        assert!(limit_pmf(&model(&[1.0]), 1e-3).is_err());
    }

    #[test]
    fn cumulant_examples() {
        let point = Pmf::new(vec![0.0, 0.0, 0.0, 1.0], 0.0);
        assert_eq!(factorial_moments(&point, 3), vec![3.0, 6.0, 6.0]);
        assert_eq!(factorial_cumulants_from_pmf(&point, 3).unwrap(), vec![3.0, -3.0, 6.0]);
        assert!(factorial_cumulants_from_pmf(&point, 7).is_err());
        let heavy = Pmf::new(vec![0.5, 0.5], 1e-6);
        assert!(matches!(
            factorial_cumulants_from_pmf(&heavy, 2),
            Err(Error::TailTooHeavy { .. })
        ));
    }

    #[test]
    fn compound_poisson_construction() {
        // rates (1, 0.5): Q(z) = z + 0.5 z^2 - 1.5, so C_1 = 2, C_2 = 1
        let m = compound_poisson_model(&[1.0, 0.5]).unwrap();
        assert_eq!(m.coefficients(), &[2.0, 1.0]);
        assert_eq!(exponent_polynomial(&m).coefficients(), &[-1.5, 1.0, 0.5]);
    }
}
