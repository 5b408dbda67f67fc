//! Mixture joints, count sampling and coefficient estimation.
//!
//! All randomness comes from [`ChaCha8Rng`] seeded with
//! `seed_from_u64(seed)`; bootstrap replicate `b` runs on stream `b + 1` of
//! the same seed. Outputs are therefore a pure function of inputs and seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Error, Result};
use crate::limit::cumulants_from_moments;
use crate::pmf::Pmf;
use crate::scalar::{from_f64, powi, sum, Field};
use crate::table::ExchangeableJoint;
use crate::combinatorics::falling_factorial;

/// Default number of bootstrap replicates.
pub const DEFAULT_BOOTSTRAP: usize = 200;

/// Highest order accepted by [`estimate_coefficients`].
pub const MAX_ESTIMATE_ORDER: usize = 4;

/// De Finetti mixture of iid Bernoulli sequences: `(p, weight)` atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSpec<T> {
    atoms: Vec<(T, T)>,
}

impl<T: Field> MixtureSpec<T> {
    pub fn new(atoms: Vec<(T, T)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::BadSpec("no atoms".into()));
        }
        for (p, w) in &atoms {
            if *p < T::zero() || *p > T::one() || !p.is_finite_value() {
                return Err(Error::BadSpec(format!("p = {p:?} outside [0, 1]")));
            }
            if *w < T::zero() || !w.is_finite_value() {
                return Err(Error::BadSpec(format!("negative weight {w:?}")));
            }
        }
        let total = sum(atoms.iter().map(|(_, w)| w.clone()));
        if (total - T::one()).abs() > from_f64(1e-12) {
            return Err(Error::BadSpec("weights do not sum to 1".into()));
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[(T, T)] {
        &self.atoms
    }
}

/// `w[m] = sum_atoms weight p^m (1-p)^{n-m}`.
pub fn build_mixture_joint<T: Field>(spec: &MixtureSpec<T>, n: usize) -> Result<ExchangeableJoint<T>> {
    if n == 0 {
        return Err(Error::BadSpec("n must be at least 1".into()));
    }
    let weights = (0..=n)
        .map(|m| {
            sum(spec.atoms.iter().map(|(p, w)| {
                w.clone() * powi(p, m) * powi(&(T::one() - p.clone()), n - m)
            }))
        })
        .collect();
    ExchangeableJoint::new(weights)
}

/// Mixture with `n_atoms` uniform atoms and Dirichlet(1, ..., 1) weights.
pub fn random_mixture<R: Rng + ?Sized>(rng: &mut R, n_atoms: usize) -> MixtureSpec<f64> {
    let raw: Vec<f64> = (0..n_atoms.max(1))
        .map(|_| -(1.0 - rng.gen::<f64>()).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    let mut atoms: Vec<(f64, f64)> = raw.iter().map(|w| (rng.gen::<f64>(), w / total)).collect();
    // absorb rounding so the weights sum to one
    let drift = 1.0 - atoms.iter().map(|a| a.1).sum::<f64>();
    atoms[0].1 += drift;
    MixtureSpec::new(atoms).expect("valid random mixture")
}

/// Inverse-CDF draws: `u = rng.gen::<f64>()` scaled by the stored mass,
/// then the first `s` whose cumulative mass exceeds it.
pub fn sample_counts(pmf: &Pmf<f64>, n_samples: usize, seed: u64) -> Result<Vec<usize>> {
    if let Some((s, v)) = pmf.most_negative() {
        if !pmf.admissible() {
            return Err(Error::InadmissiblePmf { s, value: v });
        }
    }
    let mut cdf = Vec::with_capacity(pmf.values().len());
    let mut acc = 0.0;
    for p in pmf.values() {
        acc += p.max(0.0);
        cdf.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let last = cdf.len() - 1;
    Ok((0..n_samples)
        .map(|_| {
            let x = rng.gen::<f64>() * acc;
            cdf.partition_point(|&c| c <= x).min(last)
        })
        .collect())
}

/// Coefficient estimates with bootstrap standard errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub c_hat: Vec<f64>,
    pub std_err: Vec<f64>,
    pub n_samples: usize,
    pub n_bootstrap: usize,
}

fn histogram(counts: &[usize]) -> Vec<u64> {
    let max = counts.iter().copied().max().unwrap_or(0);
    let mut hist = vec![0u64; max + 1];
    for &c in counts {
        hist[c] += 1;
    }
    hist
}

fn cumulants_from_histogram(hist: &[u64], n: u64, l_max: usize) -> Vec<f64> {
    let n = n as f64;
    let moments: Vec<f64> = (1..=l_max)
        .map(|r| {
            sum(hist
                .iter()
                .enumerate()
                .skip(r)
                .map(|(s, &h)| falling_factorial::<f64>(s, r) * h as f64))
                / n
        })
        .collect();
    cumulants_from_moments(&moments)
}

/// Plug-in factorial-cumulant estimates of `C_1..C_{l_max}`.
///
/// A bootstrap replicate resamples the data with replacement; since only
/// the histogram matters, it is drawn as a multinomial over histogram bins
/// via sequential binomials.
pub fn estimate_coefficients(
    counts: &[usize],
    l_max: usize,
    n_bootstrap: usize,
    seed: u64,
) -> Result<EstimateReport> {
    if l_max == 0 || l_max > MAX_ESTIMATE_ORDER {
        return Err(out_of_range("l_max", l_max, format!("1..={MAX_ESTIMATE_ORDER}")));
    }
    let needed = 10usize.pow(l_max as u32);
    if counts.len() < needed {
        return Err(Error::TooFewSamples {
            got: counts.len(),
            needed,
            l_max,
        });
    }
    let n = counts.len() as u64;
    let hist = histogram(counts);
    let c_hat = cumulants_from_histogram(&hist, n, l_max);

    let replicates: Vec<Vec<f64>> = (0..n_bootstrap)
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64 + 1);
            let mut remaining_n = n;
            let mut remaining_mass = n;
            let resampled: Vec<u64> = hist
                .iter()
                .map(|&h| {
                    if remaining_n == 0 || h == 0 {
                        remaining_mass -= h;
                        return 0;
                    }
                    let draw = if h == remaining_mass {
                        remaining_n
                    } else {
                        let p = h as f64 / remaining_mass as f64;
                        Binomial::new(remaining_n, p)
                            .expect("probability in [0, 1]")
                            .sample(&mut rng)
                    };
                    remaining_n -= draw;
                    remaining_mass -= h;
                    draw
                })
                .collect();
            cumulants_from_histogram(&resampled, n, l_max)
        })
        .collect();

    let std_err = (0..l_max)
        .map(|l| {
            if replicates.len() < 2 {
                return 0.0;
            }
            let mean = sum(replicates.iter().map(|r| r[l])) / replicates.len() as f64;
            let ss = sum(replicates.iter().map(|r| (r[l] - mean).powi(2)));
            (ss / (replicates.len() - 1) as f64).sqrt()
        })
        .collect();

    Ok(EstimateReport {
        c_hat,
        std_err,
        n_samples: counts.len(),
        n_bootstrap,
    })
}
