//! Cross-module identity checks on random mixtures and random models.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use symcount::finite::{count_pmf_from_joint, finite_count_pmf};
use symcount::limit::{char_fn, compound_poisson_model, limit_pmf, pmf_fourier_sum};
use symcount::montecarlo::{build_mixture_joint, random_mixture};
use symcount::ursell::{
    correlation_recursive, correlation_recursive_expanded, correlation_tables_partition, marginals,
    measured_coefficients, probability_tables_from_correlations,
};
use symcount::{CorrelationModel, DoubleDouble, ExchangeableJoint, SymmetricTable};

use crate::io::{write_json, Format};
use crate::CliError;

/// Largest `n` accepted; the literal recursion costs `(n-1)! 2^n` per table.
pub const MAX_N: usize = 8;

#[derive(Debug, Serialize)]
pub struct Check {
    pub identity: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn new(identity: &'static str, max_error: f64, tolerance: f64) -> Self {
        Check {
            identity,
            max_error,
            tolerance,
            pass: max_error <= tolerance,
            note: None,
        }
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn table_diff(a: &[SymmetricTable], b: &[SymmetricTable]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| max_diff(x.values(), y.values()))
        .fold(0.0, f64::max)
}

fn random_joint(rng: &mut ChaCha8Rng, n: usize) -> Result<ExchangeableJoint, CliError> {
    let atoms = rng.gen_range(1..=4);
    Ok(build_mixture_joint(&random_mixture(rng, atoms), n)?)
}

fn random_admissible(rng: &mut ChaCha8Rng) -> Result<CorrelationModel, CliError> {
    let l_max = rng.gen_range(1..=4);
    let rates: Vec<f64> = (0..l_max).map(|_| rng.gen_range(0.0..1.5)).collect();
    Ok(compound_poisson_model(&rates)?)
}

fn poisson(lambda: f64, s_max: usize) -> Vec<f64> {
    let mut out = vec![(-lambda).exp()];
    for s in 1..=s_max {
        out.push(out[s - 1] * lambda / s as f64);
    }
    out
}

pub fn run_all(n: usize, trials: usize, seed: u64) -> Result<Vec<Check>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut recursive = 0.0f64;
    let mut flip = 0.0f64;
    let mut round_trip = 0.0f64;
    let mut oracle = 0.0f64;
    for _ in 0..trials {
        let joint = random_joint(&mut rng, n)?;
        let p = marginals(&joint, n)?;
        let g = correlation_tables_partition(&p)?;
        for k in 1..=n {
            let r = correlation_recursive(&p[..k])?;
            recursive = recursive.max(max_diff(r.values(), g[k - 1].values()));
        }
        for (idx, table) in correlation_recursive_expanded(&p)?.iter().enumerate().skip(1) {
            let k = idx + 1;
            for mask in 0..1usize << k {
                for bit in 0..k {
                    flip = flip.max((table[mask | 1 << bit] + table[mask & !(1 << bit)]).abs());
                }
            }
        }
        round_trip = round_trip.max(table_diff(&probability_tables_from_correlations(&g)?, &p));

        let c = measured_coefficients(&joint, n)?;
        let pmf = finite_count_pmf(&CorrelationModel::new(c, Some(n))?)?;
        oracle = oracle.max(max_diff(pmf.values(), count_pmf_from_joint(&joint).values()));
    }

    let mut total = 0.0f64;
    let mut mean = 0.0f64;
    let mut most_negative: Option<(f64, usize, usize)> = None;
    for trial in 0..trials {
        let l_max = rng.gen_range(1..=n.min(4));
        let c: Vec<f64> = (0..l_max).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let big_n = [n, 10 * n, 100 * n][trial % 3];
        let model = CorrelationModel::new(c.clone(), Some(big_n))?;
        let pmf = finite_count_pmf(&model.cast::<DoubleDouble>())?;
        total = total.max(f64::from((pmf.total() - DoubleDouble::from(1.0)).abs()));
        mean = mean.max(f64::from((pmf.mean() - DoubleDouble::from(c[0])).abs()));
        if let Some((s, v)) = pmf.most_negative() {
            let v = f64::from(v);
            if most_negative.is_none_or(|(w, _, _)| v < w) {
                most_negative = Some((v, s, big_n));
            }
        }
    }

    let mut poisson_err = 0.0f64;
    let mut duality = 0.0f64;
    for _ in 0..trials {
        let lambda = rng.gen_range(0.1..20.0);
        let pmf = limit_pmf(&CorrelationModel::new(vec![lambda], None)?, 1e-12)?;
        for (s, want) in poisson(lambda, 40).iter().enumerate() {
            poisson_err = poisson_err.max((pmf.get(s) - want).abs());
        }

        let model = random_admissible(&mut rng)?;
        let pmf = limit_pmf(&model, 1e-13)?;
        let grid: Vec<f64> = (0..32).map(|j| -3.2 + 0.2 * j as f64).collect();
        for (u, chi) in grid.iter().zip(&char_fn(&model, &grid).chi) {
            duality = duality.max((pmf_fourier_sum(&pmf, *u) - chi).norm());
        }
    }

    let mut normalization = Check::new("normalization", total, 1e-9);
    normalization.note = most_negative.map(|(v, s, big_n)| {
        format!("most negative p(s) among random models: {v:e} at s={s}, N={big_n}")
    });
    Ok(vec![
        Check::new("recursive-vs-partition", recursive, 1e-12),
        Check::new("flip-antisymmetry", flip, 1e-12),
        Check::new("probability-correlation-round-trip", round_trip, 1e-12),
        Check::new("oracle-vs-finite", oracle, 1e-10),
        normalization,
        Check::new("mean", mean, 1e-8),
        Check::new("poisson-reduction", poisson_err, 1e-12),
        Check::new("cf-pmf-duality", duality, 1e-8),
    ])
}

pub fn report<W: Write>(mut out: W, checks: &[Check], format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(out, checks),
        Format::Csv => {
            for c in checks {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                writeln!(
                    out,
                    "{verdict} {} max_error={:e} tolerance={:e}",
                    c.identity, c.max_error, c.tolerance
                )?;
                if let Some(note) = &c.note {
                    writeln!(out, "     {note}")?;
                }
            }
            Ok(())
        }
    }
}
