//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symcount::finite::{count_pmf_from_joint, finite_count_pmf};
use symcount::limit::{
    char_fn, compound_poisson_model, factorial_cumulants_from_pmf, limit_pmf, pmf_fourier_sum,
};
use symcount::montecarlo::{
    build_mixture_joint, estimate_coefficients, random_mixture, sample_counts, MixtureSpec,
};
use symcount::ursell::{
    correlation_recursive, correlation_recursive_expanded, correlation_tables_partition, marginals,
    measured_coefficients, probability_tables_from_correlations,
};
use symcount::{CorrelationModel, DoubleDouble, ExchangeableJoint};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn cli(args: &[&str]) -> (Vec<u8>, i32, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_symcount"))
        .args(args)
        .output()
        .expect("run symcount");
    (out.stdout, out.status.code().unwrap_or(-1), start.elapsed())
}

fn parse_pmf_csv(bytes: &[u8]) -> Vec<f64> {
    let text = String::from_utf8_lossy(bytes);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,p"));
    lines
        .enumerate()
        .map(|(i, line)| {
            let (s, p) = line.split_once(',').expect("two columns");
            assert_eq!(s.parse::<usize>().unwrap(), i);
            p.parse().unwrap()
        })
        .collect()
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

fn random_joint(rng: &mut ChaCha8Rng, n: usize) -> ExchangeableJoint {
    let atoms = rng.gen_range(1..=4);
    build_mixture_joint(&random_mixture(rng, atoms), n).unwrap()
}

fn random_admissible(rng: &mut ChaCha8Rng) -> CorrelationModel {
    let l_max = rng.gen_range(1..=4);
    let rates: Vec<f64> = (0..l_max).map(|_| rng.gen_range(0.0..1.5)).collect();
    compound_poisson_model(&rates).unwrap()
}

/// Poisson pmf through log-factorials, independent of the library.
fn poisson_oracle(lambda: f64, s: usize) -> f64 {
    let log_fact: f64 = (1..=s).map(|i| (i as f64).ln()).sum();
    (s as f64 * lambda.ln() - lambda - log_fact).exp()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn poisson_recovery() -> Outcome {
    let (out, code, elapsed) = cli(&["limit-pmf", "--c", "2.0"]);
    let p = parse_pmf_csv(&out);
    let err = (0..=40)
        .map(|s| (p.get(s).copied().unwrap_or(0.0) - poisson_oracle(2.0, s)).abs())
        .fold(0.0, f64::max);
    outcome(
        code == 0 && err <= 1e-12 && elapsed < Duration::from_secs(1),
        format!("max |p - Poisson(2)| = {err:.2e} for s <= 40, {:.3} s", elapsed.as_secs_f64()),
    )
}

fn exact_small_case() -> Outcome {
    let (out, code, _) = cli(&["finite-pmf", "--n", "3", "--c", "1.5,2.25"]);
    let p = parse_pmf_csv(&out);
    let joint = build_mixture_joint(&MixtureSpec::new(vec![(0.0, 0.5), (1.0, 0.5)]).unwrap(), 3).unwrap();
    let oracle = count_pmf_from_joint(&joint);
    let err = max_diff(&p, oracle.values()).max(max_diff(&p, &[0.5, 0.0, 0.0, 0.5]));
    outcome(code == 0 && err <= 1e-12, format!("max deviation {err:.2e}"))
}

fn full_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut err = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=7);
        let joint = random_joint(&mut rng, n);
        let c = measured_coefficients(&joint, n).unwrap();
        let pmf = finite_count_pmf(&CorrelationModel::new(c, Some(n)).unwrap()).unwrap();
        err = err.max(max_diff(pmf.values(), count_pmf_from_joint(&joint).values()));
    }
    let elapsed = start.elapsed();
    outcome(
        err <= 1e-10 && elapsed < Duration::from_secs(60),
        format!("100 joints, max deviation {err:.2e}, {:.3} s", elapsed.as_secs_f64()),
    )
}

fn ursell_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut rec, mut sym, mut flip, mut trip) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let n = rng.gen_range(1..=6);
        let joint = random_joint(&mut rng, n);
        let p = marginals(&joint, n).unwrap();
        let g = correlation_tables_partition(&p).unwrap();
        for k in 1..=n {
            let r = correlation_recursive(&p[..k]).unwrap();
            rec = rec.max(max_diff(r.values(), g[k - 1].values()));
        }
        for (idx, table) in correlation_recursive_expanded(&p).unwrap().iter().enumerate() {
            let k = idx + 1;
            for perm in permutations(k) {
                for mask in 0..1usize << k {
                    let moved = (0..k)
                        .filter(|&i| mask >> i & 1 == 1)
                        .fold(0usize, |acc, i| acc | 1 << perm[i]);
                    sym = sym.max((table[mask] - table[moved]).abs());
                }
            }
            if k >= 2 {
                for mask in 0..1usize << k {
                    for bit in 0..k {
                        flip = flip.max((table[mask | 1 << bit] + table[mask & !(1 << bit)]).abs());
                    }
                }
            }
        }
        let back = probability_tables_from_correlations(&g).unwrap();
        for (a, b) in back.iter().zip(&p) {
            trip = trip.max(max_diff(a.values(), b.values()));
        }
    }
    let mut iid = 0.0f64;
    for _ in 0..10 {
        let q: f64 = rng.gen();
        let joint = build_mixture_joint(&MixtureSpec::new(vec![(q, 1.0)]).unwrap(), 6).unwrap();
        let c = measured_coefficients(&joint, 6).unwrap();
        iid = c[1..].iter().fold(iid, |m, x| m.max(x.abs()));
    }
    outcome(
        rec <= 1e-12 && sym <= 1e-12 && flip <= 1e-12 && trip <= 1e-12 && iid <= 1e-10,
        format!(
            "recursive/partition {rec:.1e}, symmetry {sym:.1e}, flip {flip:.1e}, round trip {trip:.1e}, iid |C_k| {iid:.1e}"
        ),
    )
}

fn normalization_and_mean() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let one = DoubleDouble::from(1.0);
    let (mut total, mut mean) = (0.0f64, 0.0f64);
    let mut inadmissible = 0;
    for _ in 0..100 {
        let l_max = rng.gen_range(1..=4);
        let c: Vec<f64> = (0..l_max).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let n = [10, 100, 1000][rng.gen_range(0..3)];
        let model = CorrelationModel::new(c.clone(), Some(n)).unwrap();
        let pmf = finite_count_pmf(&model.cast::<DoubleDouble>()).unwrap();
        total = total.max(f64::from((pmf.total() - one).abs()));
        mean = mean.max(f64::from((pmf.mean() - DoubleDouble::from(c[0])).abs()));
        if !pmf.admissible() {
            inadmissible += 1;
        }
    }
    outcome(
        total <= 1e-9 && mean <= 1e-8,
        format!("max |sum - 1| = {total:.1e}, max |mean - C_1| = {mean:.1e}, {inadmissible}/100 inadmissible"),
    )
}

fn convergence_rate() -> Outcome {
    let start = Instant::now();
    let c = vec![1.0, 0.3];
    let limit = limit_pmf(&CorrelationModel::new(c.clone(), None).unwrap(), 1e-14).unwrap();
    let errors: Vec<f64> = [125, 250, 500, 1000]
        .iter()
        .map(|&n| {
            let p = finite_count_pmf(&CorrelationModel::new(c.clone(), Some(n)).unwrap()).unwrap();
            (0..=n.max(limit.s_max()))
                .map(|s| (p.get(s) - limit.get(s)).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    let elapsed = start.elapsed();
    outcome(
        ratios.iter().all(|r| (1.6..=2.4).contains(r)) && elapsed < Duration::from_secs(10),
        format!(
            "e_N/e_2N = {}, {:.3} s",
            ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>().join(", "),
            elapsed.as_secs_f64()
        ),
    )
}

fn cf_duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let grid: Vec<f64> = (0..32)
        .map(|j| -std::f64::consts::PI + 2.0 * std::f64::consts::PI * j as f64 / 31.0)
        .collect();
    let (mut err, mut tail) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let model = random_admissible(&mut rng);
        let pmf = limit_pmf(&model, 1e-13).unwrap();
        tail = tail.max(*pmf.tail_bound());
        for (u, chi) in grid.iter().zip(&char_fn(&model, &grid).chi) {
            err = err.max((pmf_fourier_sum(&pmf, *u) - chi).norm());
        }
    }
    outcome(
        err <= 1e-8 && tail <= 1e-12,
        format!("max |sum p e^ius - chi| = {err:.1e}, max tail {tail:.1e}"),
    )
}

fn coefficient_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut err = 0.0f64;
    for _ in 0..20 {
        let model = random_admissible(&mut rng);
        let pmf = limit_pmf(&model, 1e-13).unwrap();
        let c = factorial_cumulants_from_pmf(&pmf, model.l_max()).unwrap();
        err = err.max(max_diff(&c, model.coefficients()));
    }
    outcome(err <= 1e-8, format!("max |C_hat - C| = {err:.1e}"))
}

fn estimator_consistency() -> Outcome {
    let start = Instant::now();
    let truth = [2.0, 0.5];
    let pmf = limit_pmf(&CorrelationModel::new(truth.to_vec(), None).unwrap(), 1e-14).unwrap();
    let counts = sample_counts(&pmf, 1_000_000, 9).unwrap();
    let r = estimate_coefficients(&counts, 2, 200, 9).unwrap();
    let elapsed = start.elapsed();
    let z: Vec<f64> = (0..2).map(|l| (r.c_hat[l] - truth[l]) / r.std_err[l]).collect();
    outcome(
        z.iter().all(|z| z.abs() <= 4.0) && elapsed < Duration::from_secs(30),
        format!(
            "C_hat = ({:.4}, {:.4}), |z| = ({:.2}, {:.2}), {:.3} s",
            r.c_hat[0],
            r.c_hat[1],
            z[0].abs(),
            z[1].abs(),
            elapsed.as_secs_f64()
        ),
    )
}

fn determinism() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let args = ["sample", "--c", "2.0,0.5", "--count", "100000", "--seed", "42"];
    let (a, code_a, _) = cli(&args);
    let (b, code_b, _) = cli(&args);
    let path = dir.join("acceptance_counts.txt");
    std::fs::write(&path, &a).unwrap();
    let path = path.to_str().unwrap();
    let est = ["estimate", "--input", path, "--lmax", "2", "--seed", "7"];
    let (x, code_x, _) = cli(&est);
    let (y, code_y, _) = cli(&est);
    let ok = [code_a, code_b, code_x, code_y].iter().all(|&c| c == 0);
    outcome(
        ok && a == b && x == y && !a.is_empty() && !x.is_empty(),
        format!("sample {} bytes, estimate {} bytes, identical across runs", a.len(), x.len()),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Poisson recovery", poisson_recovery),
        ("exact small case", exact_small_case),
        ("full oracle equivalence", full_oracle_equivalence),
        ("Ursell suite", ursell_suite),
        ("normalization and mean", normalization_and_mean),
        ("convergence rate", convergence_rate),
        ("CF/pmf duality", cf_duality),
        ("coefficient round trip", coefficient_round_trip),
        ("estimator consistency", estimator_consistency),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.pass {
            failed += 1;
        }
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict}  {name}: {}", i + 1, result.detail);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
