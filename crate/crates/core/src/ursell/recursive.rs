//! The recursive definition of the correlation functions, evaluated
//! literally on per-pattern tables:
//!
//! `G_k(r) = P_k(r) - sum_σ sum_{l=1}^{k-1} G_l(r_1, r_σ(2..=l)) P_{k-l}(r_σ(l+1..=k)) / ((l-1)! (k-l)!)`
//!
//! with `σ` running over all permutations of the arguments `2..=k`. Nothing
//! here relies on symmetry of the result, so the output can be used to
//! check it.

use crate::combinatorics::factorial;
use crate::error::{out_of_range, Result};
use crate::scalar::{CompensatedSum, Field};
use crate::table::{SymmetricTable, TableKind};

use super::expansion::check_ladder;

/// Largest order accepted by the permutation recursion.
pub const MAX_RECURSIVE_ORDER: usize = 10;

/// `G_1..G_k` as per-pattern vectors (index = bit mask, bit `i` = `r_{i+1}`).
pub fn correlation_recursive_expanded<T: Field>(
    p_tables: &[SymmetricTable<T>],
) -> Result<Vec<Vec<T>>> {
    let k = p_tables.len();
    if k == 0 || k > MAX_RECURSIVE_ORDER {
        return Err(out_of_range("k", k, format!("1..={MAX_RECURSIVE_ORDER}")));
    }
    check_ladder(p_tables, TableKind::Probability)?;
    let p: Vec<Vec<T>> = p_tables
        .iter()
        .map(SymmetricTable::expanded)
        .collect::<Result<_>>()?;
    let mut g: Vec<Vec<T>> = vec![p[0].clone()];
    for order in 2..=k {
        let next = recursion_step(&p, &g, order);
        g.push(next);
    }
    Ok(g)
}

fn recursion_step<T: Field>(p: &[Vec<T>], g: &[Vec<T>], k: usize) -> Vec<T> {
    // weight[l] = 1 / ((l-1)! (k-l)!)
    let weight: Vec<T> = (0..k)
        .map(|l| {
            if l == 0 {
                T::zero()
            } else {
                T::one() / (factorial::<T>(l - 1) * factorial::<T>(k - l))
            }
        })
        .collect();
    let mut acc: Vec<CompensatedSum<T>> = (0..1usize << k)
        .map(|mask| {
            let mut s = CompensatedSum::new();
            s.add(p[k - 1][mask].clone());
            s
        })
        .collect();

    let mut perm: Vec<usize> = (1..k).collect();
    loop {
        for (mask, slot) in acc.iter_mut().enumerate() {
            let bit = |i: usize| (mask >> i) & 1;
            // suffix_mask[j] packs r_σ(j..) for the trailing P factor
            let mut suffix = vec![0usize; k];
            for j in (0..k - 1).rev() {
                suffix[j] = bit(perm[j]) | (suffix[j + 1] << 1);
            }
            let mut g_mask = bit(0);
            for l in 1..k {
                if l > 1 {
                    g_mask |= bit(perm[l - 2]) << (l - 1);
                }
                let term = weight[l].clone()
                    * g[l - 1][g_mask].clone()
                    * p[k - l - 1][suffix[l - 1]].clone();
                slot.add(-term);
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    acc.into_iter().map(|s| s.value()).collect()
}

/// Lexicographic successor; false after the last permutation.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len())
        .rev()
        .find(|&j| v[j] > v[i])
        .expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// `G_k` from the recursion, compressed by reading the pattern whose first
/// `m` arguments are one.
pub fn correlation_recursive<T: Field>(p_tables: &[SymmetricTable<T>]) -> Result<SymmetricTable<T>> {
    let g = correlation_recursive_expanded(p_tables)?;
    let top = g.last().expect("at least one order");
    let k = p_tables.len();
    Ok(SymmetricTable::correlation(
        (0..=k).map(|m| top[(1usize << m) - 1].clone()).collect(),
    ))
}
