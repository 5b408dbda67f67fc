use num_bigint::BigUint;
use num_traits::One;

use crate::error::{out_of_range, Result};
use crate::scalar::{from_usize, Field};

/// Row `n` of Pascal's triangle, built by additions only.
pub fn binomial_row<T: Field>(n: usize) -> Vec<T> {
    let mut row = vec![T::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(T::one());
        for w in row.windows(2) {
            next.push(w[0].clone() + w[1].clone());
        }
        next.push(T::one());
        row = next;
    }
    row
}

/// Binomial coefficient as a field element.
pub fn binomial<T: Field>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * from_usize::<T>(n - i) / from_usize::<T>(i + 1);
    }
    acc
}

pub fn factorial<T: Field>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, i| acc * from_usize::<T>(i))
}

/// Falling factorial `n (n-1) ... (n-k+1)`.
pub fn falling_factorial<T: Field>(n: usize, k: usize) -> T {
    (0..k).fold(T::one(), |acc, i| {
        if i > n {
            T::zero()
        } else {
            acc * from_usize::<T>(n - i)
        }
    })
}

pub fn big_factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

pub fn big_binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Number of ways to pick `k_l` unordered groups of `l` ordered elements
/// from `n_l` distinguishable elements: `n_l! / (n_l - l k_l)! / k_l!`.
pub fn m_factor(n_l: usize, l: usize, k_l: usize) -> Result<BigUint> {
    let used = l
        .checked_mul(k_l)
        .ok_or_else(|| out_of_range("l*k_l", usize::MAX, "overflow"))?;
    if used > n_l {
        return Err(out_of_range("l*k_l", used, format!("<= n_l = {n_l}")));
    }
    let mut falling = BigUint::one();
    for i in (n_l - used + 1)..=n_l {
        falling *= BigUint::from(i);
    }
    Ok(falling / big_factorial(k_l))
}
