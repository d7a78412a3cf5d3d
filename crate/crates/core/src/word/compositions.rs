//! Counting tuples of positive integers with bounded sum.
//!
//! `N_{n,k} = {(n₁, …, n_k) ∈ ℕᵏ : Σ nᵢ ≤ n}` (with `ℕ = {1, 2, …}`) has
//! exactly `C(n, k)` elements: partial sums give a bijection onto the
//! `k`-subsets of `{1, …, n}`.

use num_integer::binomial;

use crate::error::{Error, Result};

fn check_domain(n: u64, k: u64) -> Result<()> {
    if k < 1 || k > n {
        return Err(Error::Domain(format!(
            "need 1 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    Ok(())
}

/// `|N_{n,k}| = C(n, k)`.
pub fn count_compositions(n: u64, k: u64) -> Result<u128> {
    check_domain(n, k)?;
    Ok(binomial(n as u128, k as u128))
}

/// Lists `N_{n,k}` in lexicographic order.
pub fn enumerate_compositions(n: u64, k: u64) -> Result<Vec<Vec<u64>>> {
    check_domain(n, k)?;
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(k as usize);
    extend(&mut prefix, k as usize, n, &mut out);
    Ok(out)
}

fn extend(prefix: &mut Vec<u64>, k: usize, remaining: u64, out: &mut Vec<Vec<u64>>) {
    if prefix.len() == k {
        out.push(prefix.clone());
        return;
    }
    // leave at least 1 for each later slot
    let later = (k - prefix.len() - 1) as u64;
    if remaining < later + 1 {
        return;
    }
    for v in 1..=remaining - later {
        prefix.push(v);
        extend(prefix, k, remaining - v, out);
        prefix.pop();
    }
}
