//! Counting helpers and enumeration guards.

use crate::error::{Error, Result};

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Stirling number of the second kind `S(n, k)`, saturating.
pub fn stirling2(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = (j as u128)
                .saturating_mul(row[j])
                .saturating_add(row[j - 1]);
        }
        row[0] = 0;
    }
    row[k]
}

/// Errors when `count > limit`.
pub fn guard(what: &'static str, count: u128, limit: u128) -> Result<()> {
    if count > limit {
        return Err(Error::GuardExceeded { what, count, limit });
    }
    Ok(())
}

/// All partitions of `0..n` into exactly `k` nonempty blocks.
///
/// Blocks are listed by smallest element; elements within a block ascend.
pub fn set_partitions(n: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[..i]).
    let mut labels = vec![0usize; n];
    fn rec(i: usize, used: usize, n: usize, k: usize, labels: &mut [usize], out: &mut Vec<Vec<Vec<usize>>>) {
        if n - i < k - used {
            return;
        }
        if i == n {
            let mut blocks = vec![Vec::new(); k];
            for (e, &b) in labels.iter().enumerate() {
                blocks[b].push(e);
            }
            out.push(blocks);
            return;
        }
        for b in 0..used {
            labels[i] = b;
            rec(i + 1, used, n, k, labels, out);
        }
        if used < k {
            labels[i] = used;
            rec(i + 1, used + 1, n, k, labels, out);
        }
    }
    rec(1, 1, n, k, &mut labels, &mut out);
    out
}
