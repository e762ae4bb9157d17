//! Brute-force ground truth: enumerate permutations with a prescribed
//! up-down shape and count them by last entry.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::triangle::Shape;

/// Largest `n` the brute force accepts.
pub const ORACLE_CAP: usize = 10;

/// Up-down sequence of a permutation of `{1..n}`: `p_i = 1` iff `s_i < s_{i+1}`.
pub fn updown_of(perm: &[usize]) -> Result<Vec<u8>> {
    let n = perm.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty permutation".into()));
    }
    let mut seen = vec![false; n];
    for &v in perm {
        if v == 0 || v > n || seen[v - 1] {
            return Err(Error::InvalidInput(format!("{perm:?} is not a permutation of 1..{n}")));
        }
        seen[v - 1] = true;
    }
    Ok(perm.windows(2).map(|w| u8::from(w[0] < w[1])).collect())
}

/// `counts[j-1]` = number of permutations of length `n` whose shape is the
/// first `n-1` bits of `shape` and whose last entry is `j`.
pub fn counts_by_last<S: Shape + Sync + ?Sized>(shape: &S, n: usize) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if n > ORACLE_CAP {
        return Err(Error::OracleCap { n, cap: ORACLE_CAP });
    }
    let bits: Vec<u8> = (1..n)
        .map(|i| {
            shape.bit(i).ok_or(Error::PrefixTooShort {
                row: n,
                needed: n - 1,
                available: i - 1,
            })
        })
        .collect::<Result<_>>()?;

    // one task per first element, merged by addition
    let partials: Vec<Vec<u64>> = (1..=n)
        .into_par_iter()
        .map(|first| {
            let mut counts = vec![0u64; n];
            let mut used = vec![false; n + 1];
            used[first] = true;
            extend(&bits, n, first, 1, &mut used, &mut counts);
            counts
        })
        .collect();

    Ok(partials.into_iter().fold(vec![0u64; n], |mut acc, part| {
        for (a, b) in acc.iter_mut().zip(part) {
            *a += b;
        }
        acc
    }))
}

fn extend(bits: &[u8], n: usize, last: usize, len: usize, used: &mut [bool], counts: &mut [u64]) {
    if len == n {
        counts[last - 1] += 1;
        return;
    }
    let up = bits[len - 1] == 1;
    let candidates: Box<dyn Iterator<Item = usize>> = if up {
        Box::new(last + 1..=n)
    } else {
        Box::new(1..last)
    };
    for v in candidates {
        if !used[v] {
            used[v] = true;
            extend(bits, n, v, len + 1, used, counts);
            used[v] = false;
        }
    }
}

/// Total number of permutations of length `n` with the given shape.
pub fn total<S: Shape + Sync + ?Sized>(shape: &S, n: usize) -> Result<u64> {
    Ok(counts_by_last(shape, n)?.iter().sum())
}
