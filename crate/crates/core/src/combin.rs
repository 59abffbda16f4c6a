//! Small combinatorial helpers shared by the enumeration-heavy modules.

use crate::{Error, Result};

/// Binomial coefficient `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Fails with `CapExceeded` when `count > cap`.
pub fn check_cap(count: u128, cap: u128) -> Result<()> {
    if count > cap {
        Err(Error::CapExceeded { count, cap })
    } else {
        Ok(())
    }
}

/// All strictly increasing index sequences into `0..len` of length at most
/// `max_len`, in lexicographic order (the empty sequence first).
pub fn index_subsets(len: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut cur = Vec::new();
    fn rec(start: usize, len: usize, max_len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == max_len {
            return;
        }
        for i in start..len {
            cur.push(i);
            out.push(cur.clone());
            rec(i + 1, len, max_len, cur, out);
            cur.pop();
        }
    }
    rec(0, len, max_len, &mut cur, &mut out);
    out
}

/// Visits every strictly increasing index sequence of length at most
/// `max_len` in lexicographic order, stopping early when `f` returns `true`.
/// Returns whether the visit stopped early.
pub fn any_index_subset(len: usize, max_len: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        start: usize,
        len: usize,
        max_len: usize,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if f(cur) {
            return true;
        }
        if cur.len() == max_len {
            return false;
        }
        for i in start..len {
            cur.push(i);
            if rec(i + 1, len, max_len, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut cur = Vec::with_capacity(max_len);
    rec(0, len, max_len, &mut cur, &mut f)
}

/// Masks with exactly `k` bits set among the low `n` bits, in colexicographic
/// order (which for fixed popcount is increasing numeric order).
pub fn colex_masks(n: u32, k: u32) -> impl Iterator<Item = u64> {
    assert!(n <= 63, "pool too large for a u64 mask");
    let limit = 1u64 << n;
    let first = if k > n { None } else { Some((1u64 << k) - 1) };
    std::iter::successors(first, move |&v| {
        if v == 0 {
            return None;
        }
        // Gosper's hack.
        let c = v & v.wrapping_neg();
        let r = v + c;
        let next = (((r ^ v) >> 2) / c) | r;
        (next < limit).then_some(next)
    })
}

/// Masks with `k` bits set chosen among the set bits of `within`, colex order.
pub fn colex_submasks(within: u64, k: u32) -> Vec<u64> {
    let bits: Vec<u32> = (0..64).filter(|b| within >> b & 1 == 1).collect();
    colex_masks(bits.len() as u32, k)
        .map(|m| {
            bits.iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .fold(0u64, |acc, (_, &b)| acc | 1 << b)
        })
        .collect()
}

/// Elements of a mask, ascending.
pub fn mask_elements(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).collect()
}

pub fn elements_mask(elems: &[usize]) -> u64 {
    elems.iter().fold(0, |acc, &e| acc | 1 << e)
}

/// Number of bits needed to write `v` in binary (`0` for `v = 0`).
pub fn bit_length(v: u64) -> u32 {
    64 - v.leading_zeros()
}
