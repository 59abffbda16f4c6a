//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

/// Whether some `(σ, η)` with `|η(T)| <= b` on the pool `{0..n-1}` meets
/// every `p`-subset `S` in at least `r` points via a `q`-subset of `S`.
///
/// Dynamic programming over the set of covered `p`-subsets, trying every
/// subset of the pool of size at most `b` as `η(T)` for each `T`.
pub fn pqr_feasible(n: usize, p: usize, q: usize, r: usize, b: usize) -> bool {
    let subsets_of_size = |k: u32| (0u64..1 << n).filter(move |m| m.count_ones() == k).collect::<Vec<_>>();
    let ps = subsets_of_size(p as u32);
    let ts = subsets_of_size(q as u32);
    let etas: Vec<u64> = (0u64..1 << n).filter(|m| m.count_ones() as usize <= b).collect();
    let full: u64 = if ps.len() == 64 { u64::MAX } else { (1u64 << ps.len()) - 1 };
    assert!(ps.len() <= 24, "oracle state space too large");

    let mut reach = vec![false; 1 << ps.len()];
    reach[0] = true;
    for &t in &ts {
        let mut covers: Vec<u64> = etas
            .iter()
            .map(|&e| {
                ps.iter().enumerate().fold(0u64, |acc, (i, &s)| {
                    if t & s == t && (e & s).count_ones() as usize >= r {
                        acc | 1 << i
                    } else {
                        acc
                    }
                })
            })
            .collect();
        covers.sort_unstable();
        covers.dedup();
        let mut next = reach.clone();
        for (m, &ok) in reach.iter().enumerate() {
            if ok {
                for &c in &covers {
                    next[m | c as usize] = true;
                }
            }
        }
        reach = next;
    }
    reach[full as usize]
}

/// VC dimension of a class of subsets of `{0..n-1}` given as bitmasks: the
/// largest `A` such that every labeling of `A` is cut out by some concept.
pub fn vc_dimension(n: usize, concepts: &[u64]) -> usize {
    if concepts.is_empty() {
        return 0;
    }
    let shattered = |a: u64| {
        let mut labeling = a;
        loop {
            if !concepts.iter().any(|&c| c & a == labeling) {
                return false;
            }
            if labeling == 0 {
                return true;
            }
            labeling = (labeling - 1) & a;
        }
    };
    let mut best = 0;
    for a in 0u64..1 << n {
        let k = a.count_ones() as usize;
        if k > best && shattered(a) {
            best = k;
        }
    }
    best
}

/// Expected regret of the omega leave-one-out learner with `m` uniform
/// draws from `{0..n-1}`: the output is `{0..max}`, so the regret is
/// `(n-1-max)/n`, computed from the exact law of the maximum.
pub fn omega_loo_expected_regret(n: u64, m: u32) -> f64 {
    let total = (n as u128).pow(m);
    let mut acc = 0u128;
    for k in 0..n {
        let p_max_eq = (k as u128 + 1).pow(m) - (k as u128).pow(m);
        acc += p_max_eq * (n - 1 - k) as u128;
    }
    acc as f64 / (total as f64 * n as f64)
}
