//! Exact feasibility of bounded `(p, q, r)` reconstruction on the pool
//! `{0, ..., n-1}`.
//!
//! A `(p, q, r)` pair maps every `p`-subset `S` to a `q`-subset
//! `σ(S) ⊆ S` and every `q`-subset `T` to a set `η(T)` of at most `B`
//! elements, such that `|η(σ(S)) ∩ S| >= r`. Subsets are `u64` bitmasks and
//! all enumeration is colexicographic.

use serde::{Deserialize, Serialize};

use crate::combin::{binomial, check_cap, colex_masks, elements_mask, mask_elements};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PqrInstance {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub budget: usize,
}

impl PqrInstance {
    pub fn new(n: usize, p: usize, q: usize, r: usize, budget: usize) -> Result<Self> {
        let inst = PqrInstance { n, p, q, r, budget };
        inst.check()?;
        Ok(inst)
    }

    pub fn check(&self) -> Result<()> {
        let PqrInstance { n, p, q, r, budget } = *self;
        if !(p >= r && r >= q && q > 0) {
            return Err(Error::InvalidParameter(format!("need p >= r >= q > 0, got p={p} q={q} r={r}")));
        }
        if !(q <= budget && budget <= n) {
            return Err(Error::InvalidParameter(format!("need q <= budget <= n, got budget={budget} n={n}")));
        }
        if p > n {
            return Err(Error::InvalidParameter(format!("p={p} exceeds n={n}")));
        }
        if n > 63 {
            return Err(Error::InvalidParameter(format!("pool size {n} exceeds 63")));
        }
        Ok(())
    }
}

/// Explicit tables: `sigma` has one `[S, σ(S)]` row per `p`-subset, `eta`
/// one `[T, η(T)]` row per `q`-subset that some `σ(S)` uses. Elements are
/// listed in increasing order, rows in colex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PqrCertificate {
    pub sigma: Vec<(Vec<usize>, Vec<usize>)>,
    pub eta: Vec<(Vec<usize>, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PqrOutcome {
    Feasible { certificate: PqrCertificate },
    Infeasible,
}

impl PqrOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, PqrOutcome::Feasible { .. })
    }

    pub fn certificate(&self) -> Option<&PqrCertificate> {
        match self {
            PqrOutcome::Feasible { certificate } => Some(certificate),
            PqrOutcome::Infeasible => None,
        }
    }
}

/// `true` when `C(n,p) > C(n,q)·C(B-q, p-q)`, which rules out a perfect
/// (`r = p`) pair: `T` can only cover `p`-subsets inside `η(T)`.
pub fn counting_bound(inst: &PqrInstance) -> Result<bool> {
    inst.check()?;
    if inst.r != inst.p {
        return Err(Error::RNotP { r: inst.r, p: inst.p });
    }
    let (n, p, q, b) = (inst.n as u64, inst.p as u64, inst.q as u64, inst.budget as u64);
    Ok(binomial(n, p) > binomial(n, q).saturating_mul(binomial(b - q, p - q)))
}

/// Checks every condition on every `p`-subset, plus the budget.
pub fn verify_certificate(inst: &PqrInstance, cert: &PqrCertificate) -> bool {
    if inst.check().is_err() {
        return false;
    }
    let to_mask = |v: &[usize]| -> Option<u64> {
        let strictly_increasing = v.windows(2).all(|w| w[0] < w[1]);
        (strictly_increasing && v.iter().all(|&x| x < inst.n)).then(|| elements_mask(v))
    };
    let mut eta = std::collections::HashMap::new();
    for (t, e) in &cert.eta {
        let (Some(t), Some(e)) = (to_mask(t), to_mask(e)) else { return false };
        if t.count_ones() as usize != inst.q || e.count_ones() as usize > inst.budget {
            return false;
        }
        if eta.insert(t, e).is_some() {
            return false;
        }
    }
    let mut sigma = std::collections::HashMap::new();
    for (s, t) in &cert.sigma {
        let (Some(s), Some(t)) = (to_mask(s), to_mask(t)) else { return false };
        if sigma.insert(s, t).is_some() {
            return false;
        }
    }
    if sigma.len() as u128 != binomial(inst.n as u64, inst.p as u64) {
        return false;
    }
    sigma.iter().all(|(&s, &t)| {
        s.count_ones() as usize == inst.p
            && t.count_ones() as usize == inst.q
            && t & !s == 0
            && eta.get(&t).is_some_and(|&e| (e & s).count_ones() as usize >= inst.r)
    })
}

/// Complete backtracking search.
///
/// Without loss of generality `η(T) = T ∪ E_T` with `|E_T| = B - q`: putting
/// an element of `T` into `η(T)` in place of another never loses coverage,
/// and neither does enlarging `η(T)`. The `q`-subsets are assigned in colex
/// order, each trying its `E_T` in colex order, so the reported certificate
/// is the colex-least feasible assignment. A branch is cut when some
/// `p`-subset has had all of its `q`-subsets assigned without being covered,
/// or when the uncovered `p`-subsets outnumber what the remaining `q`-subsets
/// could cover at best.
pub fn search_pqr(inst: &PqrInstance, cap: u128) -> Result<PqrOutcome> {
    inst.check()?;
    check_cap(binomial(inst.n as u64, inst.p as u64), cap)?;
    Ok(Search::new(inst).run())
}

struct Search {
    inst: PqrInstance,
    ps: Vec<u64>,
    ts: Vec<u64>,
    /// For each `T`, the indices of `p`-subsets containing it.
    supersets: Vec<Vec<usize>>,
    /// For each `T`, the `p`-subsets whose colex-last `q`-subset is `T`.
    finalized_at: Vec<Vec<usize>>,
    per_t_max: usize,
    covered: Vec<u32>,
    uncovered: usize,
    choice: Vec<u64>,
}

impl Search {
    fn new(inst: &PqrInstance) -> Self {
        let (n, p, q) = (inst.n as u32, inst.p as u32, inst.q as u32);
        let ps: Vec<u64> = colex_masks(n, p).collect();
        let ts: Vec<u64> = colex_masks(n, q).collect();
        let t_index: std::collections::HashMap<u64, usize> = ts.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let mut supersets = vec![Vec::new(); ts.len()];
        let mut finalized_at = vec![Vec::new(); ts.len()];
        for (si, &s) in ps.iter().enumerate() {
            let mut last = 0;
            for t in crate::combin::colex_submasks(s, q) {
                let ti = t_index[&t];
                supersets[ti].push(si);
                last = last.max(ti);
            }
            finalized_at[last].push(si);
        }
        // |A ∩ E| >= r - q for the p-q extra elements A of S
        let (nb, bq, pq, rq) = (
            (inst.n - inst.budget) as u64,
            (inst.budget - inst.q) as u64,
            (inst.p - inst.q) as u64,
            (inst.r - inst.q) as u64,
        );
        let per_t_max = (rq..=pq.min(bq))
            .map(|j| binomial(bq, j) * binomial(nb, pq - j))
            .sum::<u128>() as usize;
        Search {
            inst: *inst,
            uncovered: ps.len(),
            covered: vec![0; ps.len()],
            ps,
            ts,
            supersets,
            finalized_at,
            per_t_max,
            choice: Vec::new(),
        }
    }

    fn run(mut self) -> PqrOutcome {
        if self.dfs(0) {
            PqrOutcome::Feasible { certificate: self.certificate() }
        } else {
            PqrOutcome::Infeasible
        }
    }

    fn hits(&self, eta: u64, s: u64) -> bool {
        (eta & s).count_ones() as usize >= self.inst.r
    }

    fn dfs(&mut self, i: usize) -> bool {
        if self.uncovered == 0 {
            return true;
        }
        if i == self.ts.len() || self.uncovered > (self.ts.len() - i) * self.per_t_max {
            return false;
        }
        let t = self.ts[i];
        let rest = !t & ((1u64 << self.inst.n) - 1);
        let extra = (self.inst.budget - self.inst.q) as u32;
        for e in crate::combin::colex_submasks(rest, extra) {
            let eta = t | e;
            let mut newly = Vec::new();
            for &si in &self.supersets[i] {
                if self.hits(eta, self.ps[si]) {
                    if self.covered[si] == 0 {
                        newly.push(si);
                    }
                    self.covered[si] += 1;
                }
            }
            self.uncovered -= newly.len();
            let alive = self.finalized_at[i].iter().all(|&si| self.covered[si] > 0);
            self.choice.push(eta);
            if alive && self.dfs(i + 1) {
                return true;
            }
            self.choice.pop();
            self.uncovered += newly.len();
            for &si in &self.supersets[i] {
                if self.hits(eta, self.ps[si]) {
                    self.covered[si] -= 1;
                }
            }
        }
        false
    }

    fn certificate(&self) -> PqrCertificate {
        let mut used = vec![false; self.ts.len()];
        let sigma = self
            .ps
            .iter()
            .map(|&s| {
                let ti = (0..self.ts.len())
                    .find(|&ti| {
                        let t = self.ts[ti];
                        t & !s == 0 && self.choice.get(ti).is_some_and(|&eta| self.hits(eta, s))
                    })
                    .expect("search ended with every p-subset covered");
                used[ti] = true;
                (mask_elements(s), mask_elements(self.ts[ti]))
            })
            .collect();
        let eta = (0..self.ts.len())
            .filter(|&ti| used[ti])
            .map(|ti| (mask_elements(self.ts[ti]), mask_elements(self.choice[ti])))
            .collect();
        PqrCertificate { sigma, eta }
    }
}
