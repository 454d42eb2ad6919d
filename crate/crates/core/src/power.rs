//! Power domination: `S` is power dominating when `N[S]` is zero forcing.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::forcing::{closure, size_formula};
use crate::graph::{Graph, VertexSet};
use crate::search::{all_accepted, min_accepted, Budget};

pub fn is_power_dominating(g: &Graph, s: &VertexSet) -> Result<bool> {
    Ok(closure(g, &g.closed_neighborhood(s)?)?.is_forcing())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdReport {
    pub set: Vec<usize>,
    pub is_power_dominating: bool,
    /// `pt(N[S])` when `S` is power dominating.
    pub pt_of_closed_nbhd: Option<usize>,
    /// `1 + pt(N[S])`.
    pub ppt_candidate: Option<usize>,
}

pub fn power_report(g: &Graph, s: &VertexSet) -> Result<PdReport> {
    let pt = closure(g, &g.closed_neighborhood(s)?)?.propagation_time();
    Ok(PdReport {
        set: s.to_vec(),
        is_power_dominating: pt.is_some(),
        pt_of_closed_nbhd: pt,
        ppt_candidate: pt.map(|p| p + 1),
    })
}

/// `ceil(Z(BF(r)) / Δ)` with `Z` from the closed form; `Δ` is 2 for `r = 1` and 4 otherwise.
pub fn pd_lower_bound(r: u32) -> Result<u64> {
    if r < 1 {
        return domain("r must be at least 1");
    }
    let delta = if r == 1 { 2 } else { 4 };
    Ok(size_formula(r)?.div_ceil(delta))
}

/// Result of the exhaustive power domination search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdMinimum {
    pub size: usize,
    /// Lexicographically smallest minimum power dominating set.
    pub witness: Vec<usize>,
    pub minimum_sets: usize,
    /// `1 + min pt(N[S])` over all minimum power dominating sets.
    pub ppt: usize,
    /// A minimum set attaining `ppt`, lexicographically smallest among those.
    pub ppt_witness: Vec<usize>,
}

pub fn brute_force_pd(g: &Graph, budget: Budget) -> Result<PdMinimum> {
    let n = g.n();
    let pt_of = |s: &[usize]| -> Option<usize> {
        let set = VertexSet::from_ids(n, s.iter().copied()).expect("ids in range");
        let nbhd = g.closed_neighborhood(&set).expect("capacity matches");
        closure(g, &nbhd).expect("capacity matches").propagation_time()
    };
    let witness = min_accepted(n, 0, budget, "minimum power dominating search", |s| pt_of(s).is_some())?
        .expect("the full vertex set is power dominating");
    let size = witness.len();
    let all = all_accepted(n, size, budget, "power propagation time search", |s| pt_of(s).is_some())?;
    let (best_pt, ppt_witness) = all
        .iter()
        .map(|s| (pt_of(s).expect("accepted sets dominate"), s))
        .min_by_key(|&(pt, _)| pt)
        .map(|(pt, s)| (pt, s.clone()))
        .expect("at least the witness");
    Ok(PdMinimum { size, witness, minimum_sets: all.len(), ppt: best_pt + 1, ppt_witness })
}
