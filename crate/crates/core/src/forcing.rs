//! Zero forcing: closure, propagation time, and the explicit forcing set of `BF(r)`.
//!
//! Coloring rule: a colored vertex with exactly one uncolored neighbor colors
//! that neighbor. A round applies every available force at once.

use serde::{Deserialize, Serialize};

use crate::butterfly::{generate_with_cap, Butterfly, Ordering, DEFAULT_MAX_VERTICES};
use crate::error::{domain, Result};
use crate::graph::{Graph, VertexSet};
use crate::jacobsthal::jacobsthal;
use crate::linalg::{corank_lower_bound, FieldTag};
use crate::search::{min_accepted, Budget};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    /// `(v, w)`: colored `v` forces its only uncolored neighbor `w`. One entry per `w`, smallest `v`.
    pub forces: Vec<(usize, usize)>,
    /// Colored set after the round.
    pub colored: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcingTrace {
    pub initial: VertexSet,
    pub rounds: Vec<Round>,
}

impl ForcingTrace {
    pub fn final_set(&self) -> &VertexSet {
        self.rounds.last().map_or(&self.initial, |r| &r.colored)
    }

    pub fn is_forcing(&self) -> bool {
        self.final_set().is_full()
    }

    /// Number of rounds if the initial set is zero forcing.
    pub fn propagation_time(&self) -> Option<usize> {
        self.is_forcing().then_some(self.rounds.len())
    }

    /// Colored set after `k` rounds (the final set once the fixpoint is reached).
    pub fn colored_after(&self, k: usize) -> &VertexSet {
        match k {
            0 => &self.initial,
            k => self.rounds.get(k - 1).map_or(self.final_set(), |r| &r.colored),
        }
    }

    pub fn to_json(&self) -> TraceJson {
        TraceJson {
            initial: self.initial.to_vec(),
            rounds: self
                .rounds
                .iter()
                .map(|r| RoundJson {
                    forces: r.forces.iter().map(|&(v, w)| [v, w]).collect(),
                    colored: r.colored.to_vec(),
                })
                .collect(),
            pt: self.propagation_time(),
            forcing: self.is_forcing(),
        }
    }
}

/// Serialized trace: `{initial, rounds: [{forces, colored}], pt, forcing}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TraceJson {
    pub initial: Vec<usize>,
    pub rounds: Vec<RoundJson>,
    pub pt: Option<usize>,
    pub forcing: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RoundJson {
    pub forces: Vec<[usize; 2]>,
    pub colored: Vec<usize>,
}

/// The sole uncolored neighbor of `v`, if there is exactly one.
fn sole_uncolored(g: &Graph, colored: &VertexSet, v: usize) -> Option<usize> {
    let mut it = g.neighbors(v).iter().copied().filter(|&w| !colored.contains(w));
    match (it.next(), it.next()) {
        (Some(w), None) => Some(w),
        _ => None,
    }
}

/// Runs simultaneous-force rounds from `s` until no force applies.
pub fn closure(g: &Graph, s: &VertexSet) -> Result<ForcingTrace> {
    g.check_set(s)?;
    let mut colored = s.clone();
    let mut rounds = Vec::new();
    loop {
        let mut next = colored.clone();
        let mut forces = Vec::new();
        for v in colored.iter() {
            if let Some(w) = sole_uncolored(g, &colored, v) {
                if next.insert(w) {
                    forces.push((v, w));
                }
            }
        }
        if forces.is_empty() {
            break;
        }
        forces.sort_unstable_by_key(|&(_, w)| w);
        rounds.push(Round { forces, colored: next.clone() });
        colored = next;
    }
    Ok(ForcingTrace { initial: s.clone(), rounds })
}

pub fn is_zero_forcing(g: &Graph, s: &VertexSet) -> Result<bool> {
    Ok(closure(g, s)?.is_forcing())
}

/// `pt(S)`, or `None` when `s` is not zero forcing.
pub fn propagation_time(g: &Graph, s: &VertexSet) -> Result<Option<usize>> {
    Ok(closure(g, s)?.propagation_time())
}

/// The forcing set `S^(r)` in layer coordinates, as intervals.
///
/// Level `i < r` holds `x` with `x mod 2^(i+1) < J_(i+1)`; level `r` holds
/// `x < J_(r+1)`. Nothing is materialized, so `r` may go well past what fits
/// in memory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ForcingIntervals {
    r: u32,
}

impl ForcingIntervals {
    pub fn new(r: u32) -> Result<Self> {
        if !(1..=60).contains(&r) {
            return domain(format!("r = {r} outside 1..=60"));
        }
        Ok(Self { r })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn contains(&self, x: u64, i: u32) -> bool {
        if i < self.r {
            x % (1 << (i + 1)) < jacobsthal(i as usize + 1)
        } else {
            i == self.r && x < jacobsthal(self.r as usize + 1)
        }
    }

    /// Members on level `i`.
    pub fn level_count(&self, i: u32) -> u64 {
        if i < self.r {
            (1u64 << (self.r - i - 1)) * jacobsthal(i as usize + 1)
        } else {
            jacobsthal(self.r as usize + 1)
        }
    }

    pub fn len(&self) -> u64 {
        (0..=self.r).map(|i| self.level_count(i)).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// 1-based recursive labels of `S^(r)`, ascending: `S^(1) = {1, 3}` and
/// `S^(r) = S^(r-1) ∪ {i + r 2^(r-1) : i ∈ S^(r-1), i <= (r-1) 2^(r-1)} ∪ {r 2^r + 1, ..., r 2^r + J_(r+1)}`.
pub fn recursive_labels(r: u32) -> Result<Vec<usize>> {
    if r < 1 {
        return domain("r must be at least 1");
    }
    let mut s = vec![1usize, 3];
    for q in 2..=r as usize {
        let half = 1usize << (q - 1);
        let shift = q * half;
        let bound = (q - 1) * half;
        let lifted: Vec<usize> = s.iter().filter(|&&i| i <= bound).map(|i| i + shift).collect();
        let top = 2 * shift;
        s.extend(lifted);
        s.extend(top + 1..=top + jacobsthal(q + 1) as usize);
        s.sort_unstable();
    }
    Ok(s)
}

/// `S^(r)` as a vertex set over `0..(r+1)2^r`, in layer ids or 0-based recursive indices.
pub fn construct_s(r: u32, ordering: Ordering) -> Result<VertexSet> {
    let n = crate::butterfly::vertex_count(r)
        .filter(|&n| n <= DEFAULT_MAX_VERTICES)
        .ok_or_else(|| crate::Error::Resource(format!("S^({r}) too large to materialize")))?;
    match ordering {
        Ordering::Layer => {
            let iv = ForcingIntervals::new(r)?;
            let width = 1usize << r;
            let ids = (0..=r).flat_map(|i| {
                (0..width).filter(move |&x| iv.contains(x as u64, i)).map(move |x| i as usize * width + x)
            });
            VertexSet::from_ids(n, ids)
        }
        Ordering::Recursive => VertexSet::from_ids(n, recursive_labels(r)?.into_iter().map(|l| l - 1)),
    }
}

/// `((3r+7) 2^r + 2(-1)^r) / 9`.
pub fn size_formula(r: u32) -> Result<u64> {
    if !(1..=56).contains(&r) {
        return domain(format!("r = {r} outside 1..=56"));
    }
    let sign: i128 = if r.is_multiple_of(2) { 2 } else { -2 };
    let num = (3 * r as i128 + 7) * (1i128 << r) + sign;
    debug_assert_eq!(num % 9, 0);
    Ok((num / 9) as u64)
}

/// `J_(r+1) + sum_{i=1..r} 2^(r-i) J_i`.
pub fn size_sum_form(r: u32) -> u64 {
    let r = r as usize;
    jacobsthal(r + 1) + (1..=r).map(|i| (1u64 << (r - i)) * jacobsthal(i)).sum::<u64>()
}

/// Closed-form colored set after `k` layered rounds, `0 <= k <= 2r`, in layer ids.
///
/// Rounds `1..=r` sweep downward: after round `k` each level `i` in
/// `r-k..r-1` holds `x mod 2^i < J_(i+1)`. Rounds `r+1..=2r` sweep upward
/// and fill levels `0..=k-r` completely.
pub fn layered_prediction(r: u32, k: u32) -> Result<VertexSet> {
    if k > 2 * r {
        return domain(format!("round {k} outside 0..={}", 2 * r));
    }
    let iv = ForcingIntervals::new(r)?;
    let width = 1usize << r;
    let n = (r as usize + 1) * width;
    let member = |x: usize, i: u32| -> bool {
        let down = k.min(r);
        let after_down = if i == r || i + down < r {
            iv.contains(x as u64, i)
        } else {
            (x % (1 << i)) < jacobsthal(i as usize + 1) as usize
        };
        after_down || (k > r && i <= k - r)
    };
    VertexSet::from_ids(
        n,
        (0..=r).flat_map(|i| (0..width).filter(move |&x| member(x, i)).map(move |x| i as usize * width + x)),
    )
}

/// The layered forcing schedule on `BF(r)` starting from `S^(r)`.
///
/// Round `k <= r` only lets level `r-k+1` force into level `r-k`; round
/// `r + k` only lets level `k-1` force into level `k`. Returns the colored
/// sets after rounds `0..=2r`.
pub fn layered_rounds(bf: &Butterfly) -> Result<Vec<VertexSet>> {
    let r = bf.r();
    let width = 1usize << r;
    let g = &bf.graph;
    let mut sets = vec![construct_s(r, Ordering::Layer)?];
    let steps = (1..=r).map(|k| (r - k + 1, r - k)).chain((1..=r).map(|k| (k - 1, k)));
    for (from, to) in steps {
        let current = sets.last().expect("non-empty");
        let mut next = current.clone();
        let sources = from as usize * width..(from as usize + 1) * width;
        let targets = to as usize * width..(to as usize + 1) * width;
        for v in sources.filter(|&v| current.contains(v)) {
            if let Some(w) = sole_uncolored(g, current, v) {
                if targets.contains(&w) {
                    next.insert(w);
                }
            }
        }
        sets.push(next);
    }
    Ok(sets)
}

/// Exact `Z(G)` with the lexicographically smallest minimum witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroForcingMinimum {
    pub size: usize,
    pub witness: Vec<usize>,
    /// Size the search started from: `n - rank` of the adjacency matrix over GF(2).
    pub lower_bound: usize,
}

/// Exhaustive minimum zero forcing search.
///
/// Sizes below `n - rank_GF(2)(A)` are skipped, and a proper subset is only
/// closed if some member has exactly one neighbor outside it.
pub fn brute_force_z(g: &Graph, budget: Budget) -> Result<ZeroForcingMinimum> {
    let n = g.n();
    let lower_bound = corank_lower_bound(g, FieldTag::GF2);
    let can_start = |s: &[usize], member: &VertexSet| {
        s.len() == n || s.iter().any(|&v| g.neighbors(v).iter().filter(|&&w| !member.contains(w)).count() == 1)
    };
    let witness = min_accepted(n, lower_bound, budget, "minimum zero forcing search", |s| {
        let set = VertexSet::from_ids(n, s.iter().copied()).expect("ids in range");
        can_start(s, &set) && closure(g, &set).map(|t| t.is_forcing()).unwrap_or(false)
    })?
    .expect("the full vertex set is zero forcing");
    Ok(ZeroForcingMinimum { size: witness.len(), witness, lower_bound })
}

/// Convenience: `BF(r)` with the default vertex cap.
pub fn butterfly(r: u32) -> Result<Butterfly> {
    generate_with_cap(r, DEFAULT_MAX_VERTICES)
}
