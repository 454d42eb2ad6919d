//! End-to-end check of the equality chain `n - Z(BF(r)) = mr(BF(r)) = rank(A_r)` for one `r`.

use serde::{Deserialize, Serialize};

use crate::butterfly::{generate_with_cap, Ordering, DEFAULT_MAX_VERTICES};
use crate::certificates::BookMemo;
use crate::error::Result;
use crate::forcing::{brute_force_z, closure, construct_s, size_formula};
use crate::linalg::{theorem_formulas, FieldTag};
use crate::search::Budget;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub fields: Vec<FieldTag>,
    pub certificates: bool,
    /// Exhaustive `Z` search, only attempted when `n <= brute_force_max_n`.
    pub brute_force: bool,
    pub brute_force_max_n: usize,
    pub max_r_gf2: u32,
    pub max_r_prime: u32,
    pub max_r_rational: u32,
    pub max_r_certificates: u32,
    pub max_vertices: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            fields: vec![FieldTag::GF2],
            certificates: true,
            brute_force: true,
            brute_force_max_n: 16,
            max_r_gf2: 13,
            max_r_prime: 10,
            max_r_rational: 8,
            max_r_certificates: 12,
            max_vertices: DEFAULT_MAX_VERTICES,
        }
    }
}

impl VerifyOptions {
    fn cap_for(&self, field: FieldTag) -> u32 {
        match field {
            FieldTag::Prime(2) => self.max_r_gf2,
            FieldTag::Prime(_) => self.max_r_prime,
            FieldTag::Rationals => self.max_r_rational,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRank {
    pub field: FieldTag,
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub r: u32,
    pub n: usize,
    pub s_size: usize,
    pub z_formula: u64,
    pub forcing_ok: bool,
    pub pt_observed: Option<usize>,
    pub rank_per_field: Vec<FieldRank>,
    pub mr_formula: u64,
    /// Every computed rank equals `mr_formula`.
    pub rank_matches: bool,
    pub cert_count: Option<usize>,
    pub certs_ok: Option<bool>,
    pub z_brute_force: Option<usize>,
    pub skipped: Vec<String>,
}

impl VerifyReport {
    /// Every equality that was checked holds.
    pub fn all_ok(&self) -> bool {
        self.s_size as u64 == self.z_formula
            && self.mr_formula + self.z_formula == self.n as u64
            && self.forcing_ok
            && self.pt_observed.is_some_and(|pt| pt <= 2 * self.r as usize)
            && self.rank_matches
            && self.certs_ok != Some(false)
            && self.cert_count.is_none_or(|c| c == self.s_size)
            && self.z_brute_force.is_none_or(|z| z as u64 == self.z_formula)
    }
}

pub fn verify_pipeline(r: u32, opts: &VerifyOptions, memo: &mut BookMemo) -> Result<VerifyReport> {
    let bf = generate_with_cap(r, opts.max_vertices)?;
    let (mr_formula, z_formula) = theorem_formulas(r)?;
    debug_assert_eq!(z_formula, size_formula(r)?);
    let s = construct_s(r, Ordering::Layer)?;
    let trace = closure(&bf.graph, &s)?;
    let mut skipped = Vec::new();

    let mut rank_per_field = Vec::new();
    for &field in &opts.fields {
        let cap = opts.cap_for(field);
        if r > cap {
            let why = format!("{field}: r = {r} above cap {cap}");
            skipped.push(why.clone());
            rank_per_field.push(FieldRank { field, rank: None, skipped: Some(why) });
        } else {
            let rank = bf.adjacency_matrix(Ordering::Layer, field).rank();
            rank_per_field.push(FieldRank { field, rank: Some(rank), skipped: None });
        }
    }
    let rank_matches = rank_per_field.iter().filter_map(|f| f.rank).all(|k| k as u64 == mr_formula);

    let (cert_count, certs_ok) = if !opts.certificates {
        (None, None)
    } else if r > opts.max_r_certificates {
        skipped.push(format!("certificates: r = {r} above cap {}", opts.max_r_certificates));
        (None, None)
    } else {
        match memo.get(r) {
            Ok(book) => (Some(book.len()), Some(true)),
            Err(crate::Error::Invariant(msg)) => {
                skipped.push(format!("certificates failed: {msg}"));
                (None, Some(false))
            }
            Err(e) => return Err(e),
        }
    };

    let z_brute_force = if opts.brute_force && bf.n() <= opts.brute_force_max_n {
        Some(brute_force_z(&bf.graph, Budget::unlimited())?.size)
    } else {
        None
    };

    Ok(VerifyReport {
        r,
        n: bf.n(),
        s_size: s.len(),
        z_formula,
        forcing_ok: trace.is_forcing(),
        pt_observed: trace.propagation_time(),
        rank_per_field,
        mr_formula,
        rank_matches,
        cert_count,
        certs_ok,
        z_brute_force,
        skipped,
    })
}
