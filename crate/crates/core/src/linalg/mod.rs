//! Exact linear algebra over the rationals and prime fields.
//!
//! Matrices here are symmetric 0/1 patterns (adjacency matrices). Rank is
//! computed exactly: over GF(2) with bit-packed dense rows, over GF(p) and
//! over the rationals with sparse fraction-free elimination.

mod gf2;
mod sparse;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::graph::Graph;

pub use gf2::BitMatrix;

/// The field a matrix is read over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldTag {
    Rationals,
    Prime(u32),
}

impl FieldTag {
    pub const GF2: FieldTag = FieldTag::Prime(2);
    pub const GF3: FieldTag = FieldTag::Prime(3);

    pub fn prime(p: u32) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldTag::Prime(p))
        } else {
            domain(format!("{p} is not prime"))
        }
    }

    pub fn characteristic(self) -> u32 {
        match self {
            FieldTag::Rationals => 0,
            FieldTag::Prime(p) => p,
        }
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d: &u32| (*d as u64) * (*d as u64) <= p as u64).all(|d| !p.is_multiple_of(d))
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rationals => f.write_str("q"),
            FieldTag::Prime(p) => write!(f, "gf{p}"),
        }
    }
}

impl FromStr for FieldTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "q" | "rationals" => Ok(FieldTag::Rationals),
            _ => match lower.strip_prefix("gf").map(str::parse::<u32>) {
                Some(Ok(p)) => FieldTag::prime(p),
                _ => domain(format!("unknown field {s:?}, expected q or gf<p>")),
            },
        }
    }
}

impl Serialize for FieldTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldTag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Symmetric 0/1 matrix stored as sorted column lists, read over `field`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: Vec<Vec<usize>>,
    field: FieldTag,
}

impl ExactMatrix {
    pub fn zero(n: usize, field: FieldTag) -> Self {
        Self { rows: vec![Vec::new(); n], field }
    }

    pub fn from_graph(g: &Graph, field: FieldTag) -> Self {
        Self { rows: (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect(), field }
    }

    /// Builds from dense 0/1 rows, checking squareness, entries and symmetry.
    pub fn from_dense(dense: &[Vec<u8>], field: FieldTag) -> Result<Self> {
        let n = dense.len();
        let mut rows = Vec::with_capacity(n);
        for (i, row) in dense.iter().enumerate() {
            if row.len() != n {
                return domain(format!("row {i} has length {}, expected {n}", row.len()));
            }
            let mut cols = Vec::new();
            for (j, &e) in row.iter().enumerate() {
                match e {
                    0 => {}
                    1 => cols.push(j),
                    _ => return domain(format!("entry ({i},{j}) = {e} is not 0/1")),
                }
            }
            rows.push(cols);
        }
        let m = Self { rows, field };
        for i in 0..n {
            for &j in &m.rows[i] {
                if !m.entry(j, i) {
                    return domain(format!("matrix is not symmetric at ({i},{j})"));
                }
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn with_field(&self, field: FieldTag) -> Self {
        Self { rows: self.rows.clone(), field }
    }

    /// Columns holding a one in row `i`.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> bool {
        self.rows[i].binary_search(&j).is_ok()
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|cols| {
                let mut row = vec![0u8; self.n()];
                for &j in cols {
                    row[j] = 1;
                }
                row
            })
            .collect()
    }

    /// `P A P^T`: entry `(i, j)` moves to `(perm[i], perm[j])`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return domain("not a permutation");
            }
        }
        if perm.len() != n {
            return domain("permutation length differs from matrix order");
        }
        let mut rows = vec![Vec::new(); n];
        for (i, cols) in self.rows.iter().enumerate() {
            let mut out: Vec<usize> = cols.iter().map(|&j| perm[j]).collect();
            out.sort_unstable();
            rows[perm[i]] = out;
        }
        Ok(Self { rows, field: self.field })
    }

    /// Sub-block with rows `rows` and columns `cols` (half-open ranges) as dense 0/1.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Vec<Vec<u8>> {
        rows.map(|i| cols.clone().map(|j| self.entry(i, j) as u8).collect()).collect()
    }

    /// Exact rank over the matrix's field.
    pub fn rank(&self) -> usize {
        match self.field {
            FieldTag::Prime(2) => BitMatrix::from_pattern(&self.rows, self.n()).rank(),
            FieldTag::Prime(p) => sparse::rank_mod_p(&self.rows, self.n(), p),
            FieldTag::Rationals => sparse::rank_rational(&self.rows, self.n()),
        }
    }

    /// Rank via sparse elimination even for GF(2); an independent route to [`rank`](Self::rank).
    pub fn rank_sparse(&self) -> usize {
        match self.field {
            FieldTag::Prime(p) => sparse::rank_mod_p(&self.rows, self.n(), p),
            FieldTag::Rationals => sparse::rank_rational(&self.rows, self.n()),
        }
    }

    /// Integer vector `sum_{kplus} row(j) - sum_{kminus} row(j) - row(target)`, nonzero entries only.
    ///
    /// Indices are 0-based. Fails if an index is out of range or appears twice
    /// across `target`, `kplus` and `kminus`.
    pub fn combination_residual(
        &self,
        target: usize,
        kplus: &[usize],
        kminus: &[usize],
    ) -> Result<BTreeMap<usize, i64>> {
        let n = self.n();
        let mut used = std::collections::HashSet::with_capacity(kplus.len() + kminus.len() + 1);
        for &j in std::iter::once(&target).chain(kplus).chain(kminus) {
            if j >= n {
                return domain(format!("row index {j} out of range 0..{n}"));
            }
            if !used.insert(j) {
                return domain(format!("row index {j} used more than once"));
            }
        }
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        let mut add = |row: usize, c: i64| {
            for &col in &self.rows[row] {
                *acc.entry(col).or_insert(0) += c;
            }
        };
        for &j in kplus {
            add(j, 1);
        }
        for &j in kminus {
            add(j, -1);
        }
        add(target, -1);
        acc.retain(|_, v| *v != 0);
        Ok(acc)
    }

    /// Whether `row(target) = sum_{kplus} row(j) - sum_{kminus} row(j)` over the integers.
    ///
    /// With all coefficients `±1`, an integer identity holds over every field.
    pub fn verify_combination(&self, target: usize, kplus: &[usize], kminus: &[usize]) -> Result<bool> {
        Ok(self.combination_residual(target, kplus, kminus)?.is_empty())
    }

    /// Same identity read over this matrix's field.
    pub fn verify_combination_in_field(&self, target: usize, kplus: &[usize], kminus: &[usize]) -> Result<bool> {
        let residual = self.combination_residual(target, kplus, kminus)?;
        Ok(match self.field {
            FieldTag::Rationals => residual.is_empty(),
            FieldTag::Prime(p) => residual.values().all(|v| v.rem_euclid(p as i64) == 0),
        })
    }
}

/// `n - rank(A)` for the adjacency matrix read over `field`.
///
/// This bounds the zero forcing number from below: `n - Z(G) <= mr^F(G) <= rank(A)`
/// since the adjacency matrix lies in `S(F, G)`.
pub fn corank_lower_bound(g: &Graph, field: FieldTag) -> usize {
    g.n() - ExactMatrix::from_graph(g, field).rank()
}

/// Closed forms `(mr, Z)` for `BF(r)`: `mr = 2((3r+1)2^r - (-1)^r)/9` and
/// `Z = ((3r+7)2^r + 2(-1)^r)/9`.
pub fn theorem_formulas(r: u32) -> Result<(u64, u64)> {
    if r < 1 {
        return domain("butterfly order must be at least 1");
    }
    if r > 56 {
        return domain(format!("r = {r} overflows 64-bit formulas"));
    }
    let pow = 1i128 << r;
    let sign: i128 = if r.is_multiple_of(2) { 1 } else { -1 };
    let r = r as i128;
    let mr_num = 2 * ((3 * r + 1) * pow - sign);
    let z_num = (3 * r + 7) * pow + 2 * sign;
    if mr_num % 9 != 0 || z_num % 9 != 0 {
        return Err(Error::Invariant(format!("closed forms not integral at r = {r}")));
    }
    Ok(((mr_num / 9) as u64, (z_num / 9) as u64))
}
