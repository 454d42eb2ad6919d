//! Row-dependence certificates for the adjacency matrix `A_r` of `BF(r)`.
//!
//! Rows are numbered 1-based by the recursive labeling. For every row `t` in
//! `S^(r)` a certificate gives disjoint sets `K+`, `K-` of rows outside
//! `S^(r)` with
//!
//! ```text
//! A_r(t) = sum_{j in K+} A_r(j) - sum_{j in K-} A_r(j).
//! ```
//!
//! Together they show that the complement rows span the row space, so
//! `rank(A_r) <= n - |S^(r)|` over every field.
//!
//! Books for `r >= 3` are built from the books for `r - 1` and `r - 2`:
//! rows of `S^(r-1)` are lifted through the block-diagonal copies of
//! `A_(r-1)`, the first `J_(r-1)` top-level rows are rebuilt from `A_(r-2)`
//! with the two-level translation, and the remaining top-level rows equal a
//! partner row.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::butterfly::generate;
use crate::error::{domain, Error, Result};
use crate::forcing::recursive_labels;
use crate::jacobsthal::jacobsthal;
use crate::linalg::{ExactMatrix, FieldTag};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub target: usize,
    pub kplus: Vec<usize>,
    pub kminus: Vec<usize>,
}

impl Certificate {
    pub fn new(target: usize, kplus: impl IntoIterator<Item = usize>, kminus: impl IntoIterator<Item = usize>) -> Self {
        let mut kplus: Vec<usize> = kplus.into_iter().collect();
        let mut kminus: Vec<usize> = kminus.into_iter().collect();
        kplus.sort_unstable();
        kminus.sort_unstable();
        Self { target, kplus, kminus }
    }

    fn shifted(&self, by: usize) -> Self {
        Self::new(self.target + by, self.kplus.iter().map(|j| j + by), self.kminus.iter().map(|j| j + by))
    }

    fn retarget(&self, target: usize) -> Self {
        Self { target, ..self.clone() }
    }

    /// Exact integer check against `A_r` in recursive order.
    pub fn verify(&self, a: &ExactMatrix) -> Result<bool> {
        let zero = |v: &[usize]| v.iter().map(|j| j.checked_sub(1)).collect::<Option<Vec<_>>>();
        match (self.target.checked_sub(1), zero(&self.kplus), zero(&self.kminus)) {
            (Some(t), Some(p), Some(m)) => a.verify_combination(t, &p, &m),
            _ => domain("row numbers are 1-based"),
        }
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.kplus.iter().chain(&self.kminus).copied()
    }
}

/// Which construction produced the certificate for a row of `S^(r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum Rule {
    /// Hand-checked identity for `r <= 2`.
    Base,
    /// Row of `S^(r-1)` in the first diagonal block, sets reused.
    Lift { source: usize },
    /// Row of the second diagonal block, sets translated by `r 2^(r-1)`.
    LiftShifted { source: usize },
    /// Top-level row of `S^(r-1)`, sets swapped and translated.
    LiftBand { source: usize },
    /// Top-level row `r 2^r + i`, `i <= J_(r-1)`, rebuilt from `A_(r-2)`.
    TwoLevel { i: usize, source: usize },
    /// Top-level row equal to the row `partner` outside `S^(r)`.
    DuplicateAbove { partner: usize },
    /// Top-level row equal to the row `partner` in the two-level band; reuses its sets.
    DuplicateBelow { partner: usize },
}

/// Classifies 1-based row `target` of `S^(r)`.
pub fn rule_for(r: u32, target: usize) -> Result<Rule> {
    if r <= 2 {
        return Ok(Rule::Base);
    }
    let r_ = r as usize;
    let half = 1usize << (r_ - 1);
    let first_block = (r_ - 1) * half;
    let top = r_ * 2 * half;
    if target <= top {
        let (source, shifted) = if target > r_ * half { (target - r_ * half, true) } else { (target, false) };
        return Ok(match (shifted, source <= first_block) {
            (false, true) => Rule::Lift { source },
            (true, true) => Rule::LiftShifted { source },
            (false, false) => Rule::LiftBand { source },
            (true, false) => return domain(format!("row {target} is not in S^({r})")),
        });
    }
    let i = target - top;
    let (jm1, jp1) = (jacobsthal(r_ - 1) as usize, jacobsthal(r_ + 1) as usize);
    Ok(if i <= jm1 {
        Rule::TwoLevel { i, source: (r_ - 2) * (1 << (r_ - 2)) + i }
    } else if i <= half {
        Rule::DuplicateAbove { partner: target + half }
    } else if i <= jp1 {
        Rule::DuplicateBelow { partner: target - half }
    } else {
        return domain(format!("row {target} is not in S^({r})"));
    })
}

/// Certificates for every row of `S^(r)`, keyed by target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateBook {
    pub r: u32,
    pub certs: BTreeMap<usize, Certificate>,
}

#[derive(Serialize, Deserialize)]
struct BookJson {
    r: u32,
    certs: Vec<Certificate>,
}

impl Serialize for CertificateBook {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BookJson { r: self.r, certs: self.certs.values().cloned().collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CertificateBook {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BookJson::deserialize(d)?;
        let certs = raw.certs.into_iter().map(|c| (c.target, c)).collect();
        Ok(CertificateBook { r: raw.r, certs })
    }
}

impl CertificateBook {
    fn from_certs(r: u32, certs: impl IntoIterator<Item = Certificate>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for c in certs {
            let t = c.target;
            if map.insert(t, c).is_some() {
                return Err(Error::Invariant(format!("two certificates for row {t} at r = {r}")));
            }
        }
        Ok(Self { r, certs: map })
    }

    pub fn len(&self) -> usize {
        self.certs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.certs.is_empty()
    }

    pub fn get(&self, target: usize) -> Option<&Certificate> {
        self.certs.get(&target)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Certificate> {
        self.certs.values()
    }

    /// Checks the structural invariants: the domain is exactly `S^(r)`, and
    /// every `K+`, `K-` is disjoint from `S^(r)` and from each other.
    pub fn check_structure(&self) -> Result<()> {
        let s: BTreeSet<usize> = recursive_labels(self.r)?.into_iter().collect();
        let domain_set: BTreeSet<usize> = self.certs.keys().copied().collect();
        if domain_set != s {
            let missing: Vec<_> = s.difference(&domain_set).take(5).collect();
            let extra: Vec<_> = domain_set.difference(&s).take(5).collect();
            return Err(Error::Invariant(format!(
                "book for r = {} does not cover S^(r): missing {missing:?}, extra {extra:?}",
                self.r
            )));
        }
        for c in self.certs.values() {
            if let Some(j) = c.support().find(|j| s.contains(j)) {
                return Err(Error::Invariant(format!(
                    "certificate for row {} uses row {j} of S^({})",
                    c.target, self.r
                )));
            }
            let plus: BTreeSet<_> = c.kplus.iter().collect();
            if plus.len() != c.kplus.len() || c.kminus.iter().any(|j| plus.contains(j)) {
                return Err(Error::Invariant(format!("certificate for row {} has overlapping index sets", c.target)));
            }
        }
        Ok(())
    }

    /// Verifies every certificate against `a` in parallel; reports the first failing target.
    pub fn verify_all(&self, a: &ExactMatrix) -> Result<()> {
        let bad = self
            .certs
            .par_iter()
            .map(|(&t, c)| match c.verify(a) {
                Ok(true) => None,
                Ok(false) => {
                    Some(Error::Invariant(format!("certificate for row {t} at r = {} does not verify", self.r)))
                }
                Err(e) => Some(e),
            })
            .find_first(Option::is_some)
            .flatten();
        match bad {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// The printed identities for `r = 1` and `r = 2`.
pub fn base_book(r: u32) -> Result<CertificateBook> {
    let certs = match r {
        1 => vec![Certificate::new(1, [2], []), Certificate::new(3, [4], [])],
        2 => vec![
            Certificate::new(1, [2], []),
            Certificate::new(5, [6], []),
            Certificate::new(3, [4, 7], [8]),
            Certificate::new(9, [2, 6], [12]),
            Certificate::new(10, [12], []),
            Certificate::new(11, [2, 6], [12]),
        ],
        _ => return domain(format!("no base book for r = {r}")),
    };
    CertificateBook::from_certs(r, certs)
}

/// Lifts a certificate of `A_(r-1)` with target `<= (r-1) 2^(r-1)` to the two
/// diagonal copies in `A_r`: unchanged, and translated by `r 2^(r-1)`.
pub fn lift_block(r: u32, cert: &Certificate) -> Result<[Certificate; 2]> {
    if r < 2 {
        return domain("lifting needs r >= 2");
    }
    let half = 1usize << (r - 1);
    if cert.target == 0 || cert.target > (r as usize - 1) * half {
        return domain(format!(
            "target {} outside 1..={} for the block lift to r = {r}",
            cert.target,
            (r as usize - 1) * half
        ));
    }
    Ok([cert.clone(), cert.shifted(r as usize * half)])
}

/// Lifts a certificate of `A_(r-1)` whose target lies in the top band
/// `(r-1) 2^(r-1) < i <= (r-1) 2^(r-1) + J_r`:
/// `K'+ = K+ ∪ (K- + s) ∪ {i + s}`, `K'- = K- ∪ (K+ + s)` with `s = r 2^(r-1)`.
pub fn lift_band(r: u32, cert: &Certificate) -> Result<Certificate> {
    if r < 2 {
        return domain("lifting needs r >= 2");
    }
    let half = 1usize << (r - 1);
    let lo = (r as usize - 1) * half;
    let hi = lo + jacobsthal(r as usize) as usize;
    if cert.target <= lo || cert.target > hi {
        return domain(format!("target {} outside the band {}..={hi} for r = {r}", cert.target, lo + 1));
    }
    let s = r as usize * half;
    let kplus = cert.kplus.iter().copied().chain(cert.kminus.iter().map(|j| j + s)).chain([cert.target + s]);
    let kminus = cert.kminus.iter().copied().chain(cert.kplus.iter().map(|j| j + s));
    Ok(Certificate::new(cert.target, kplus, kminus))
}

/// The two-level construction for top-level row `r 2^r + i`, `1 <= i <= J_(r-1)`,
/// with every intermediate set kept for inspection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoLevelLift {
    pub r: u32,
    pub i: usize,
    /// Source certificate in `A_(r-2)`, target `(r-2) 2^(r-2) + i`.
    pub source: Certificate,
    /// `K- ∪ {(r-2) 2^(r-2) + i}`.
    pub kminus_prime: Vec<usize>,
    pub k1plus: Vec<usize>,
    pub k1minus: Vec<usize>,
    pub k2plus: Vec<usize>,
    pub k2minus: Vec<usize>,
}

impl TwoLevelLift {
    pub fn target(&self) -> usize {
        self.r as usize * (1 << self.r) + self.i
    }

    pub fn certificate(&self) -> Certificate {
        Certificate::new(
            self.target(),
            self.k1plus.iter().chain(&self.k2plus).copied(),
            self.k1minus.iter().chain(&self.k2minus).copied(),
        )
    }
}

/// Builds the certificate of row `r 2^r + i` from the certificate of row
/// `(r-2) 2^(r-2) + i` in `A_(r-2)`.
///
/// With `q = 2^(r-2)`, `b = (r-2) q` and `K'- = K- ∪ {b + i}`:
///
/// ```text
/// K1+ = (K'- + (r-1)q) ∪ (K'- + (3r-1)q)
/// K1- = (K+  + (r-1)q) ∪ (K+  + (3r-1)q)
/// K2+ = {j + (3r+4)q : j ∈ K+,  j > b} ∪ {j + (3r+5)q : j ∈ K+,  j > b}
/// K2- = {j + (3r+4)q : j ∈ K-,  j > b} ∪ {j + (3r+5)q : j ∈ K'-, j > b}
/// ```
///
/// The last union ranges over `K'-`, not `K-`; this is what makes the
/// `r = 4, i = 1` instance produce `{76, 77, 80}`.
pub fn lift_two_level(r: u32, source: &Certificate) -> Result<TwoLevelLift> {
    if r < 3 {
        return domain("the two-level lift needs r >= 3");
    }
    let r_ = r as usize;
    let q = 1usize << (r_ - 2);
    let b = (r_ - 2) * q;
    let jm1 = jacobsthal(r_ - 1) as usize;
    if source.target <= b || source.target > b + jm1 {
        return domain(format!("source row {} outside the band {}..={} of A_{}", source.target, b + 1, b + jm1, r - 2));
    }
    let i = source.target - b;
    let band = b + 1..=b + jm1;
    let mut kminus_prime = source.kminus.clone();
    kminus_prime.push(source.target);
    kminus_prime.sort_unstable();
    let meets: Vec<usize> = source.kplus.iter().chain(&kminus_prime).copied().filter(|j| band.contains(j)).collect();
    if meets != [source.target] {
        return domain(format!("source for row {} meets the band in {meets:?}", source.target));
    }

    let two_copies = |set: &[usize]| -> Vec<usize> {
        let mut v: Vec<usize> =
            set.iter().map(|j| j + (r_ - 1) * q).chain(set.iter().map(|j| j + (3 * r_ - 1) * q)).collect();
        v.sort_unstable();
        v
    };
    let high = |set: &[usize], offset: usize| -> Vec<usize> {
        set.iter().filter(|&&j| j > b).map(|j| j + offset * q).collect()
    };
    let union = |mut a: Vec<usize>, b: Vec<usize>| -> Vec<usize> {
        a.extend(b);
        a.sort_unstable();
        a
    };
    let k2plus = union(high(&source.kplus, 3 * r_ + 4), high(&source.kplus, 3 * r_ + 5));
    let k2minus = union(high(&source.kminus, 3 * r_ + 4), high(&kminus_prime, 3 * r_ + 5));
    Ok(TwoLevelLift {
        r,
        i,
        source: source.clone(),
        k1plus: two_copies(&kminus_prime),
        k1minus: two_copies(&source.kplus),
        k2plus,
        k2minus,
        kminus_prime,
    })
}

/// Certificate for top-level row `r 2^r + i` with `J_(r-1) < i <= J_(r+1)`.
///
/// For `i <= 2^(r-1)` the row equals row `r 2^r + i + 2^(r-1)`, which lies
/// outside `S^(r)`. Above that the partner `r 2^r + i - 2^(r-1)` is itself in
/// `S^(r)`, so its certificate (looked up in `built`) is reused.
pub fn duplicate_row_cert(r: u32, i: usize, built: &BTreeMap<usize, Certificate>) -> Result<Certificate> {
    if r < 2 {
        return domain("duplicate rows need r >= 2");
    }
    let r_ = r as usize;
    let half = 1usize << (r_ - 1);
    let top = r_ * 2 * half;
    let (jm1, jp1) = (jacobsthal(r_ - 1) as usize, jacobsthal(r_ + 1) as usize);
    if i <= jm1 || i > jp1 {
        return domain(format!("i = {i} outside {}..={jp1}", jm1 + 1));
    }
    if i <= half {
        return Ok(Certificate::new(top + i, [top + i + half], []));
    }
    let partner = top + i - half;
    built
        .get(&partner)
        .map(|c| c.retarget(top + i))
        .ok_or_else(|| Error::Domain(format!("no certificate yet for partner row {partner}")))
}

/// Assembles the book for `r >= 3` from the books for `r - 1` and `r - 2` without verifying it.
pub fn assemble_book(r: u32, prev: &CertificateBook, prev2: &CertificateBook) -> Result<CertificateBook> {
    if r <= 2 {
        return base_book(r);
    }
    if prev.r != r - 1 || prev2.r != r - 2 {
        return domain(format!("books for r = {} and {} given, need {} and {}", prev.r, prev2.r, r - 1, r - 2));
    }
    let r_ = r as usize;
    let half = 1usize << (r_ - 1);
    let mut certs: BTreeMap<usize, Certificate> = BTreeMap::new();
    let put = |c: Certificate, certs: &mut BTreeMap<usize, Certificate>| -> Result<()> {
        let t = c.target;
        match certs.insert(t, c) {
            Some(_) => Err(Error::Invariant(format!("two certificates for row {t}"))),
            None => Ok(()),
        }
    };
    for c in prev.iter() {
        if c.target <= (r_ - 1) * half {
            for lifted in lift_block(r, c)? {
                put(lifted, &mut certs)?;
            }
        } else {
            put(lift_band(r, c)?, &mut certs)?;
        }
    }
    let q = 1usize << (r_ - 2);
    let b = (r_ - 2) * q;
    for i in 1..=jacobsthal(r_ - 1) as usize {
        let source =
            prev2.get(b + i).ok_or_else(|| Error::Invariant(format!("book for r = {} lacks row {}", r - 2, b + i)))?;
        put(lift_two_level(r, source)?.certificate(), &mut certs)?;
    }
    for i in jacobsthal(r_ - 1) as usize + 1..=jacobsthal(r_ + 1) as usize {
        let c = duplicate_row_cert(r, i, &certs)?;
        put(c, &mut certs)?;
    }
    Ok(CertificateBook { r, certs })
}

/// `A_r` in recursive order.
pub fn recursive_adjacency(r: u32) -> Result<ExactMatrix> {
    Ok(generate(r)?.adjacency_matrix(crate::butterfly::Ordering::Recursive, FieldTag::Rationals))
}

/// Builds the book for `r` and checks it completely: domain, disjointness and
/// every identity against `A_r`.
pub fn build_book(r: u32, prev: &CertificateBook, prev2: &CertificateBook) -> Result<CertificateBook> {
    let book = assemble_book(r, prev, prev2)?;
    book.check_structure()?;
    book.verify_all(&recursive_adjacency(r)?)?;
    Ok(book)
}

/// Verified books for `1..=r`, built on demand.
#[derive(Clone, Debug, Default)]
pub struct BookMemo {
    books: Vec<CertificateBook>,
}

impl BookMemo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn max_r(&self) -> u32 {
        self.books.len() as u32
    }

    /// Adopts a book read from disk after checking it fully. It must extend the memo by one order.
    pub fn adopt(&mut self, book: CertificateBook) -> Result<()> {
        if book.r != self.max_r() + 1 {
            return domain(format!("expected a book for r = {}, got r = {}", self.max_r() + 1, book.r));
        }
        book.check_structure()?;
        book.verify_all(&recursive_adjacency(book.r)?)?;
        self.books.push(book);
        Ok(())
    }

    pub fn get(&mut self, r: u32) -> Result<&CertificateBook> {
        if r < 1 {
            return domain("r must be at least 1");
        }
        while self.max_r() < r {
            let next = self.max_r() + 1;
            let book = if next <= 2 {
                let b = base_book(next)?;
                b.check_structure()?;
                b.verify_all(&recursive_adjacency(next)?)?;
                b
            } else {
                let n = self.books.len();
                build_book(next, &self.books[n - 1], &self.books[n - 2])?
            };
            self.books.push(book);
        }
        Ok(&self.books[r as usize - 1])
    }

    /// The two-level construction behind top-level row `r 2^r + i`.
    pub fn two_level(&mut self, r: u32, i: usize) -> Result<TwoLevelLift> {
        if r < 3 {
            return domain("the two-level lift needs r >= 3");
        }
        let b = (r as usize - 2) * (1 << (r - 2));
        let source = self
            .get(r - 2)?
            .get(b + i)
            .cloned()
            .ok_or_else(|| Error::Domain(format!("row {} is not in S^({})", b + i, r - 2)))?;
        lift_two_level(r, &source)
    }
}

/// Checks the intermediate vector `x = sum_{K1+} A_r(j) - sum_{K1-} A_r(j)` of the two-level lift.
///
/// Its support must lie in columns `(r-1)2^(r-1)+1..=r 2^(r-1)` and
/// `(2r-1)2^(r-1)+1..=r 2^r`, and on each of the four quarter bands of width
/// `q = 2^(r-2)` it must repeat the pattern `x~(j) = +1` if `b + j ∈ K'-`,
/// `-1` if `b + j ∈ K+`, `0` otherwise.
pub fn check_partial_sum(lift: &TwoLevelLift, a: &ExactMatrix) -> Result<()> {
    let r_ = lift.r as usize;
    let q = 1usize << (r_ - 2);
    let b = (r_ - 2) * q;
    let mut x: BTreeMap<usize, i64> = BTreeMap::new();
    for (set, c) in [(&lift.k1plus, 1), (&lift.k1minus, -1)] {
        for &j in set {
            for &col in a.row(j - 1) {
                *x.entry(col + 1).or_insert(0) += c;
            }
        }
    }
    x.retain(|_, v| *v != 0);
    let starts = [(r_ - 1) * 2 * q, (r_ - 1) * 2 * q + q, (2 * r_ - 1) * 2 * q, (2 * r_ - 1) * 2 * q + q];
    let expected = |j: usize| -> i64 {
        if lift.kminus_prime.contains(&(b + j)) {
            1
        } else if lift.source.kplus.contains(&(b + j)) {
            -1
        } else {
            0
        }
    };
    for (&col, &v) in &x {
        if !starts.iter().any(|&s| col > s && col <= s + q) {
            return Err(Error::Invariant(format!(
                "partial sum for row {} has entry {v} at column {col}",
                lift.target()
            )));
        }
    }
    for s in starts {
        for j in 1..=q {
            let got = x.get(&(s + j)).copied().unwrap_or(0);
            if got != expected(j) {
                return Err(Error::Invariant(format!(
                    "partial sum for row {} has {got} at column {}, expected {}",
                    lift.target(),
                    s + j,
                    expected(j)
                )));
            }
        }
    }
    Ok(())
}
