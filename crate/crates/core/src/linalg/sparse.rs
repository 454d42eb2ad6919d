//! Sparse row elimination shared by the prime-field and rational paths.
//!
//! Rows are bucketed by their leading column. Columns are processed in
//! increasing order; only rows whose leading entry sits in the current column
//! are touched, so untouched rows keep their sparsity.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

type Row<E> = Vec<(usize, E)>;

trait Scalar {
    type E: Clone;

    fn one(&self) -> Self::E;
    fn is_zero(&self, e: &Self::E) -> bool;
    /// Multipliers `(a, b)` such that `a * row_lead - b * pivot_lead = 0`.
    fn cancel(&self, pivot_lead: &Self::E, row_lead: &Self::E) -> (Self::E, Self::E);
    /// `a * x - b * y`.
    fn mul_sub(&self, a: &Self::E, x: &Self::E, b: &Self::E, y: &Self::E) -> Self::E;
    fn neg_mul(&self, b: &Self::E, y: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, x: &Self::E) -> Self::E;
    fn normalize(&self, _row: &mut Row<Self::E>) {}
}

struct ModP(u64);

impl ModP {
    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.0;
            }
            base = base * base % self.0;
            exp >>= 1;
        }
        acc
    }
}

impl Scalar for ModP {
    type E = u64;

    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, e: &u64) -> bool {
        *e == 0
    }
    fn cancel(&self, pivot_lead: &u64, row_lead: &u64) -> (u64, u64) {
        let inv = self.pow(*pivot_lead, self.0 - 2);
        (1, row_lead * inv % self.0)
    }
    fn mul_sub(&self, a: &u64, x: &u64, b: &u64, y: &u64) -> u64 {
        (a * x % self.0 + self.0 - b * y % self.0) % self.0
    }
    fn neg_mul(&self, b: &u64, y: &u64) -> u64 {
        (self.0 - b * y % self.0) % self.0
    }
    fn mul(&self, a: &u64, x: &u64) -> u64 {
        a * x % self.0
    }
}

/// Integer arithmetic; rows are divided by their content after each update.
struct Integers;

impl Scalar for Integers {
    type E = BigInt;

    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, e: &BigInt) -> bool {
        e.is_zero()
    }
    fn cancel(&self, pivot_lead: &BigInt, row_lead: &BigInt) -> (BigInt, BigInt) {
        let g = pivot_lead.gcd(row_lead);
        (pivot_lead / &g, row_lead / &g)
    }
    fn mul_sub(&self, a: &BigInt, x: &BigInt, b: &BigInt, y: &BigInt) -> BigInt {
        a * x - b * y
    }
    fn neg_mul(&self, b: &BigInt, y: &BigInt) -> BigInt {
        -(b * y)
    }
    fn mul(&self, a: &BigInt, x: &BigInt) -> BigInt {
        a * x
    }
    fn normalize(&self, row: &mut Row<BigInt>) {
        let mut g = BigInt::zero();
        for (_, e) in row.iter() {
            g = g.gcd(e);
            if g.is_one() {
                break;
            }
        }
        let flip = row.first().is_some_and(|(_, e)| e.is_negative());
        if g.is_one() && !flip {
            return;
        }
        for (_, e) in row.iter_mut() {
            *e = &*e / &g;
            if flip {
                *e = -&*e;
            }
        }
    }
}

/// `a * row - b * pivot`, merging the two sorted sparse rows.
fn combine<S: Scalar>(s: &S, a: &S::E, row: &Row<S::E>, b: &S::E, pivot: &Row<S::E>) -> Row<S::E> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        let (col, v) = if ci < cj {
            i += 1;
            (ci, s.mul(a, &row[i - 1].1))
        } else if cj < ci {
            j += 1;
            (cj, s.neg_mul(b, &pivot[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, s.mul_sub(a, &row[i - 1].1, b, &pivot[j - 1].1))
        };
        if !s.is_zero(&v) {
            out.push((col, v));
        }
    }
    out
}

fn rank_with<S: Scalar>(s: &S, pattern: &[Vec<usize>], cols: usize) -> usize {
    let mut buckets: Vec<Vec<Row<S::E>>> = vec![Vec::new(); cols];
    for ones in pattern {
        if let Some(&lead) = ones.first() {
            buckets[lead].push(ones.iter().map(|&c| (c, s.one())).collect());
        }
    }
    let mut rank = 0;
    for col in 0..cols {
        let mut bucket = std::mem::take(&mut buckets[col]);
        if bucket.is_empty() {
            continue;
        }
        // Sparsest row pivots; ties go to the earliest row.
        let best = (0..bucket.len()).min_by_key(|&k| bucket[k].len()).unwrap();
        let pivot = bucket.swap_remove(best);
        rank += 1;
        for row in bucket {
            let (a, b) = s.cancel(&pivot[0].1, &row[0].1);
            let mut next = combine(s, &a, &row, &b, &pivot);
            debug_assert!(next.first().is_none_or(|e| e.0 > col));
            s.normalize(&mut next);
            if let Some(&(lead, _)) = next.first() {
                buckets[lead].push(next);
            }
        }
    }
    rank
}

pub(super) fn rank_mod_p(pattern: &[Vec<usize>], cols: usize, p: u32) -> usize {
    rank_with(&ModP(p as u64), pattern, cols)
}

pub(super) fn rank_rational(pattern: &[Vec<usize>], cols: usize) -> usize {
    rank_with(&Integers, pattern, cols)
}
