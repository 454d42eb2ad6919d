//! Jacobsthal numbers `J_0 = 0, J_1 = 1, J_n = J_{n-1} + 2 J_{n-2}`.

/// Largest index whose value fits in a `u64`.
pub const MAX_INDEX: usize = 64;

/// Cached `J_0..=J_max`.
#[derive(Clone, Debug)]
pub struct JacobsthalTable {
    values: Vec<u64>,
}

impl JacobsthalTable {
    /// Panics if `max > MAX_INDEX`.
    pub fn new(max: usize) -> Self {
        assert!(max <= MAX_INDEX, "J_{max} does not fit in u64");
        let mut values = Vec::with_capacity(max + 1);
        values.push(0u64);
        if max >= 1 {
            values.push(1);
        }
        for n in 2..=max {
            values.push(values[n - 1] + 2 * values[n - 2]);
        }
        Self { values }
    }

    pub fn get(&self, n: usize) -> u64 {
        self.values[n]
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

/// `J_n`, computed in closed form `(2^n - (-1)^n) / 3`. Panics if `n > MAX_INDEX`.
pub fn jacobsthal(n: usize) -> u64 {
    assert!(n <= MAX_INDEX, "J_{n} does not fit in u64");
    let pow = 1u128 << n;
    let v = if n.is_multiple_of(2) { (pow - 1) / 3 } else { (pow + 1) / 3 };
    v as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_values() {
        assert_eq!(jacobsthal(0), 0);
        assert_eq!(jacobsthal(1), 1);
        assert_eq!(jacobsthal(5), 11);
        assert_eq!(jacobsthal(4), 4 + jacobsthal(2));
        assert_eq!(JacobsthalTable::new(6).values(), &[0, 1, 1, 3, 5, 11, 21]);
    }

    #[test]
    fn table_matches_closed_form_and_shift_identity() {
        let t = JacobsthalTable::new(MAX_INDEX);
        for n in 0..=MAX_INDEX {
            assert_eq!(t.get(n), jacobsthal(n), "n = {n}");
        }
        for n in 0..=MAX_INDEX - 2 {
            assert_eq!(t.get(n + 2), (1u64 << n) + t.get(n), "n = {n}");
        }
    }
}
