/// Dense GF(2) matrix with rows packed 64 columns per word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<Vec<u64>>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(nrows: usize, cols: usize) -> Self {
        Self { rows: vec![vec![0; cols.div_ceil(64)]; nrows], cols }
    }

    /// Rows given as lists of one-columns.
    pub fn from_pattern(pattern: &[Vec<usize>], cols: usize) -> Self {
        let mut m = Self::zeros(pattern.len(), cols);
        for (row, ones) in m.rows.iter_mut().zip(pattern) {
            for &j in ones {
                row[j / 64] ^= 1 << (j % 64);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i][j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let mask = 1u64 << (j % 64);
        if value {
            self.rows[i][j / 64] |= mask;
        } else {
            self.rows[i][j / 64] &= !mask;
        }
    }

    /// Rank by forward elimination; consumes a copy of the rows.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == rows.len() {
                break;
            }
            let w = col / 64;
            let bit = 1u64 << (col % 64);
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let (done, rest) = rows.split_at_mut(rank + 1);
            let pivot = &done[rank][w..];
            for row in rest.iter_mut().filter(|row| row[w] & bit != 0) {
                for (a, b) in row[w..].iter_mut().zip(pivot) {
                    *a ^= b;
                }
            }
            rank += 1;
        }
        rank
    }
}
