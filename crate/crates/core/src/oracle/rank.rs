//! Dense matrices over a prime field and exact rank by elimination.

use super::field::Field;

/// Row-major matrix with entries in Montgomery form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// From plain residues, for tests and small hand-built inputs.
    pub fn from_rows(f: &Field, rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = f.enter(x);
            }
        }
        m
    }
}

/// Rank by Gaussian elimination; consumes the matrix.
pub fn rank(f: &Field, mut m: Matrix) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&i| m.data[i * cols + c] != 0) else {
            continue;
        };
        if pivot != rank {
            for j in c..cols {
                m.data.swap(pivot * cols + j, rank * cols + j);
            }
        }
        let inv = f.inv(m.data[rank * cols + c]);
        let (head, tail) = m.data.split_at_mut((rank + 1) * cols);
        let prow = &head[rank * cols..];
        for row in tail.chunks_exact_mut(cols) {
            let lead = row[c];
            if lead == 0 {
                continue;
            }
            let factor = f.mul(lead, inv);
            row[c] = 0;
            for j in c + 1..cols {
                if prow[j] != 0 {
                    row[j] = f.sub(row[j], f.mul(factor, prow[j]));
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Rank of a small matrix over the rationals by fraction-free elimination.
    fn rational_rank(rows: &[Vec<i128>]) -> usize {
        let mut m: Vec<Vec<i128>> = rows.to_vec();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
                continue;
            };
            m.swap(p, rank);
            for i in rank + 1..m.len() {
                let (a, b) = (m[rank][c], m[i][c]);
                for j in 0..cols {
                    m[i][j] = m[i][j] * a - m[rank][j] * b;
                }
                let g = m[i].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
            rank += 1;
        }
        rank
    }

    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn small_cases() {
        let f = Field::new(1_000_000_007).unwrap();
        assert_eq!(rank(&f, Matrix::zeros(0, 5)), 0);
        assert_eq!(rank(&f, Matrix::zeros(3, 0)), 0);
        assert_eq!(rank(&f, Matrix::from_rows(&f, &[vec![1, 2], vec![2, 4]])), 1);
        assert_eq!(rank(&f, Matrix::from_rows(&f, &[vec![0, 1], vec![1, 0], vec![1, 1]])), 2);
    }

    #[test]
    fn agrees_with_rational_elimination() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let f = Field::new(super::super::field::DEFAULT_PRIME).unwrap();
        for _ in 0..200 {
            let rows = rng.gen_range(1..7);
            let cols = rng.gen_range(1..7);
            let inner = rng.gen_range(1..4);
            // Product of random factors, so low rank is common.
            let left: Vec<Vec<i128>> = (0..rows).map(|_| (0..inner).map(|_| rng.gen_range(-3..4)).collect()).collect();
            let right: Vec<Vec<i128>> = (0..inner).map(|_| (0..cols).map(|_| rng.gen_range(-3..4)).collect()).collect();
            let prod: Vec<Vec<i128>> = (0..rows)
                .map(|i| (0..cols).map(|j| (0..inner).map(|t| left[i][t] * right[t][j]).sum()).collect())
                .collect();
            let p = f.modulus() as i128;
            let residues: Vec<Vec<u64>> = prod.iter().map(|r| r.iter().map(|&x| x.rem_euclid(p) as u64).collect()).collect();
            assert_eq!(rank(&f, Matrix::from_rows(&f, &residues)), rational_rank(&prod));
        }
    }
}
