//! Dense matrices over exact rationals.

use std::fmt;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Zero};

pub type Q = Ratio<i64>;

fn overflow() -> ! {
    panic!("rational overflow")
}

pub fn add(a: &Q, b: &Q) -> Q {
    a.checked_add(b).unwrap_or_else(|| overflow())
}

pub fn sub(a: &Q, b: &Q) -> Q {
    a.checked_sub(b).unwrap_or_else(|| overflow())
}

pub fn mul(a: &Q, b: &Q) -> Q {
    if a.is_zero() || b.is_zero() {
        return Q::zero();
    }
    a.checked_mul(b).unwrap_or_else(|| overflow())
}

pub fn div(a: &Q, b: &Q) -> Q {
    a.checked_div(b).unwrap_or_else(|| overflow())
}

pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Q>], cols: usize) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            m.data[r * cols..(r + 1) * cols].clone_from_slice(row);
        }
        m
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_cols(cols: &[Vec<Q>], rows: usize) -> Matrix {
        let mut m = Matrix::zeros(rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged columns");
            for (r, v) in col.iter().enumerate() {
                m[(r, c)] = *v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] = add(&out[(r, c)], &mul(&a, &b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "shape mismatch in product");
        (0..self.rows)
            .map(|r| {
                let mut acc = Q::zero();
                for (c, x) in v.iter().enumerate() {
                    let a = self[(r, c)];
                    if !a.is_zero() && !x.is_zero() {
                        acc = add(&acc, &mul(&a, x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Q) -> Matrix {
        let data = self.data.iter().map(|a| mul(a, s)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self[(r, c)];
            }
            for c in 0..other.cols {
                m[(r, self.cols + c)] = other[(r, c)];
            }
        }
        m
    }

    /// Rows `rs` of `self`.
    pub fn select_rows(&self, rs: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rs.len(), self.cols);
        for (i, &r) in rs.iter().enumerate() {
            m.data[i * self.cols..(i + 1) * self.cols].clone_from_slice(self.row(r));
        }
        m
    }

    pub fn select_cols(&self, cs: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, cs.len());
        for r in 0..self.rows {
            for (i, &c) in cs.iter().enumerate() {
                m[(r, i)] = self[(r, c)];
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = div(&Q::one(), &m[(row, col)]);
            for c in col..m.cols {
                m[(row, c)] = mul(&m[(row, c)], &inv);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m[(r, col)];
                if f.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = m[(row, c)];
                    if !v.is_zero() {
                        m[(r, c)] = sub(&m[(r, c)], &mul(&f, &v));
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self · v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)];
                }
                v
            })
            .collect()
    }

    /// Some `x` with `self · x = b`.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Matrix::from_cols(&[b.to_vec()], self.rows));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)];
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let (r, pivots) = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(r.select_cols(&cols))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Indices of a maximal linearly independent subset of the columns.
    pub fn independent_cols(&self) -> Vec<usize> {
        self.rref().1
    }

    /// Basis of the column space.
    pub fn col_space(&self) -> Vec<Vec<Q>> {
        self.independent_cols().into_iter().map(|c| self.col(c)).collect()
    }
}

/// Extends an independent family of vectors in `Q^n` by standard basis vectors.
/// Returns the indices of the standard vectors added.
pub fn complement_std(basis: &[Vec<Q>], n: usize) -> Vec<usize> {
    let mut cols: Vec<Vec<Q>> = basis.to_vec();
    let mut added = Vec::new();
    let mut rank = Matrix::from_cols(&cols, n).rank();
    for e in 0..n {
        if rank == n {
            break;
        }
        let mut v = vec![Q::zero(); n];
        v[e] = Q::one();
        cols.push(v);
        let r = Matrix::from_cols(&cols, n).rank();
        if r > rank {
            rank = r;
            added.push(e);
        } else {
            cols.pop();
        }
    }
    added
}

pub fn std_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

/// Prime used for modular rank certificates.
pub const PRIME: u64 = (1 << 61) - 1;

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % PRIME as u128) as u64;
        }
        b = ((b as u128 * b as u128) % PRIME as u128) as u64;
        e >>= 1;
    }
    acc
}

pub fn to_mod(x: &Q) -> u64 {
    let n = (x.numer().rem_euclid(PRIME as i64)) as u64;
    let d = (x.denom().rem_euclid(PRIME as i64)) as u64;
    assert!(d != 0, "denominator divisible by the modulus");
    ((n as u128 * pow_mod(d, PRIME - 2) as u128) % PRIME as u128) as u64
}

/// Rank of a matrix over `F_p`.
pub fn rank_mod(rows: usize, cols: usize, mut data: Vec<u64>) -> usize {
    let p = PRIME as u128;
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| data[r * cols + col] != 0) else {
            continue;
        };
        for c in 0..cols {
            data.swap(piv * cols + c, rank * cols + c);
        }
        let inv = pow_mod(data[rank * cols + col], PRIME - 2) as u128;
        for r in 0..rows {
            if r == rank {
                continue;
            }
            let f = data[r * cols + col] as u128 * inv % p;
            if f == 0 {
                continue;
            }
            for c in col..cols {
                let v = data[rank * cols + c] as u128;
                let cur = data[r * cols + c] as u128;
                data[r * cols + c] = ((cur + p - f * v % p) % p) as u64;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        let cols = rows[0].len();
        Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>(), cols)
    }

    #[test]
    fn rank_kernel_solve() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(Zero::is_zero));
        let x = a.solve(&[q(6), q(12), q(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![q(6), q(12), q(2)]);
        assert!(a.solve(&[q(1), q(0), q(0)]).is_none());
    }

    #[test]
    fn inverse_and_mod_rank() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let data: Vec<u64> = [1, 2, 2, 4].iter().map(|&x| to_mod(&q(x))).collect();
        assert_eq!(rank_mod(2, 2, data), 1);
        assert_eq!(to_mod(&Q::new(1, 2)) * 2 % PRIME, 1);
        assert_eq!(to_mod(&q(-1)), PRIME - 1);
    }

    #[test]
    fn complement_extends_to_basis() {
        let b = vec![vec![q(1), q(1), q(0)]];
        let added = complement_std(&b, 3);
        assert_eq!(added.len(), 2);
        let mut cols = b.clone();
        cols.extend(added.iter().map(|&i| std_vec(3, i)));
        assert_eq!(Matrix::from_cols(&cols, 3).rank(), 3);
    }

    #[test]
    #[should_panic(expected = "rational overflow")]
    fn overflow_is_loud() {
        let big = q(i64::MAX);
        let _ = mul(&big, &q(2));
    }
}
