//! Matrices over `Z/m`, used both for `F_p` and for `Z/p^K`.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};

pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

pub fn modulo(v: i64, m: u64) -> u64 {
    v.rem_euclid(m as i64) as u64
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.to_rows(), self.modulus)
    }
}

impl ModMatrix {
    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Self {
        ModMatrix { modulus, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(modulus: u64, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.set(i, i, 1 % modulus);
        }
        m
    }

    pub fn from_fn(modulus: u64, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(modulo(f(r, c), modulus));
            }
        }
        ModMatrix { modulus, rows, cols, data }
    }

    pub fn from_rows(modulus: u64, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self::from_fn(modulus, r, c, |i, j| rows[i][j]))
    }

    pub fn from_flat(modulus: u64, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        ModMatrix { modulus, rows, cols, data: data.into_iter().map(|x| x % modulus).collect() }
    }

    /// Column vector.
    pub fn column(modulus: u64, v: &[u64]) -> Self {
        Self::from_flat(modulus, v.len(), 1, v.to_vec())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.modulus;
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c) as i64).collect()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!(self.to_rows())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.modulus, self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        assert_eq!(self.modulus, o.modulus, "modulus mismatch");
        let m = self.modulus as u128;
        let mut out = Self::zeros(self.modulus, self.rows, o.cols);
        for r in 0..self.rows {
            for c in 0..o.cols {
                let mut acc: u128 = 0;
                for k in 0..self.cols {
                    acc += self.get(r, k) as u128 * o.get(k, c) as u128;
                }
                out.data[r * o.cols + c] = (acc % m) as u64;
            }
        }
        out
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let m = self.modulus as u128;
        (0..self.rows)
            .map(|r| ((0..self.cols).map(|k| self.get(r, k) as u128 * v[k] as u128).sum::<u128>() % m) as u64)
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_flat(self.modulus, self.rows, self.cols, self.data.iter().zip(&o.data).map(|(a, b)| (a + b) % self.modulus).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let m = self.modulus;
        Self::from_flat(self.modulus, self.rows, self.cols, self.data.iter().zip(&o.data).map(|(a, b)| (a + m - b) % m).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = modulo(k, self.modulus) as u128;
        let m = self.modulus as u128;
        Self::from_flat(self.modulus, self.rows, self.cols, self.data.iter().map(|&a| (a as u128 * k % m) as u64).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.modulus, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.modulus, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Submatrix of rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(self.modulus, r1 - r0, c1 - c0, |r, c| self.get(r0 + r, c0 + c) as i64)
    }

    /// Inverse over `Z/m`; pivots are chosen among units, which suffices when
    /// `m` is a prime power.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let m = self.modulus;
        let mut a = self.clone();
        let mut inv = Self::identity(m, n);
        for col in 0..n {
            let pr = (col..n)
                .find(|&r| mod_inv(a.get(r, col), m).is_some())
                .ok_or_else(|| Error::InvalidArgument("matrix not invertible".into()))?;
            for c in 0..n {
                a.data.swap(pr * n + c, col * n + c);
                inv.data.swap(pr * n + c, col * n + c);
            }
            let pinv = mod_inv(a.get(col, col), m).expect("unit pivot") as u128;
            for c in 0..n {
                a.data[col * n + c] = (a.data[col * n + c] as u128 * pinv % m as u128) as u64;
                inv.data[col * n + c] = (inv.data[col * n + c] as u128 * pinv % m as u128) as u64;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col) as u128;
                if f == 0 {
                    continue;
                }
                for c in 0..n {
                    let sub_a = f * a.get(col, c) as u128 % m as u128;
                    let sub_i = f * inv.get(col, c) as u128 % m as u128;
                    a.data[r * n + c] = ((a.data[r * n + c] as u128 + m as u128 - sub_a) % m as u128) as u64;
                    inv.data[r * n + c] = ((inv.data[r * n + c] as u128 + m as u128 - sub_i) % m as u128) as u64;
                }
            }
        }
        Ok(inv)
    }

    /// Determinant over a prime modulus.
    pub fn det_prime(&self) -> u64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let p = self.modulus;
        let mut a = self.clone();
        let mut det: u128 = 1;
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| a.get(r, col) != 0) else { return 0 };
            if pr != col {
                for c in 0..n {
                    a.data.swap(pr * n + c, col * n + c);
                }
                det = (p as u128 - det % p as u128) % p as u128;
            }
            let piv = a.get(col, col);
            det = det * piv as u128 % p as u128;
            let pinv = mod_inv(piv, p).expect("prime modulus") as u128;
            for r in col + 1..n {
                let f = a.get(r, col) as u128 * pinv % p as u128;
                if f == 0 {
                    continue;
                }
                for c in col..n {
                    let s = f * a.get(col, c) as u128 % p as u128;
                    a.data[r * n + c] = ((a.data[r * n + c] as u128 + p as u128 - s) % p as u128) as u64;
                }
            }
        }
        det as u64
    }

    /// RREF over a prime modulus together with the pivot columns.
    pub fn rref_prime(&self) -> (Self, Vec<usize>) {
        let p = self.modulus;
        let mut a = self.clone();
        let mut pivots = vec![];
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(pr) = (row..a.rows).find(|&r| a.get(r, col) != 0) else { continue };
            for c in 0..a.cols {
                a.data.swap(pr * a.cols + c, row * a.cols + c);
            }
            let pinv = mod_inv(a.get(row, col), p).expect("prime modulus") as u128;
            for c in 0..a.cols {
                a.data[row * a.cols + c] = (a.data[row * a.cols + c] as u128 * pinv % p as u128) as u64;
            }
            for r in 0..a.rows {
                if r == row {
                    continue;
                }
                let f = a.get(r, col) as u128;
                if f == 0 {
                    continue;
                }
                for c in 0..a.cols {
                    let s = f * a.get(row, c) as u128 % p as u128;
                    a.data[r * a.cols + c] = ((a.data[r * a.cols + c] as u128 + p as u128 - s) % p as u128) as u64;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    pub fn rank_prime(&self) -> usize {
        self.rref_prime().1.len()
    }

    /// Kernel basis over a prime modulus.
    pub fn kernel_prime(&self) -> Vec<Vec<u64>> {
        let p = self.modulus;
        let (r, pivots) = self.rref_prime();
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - r.get(i, f)) % p;
                }
                v
            })
            .collect()
    }
}

/// Matrix with the given vectors as columns.
pub fn columns_matrix(modulus: u64, n: usize, vecs: &[Vec<u64>]) -> ModMatrix {
    ModMatrix::from_fn(modulus, n, vecs.len(), |r, c| vecs[c][r] as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_mod_prime_power() {
        let a = ModMatrix::from_rows(27, &[vec![4, 3], vec![6, 7]]).unwrap();
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let sing = ModMatrix::from_rows(27, &[vec![3, 0], vec![0, 1]]).unwrap();
        assert!(sing.inverse().is_err());
    }

    #[test]
    fn det_and_kernel() {
        let a = ModMatrix::from_rows(5, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(a.det_prime(), 0);
        let k = a.kernel_prime();
        assert_eq!(k.len(), 1);
        assert_eq!(a.apply(&k[0]), vec![0, 0]);
        let b = ModMatrix::from_rows(7, &[vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(b.det_prime(), 1);
    }

    #[test]
    fn mod_inverse() {
        assert_eq!(mod_inv(2, 5), Some(3));
        assert_eq!(mod_inv(3, 9), None);
        assert_eq!(mod_inv(4, 81).map(|x| x * 4 % 81), Some(1));
    }
}
