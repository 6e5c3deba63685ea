//! Dense matrices over `Q(ζ_N)` with exact elimination.

use std::fmt;

use num_integer::Integer;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{normalize, reduce, CycField, CycNumber};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycMatrix {
    field: &'static CycField,
    rows: usize,
    cols: usize,
    data: Vec<CycNumber>,
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CycMatrix {}x{} over Q(z{})", self.rows, self.cols, self.field.conductor())?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl CycMatrix {
    pub fn zeros(field: &'static CycField, rows: usize, cols: usize) -> Self {
        CycMatrix { field, rows, cols, data: vec![CycNumber::zero(field); rows * cols] }
    }

    pub fn identity(field: &'static CycField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, CycNumber::one(field));
        }
        m
    }

    pub fn scalar(field: &'static CycField, n: usize, c: &CycNumber) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_fn(field: &'static CycField, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> CycNumber) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        CycMatrix { field, rows, cols, data }
    }

    pub fn from_rows(field: &'static CycField, rows: Vec<Vec<CycNumber>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(CycMatrix { field, rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn field(&self) -> &'static CycField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &CycNumber {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: CycNumber) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[CycNumber] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..self.cols).all(|c| if r == c { self.get(r, c).is_one() } else { self.get(r, c).is_zero() }))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycNumber::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.field, self.rows, self.cols, |r, c| self.get(r, c).conj())
    }

    pub fn trace(&self) -> CycNumber {
        let mut acc = CycNumber::zero(self.field);
        for i in 0..self.rows.min(self.cols) {
            acc = acc.add(self.get(i, i));
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in add");
        Self::from_fn(self.field, self.rows, self.cols, |r, c| self.get(r, c).add(o.get(r, c)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in sub");
        Self::from_fn(self.field, self.rows, self.cols, |r, c| self.get(r, c).sub(o.get(r, c)))
    }

    pub fn scale(&self, k: &CycNumber) -> Self {
        Self::from_fn(self.field, self.rows, self.cols, |r, c| self.get(r, c).mul(k))
    }

    /// Integer numerators over a common denominator, if everything fits in `i64`.
    fn integral_form(&self) -> Option<(Vec<Option<Vec<i64>>>, i64)> {
        let mut den: i64 = 1;
        for x in &self.data {
            let (_, d) = x.small_parts()?;
            den = den.lcm(&d);
            if den > (1 << 40) {
                return None;
            }
        }
        let mut out = Vec::with_capacity(self.data.len());
        for x in &self.data {
            if x.is_zero() {
                out.push(None);
                continue;
            }
            let (n, d) = x.small_parts()?;
            let m = den / d;
            let scaled: Option<Vec<i64>> = n.iter().map(|&c| c.checked_mul(m)).collect();
            out.push(Some(scaled?));
        }
        Some((out, den))
    }

    fn mul_fast(&self, o: &Self) -> Option<Self> {
        let (a, da) = self.integral_form()?;
        let (b, db) = o.integral_form()?;
        let den = (da as i128).checked_mul(db as i128)?;
        let phi = self.field.degree();
        let mut data = Vec::with_capacity(self.rows * o.cols);
        let mut conv = vec![0i128; 2 * phi - 1];
        for r in 0..self.rows {
            for c in 0..o.cols {
                conv.iter_mut().for_each(|x| *x = 0);
                let mut any = false;
                for k in 0..self.cols {
                    let (Some(x), Some(y)) = (&a[r * self.cols + k], &b[k * o.cols + c]) else { continue };
                    any = true;
                    for (i, &xi) in x.iter().enumerate() {
                        if xi == 0 {
                            continue;
                        }
                        for (j, &yj) in y.iter().enumerate() {
                            if yj != 0 {
                                let t = (xi as i128).checked_mul(yj as i128)?;
                                conv[i + j] = conv[i + j].checked_add(t)?;
                            }
                        }
                    }
                }
                if !any {
                    data.push(CycNumber::zero(self.field));
                    continue;
                }
                let red = reduce(self.field, &conv)?;
                let (n, d) = normalize(red, den)?;
                data.push(CycNumber::from_i128_parts(self.field, n, d));
            }
        }
        Some(CycMatrix { field: self.field, rows: self.rows, cols: o.cols, data })
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in mul");
        if let Some(m) = self.mul_fast(o) {
            return m;
        }
        Self::from_fn(self.field, self.rows, o.cols, |r, c| {
            let mut acc = CycNumber::zero(self.field);
            for k in 0..self.cols {
                let (x, y) = (self.get(r, k), o.get(k, c));
                if !x.is_zero() && !y.is_zero() {
                    acc = acc.add(&x.mul(y));
                }
            }
            acc
        })
    }

    /// `v·M` for a row vector `v`.
    pub fn left_apply(&self, v: &[CycNumber]) -> Vec<CycNumber> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|c| {
                let mut acc = CycNumber::zero(self.field);
                for (r, x) in v.iter().enumerate() {
                    let y = self.get(r, c);
                    if !x.is_zero() && !y.is_zero() {
                        acc = acc.add(&x.mul(y));
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else { continue };
            if pr != row {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m.get(row, col).inv().expect("nonzero pivot");
            for c in col..m.cols {
                let v = m.get(row, c).mul(&inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let y = m.get(row, c);
                    if y.is_zero() {
                        continue;
                    }
                    let v = m.get(r, c).sub(&factor.mul(y));
                    m.set(r, c, v);
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

    /// Basis of `{x : M x = 0}`, one column vector per entry.
    pub fn nullspace(&self) -> Vec<Vec<CycNumber>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![CycNumber::zero(self.field); self.cols];
                v[f] = CycNumber::one(self.field);
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = r.get(i, f).neg();
                }
                v
            })
            .collect()
    }

    /// Basis of `{λ : λ M = 0}` as row vectors.
    pub fn left_nullspace(&self) -> Vec<Vec<CycNumber>> {
        self.transpose().nullspace()
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let aug = Self::from_fn(self.field, n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c).clone()
            } else if c - n == r {
                CycNumber::one(self.field)
            } else {
                CycNumber::zero(self.field)
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::InvalidArgument("singular matrix".into()));
        }
        Ok(Self::from_fn(self.field, n, n, |r, c| red.get(r, c + n).clone()))
    }

    /// Matrix whose rows are the given vectors.
    pub fn from_row_vectors(field: &'static CycField, vecs: &[Vec<CycNumber>], cols: usize) -> Self {
        Self::from_fn(field, vecs.len(), cols, |r, c| vecs[r][c].clone())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|r| Value::Array((0..self.cols).map(|c| self.get(r, c).to_json()).collect()))
                .collect(),
        )
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let (r, c) = (self.rows + o.rows, self.cols + o.cols);
        Self::from_fn(self.field, r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                o.get(i - self.rows, j - self.cols).clone()
            } else {
                CycNumber::zero(self.field)
            }
        })
    }
}

/// Whether two lists of vectors span the same subspace.
pub fn same_span(field: &'static CycField, a: &[Vec<CycNumber>], b: &[Vec<CycNumber>], dim: usize) -> bool {
    let ra = CycMatrix::from_row_vectors(field, a, dim).rank();
    let rb = CycMatrix::from_row_vectors(field, b, dim).rank();
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    let rab = CycMatrix::from_row_vectors(field, &both, dim).rank();
    ra == rb && rb == rab
}
