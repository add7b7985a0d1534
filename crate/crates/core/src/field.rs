//! Prime-field arithmetic and dense matrices over GF(p).

use std::fmt;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime field GF(p) with `p < 2^31`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Field {
    p: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field { p: p as u32 })
    }

    /// The smallest prime field with at least `min` elements.
    pub fn smallest_at_least(min: u64) -> Result<Self> {
        let mut p = min.max(2);
        while !is_prime(p) {
            p += 1;
        }
        Field::new(p)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u32 {
        (a % self.p as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.p as u64 {
            (s - self.p as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.p as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.p as u64 - 2))
    }
}

impl TryFrom<u64> for Field {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        Field::new(p)
    }
}

impl From<Field> for u64 {
    fn from(f: Field) -> u64 {
        f.p as u64
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

/// Dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows of integers, reducing every entry mod p.
    /// An empty row list yields a `0 x cols` matrix.
    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::SizeMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&x| field.reduce(x)));
        }
        Ok(Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = self.field.reduce(v as u64);
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.row_iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect()
    }

    pub fn push_row(&mut self, row: &[u32]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row.iter().map(|&x| self.field.reduce(x as u64)));
        self.rows += 1;
    }

    pub fn remove_row(&mut self, r: usize) {
        self.data.drain(r * self.cols..(r + 1) * self.cols);
        self.rows -= 1;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// Stacks matrices with equal column counts.
    pub fn vstack<'a>(field: Field, cols: usize, parts: impl IntoIterator<Item = &'a Matrix>) -> Matrix {
        let mut m = Matrix::zeros(field, 0, cols);
        for p in parts {
            assert_eq!(p.cols, cols, "vstack column mismatch");
            m.data.extend_from_slice(&p.data);
            m.rows += p.rows;
        }
        m
    }

    pub fn mul_vec(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.cols);
        self.row_iter()
            .map(|r| {
                let acc = r
                    .iter()
                    .zip(x)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % self.field.p as u64);
                acc as u32
            })
            .collect()
    }

    /// Row rank over GF(p).
    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.field, self.cols);
        self.row_iter().filter(|r| ech.insert(r)).count()
    }

    /// Some `x` with `self * x = y`, or `None` when the system is
    /// inconsistent.
    pub fn solve(&self, y: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(y.len(), self.rows);
        let f = self.field;
        // Augmented elimination to reduced row echelon form.
        let w = self.cols + 1;
        let mut a: Vec<u32> = Vec::with_capacity(self.rows * w);
        for (r, row) in self.row_iter().enumerate() {
            a.extend_from_slice(row);
            a.push(f.reduce(y[r] as u64));
        }
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            let Some(pr) = (lead..self.rows).find(|&r| a[r * w + c] != 0) else {
                continue;
            };
            for k in 0..w {
                a.swap(lead * w + k, pr * w + k);
            }
            let inv = f.inv(a[lead * w + c]).expect("nonzero pivot");
            for k in 0..w {
                a[lead * w + k] = f.mul(a[lead * w + k], inv);
            }
            for r in 0..self.rows {
                let factor = a[r * w + c];
                if r != lead && factor != 0 {
                    for k in 0..w {
                        let t = f.mul(factor, a[lead * w + k]);
                        a[r * w + k] = f.sub(a[r * w + k], t);
                    }
                }
            }
            pivots.push(c);
            lead += 1;
        }
        if (lead..self.rows).any(|r| a[r * w + self.cols] != 0) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = a[r * w + self.cols];
        }
        Some(x)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{:?}; {}x{}]", self.field, self.rows, self.cols)?;
        f.debug_list().entries(self.row_iter()).finish()
    }
}

/// Incrementally maintained row echelon basis.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    cols: usize,
    // Each basis row is normalized to a leading 1 at `pivot`.
    basis: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    pub fn new(field: Field, cols: usize) -> Self {
        Echelon {
            field,
            cols,
            basis: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, row: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut r = row.to_vec();
        for (pivot, b) in &self.basis {
            let factor = r[*pivot];
            if factor != 0 {
                for (x, &y) in r.iter_mut().zip(b) {
                    if y != 0 {
                        *x = f.sub(*x, f.mul(factor, y));
                    }
                }
            }
        }
        r
    }

    /// True when `row` lies in the span of the basis.
    pub fn spans(&self, row: &[u32]) -> bool {
        self.reduce(row).iter().all(|&x| x == 0)
    }

    /// Adds `row` to the basis; returns whether it was independent.
    pub fn insert(&mut self, row: &[u32]) -> bool {
        assert_eq!(row.len(), self.cols);
        let mut r = self.reduce(row);
        let Some(pivot) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(r[pivot]).expect("nonzero pivot");
        for x in r.iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        self.basis.push((pivot, r));
        true
    }
}

/// `m` Vandermonde vectors `(1, t, t^2, .., t^(dim-1))` at the nodes
/// `t = 0, 1, .., m-1`. Any `dim` of them are linearly independent.
pub fn general_position_vectors(m: usize, dim: usize, field: Field) -> Result<Vec<Vec<u32>>> {
    if dim == 0 {
        return Err(Error::InvalidDimension {
            value: 0,
            reason: "vectors need at least one coordinate",
        });
    }
    if (field.p() as usize) < m {
        return Err(Error::FieldTooSmall {
            p: field.p(),
            needed: m,
        });
    }
    Ok((0..m)
        .map(|t| {
            let t = t as u32;
            let mut v = Vec::with_capacity(dim);
            let mut acc = 1;
            for _ in 0..dim {
                v.push(acc);
                acc = field.mul(acc, t);
            }
            v
        })
        .collect())
}

/// Checks that every `dim`-subset of `vectors` has full rank. Exhaustive when
/// there are at most `10^5` subsets, otherwise `10^4` random subsets are
/// sampled. Returns the first failing subset.
pub fn find_dependent_subset(vectors: &[Vec<u32>], dim: usize, field: Field, rng: &mut impl Rng) -> Option<Vec<usize>> {
    use itertools::Itertools;
    let m = vectors.len();
    if dim > m {
        return None;
    }
    let full_rank = |idx: &[usize]| {
        let rows: Vec<Vec<u64>> = idx
            .iter()
            .map(|&i| vectors[i].iter().map(|&x| x as u64).collect())
            .collect();
        Matrix::from_rows(field, dim, &rows)
            .map(|mt| mt.rank() == dim)
            .unwrap_or(false)
    };
    let total = (0..dim).fold(1u128, |acc, i| acc * (m - i) as u128 / (i + 1) as u128);
    if total <= 100_000 {
        (0..m).combinations(dim).find(|c| !full_rank(c))
    } else {
        (0..10_000).find_map(|_| {
            let mut idx = sample(rng, m, dim).into_vec();
            idx.sort_unstable();
            (!full_rank(&idx)).then_some(idx)
        })
    }
}
