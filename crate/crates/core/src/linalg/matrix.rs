use std::fmt;

use crate::error::{Error, Result};

/// Trial division; moduli handled here are tiny.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn check_prime(p: u32) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Multiplicative inverse of a nonzero residue modulo the prime `p`.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p as u64 - 2, p)
}

pub fn pow_mod(base: u32, mut exp: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut b = base as u64 % p64;
    let mut acc = 1 % p64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p64;
        }
        b = b * b % p64;
        exp >>= 1;
    }
    acc as u32
}

/// A dense matrix over the prime field F_p, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl FpMatrix {
    pub fn new(p: u32, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        check_prime(p)?;
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        if let Some(&bad) = entries.iter().find(|&&e| e >= p) {
            return Err(Error::ValueOutOfRange { value: bad as u64, bound: p as u64 });
        }
        Ok(FpMatrix { p, rows, cols, entries })
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        FpMatrix::new(p, rows.len(), cols, rows.concat())
    }

    pub(crate) fn from_raw(p: u32, rows: usize, cols: usize, entries: Vec<u32>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        FpMatrix { p, rows, cols, entries }
    }

    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        Self::scalar(p, n, 1)
    }

    pub fn scalar(p: u32, n: usize, a: u32) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.entries[i * n + i] = a % p;
        }
        m
    }

    /// The nilpotent matrix with ones on the subdiagonal (`J[i][j] = 1` iff `i = j + 1`).
    pub fn shift(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 1..n {
            m.entries[i * n + i - 1] = 1;
        }
        m
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.entries[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::DimensionMismatch(format!("moduli {} and {}", self.p, other.p)));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.p as u64;
        let mut out = Self::zeros(self.p, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.entries[idx] = ((out.entries[idx] as u64 + a * other.get(k, c) as u64) % p) as u32;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| (a + b) % self.p).collect();
        Ok(FpMatrix::from_raw(self.p, self.rows, self.cols, entries))
    }

    pub fn scale(&self, a: u32) -> Self {
        let p = self.p as u64;
        let entries = self.entries.iter().map(|&e| (e as u64 * a as u64 % p) as u32).collect();
        FpMatrix::from_raw(self.p, self.rows, self.cols, entries)
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(self.p, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to a {}-vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok(self.apply(v))
    }

    /// Matrix-vector product without the length check.
    pub(crate) fn apply(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        (0..self.rows)
            .map(|r| {
                let s: u64 = self.row(r).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum();
                (s % p) as u32
            })
            .collect()
    }

    /// Reduced row-echelon form together with the rank.
    pub fn rref(&self) -> (FpMatrix, usize) {
        let mut m = self.clone();
        let rank = m.rref_in_place();
        (m, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Returns the pivot columns.
    pub(crate) fn rref_in_place(&mut self) -> usize {
        self.rref_pivots().len()
    }

    pub(crate) fn rref_pivots(&mut self) -> Vec<usize> {
        let p = self.p as u64;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    self.entries.swap(pr * self.cols + c, row * self.cols + c);
                }
            }
            let inv = inv_mod(self.get(row, col), self.p) as u64;
            for c in 0..self.cols {
                let idx = row * self.cols + c;
                self.entries[idx] = (self.entries[idx] as u64 * inv % p) as u32;
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col) as u64;
                if factor == 0 {
                    continue;
                }
                for c in 0..self.cols {
                    let sub = factor * self.get(row, c) as u64 % p;
                    let idx = r * self.cols + c;
                    self.entries[idx] = ((self.entries[idx] as u64 + p - sub) % p) as u32;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Basis of the right null space `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref_pivots();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u32; self.cols];
                v[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    let e = m.get(r, f);
                    v[pc] = (self.p - e) % self.p;
                }
                v
            })
            .collect()
    }

    /// Some solution of `M x = b`, if the system is consistent.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        if b.len() != self.rows {
            return None;
        }
        let mut aug = Self::zeros(self.p, self.rows, self.cols + 1);
        for (r, &br) in b.iter().enumerate() {
            for c in 0..self.cols {
                aug.entries[r * (self.cols + 1) + c] = self.get(r, c);
            }
            aug.entries[r * (self.cols + 1) + self.cols] = br % self.p;
        }
        let pivots = aug.rref_pivots();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Some(x)
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(p={}, {:?})", self.p, self.row_vecs())
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u32> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(FpMatrix::new(4, 1, 1, vec![0]), Err(Error::NotPrime(4)));
    }

    #[test]
    fn rref_examples() {
        let id = FpMatrix::identity(2, 2);
        assert_eq!(id.rref(), (id.clone(), 2));

        let dup = FpMatrix::from_rows(2, &[vec![1, 1], vec![1, 1]]).unwrap();
        let expect = FpMatrix::from_rows(2, &[vec![1, 1], vec![0, 0]]).unwrap();
        assert_eq!(dup.rref(), (expect, 1));

        // det = 2*2 - 1*1 = 0 mod 3
        let m = FpMatrix::from_rows(3, &[vec![2, 1], vec![1, 2]]).unwrap();
        let expect = FpMatrix::from_rows(3, &[vec![1, 2], vec![0, 0]]).unwrap();
        assert_eq!(m.rref(), (expect, 1));
    }

    #[test]
    fn entries_must_be_reduced() {
        assert!(matches!(FpMatrix::new(3, 1, 2, vec![1, 3]), Err(Error::ValueOutOfRange { .. })));
    }

    #[test]
    fn kernel_and_solve() {
        let m = FpMatrix::from_rows(3, &[vec![2, 1], vec![1, 2]]).unwrap();
        let ker = m.kernel();
        assert_eq!(ker.len(), 1);
        assert_eq!(m.mul_vec(&ker[0]).unwrap(), vec![0, 0]);
        let x = m.solve(&[1, 2]).unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![1, 2]);
        assert!(m.solve(&[1, 0]).is_none());
    }

    #[test]
    fn shift_powers_are_nilpotent() {
        let j = FpMatrix::shift(5, 4);
        assert!(!j.pow(3).unwrap().is_zero());
        assert!(j.pow(4).unwrap().is_zero());
        assert_eq!(j.mul_vec(&[1, 0, 0, 0]).unwrap(), vec![0, 1, 0, 0]);
    }
}
