use std::cmp::Ordering;
use std::fmt;

use super::matrix::{check_prime, FpMatrix};
use crate::error::{Error, Result};

/// Vector `v` encoded as `Σ v_t · p^(n−t)`, first coordinate most significant.
pub fn encode_vector(v: &[u32], p: u32) -> u64 {
    v.iter().fold(0u64, |acc, &x| acc * p as u64 + x as u64)
}

pub fn decode_vector(mut code: u64, p: u32, n: usize) -> Vec<u32> {
    let mut v = vec![0u32; n];
    for slot in v.iter_mut().rev() {
        *slot = (code % p as u64) as u32;
        code /= p as u64;
    }
    v
}

pub(crate) fn add_vectors(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
}

pub(crate) fn sub_vectors(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| (x + p - y) % p).collect()
}

/// A subspace of F_p^n held in reduced row-echelon form.
///
/// The representation is canonical, so derived equality is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    p: u32,
    n: usize,
    basis: Vec<Vec<u32>>,
}

impl Subspace {
    pub fn zero(p: u32, n: usize) -> Self {
        Subspace { p, n, basis: Vec::new() }
    }

    pub fn full(p: u32, n: usize) -> Self {
        let basis = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                e
            })
            .collect();
        Subspace { p, n, basis }
    }

    /// Span of the given vectors.
    pub fn span(p: u32, n: usize, vectors: &[Vec<u32>]) -> Result<Self> {
        check_prime(p)?;
        for v in vectors {
            if v.len() != n {
                return Err(Error::DimensionMismatch(format!("vector of length {} in F_{p}^{n}", v.len())));
            }
            if let Some(&bad) = v.iter().find(|&&x| x >= p) {
                return Err(Error::ValueOutOfRange { value: bad as u64, bound: p as u64 });
            }
        }
        Ok(Self::span_unchecked(p, n, vectors))
    }

    pub(crate) fn span_unchecked(p: u32, n: usize, vectors: &[Vec<u32>]) -> Self {
        if vectors.is_empty() || n == 0 {
            return Subspace::zero(p, n);
        }
        let mut m = FpMatrix::from_raw(p, vectors.len(), n, vectors.concat());
        let rank = m.rref_in_place();
        let basis = (0..rank).map(|r| m.row(r).to_vec()).collect();
        Subspace { p, n, basis }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.n
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|row| row.iter().position(|&x| x != 0).expect("basis rows are nonzero")).collect()
    }

    /// Coordinates not used as pivots; they parametrize the quotient `F_p^n / W`.
    pub fn non_pivots(&self) -> Vec<usize> {
        let piv = self.pivots();
        (0..self.n).filter(|c| !piv.contains(c)).collect()
    }

    /// Reduces `v` against the basis. The result is zero exactly when `v ∈ W`,
    /// and is a canonical representative of the coset `v + W`.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut out = v.to_vec();
        for (row, piv) in self.basis.iter().zip(self.pivots()) {
            let f = out[piv];
            if f == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(row) {
                *o = (*o + p - (f * b) % p) % p;
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        v.len() == self.n && self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Self::span_unchecked(self.p, self.n, &vs)
    }

    pub fn is_invariant_under(&self, map: &FpMatrix) -> bool {
        self.basis.iter().all(|v| self.contains(&map.apply(v)))
    }

    /// All `p^dim` elements, in ascending order of their coefficient tuples.
    pub fn elements(&self) -> Vec<Vec<u32>> {
        let d = self.dim();
        let count = (self.p as u64).pow(d as u32);
        (0..count)
            .map(|code| {
                let coeffs = decode_vector(code, self.p, d);
                let mut v = vec![0u32; self.n];
                for (c, row) in coeffs.iter().zip(&self.basis) {
                    for (x, &b) in v.iter_mut().zip(row) {
                        *x = (*x + c * b) % self.p;
                    }
                }
                v
            })
            .collect()
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p, self.n, self.dim(), &self.basis).cmp(&(other.p, other.n, other.dim(), &other.basis))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(p={}, n={}, {:?})", self.p, self.n, self.basis)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "{{0}}");
        }
        let rows: Vec<String> =
            self.basis.iter().map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join("")).collect();
        write!(f, "<{}>", rows.join(", "))
    }
}
