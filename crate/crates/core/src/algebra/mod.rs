//! Cellular automaton local rules as explicit truth tables.

mod congruence;
mod evolve;
mod iso;
mod subalgebra;
mod translate;

use std::fmt;

pub use congruence::Congruence;
pub use evolve::{Boundary, SpaceTimeDiagram};
pub use iso::{invariant_signature, StateMap};
pub use translate::{check_translation, TranslationKind, TranslationReport};

use crate::caps::Caps;
use crate::error::{Error, Result};

/// A local rule `f : S^(2r+1) → S` on the states `0..m`.
///
/// `table[idx]` is the output on the neighborhood `x_{-r..r}` where
/// `idx = Σ_k x_{-r+k} · m^(2r-k)`, so the leftmost cell is most significant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocalAlgebra {
    m: usize,
    r: usize,
    table: Vec<u32>,
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<u64> {
    (base as u64).checked_pow(exp as u32)
}

fn table_len(m: usize, r: usize, caps: &Caps) -> Result<usize> {
    match checked_pow(m, 2 * r + 1) {
        Some(len) if len <= caps.table => Ok(len as usize),
        Some(len) => Err(Error::cap("truth table", len as u128, caps.table as u128)),
        None => Err(Error::cap("truth table", u128::MAX, caps.table as u128)),
    }
}

impl LocalAlgebra {
    pub fn new(m: usize, r: usize, table: Vec<u32>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Empty("state set"));
        }
        let expected = checked_pow(m, 2 * r + 1).ok_or(Error::cap("truth table", u128::MAX, u64::MAX as u128))?;
        if table.len() as u64 != expected {
            return Err(Error::DimensionMismatch(format!(
                "table has {} entries, {m} states at radius {r} need {expected}",
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&s| s as usize >= m) {
            return Err(Error::ValueOutOfRange { value: bad as u64, bound: m as u64 });
        }
        Ok(LocalAlgebra { m, r, table })
    }

    pub(crate) fn from_raw(m: usize, r: usize, table: Vec<u32>) -> Self {
        debug_assert_eq!(Some(table.len() as u64), checked_pow(m, 2 * r + 1));
        LocalAlgebra { m, r, table }
    }

    /// Tabulates `f` over every neighborhood.
    pub fn from_fn(m: usize, r: usize, caps: &Caps, f: impl Fn(&[u32]) -> u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Empty("state set"));
        }
        let len = table_len(m, r, caps)?;
        let mut nb = vec![0u32; 2 * r + 1];
        let mut table = Vec::with_capacity(len);
        for _ in 0..len {
            let out = f(&nb);
            if out as usize >= m {
                return Err(Error::ValueOutOfRange { value: out as u64, bound: m as u64 });
            }
            table.push(out);
            increment(&mut nb, m as u32);
        }
        Ok(LocalAlgebra { m, r, table })
    }

    /// Elementary automaton with the given Wolfram number.
    pub fn eca(number: u8) -> Self {
        let table = (0..8).map(|v| ((number >> v) & 1) as u32).collect();
        LocalAlgebra { m: 2, r: 1, table }
    }

    /// The one-state algebra of radius `r`.
    pub fn singleton(r: usize) -> Self {
        LocalAlgebra { m: 1, r, table: vec![0] }
    }

    pub fn states(&self) -> usize {
        self.m
    }

    pub fn radius(&self) -> usize {
        self.r
    }

    pub fn arity(&self) -> usize {
        2 * self.r + 1
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn index(&self, nb: &[u32]) -> usize {
        nb.iter().fold(0usize, |acc, &x| acc * self.m + x as usize)
    }

    pub fn neighborhood(&self, mut idx: usize) -> Vec<u32> {
        let mut nb = vec![0u32; self.arity()];
        for slot in nb.iter_mut().rev() {
            *slot = (idx % self.m) as u32;
            idx /= self.m;
        }
        nb
    }

    pub fn apply(&self, nb: &[u32]) -> u32 {
        self.table[self.index(nb)]
    }

    /// `f(s, …, s)`.
    pub fn diagonal(&self, s: u32) -> u32 {
        let step: usize = (0..self.arity()).fold(0, |acc, _| acc * self.m + 1);
        self.table[s as usize * step]
    }

    pub fn idempotents(&self) -> Vec<u32> {
        (0..self.m as u32).filter(|&s| self.diagonal(s) == s).collect()
    }

    /// Applies the rule at every window of `word`, `iterations` times.
    pub fn unravel(&self, word: &[u32], iterations: usize) -> Result<Vec<u32>> {
        let need = 2 * self.r * iterations + 1;
        if word.len() < need {
            return Err(Error::WordTooShort { len: word.len(), iterations, radius: self.r });
        }
        if let Some(&bad) = word.iter().find(|&&s| s as usize >= self.m) {
            return Err(Error::ValueOutOfRange { value: bad as u64, bound: self.m as u64 });
        }
        let mut cur = word.to_vec();
        for _ in 0..iterations {
            cur = self.unravel_once(&cur);
        }
        Ok(cur)
    }

    pub(crate) fn unravel_once(&self, word: &[u32]) -> Vec<u32> {
        word.windows(self.arity()).map(|w| self.apply(w)).collect()
    }

    /// The iterative power acting on blocks of `n` cells.
    pub fn power(&self, n: usize, caps: &Caps) -> Result<LocalAlgebra> {
        if n == 0 {
            return Err(Error::Precondition("power exponent must be positive".into()));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let big_m = checked_pow(self.m, n).filter(|&v| v <= u32::MAX as u64).ok_or(Error::cap(
            "iterative power",
            u128::MAX,
            caps.table as u128,
        ))? as usize;
        let len = table_len(big_m, self.r, caps)?;
        let k = self.arity();
        let mut cells = vec![0u32; k * n];
        let mut table = Vec::with_capacity(len);
        for _ in 0..len {
            let mut cur = cells.clone();
            for _ in 0..n {
                cur = self.unravel_once(&cur);
            }
            table.push(encode_block(&cur, self.m));
            increment(&mut cells, self.m as u32);
        }
        Ok(LocalAlgebra { m: big_m, r: self.r, table })
    }

    /// Direct product with mixed-radix state encoding, first factor most significant.
    pub fn product(factors: &[LocalAlgebra], caps: &Caps) -> Result<LocalAlgebra> {
        let first = factors.first().ok_or(Error::Empty("product of no factors"))?;
        let r = first.r;
        if let Some(bad) = factors.iter().find(|a| a.r != r) {
            return Err(Error::RadiusMismatch(r, bad.r));
        }
        let m = factors
            .iter()
            .try_fold(1u64, |acc, a| acc.checked_mul(a.m as u64))
            .filter(|&v| v <= u32::MAX as u64)
            .ok_or(Error::cap("product", u128::MAX, caps.table as u128))? as usize;
        let sizes: Vec<usize> = factors.iter().map(|a| a.m).collect();
        Self::from_fn(m, r, caps, |nb| {
            let parts: Vec<Vec<u32>> = nb.iter().map(|&s| split_mixed(s, &sizes)).collect();
            let outs: Vec<u32> = factors
                .iter()
                .enumerate()
                .map(|(f, a)| {
                    let sub: Vec<u32> = parts.iter().map(|p| p[f]).collect();
                    a.apply(&sub)
                })
                .collect();
            join_mixed(&outs, &sizes)
        })
    }

    /// Left and right permutivity witnesses as positions in `-r..=r`.
    pub fn permutivity(&self) -> (Option<isize>, Option<isize>) {
        let k = self.arity();
        let left = (0..k).find(|&i| self.permutive_at(i) && (0..i).all(|c| self.independent_of(c)));
        let right = (0..k).rev().find(|&i| self.permutive_at(i) && (i + 1..k).all(|c| self.independent_of(c)));
        let r = self.r as isize;
        (left.map(|i| i as isize - r), right.map(|i| i as isize - r))
    }

    /// `x_i ↦ f(…)` is a bijection for every context.
    fn permutive_at(&self, i: usize) -> bool {
        let k = self.arity();
        let stride = (self.m).pow((k - 1 - i) as u32);
        let mut seen = vec![false; self.m];
        for ctx in 0..self.table.len() {
            if !(ctx / stride).is_multiple_of(self.m) {
                continue;
            }
            seen.iter_mut().for_each(|b| *b = false);
            for s in 0..self.m {
                let out = self.table[ctx + s * stride] as usize;
                if seen[out] {
                    return false;
                }
                seen[out] = true;
            }
        }
        true
    }

    /// `f` ignores the cell at array position `i`.
    pub(crate) fn independent_of(&self, i: usize) -> bool {
        let stride = self.m.pow((self.arity() - 1 - i) as u32);
        (0..self.table.len()).filter(|ctx| (ctx / stride).is_multiple_of(self.m)).all(|ctx| {
            let base = self.table[ctx];
            (1..self.m).all(|s| self.table[ctx + s * stride] == base)
        })
    }

    /// Relabels states: the result sends `φ(x)` to `φ(f(x))`.
    pub fn relabel(&self, phi: &[u32]) -> Result<LocalAlgebra> {
        if phi.len() != self.m {
            return Err(Error::DimensionMismatch("relabeling has the wrong length".into()));
        }
        let mut inv = vec![u32::MAX; self.m];
        for (s, &t) in phi.iter().enumerate() {
            if t as usize >= self.m || inv[t as usize] != u32::MAX {
                return Err(Error::Precondition("relabeling is not a bijection".into()));
            }
            inv[t as usize] = s as u32;
        }
        let table = (0..self.table.len())
            .map(|idx| {
                let nb: Vec<u32> = self.neighborhood(idx).iter().map(|&t| inv[t as usize]).collect();
                phi[self.apply(&nb) as usize]
            })
            .collect();
        Ok(LocalAlgebra { m: self.m, r: self.r, table })
    }
}

/// Advances a base-`m` odometer whose last digit moves fastest.
pub(crate) fn increment(digits: &mut [u32], m: u32) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < m {
            return;
        }
        *d = 0;
    }
}

pub(crate) fn encode_block(cells: &[u32], m: usize) -> u32 {
    cells.iter().fold(0u64, |acc, &x| acc * m as u64 + x as u64) as u32
}

fn split_mixed(mut s: u32, sizes: &[usize]) -> Vec<u32> {
    let mut out = vec![0u32; sizes.len()];
    for (slot, &m) in out.iter_mut().zip(sizes).rev() {
        *slot = s % m as u32;
        s /= m as u32;
    }
    out
}

fn join_mixed(parts: &[u32], sizes: &[usize]) -> u32 {
    parts.iter().zip(sizes).fold(0u32, |acc, (&x, &m)| acc * m as u32 + x)
}

/// Expands block-encoded states into base cells, most significant digit first.
pub fn unpack(blocks: &[u32], m: usize, n: usize) -> Result<Vec<u32>> {
    let bound = checked_pow(m, n).ok_or(Error::cap("unpack", u128::MAX, u64::MAX as u128))?;
    let mut out = Vec::with_capacity(blocks.len() * n);
    for &b in blocks {
        if b as u64 >= bound {
            return Err(Error::ValueOutOfRange { value: b as u64, bound });
        }
        let mut digits = vec![0u32; n];
        let mut v = b as usize;
        for d in digits.iter_mut().rev() {
            *d = (v % m) as u32;
            v /= m;
        }
        out.extend(digits);
    }
    Ok(out)
}

impl fmt::Debug for LocalAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalAlgebra(m={}, r={}, {:?})", self.m, self.r, self.table)
    }
}
