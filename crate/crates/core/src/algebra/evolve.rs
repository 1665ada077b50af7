use serde::Serialize;

use super::LocalAlgebra;
use crate::error::{Error, Result};

/// How cells outside the initial word are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// The word sits in a uniform background that evolves as `b ← f(b, …, b)`.
    Background(u32),
    /// The word is centered on a ring of the given length, padded with state 0.
    Cyclic(usize),
}

/// Successive global images of a finite initial configuration.
///
/// In background mode row `k` covers cells `origin(k) ..` and every cell
/// outside that window holds `background(k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceTimeDiagram {
    states: usize,
    cyclic: bool,
    rows: Vec<Vec<u32>>,
    origins: Vec<i64>,
    backgrounds: Vec<u32>,
}

impl SpaceTimeDiagram {
    pub fn states(&self) -> usize {
        self.states
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn steps(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn origin(&self, k: usize) -> i64 {
        self.origins[k]
    }

    pub fn background(&self, k: usize) -> u32 {
        self.backgrounds[k]
    }

    /// State of cell `pos` at time `k`.
    pub fn cell(&self, k: usize, pos: i64) -> u32 {
        let row = &self.rows[k];
        let off = pos - self.origins[k];
        if self.cyclic {
            row[off.rem_euclid(row.len() as i64) as usize]
        } else if (0..row.len() as i64).contains(&off) {
            row[off as usize]
        } else {
            self.backgrounds[k]
        }
    }

    /// Leftmost cell index over all rows.
    pub fn min_origin(&self) -> i64 {
        self.origins.iter().copied().min().unwrap_or(0)
    }

    /// One past the rightmost cell index over all rows.
    pub fn max_end(&self) -> i64 {
        self.rows.iter().zip(&self.origins).map(|(r, &o)| o + r.len() as i64).max().unwrap_or(0)
    }
}

impl LocalAlgebra {
    pub fn evolve(&self, word: &[u32], boundary: Boundary, steps: usize) -> Result<SpaceTimeDiagram> {
        if word.is_empty() {
            return Err(Error::Empty("initial word"));
        }
        if let Some(&bad) = word.iter().find(|&&s| s as usize >= self.m) {
            return Err(Error::ValueOutOfRange { value: bad as u64, bound: self.m as u64 });
        }
        match boundary {
            Boundary::Background(b) => self.evolve_background(word, b, steps),
            Boundary::Cyclic(n) => self.evolve_cyclic(word, n, steps),
        }
    }

    fn evolve_background(&self, word: &[u32], b: u32, steps: usize) -> Result<SpaceTimeDiagram> {
        if b as usize >= self.m {
            return Err(Error::ValueOutOfRange { value: b as u64, bound: self.m as u64 });
        }
        let r = self.r;
        let mut rows = vec![word.to_vec()];
        let mut origins = vec![0i64];
        let mut backgrounds = vec![b];
        for k in 0..steps {
            let bg = backgrounds[k];
            let mut padded = vec![bg; 2 * r];
            padded.extend_from_slice(&rows[k]);
            padded.extend(std::iter::repeat_n(bg, 2 * r));
            rows.push(self.unravel_once(&padded));
            origins.push(origins[k] - r as i64);
            backgrounds.push(self.diagonal(bg));
        }
        Ok(SpaceTimeDiagram { states: self.m, cyclic: false, rows, origins, backgrounds })
    }

    fn evolve_cyclic(&self, word: &[u32], n: usize, steps: usize) -> Result<SpaceTimeDiagram> {
        if n < word.len() {
            return Err(Error::Precondition(format!("ring of {n} cells cannot hold a word of length {}", word.len())));
        }
        let offset = (n - word.len()) / 2;
        let mut first = vec![0u32; n];
        first[offset..offset + word.len()].copy_from_slice(word);
        let r = self.r;
        let mut rows = vec![first];
        for k in 0..steps {
            let cur = &rows[k];
            let mut padded = Vec::with_capacity(n + 2 * r);
            padded.extend((0..r).map(|i| cur[(n * (r + 1) - r + i) % n]));
            padded.extend_from_slice(cur);
            padded.extend((0..r).map(|i| cur[i % n]));
            rows.push(self.unravel_once(&padded));
        }
        let count = rows.len();
        Ok(SpaceTimeDiagram {
            states: self.m,
            cyclic: true,
            rows,
            origins: vec![-(offset as i64); count],
            backgrounds: vec![0; count],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;

    #[test]
    fn eca90_light_cone() {
        let d = LocalAlgebra::eca(90).evolve(&[1], Boundary::Background(0), 2).unwrap();
        assert_eq!(d.rows(), &[vec![1], vec![1, 0, 1], vec![1, 0, 0, 0, 1]]);
        assert_eq!(d.origin(2), -2);
        assert_eq!(d.cell(2, 5), 0);
    }

    #[test]
    fn zero_rule_clears() {
        let d = LocalAlgebra::eca(0).evolve(&[1, 1, 0, 1], Boundary::Background(1), 3).unwrap();
        for row in &d.rows()[1..] {
            assert!(row.iter().all(|&s| s == 0));
        }
        assert_eq!(d.background(1), 0);
    }

    #[test]
    fn background_evolves() {
        // x+y+z+1 mod 2 has no quiescent state.
        let d = LocalAlgebra::eca(105).evolve(&[0], Boundary::Background(0), 2).unwrap();
        assert_eq!(d.background(1), 1);
        assert_eq!(d.background(2), 0);
        assert_eq!(d.rows()[1], vec![1, 1, 1]);
    }

    #[test]
    fn cyclic_wraps() {
        let a = LocalAlgebra::from_fn(2, 1, &Caps::default(), |x| x[0]).unwrap();
        let d = a.evolve(&[1, 0, 0], Boundary::Cyclic(3), 3).unwrap();
        assert_eq!(d.rows()[1], vec![0, 1, 0]);
        assert_eq!(d.rows()[3], vec![1, 0, 0]);
    }
}
