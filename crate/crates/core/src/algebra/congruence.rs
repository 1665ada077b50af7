use std::collections::{HashSet, VecDeque};
use std::fmt;

use super::{increment, LocalAlgebra};
use crate::caps::Caps;
use crate::error::{Error, Result};

const MAX_CONGRUENCES: usize = 1_000_000;

/// An equivalence on `0..m`, stored as block labels numbered by least element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    labels: Vec<u32>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn into_congruence(mut self) -> Congruence {
        let roots: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Congruence::from_labels(&roots)
    }
}

impl Congruence {
    /// Canonicalizes arbitrary labels: blocks are renumbered by first occurrence.
    pub fn from_labels<T: Copy + Eq + std::hash::Hash>(raw: &[T]) -> Self {
        let mut seen: Vec<T> = Vec::new();
        let labels = raw
            .iter()
            .map(|x| match seen.iter().position(|y| y == x) {
                Some(i) => i as u32,
                None => {
                    seen.push(*x);
                    (seen.len() - 1) as u32
                }
            })
            .collect();
        Congruence { labels }
    }

    pub fn from_blocks(m: usize, blocks: &[Vec<u32>]) -> Result<Self> {
        let mut raw = vec![usize::MAX; m];
        for (b, block) in blocks.iter().enumerate() {
            for &s in block {
                let slot =
                    raw.get_mut(s as usize).ok_or(Error::ValueOutOfRange { value: s as u64, bound: m as u64 })?;
                if *slot != usize::MAX {
                    return Err(Error::IncompatiblePartition(format!("state {s} appears twice")));
                }
                *slot = b;
            }
        }
        if let Some(s) = raw.iter().position(|&b| b == usize::MAX) {
            return Err(Error::IncompatiblePartition(format!("state {s} is in no block")));
        }
        Ok(Self::from_labels(&raw))
    }

    pub fn discrete(m: usize) -> Self {
        Congruence { labels: (0..m as u32).collect() }
    }

    pub fn full(m: usize) -> Self {
        Congruence { labels: vec![0; m] }
    }

    pub fn states(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, s: u32) -> u32 {
        self.labels[s as usize]
    }

    pub fn block_count(&self) -> usize {
        self.labels.iter().max().map_or(0, |&x| x as usize + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<u32>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (s, &l) in self.labels.iter().enumerate() {
            blocks[l as usize].push(s as u32);
        }
        blocks
    }

    /// Least element of each block.
    pub fn representatives(&self) -> Vec<u32> {
        self.blocks().iter().map(|b| b[0]).collect()
    }

    pub fn related(&self, a: u32, b: u32) -> bool {
        self.labels[a as usize] == self.labels[b as usize]
    }

    pub fn is_discrete(&self) -> bool {
        self.block_count() == self.states()
    }

    pub fn is_full(&self) -> bool {
        self.block_count() <= 1
    }

    /// Equivalence join.
    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::new(self.states());
        let (ra, rb) = (self.representatives(), other.representatives());
        for (s, (&a, &b)) in self.labels.iter().zip(&other.labels).enumerate() {
            uf.union(s, ra[a as usize] as usize);
            uf.union(s, rb[b as usize] as usize);
        }
        uf.into_congruence()
    }

    /// Every pair related here is related in `other`.
    pub fn refines(&self, other: &Congruence) -> bool {
        let reps = self.representatives();
        (0..self.states() as u32).all(|s| other.related(s, reps[self.label(s) as usize]))
    }
}

impl fmt::Debug for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Congruence({self})")
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(u32::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", blocks.join(" "))
    }
}

impl LocalAlgebra {
    /// Checks compatibility: `f(x) ~ f(rep(x))` for every neighborhood.
    pub fn check_congruence(&self, c: &Congruence) -> Result<()> {
        if c.states() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "partition of {} states for a {}-state algebra",
                c.states(),
                self.m
            )));
        }
        let reps = c.representatives();
        for idx in 0..self.table.len() {
            let nb = self.neighborhood(idx);
            let rep: Vec<u32> = nb.iter().map(|&s| reps[c.label(s) as usize]).collect();
            if !c.related(self.table[idx], self.apply(&rep)) {
                return Err(Error::IncompatiblePartition(format!(
                    "f{nb:?} = {} but f{rep:?} = {}",
                    self.table[idx],
                    self.apply(&rep)
                )));
            }
        }
        Ok(())
    }

    pub fn is_congruence(&self, c: &Congruence) -> bool {
        self.check_congruence(c).is_ok()
    }

    /// Least congruence relating `a` and `b`.
    pub fn principal_congruence(&self, a: u32, b: u32) -> Congruence {
        let mut uf = UnionFind::new(self.m);
        let mut queue = VecDeque::new();
        if uf.union(a as usize, b as usize) {
            queue.push_back((a, b));
        }
        let k = self.arity();
        while let Some((x, y)) = queue.pop_front() {
            for pos in 0..k {
                let stride = self.m.pow((k - 1 - pos) as u32);
                let mut ctx = vec![0u32; k - 1];
                for _ in 0..self.m.pow((k - 1) as u32) {
                    let base = ctx[..pos].iter().fold(0usize, |acc, &d| acc * self.m + d as usize);
                    let base =
                        base * self.m * stride + ctx[pos..].iter().fold(0usize, |acc, &d| acc * self.m + d as usize);
                    let u = self.table[base + x as usize * stride];
                    let v = self.table[base + y as usize * stride];
                    if uf.union(u as usize, v as usize) {
                        queue.push_back((u, v));
                    }
                    increment(&mut ctx, self.m as u32);
                }
            }
        }
        uf.into_congruence()
    }

    /// All congruences, most blocks first, then by labels.
    pub fn congruences(&self, caps: &Caps) -> Result<Vec<Congruence>> {
        if self.m > caps.congruence_states {
            return Err(Error::cap("congruence enumeration", self.m as u128, caps.congruence_states as u128));
        }
        let mut principal = Vec::new();
        for a in 0..self.m as u32 {
            for b in a + 1..self.m as u32 {
                principal.push(((a, b), self.principal_congruence(a, b)));
            }
        }
        let start = Congruence::discrete(self.m);
        let mut seen: HashSet<Congruence> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            for ((a, b), pc) in &principal {
                if c.related(*a, *b) {
                    continue;
                }
                let j = c.join(pc);
                if seen.insert(j.clone()) {
                    if seen.len() > MAX_CONGRUENCES {
                        return Err(Error::cap("congruence lattice size", seen.len() as u128, MAX_CONGRUENCES as u128));
                    }
                    queue.push_back(j);
                }
            }
        }
        let mut all: Vec<Congruence> = seen.into_iter().collect();
        all.sort_by(|x, y| y.block_count().cmp(&x.block_count()).then_with(|| x.cmp(y)));
        Ok(all)
    }

    /// The quotient algebra; state `k` is the `k`-th block.
    pub fn quotient(&self, c: &Congruence) -> Result<LocalAlgebra> {
        self.check_congruence(c)?;
        let reps = c.representatives();
        let n = reps.len();
        let k = self.arity();
        let mut idx = vec![0u32; k];
        let count = (n as u64).pow(k as u32);
        let mut table = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let nb: Vec<u32> = idx.iter().map(|&b| reps[b as usize]).collect();
            table.push(c.label(self.apply(&nb)));
            increment(&mut idx, n as u32);
        }
        Ok(LocalAlgebra::from_raw(n, self.r, table))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> LocalAlgebra {
        LocalAlgebra::from_fn(4, 1, &Caps::default(), |x| (x[0] + x[2]) % 4).unwrap()
    }

    #[test]
    fn canonical_labels() {
        let c = Congruence::from_labels(&[7, 3, 7, 3]);
        assert_eq!(c.labels(), &[0, 1, 0, 1]);
        assert_eq!(c.blocks(), vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(c.to_string(), "{0,2} {1,3}");
        assert_eq!(Congruence::from_blocks(4, &[vec![3, 1], vec![2, 0]]).unwrap(), c);
    }

    #[test]
    fn z4_has_parity() {
        let parity = Congruence::from_blocks(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let all = z4().congruences(&Caps::default()).unwrap();
        assert!(all.contains(&parity));
        assert!(all.contains(&Congruence::discrete(4)));
        assert!(all.contains(&Congruence::full(4)));
        assert_eq!(z4().principal_congruence(0, 2), parity);
    }

    #[test]
    fn eca150_only_trivial() {
        let all = LocalAlgebra::eca(150).congruences(&Caps::default()).unwrap();
        assert_eq!(all, vec![Congruence::discrete(2), Congruence::full(2)]);
    }

    #[test]
    fn quotient_by_full_is_singleton() {
        let q = z4().quotient(&Congruence::full(4)).unwrap();
        assert_eq!(q, LocalAlgebra::singleton(1));
        assert_eq!(z4().quotient(&Congruence::discrete(4)).unwrap(), z4());
        assert!(matches!(
            z4().quotient(&Congruence::from_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap()),
            Err(Error::IncompatiblePartition(_))
        ));
    }
}
