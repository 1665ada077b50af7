use serde::{Deserialize, Serialize};

use super::{increment, LocalAlgebra};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// A map between state sets, `self.0[s]` being the image of `s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateMap(pub Vec<u32>);

impl StateMap {
    pub fn identity(m: usize) -> Self {
        StateMap((0..m as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, s: u32) -> u32 {
        self.0[s as usize]
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        self.0.iter().all(|&t| (t as usize) < seen.len() && !std::mem::replace(&mut seen[t as usize], true))
    }

    pub fn inverse(&self) -> Option<StateMap> {
        if !self.is_bijection() {
            return None;
        }
        let mut inv = vec![0u32; self.0.len()];
        for (s, &t) in self.0.iter().enumerate() {
            inv[t as usize] = s as u32;
        }
        Some(StateMap(inv))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &StateMap) -> StateMap {
        StateMap(self.0.iter().map(|&t| next.apply(t)).collect())
    }

    /// Checks `φ(f(x)) = g(φ(x))` on every neighborhood of `a`.
    pub fn is_homomorphism(&self, a: &LocalAlgebra, b: &LocalAlgebra) -> bool {
        if self.0.len() != a.states() || a.radius() != b.radius() {
            return false;
        }
        if self.0.iter().any(|&t| t as usize >= b.states()) {
            return false;
        }
        (0..a.table().len()).all(|idx| {
            let nb: Vec<u32> = a.neighborhood(idx).iter().map(|&s| self.apply(s)).collect();
            self.apply(a.table()[idx]) == b.apply(&nb)
        })
    }

    pub fn is_isomorphism(&self, a: &LocalAlgebra, b: &LocalAlgebra) -> bool {
        a.states() == b.states() && self.is_bijection() && self.is_homomorphism(a, b)
    }
}

/// Isomorphism-invariant data of one state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct StateInvariant {
    idempotent: bool,
    tail: u32,
    cycle: u32,
    preimages: u64,
}

fn state_invariants(a: &LocalAlgebra) -> Vec<StateInvariant> {
    let m = a.states();
    let mut preimages = vec![0u64; m];
    for &t in a.table() {
        preimages[t as usize] += 1;
    }
    (0..m as u32)
        .map(|s| {
            let mut first_seen = vec![u32::MAX; m];
            let mut cur = s;
            let mut step = 0u32;
            while first_seen[cur as usize] == u32::MAX {
                first_seen[cur as usize] = step;
                cur = a.diagonal(cur);
                step += 1;
            }
            let tail = first_seen[cur as usize];
            StateInvariant {
                idempotent: a.diagonal(s) == s,
                tail,
                cycle: step - tail,
                preimages: preimages[s as usize],
            }
        })
        .collect()
}

/// Sorted per-state invariants; isomorphic algebras have equal signatures.
pub fn invariant_signature(a: &LocalAlgebra) -> Vec<(bool, u32, u32, u64)> {
    let mut sig: Vec<_> =
        state_invariants(a).into_iter().map(|i| (i.idempotent, i.tail, i.cycle, i.preimages)).collect();
    sig.sort_unstable();
    sig
}

struct Search<'a> {
    a: &'a LocalAlgebra,
    b: &'a LocalAlgebra,
    inv_a: Vec<StateInvariant>,
    inv_b: Vec<StateInvariant>,
    phi: Vec<u32>,
    used: Vec<bool>,
    assigned: Vec<u32>,
}

const UNSET: u32 = u32::MAX;

impl Search<'_> {
    fn undo(&mut self, mark: usize) {
        while self.assigned.len() > mark {
            let s = self.assigned.pop().expect("trail is nonempty");
            self.used[self.phi[s as usize] as usize] = false;
            self.phi[s as usize] = UNSET;
        }
    }

    fn set(&mut self, s: u32, t: u32) -> bool {
        if self.used[t as usize] || self.inv_a[s as usize] != self.inv_b[t as usize] {
            return false;
        }
        self.phi[s as usize] = t;
        self.used[t as usize] = true;
        self.assigned.push(s);
        true
    }

    /// Assigns `φ(s) = t` and every value it forces.
    fn assign(&mut self, s: u32, t: u32) -> bool {
        if !self.set(s, t) {
            return false;
        }
        let k = self.a.arity();
        let mut next = self.assigned.len() - 1;
        while next < self.assigned.len() {
            let s = self.assigned[next];
            next += 1;
            let pool = self.assigned.clone();
            let n = pool.len();
            for pos in 0..k {
                let mut idx = vec![0u32; k - 1];
                for _ in 0..(n as u64).pow((k - 1) as u32) {
                    let mut nb = Vec::with_capacity(k);
                    nb.extend(idx[..pos].iter().map(|&i| pool[i as usize]));
                    nb.push(s);
                    nb.extend(idx[pos..].iter().map(|&i| pool[i as usize]));
                    let y = self.a.apply(&nb);
                    let image: Vec<u32> = nb.iter().map(|&x| self.phi[x as usize]).collect();
                    let z = self.b.apply(&image);
                    match self.phi[y as usize] {
                        UNSET => {
                            if !self.set(y, z) {
                                return false;
                            }
                        }
                        w if w != z => return false,
                        _ => {}
                    }
                    increment(&mut idx, n as u32);
                }
            }
        }
        true
    }

    fn solve(&mut self) -> bool {
        let Some(s) = self.phi.iter().position(|&t| t == UNSET) else {
            return true;
        };
        for t in 0..self.b.states() as u32 {
            let mark = self.assigned.len();
            if self.assign(s as u32, t) && self.solve() {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

impl LocalAlgebra {
    /// Lexicographically least isomorphism onto `other`, by backtracking.
    pub fn isomorphism_search(&self, other: &LocalAlgebra, caps: &Caps) -> Result<Option<StateMap>> {
        if self.r != other.r {
            return Err(Error::RadiusMismatch(self.r, other.r));
        }
        if self.m != other.m || invariant_signature(self) != invariant_signature(other) {
            return Ok(None);
        }
        if self.m > caps.iso_states {
            return Err(Error::cap("isomorphism search", self.m as u128, caps.iso_states as u128));
        }
        let mut search = Search {
            a: self,
            b: other,
            inv_a: state_invariants(self),
            inv_b: state_invariants(other),
            phi: vec![UNSET; self.m],
            used: vec![false; self.m],
            assigned: Vec::new(),
        };
        if !search.solve() {
            return Ok(None);
        }
        let phi = StateMap(search.phi);
        debug_assert!(phi.is_isomorphism(self, other));
        Ok(Some(phi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_isomorphism_is_identity() {
        let a = LocalAlgebra::eca(110);
        let phi = a.isomorphism_search(&a, &Caps::default()).unwrap().unwrap();
        assert_eq!(phi, StateMap::identity(2));
    }

    #[test]
    fn eca90_and_eca150_differ() {
        let caps = Caps::default();
        let found = LocalAlgebra::eca(90).isomorphism_search(&LocalAlgebra::eca(150), &caps).unwrap();
        assert!(found.is_none());
    }

    #[test]
    fn complement_conjugates() {
        // Relabeling by a permutation gives an isomorphic copy.
        let a = LocalAlgebra::eca(110);
        let flip = StateMap(vec![1, 0]);
        let b = a.relabel(&flip.0).unwrap();
        let phi = a.isomorphism_search(&b, &Caps::default()).unwrap().unwrap();
        assert_eq!(phi, flip);
    }

    #[test]
    fn cap_applies() {
        let a = LocalAlgebra::eca(150).power(4, &Caps::default()).unwrap();
        assert!(matches!(a.isomorphism_search(&a, &Caps::default()), Err(Error::CapExceeded { .. })));
    }
}
