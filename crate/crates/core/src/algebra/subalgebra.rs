use std::collections::{HashSet, VecDeque};

use super::{increment, LocalAlgebra};
use crate::caps::Caps;
use crate::error::{Error, Result};

impl LocalAlgebra {
    /// True iff `f` maps neighborhoods over `set` back into `set`.
    pub fn is_closed(&self, set: &[u32]) -> bool {
        if set.is_empty() {
            return false;
        }
        let mut inset = vec![false; self.m];
        for &s in set {
            if s as usize >= self.m {
                return false;
            }
            inset[s as usize] = true;
        }
        let k = self.arity();
        let mut idx = vec![0u32; k];
        let count = (set.len() as u64).pow(k as u32);
        for _ in 0..count {
            let nb: Vec<u32> = idx.iter().map(|&i| set[i as usize]).collect();
            if !inset[self.apply(&nb) as usize] {
                return false;
            }
            increment(&mut idx, set.len() as u32);
        }
        true
    }

    /// Least closed superset of `members`, extending a set whose first
    /// `closed_prefix` elements are already closed.
    fn close(&self, members: &mut Vec<u32>, inset: &mut [bool], mut closed_prefix: usize) {
        let k = self.arity();
        while closed_prefix < members.len() {
            let len = members.len();
            let mut idx = vec![0u32; k];
            let count = (len as u64).pow(k as u32);
            for _ in 0..count {
                if idx.iter().any(|&i| i as usize >= closed_prefix) {
                    let nb: Vec<u32> = idx.iter().map(|&i| members[i as usize]).collect();
                    let out = self.apply(&nb);
                    if !inset[out as usize] {
                        inset[out as usize] = true;
                        members.push(out);
                    }
                }
                increment(&mut idx, len as u32);
            }
            closed_prefix = len;
        }
    }

    /// The subalgebra generated by `seed`.
    pub fn generated(&self, seed: &[u32]) -> Result<Vec<u32>> {
        if seed.is_empty() {
            return Err(Error::Empty("generating set"));
        }
        let mut inset = vec![false; self.m];
        let mut members = Vec::new();
        for &s in seed {
            if s as usize >= self.m {
                return Err(Error::ValueOutOfRange { value: s as u64, bound: self.m as u64 });
            }
            if !inset[s as usize] {
                inset[s as usize] = true;
                members.push(s);
            }
        }
        self.close(&mut members, &mut inset, 0);
        members.sort_unstable();
        Ok(members)
    }

    /// Every nonempty closed subset, ordered by size and then lexicographically.
    pub fn subalgebras(&self, caps: &Caps) -> Result<Vec<Vec<u32>>> {
        let work =
            2u128.checked_pow(self.m as u32).and_then(|x| x.checked_mul(self.table.len() as u128)).unwrap_or(u128::MAX);
        if work > caps.subalgebra_work {
            return Err(Error::cap("subalgebra enumeration", work, caps.subalgebra_work));
        }
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut queue: VecDeque<Vec<u32>> = VecDeque::new();
        for s in 0..self.m as u32 {
            let c = self.generated(&[s])?;
            if seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
        while let Some(set) = queue.pop_front() {
            let mut inset = vec![false; self.m];
            set.iter().for_each(|&s| inset[s as usize] = true);
            for x in 0..self.m as u32 {
                if inset[x as usize] {
                    continue;
                }
                let mut members = set.clone();
                let mut ins = inset.clone();
                members.push(x);
                ins[x as usize] = true;
                self.close(&mut members, &mut ins, set.len());
                members.sort_unstable();
                if seen.insert(members.clone()) {
                    queue.push_back(members);
                }
            }
        }
        let mut all: Vec<Vec<u32>> = seen.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(all)
    }

    /// The subalgebra on `carrier`, with state `k` standing for the `k`-th smallest element.
    pub fn restrict(&self, carrier: &[u32]) -> Result<LocalAlgebra> {
        let mut sorted = carrier.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if !self.is_closed(&sorted) {
            return Err(Error::Precondition(format!("{sorted:?} is not closed under the rule")));
        }
        let mut pos = vec![u32::MAX; self.m];
        for (k, &s) in sorted.iter().enumerate() {
            pos[s as usize] = k as u32;
        }
        let n = sorted.len();
        let k = self.arity();
        let mut idx = vec![0u32; k];
        let count = (n as u64).pow(k as u32);
        let mut table = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let nb: Vec<u32> = idx.iter().map(|&i| sorted[i as usize]).collect();
            table.push(pos[self.apply(&nb) as usize]);
            increment(&mut idx, n as u32);
        }
        Ok(LocalAlgebra::from_raw(n, self.r, table))
    }
}
