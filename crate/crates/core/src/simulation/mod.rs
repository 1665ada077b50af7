//! The simulation preorder and its bounded closure search.

mod decide;
mod verify;

use serde::Serialize;

pub use decide::{as_canonical_additive, partitions_coprime, simulates, SimulationWitness, Verdict};
pub use verify::{
    classify_canonical, verify_affine_closure, verify_characterization, AffineClosureReport, CapacityClass,
    CharacterizationReport, ClosureItem, MemberCheck, Outcome,
};

use crate::affine::are_isomorphic;
use crate::algebra::{invariant_signature, Congruence, LocalAlgebra, StateMap};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// Limits of the bounded closure search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Largest iterative power.
    pub n_max: usize,
    /// Largest number of factors in a product.
    pub k_max: usize,
    /// Largest product size.
    pub size_cap: usize,
    pub caps: Caps,
}

impl Bounds {
    pub fn new(n_max: usize, k_max: usize, size_cap: usize) -> Self {
        let caps = Caps { congruence_states: Caps::default().congruence_states.max(size_cap), ..Caps::default() };
        Bounds { n_max, k_max, size_cap, caps }
    }

    /// Replaces the work limits, keeping congruence enumeration wide enough for `size_cap`.
    pub fn with_caps(mut self, caps: Caps) -> Self {
        self.caps = Caps { congruence_states: caps.congruence_states.max(self.size_cap), ..caps };
        self
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::new(2, 2, 16)
    }
}

/// How a closure member arises from the generator: a product of iterative
/// powers, restricted to a subalgebra, divided by a congruence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Derivation {
    /// Exponents of the factors `B^[n]`; empty means the one-state algebra.
    pub powers: Vec<usize>,
    /// States of the product.
    pub product_states: usize,
    /// Sorted carrier of the subalgebra of the product.
    pub carrier: Vec<u32>,
    /// Congruence labels on the subalgebra's states.
    pub congruence: Vec<u32>,
}

impl Derivation {
    /// Rebuilds the member from the generator.
    pub fn build(&self, b: &LocalAlgebra, caps: &Caps) -> Result<LocalAlgebra> {
        let product = self.product(b, caps)?;
        let sub = product.restrict(&self.carrier)?;
        sub.quotient(&Congruence::from_labels(&self.congruence))
    }

    fn product(&self, b: &LocalAlgebra, caps: &Caps) -> Result<LocalAlgebra> {
        if self.powers.is_empty() {
            return Ok(LocalAlgebra::singleton(b.radius()));
        }
        let factors = self.powers.iter().map(|&n| b.power(n, caps)).collect::<Result<Vec<_>>>()?;
        LocalAlgebra::product(&factors, caps)
    }

    /// The whole product, unrestricted and undivided.
    pub fn product_of(powers: Vec<usize>, states: usize) -> Self {
        Derivation {
            powers,
            product_states: states,
            carrier: (0..states as u32).collect(),
            congruence: (0..states as u32).collect(),
        }
    }

    pub fn describe(&self) -> String {
        let prod = if self.powers.is_empty() {
            "1".to_string()
        } else {
            self.powers.iter().map(|n| format!("B^[{n}]")).collect::<Vec<_>>().join(" x ")
        };
        let full = self.carrier.len() == self.product_states;
        let sub = if full { String::new() } else { format!(" | S{:?}", self.carrier) };
        let cong = Congruence::from_labels(&self.congruence);
        let quo = if cong.is_discrete() { String::new() } else { format!(" / {cong}") };
        format!("{prod}{sub}{quo}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub algebra: LocalAlgebra,
    pub derivation: Derivation,
}

/// Pairwise non-isomorphic members of the bounded closure of a generator.
#[derive(Clone, Debug)]
pub struct ClosureInventory {
    pub generator: LocalAlgebra,
    pub bounds: Bounds,
    pub members: Vec<Member>,
    /// Some branch exceeded a cap and was skipped.
    pub truncated: bool,
    pub notes: Vec<String>,
}

impl ClosureInventory {
    /// A member isomorphic to `a`, with the isomorphism from the member onto `a`.
    pub fn find(&self, a: &LocalAlgebra) -> Result<Option<(&Member, StateMap)>> {
        let sig = invariant_signature(a);
        for m in &self.members {
            if m.algebra.states() != a.states() || invariant_signature(&m.algebra) != sig {
                continue;
            }
            if let Some(phi) = are_isomorphic(&m.algebra, a, &self.bounds.caps)? {
                return Ok(Some((m, phi)));
            }
        }
        Ok(None)
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.members.iter().map(|m| m.algebra.states()).collect();
        s.sort_unstable();
        s.dedup();
        s
    }
}

/// Nonincreasing exponent lists of length `1..=k_max` whose product size fits.
fn product_shapes(m: usize, bounds: &Bounds) -> Vec<Vec<usize>> {
    let sizes: Vec<(usize, usize)> = (1..=bounds.n_max)
        .filter_map(|n| {
            let s = (m as u64).checked_pow(n as u32)?;
            (s <= bounds.size_cap as u64).then_some((n, s as usize))
        })
        .collect();
    let mut out = Vec::new();
    fn rec(
        sizes: &[(usize, usize)],
        max_idx: usize,
        cur: &mut Vec<usize>,
        size: usize,
        k_max: usize,
        cap: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == k_max {
            return;
        }
        for idx in (0..=max_idx.min(sizes.len().saturating_sub(1))).rev() {
            let (n, s) = sizes[idx];
            if size.saturating_mul(s) > cap {
                continue;
            }
            cur.push(n);
            rec(sizes, idx, cur, size * s, k_max, cap, out);
            cur.pop();
        }
    }
    if !sizes.is_empty() {
        rec(&sizes, sizes.len() - 1, &mut Vec::new(), 1, bounds.k_max, bounds.size_cap, &mut out);
    }
    out
}

/// Generates quotients of subalgebras of bounded products of iterative powers.
pub fn closure_members(b: &LocalAlgebra, bounds: &Bounds) -> Result<ClosureInventory> {
    if bounds.n_max == 0 || bounds.k_max == 0 {
        return Err(Error::Precondition("n_max and k_max must be positive".into()));
    }
    let caps = &bounds.caps;
    let mut inv = ClosureInventory {
        generator: b.clone(),
        bounds: *bounds,
        members: Vec::new(),
        truncated: false,
        notes: Vec::new(),
    };
    let skip = |inv: &mut ClosureInventory, what: String, e: Error| -> Result<()> {
        match e {
            Error::CapExceeded { .. } => {
                inv.truncated = true;
                inv.notes.push(format!("{what}: {e}"));
                Ok(())
            }
            other => Err(other),
        }
    };
    for powers in product_shapes(b.states(), bounds) {
        let base = Derivation::product_of(powers.clone(), 0);
        let product = match base.product(b, caps) {
            Ok(p) => p,
            Err(e) => {
                skip(&mut inv, base.describe(), e)?;
                continue;
            }
        };
        let carriers = match product.subalgebras(caps) {
            Ok(c) => c,
            Err(e) => {
                skip(&mut inv, format!("subalgebras of {}", base.describe()), e)?;
                continue;
            }
        };
        for carrier in carriers {
            let sub = product.restrict(&carrier)?;
            let congs = match sub.congruences(caps) {
                Ok(c) => c,
                Err(e) => {
                    skip(&mut inv, format!("congruences of {}", base.describe()), e)?;
                    continue;
                }
            };
            for cong in congs {
                let algebra = sub.quotient(&cong)?;
                let derivation = Derivation {
                    powers: powers.clone(),
                    product_states: product.states(),
                    carrier: carrier.clone(),
                    congruence: cong.labels().to_vec(),
                };
                match inv.find(&algebra) {
                    Ok(Some(_)) => {}
                    Ok(None) => inv.members.push(Member { algebra, derivation }),
                    Err(e) => skip(&mut inv, format!("isomorphism test for {}", derivation.describe()), e)?,
                }
            }
        }
    }
    inv.members.sort_by_key(|m| m.algebra.states());
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_respect_bounds() {
        let shapes = product_shapes(2, &Bounds::new(2, 2, 16));
        assert_eq!(shapes, vec![vec![2], vec![2, 2], vec![2, 1], vec![1], vec![1, 1]]);
        let shapes = product_shapes(3, &Bounds::new(2, 1, 16));
        assert_eq!(shapes, vec![vec![2], vec![1]]);
    }

    #[test]
    fn eca150_small_closure() {
        let inv = closure_members(&LocalAlgebra::eca(150), &Bounds::new(1, 1, 16)).unwrap();
        let algebras: Vec<&LocalAlgebra> = inv.members.iter().map(|m| &m.algebra).collect();
        assert_eq!(algebras, vec![&LocalAlgebra::singleton(1), &LocalAlgebra::eca(150)]);
        assert!(!inv.truncated);
    }

    #[test]
    fn singleton_closure() {
        let inv = closure_members(&LocalAlgebra::singleton(1), &Bounds::default()).unwrap();
        assert_eq!(inv.members.len(), 1);
    }

    #[test]
    fn derivations_replay() {
        let b = LocalAlgebra::eca(60);
        let bounds = Bounds::new(2, 2, 8);
        let inv = closure_members(&b, &bounds).unwrap();
        for m in &inv.members {
            assert_eq!(m.derivation.build(&b, &bounds.caps).unwrap(), m.algebra);
        }
    }
}
