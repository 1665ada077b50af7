use serde::Serialize;

use super::{closure_members, Bounds, Derivation};
use crate::affine::{are_isomorphic, is_affine_up_to_iso, log_p, prime_base, CanonicalAdditive};
use crate::algebra::{LocalAlgebra, StateMap};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::linalg::{decode_vector, encode_vector, sub_vectors};

/// A replayable proof that `B` simulates `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimulationWitness {
    pub derivation: Derivation,
    /// Isomorphism from the derived algebra onto `A`.
    pub iso: StateMap,
    pub method: &'static str,
}

impl SimulationWitness {
    pub fn replay(&self, a: &LocalAlgebra, b: &LocalAlgebra, caps: &Caps) -> Result<bool> {
        let derived = self.derivation.build(b, caps)?;
        Ok(self.iso.is_isomorphism(&derived, a))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Yes(SimulationWitness),
    No(String),
    Unknown(Bounds),
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }
}

/// Multisets of positive parts not divisible by `p` summing to `total`,
/// each listed nonincreasing.
pub fn partitions_coprime(total: usize, p: u32) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(rest)).rev().filter(|l| l % p != 0) {
            cur.push(part);
            rec(rest - part, part, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, p as usize, &mut Vec::new(), &mut out);
    out
}

/// A relabeling onto a canonical additive rule, if `b` is isomorphic to one.
pub fn as_canonical_additive(b: &LocalAlgebra, caps: &Caps) -> Result<Option<(StateMap, CanonicalAdditive)>> {
    let Some(p) = prime_base(b.states()) else {
        return Ok(None);
    };
    if log_p(b.states(), p)? != 1 {
        return Ok(None);
    }
    let Some((phi, aff)) = is_affine_up_to_iso(b, caps)? else {
        return Ok(None);
    };
    let Some(v) = aff.idempotent() else {
        return Ok(None);
    };
    // Translate the idempotent to 0.
    let shift = StateMap(
        (0..p as u64).map(|s| encode_vector(&sub_vectors(&decode_vector(s, p, 1), &v, p), p) as u32).collect(),
    );
    let coeffs = aff.components().iter().map(|m| m.get(0, 0)).collect();
    Ok(Some((phi.then(&shift), CanonicalAdditive::new(p, coeffs)?)))
}

/// Decides whether `b` simulates `a`, exactly when `b` is a doubly bijective
/// canonical additive rule and by bounded search otherwise.
pub fn simulates(a: &LocalAlgebra, b: &LocalAlgebra, bounds: &Bounds) -> Result<Verdict> {
    if a.radius() != b.radius() {
        return Err(Error::RadiusMismatch(a.radius(), b.radius()));
    }
    let caps = &bounds.caps;
    if a.states() == 1 {
        let derivation = Derivation {
            powers: vec![1],
            product_states: b.states(),
            carrier: (0..b.states() as u32).collect(),
            congruence: vec![0; b.states()],
        };
        return Ok(Verdict::Yes(SimulationWitness {
            derivation,
            iso: StateMap::identity(1),
            method: "one-state algebras are simulated by every rule",
        }));
    }
    match exact(a, b, caps) {
        Ok(Some(v)) => return Ok(v),
        Ok(None) => {}
        Err(Error::CapExceeded { .. }) => return Ok(Verdict::Unknown(*bounds)),
        Err(e) => return Err(e),
    }
    if let Some(reason) = class_obstruction(a, b, caps)? {
        return Ok(Verdict::No(reason));
    }
    let inv = closure_members(b, bounds)?;
    if let Some((member, phi)) = inv.find(a)? {
        return Ok(Verdict::Yes(SimulationWitness {
            derivation: member.derivation.clone(),
            iso: phi,
            method: "bounded closure search",
        }));
    }
    Ok(Verdict::Unknown(*bounds))
}

fn exact(a: &LocalAlgebra, b: &LocalAlgebra, caps: &Caps) -> Result<Option<Verdict>> {
    let Some((_, canon)) = as_canonical_additive(b, caps)? else {
        return Ok(None);
    };
    if !canon.is_doubly_bijective() {
        return Ok(None);
    }
    let p = canon.p();
    let Ok(total) = log_p(a.states(), p) else {
        return Ok(Some(Verdict::No(format!(
            "{} states is not a power of {p}; every nontrivial member of the closure of a doubly bijective rule over F_{p} has p^k states",
            a.states()
        ))));
    };
    let canon_table = canon.to_table(caps)?;
    for parts in partitions_coprime(total, p) {
        let factors = parts.iter().map(|&l| canon_table.power(l, caps)).collect::<Result<Vec<_>>>()?;
        let product = LocalAlgebra::product(&factors, caps)?;
        if let Some(phi) = are_isomorphic(&product, a, caps)? {
            // The same exponents over `b` give an isomorphic product.
            let derivation = Derivation::product_of(parts, product.states());
            let over_b = derivation.build(b, caps)?;
            let bridge = are_isomorphic(&over_b, &product, caps)?
                .ok_or_else(|| Error::Precondition("relabeled product lost its isomorphism".into()))?;
            return Ok(Some(Verdict::Yes(SimulationWitness {
                derivation,
                iso: bridge.then(&phi),
                method: "characterization of doubly bijective rules",
            })));
        }
    }
    Ok(Some(Verdict::No(format!(
        "not isomorphic to any product of powers B^[l] with p ∤ l and Σ l = {total}; \
         for a doubly bijective rule these, with the one-state algebra, are the whole closure"
    ))))
}

/// Members of the closure of a rule in an affine class stay in that class.
fn class_obstruction(a: &LocalAlgebra, b: &LocalAlgebra, caps: &Caps) -> Result<Option<String>> {
    let (Some(i), Some(j)) = b.permutivity() else {
        return Ok(None);
    };
    if i >= j {
        return Ok(None);
    }
    let Some((_, fb)) = is_affine_up_to_iso(b, caps)? else {
        return Ok(None);
    };
    let p = fb.p();
    if log_p(a.states(), p).is_err() {
        return Ok(Some(format!(
            "B is affine over F_{p} with permutive positions ({i}, {j}), so its closure only has p-power sizes; {} is not a power of {p}",
            a.states()
        )));
    }
    if a.permutivity() != (Some(i), Some(j)) {
        return Ok(Some(format!(
            "B is affine over F_{p} with permutive positions ({i}, {j}); every nontrivial member of its closure keeps them, A has {:?}",
            a.permutivity()
        )));
    }
    match is_affine_up_to_iso(a, caps) {
        Ok(None) => Ok(Some(format!("B is affine over F_{p} with permutive positions ({i}, {j}) and A is not affine"))),
        Ok(Some(_)) => Ok(None),
        Err(Error::CapExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}
