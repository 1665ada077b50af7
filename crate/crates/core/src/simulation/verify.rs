use serde::Serialize;

use super::{closure_members, partitions_coprime, Bounds, Derivation, Member};
use crate::affine::{are_isomorphic, classify_affine, is_affine_up_to_iso, log_p, AffineAlgebra, CanonicalAdditive};
use crate::algebra::LocalAlgebra;
use crate::error::{Error, Result};

/// Simulation capacity of a radius-one canonical additive rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CapacityClass {
    /// Every coefficient is zero.
    Constant,
    /// A single nonzero coefficient at `coordinate`.
    Projection { coordinate: isize },
    /// Two or more nonzero coefficients.
    Products {
        doubly_bijective: bool,
        /// `a_0 = 0`, where the exact characterization is not established.
        zero_center: bool,
    },
}

impl CapacityClass {
    pub fn number(&self) -> u8 {
        match self {
            CapacityClass::Constant => 1,
            CapacityClass::Projection { .. } => 2,
            CapacityClass::Products { .. } => 3,
        }
    }
}

pub fn classify_canonical(a: &CanonicalAdditive) -> Result<CapacityClass> {
    if a.radius() != 1 {
        return Err(Error::RadiusMismatch(a.radius(), 1));
    }
    let support = a.support();
    Ok(match support.as_slice() {
        [] => CapacityClass::Constant,
        [k] => CapacityClass::Projection { coordinate: *k },
        _ => CapacityClass::Products { doubly_bijective: a.is_doubly_bijective(), zero_center: a.coefficient(0) == 0 },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Pass,
    Fail,
    /// No violation found but some branch was cut off by a cap.
    Incomplete,
    NotApplicable,
}

impl Outcome {
    fn from_parts(failed: bool, truncated: bool) -> Self {
        match (failed, truncated) {
            (true, _) => Outcome::Fail,
            (false, true) => Outcome::Incomplete,
            (false, false) => Outcome::Pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MemberCheck {
    pub states: usize,
    pub derivation: Derivation,
    pub description: String,
    /// Exponents `l` with `member ≅ Π B^[l]`; empty for the one-state algebra.
    pub matched: Option<Vec<usize>>,
}

impl MemberCheck {
    pub fn ok(&self) -> bool {
        self.matched.is_some()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterizationReport {
    pub generator: CanonicalAdditive,
    pub bounds: Bounds,
    pub doubly_bijective: bool,
    pub outcome: Outcome,
    pub members: Vec<MemberCheck>,
    pub truncated: bool,
    pub notes: Vec<String>,
}

impl CharacterizationReport {
    pub fn violations(&self) -> impl Iterator<Item = &MemberCheck> {
        self.members.iter().filter(|m| !m.ok())
    }
}

/// Checks that every bounded closure member of `b` is a product of iterative
/// powers `B^[l]` with `p ∤ l`, or the one-state algebra.
pub fn verify_characterization(b: &CanonicalAdditive, bounds: &Bounds) -> Result<CharacterizationReport> {
    let caps = &bounds.caps;
    let table = b.to_table(caps)?;
    let inv = closure_members(&table, bounds)?;
    let p = b.p();
    let mut notes = inv.notes.clone();
    if let Some(why) = b.doubly_bijective_failure() {
        notes.push(format!("not doubly bijective: {why}"));
    }
    let mut truncated = inv.truncated;
    let mut members = Vec::new();
    for Member { algebra, derivation } in &inv.members {
        let matched = match product_form(algebra, &table, p, bounds) {
            Ok(m) => m,
            Err(Error::CapExceeded { .. }) => {
                truncated = true;
                notes.push(format!("could not test {}", derivation.describe()));
                continue;
            }
            Err(e) => return Err(e),
        };
        members.push(MemberCheck {
            states: algebra.states(),
            derivation: derivation.clone(),
            description: derivation.describe(),
            matched,
        });
    }
    let failed = members.iter().any(|m| !m.ok());
    Ok(CharacterizationReport {
        generator: b.clone(),
        bounds: *bounds,
        doubly_bijective: b.is_doubly_bijective(),
        outcome: Outcome::from_parts(failed, truncated),
        members,
        truncated,
        notes,
    })
}

fn product_form(a: &LocalAlgebra, b: &LocalAlgebra, p: u32, bounds: &Bounds) -> Result<Option<Vec<usize>>> {
    let caps = &bounds.caps;
    if a.states() == 1 {
        return Ok(Some(Vec::new()));
    }
    let Ok(total) = log_p(a.states(), p) else {
        return Ok(None);
    };
    for parts in partitions_coprime(total, p) {
        let factors = parts.iter().map(|&l| b.power(l, caps)).collect::<Result<Vec<_>>>()?;
        let product = LocalAlgebra::product(&factors, caps)?;
        if are_isomorphic(&product, a, caps)?.is_some() {
            return Ok(Some(parts));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureItem {
    pub states: usize,
    pub description: String,
    pub derivation: Derivation,
    /// Affine over the generator's field; `None` when recognition hit a cap.
    pub affine: Option<bool>,
    /// Permutive witnesses of the recognized affine form.
    pub witnesses: Option<(Option<isize>, Option<isize>)>,
    pub in_class: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AffineClosureReport {
    pub class: Option<(isize, isize)>,
    pub bounds: Bounds,
    pub outcome: Outcome,
    pub items: Vec<ClosureItem>,
    pub truncated: bool,
    pub notes: Vec<String>,
}

impl AffineClosureReport {
    pub fn non_affine(&self) -> impl Iterator<Item = &ClosureItem> {
        self.items.iter().filter(|i| i.affine == Some(false))
    }
}

/// Checks that every bounded closure member of `b` is affine over the same
/// field with the same permutive witnesses. Rules outside every class are
/// reported as not applicable, with the affinity of each member listed.
pub fn verify_affine_closure(b: &AffineAlgebra, bounds: &Bounds) -> Result<AffineClosureReport> {
    let caps = &bounds.caps;
    let class = classify_affine(b).class;
    let table = b.to_table(caps)?;
    let inv = closure_members(&table, bounds)?;
    let mut truncated = inv.truncated;
    let mut notes = inv.notes.clone();
    if class.is_none() {
        notes.push("the rule has no pair of bijective outermost components".into());
    }
    let mut items = Vec::new();
    for Member { algebra, derivation } in &inv.members {
        let (affine, witnesses, in_class) = match is_affine_up_to_iso(algebra, caps) {
            Ok(Some((_, aff))) if algebra.states() == 1 || aff.p() == b.p() => {
                let ok = class.is_some_and(|(i, j)| aff.in_class(i, j));
                (Some(true), Some(aff.witnesses()), ok)
            }
            // Affine over another field only.
            Ok(Some(_)) => (Some(false), None, false),
            Ok(None) => (Some(false), None, false),
            Err(Error::CapExceeded { .. }) => {
                truncated = true;
                notes.push(format!("could not recognize {}", derivation.describe()));
                (None, None, false)
            }
            Err(e) => return Err(e),
        };
        items.push(ClosureItem {
            states: algebra.states(),
            description: derivation.describe(),
            derivation: derivation.clone(),
            affine,
            witnesses,
            in_class,
        });
    }
    let outcome = if class.is_none() {
        Outcome::NotApplicable
    } else {
        let failed = items.iter().any(|i| i.affine.is_some() && !i.in_class);
        Outcome::from_parts(failed, truncated)
    };
    Ok(AffineClosureReport { class, bounds: *bounds, outcome, items, truncated, notes })
}
