use serde::Serialize;

use super::{are_isomorphic, AffineAlgebra, CanonicalAdditive};
use crate::algebra::{Congruence, LocalAlgebra, StateMap};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::linalg::{add_vectors, decode_vector, encode_vector, sub_vectors, FpMatrix, Subspace};

fn check_invariant(b: &AffineAlgebra, w: &Subspace) -> Result<()> {
    if w.p() != b.p() || w.ambient_dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "subspace of F_{}^{} for an algebra over F_{}^{}",
            w.p(),
            w.ambient_dim(),
            b.p(),
            b.dim()
        )));
    }
    for (k, m) in b.components().iter().enumerate() {
        if let Some(v) = w.basis().iter().find(|v| !w.contains(&m.apply(v))) {
            return Err(Error::Precondition(format!(
                "component {} maps {v:?} outside the subspace",
                k as isize - b.radius() as isize
            )));
        }
    }
    Ok(())
}

/// A coset sub-automaton `v + W` written in the coordinates of `W`'s basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubalgebra {
    pub algebra: AffineAlgebra,
    /// `carrier[α]` is the state of `v + Σ α_t w_t` in the ambient encoding.
    pub carrier: Vec<u32>,
}

pub fn subalgebra_affine(b: &AffineAlgebra, w: &Subspace, v: &[u32]) -> Result<AffineSubalgebra> {
    check_invariant(b, w)?;
    let p = b.p();
    if v.len() != b.dim() {
        return Err(Error::DimensionMismatch(format!("base point of length {}", v.len())));
    }
    let diag = b.eval(&vec![v.to_vec(); b.components().len()]);
    let shift = sub_vectors(&diag, v, p);
    if !w.contains(&shift) {
        return Err(Error::Precondition(format!("f(v, …, v) − v = {shift:?} is not in the subspace")));
    }
    let pivots = w.pivots();
    let coords = |x: &[u32]| -> Vec<u32> { pivots.iter().map(|&c| x[c]).collect() };
    let e = w.dim();
    let components = b
        .components()
        .iter()
        .map(|m| {
            let mut g = FpMatrix::zeros(p, e, e);
            for (t, bt) in w.basis().iter().enumerate() {
                for (s, x) in coords(&m.apply(bt)).into_iter().enumerate() {
                    g.set(s, t, x);
                }
            }
            g
        })
        .collect();
    let algebra = AffineAlgebra::new(p, e, b.radius(), components, coords(&shift))?;
    let carrier = w.elements().iter().map(|x| encode_vector(&add_vectors(v, x, p), p) as u32).collect();
    Ok(AffineSubalgebra { algebra, carrier })
}

/// `B / W` in the coordinates given by the non-pivot columns of `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineQuotient {
    pub algebra: AffineAlgebra,
    /// `projection[s]` is the quotient state of the ambient state `s`.
    pub projection: StateMap,
}

pub fn quotient_affine(b: &AffineAlgebra, w: &Subspace) -> Result<AffineQuotient> {
    check_invariant(b, w)?;
    let (p, d) = (b.p(), b.dim());
    let free = w.non_pivots();
    let project = |x: &[u32]| -> Vec<u32> {
        let red = w.reduce(x);
        free.iter().map(|&c| red[c]).collect()
    };
    let e = free.len();
    let components = b
        .components()
        .iter()
        .map(|m| {
            let mut h = FpMatrix::zeros(p, e, e);
            for (t, &col) in free.iter().enumerate() {
                let mut unit = vec![0u32; d];
                unit[col] = 1;
                for (s, x) in project(&m.apply(&unit)).into_iter().enumerate() {
                    h.set(s, t, x);
                }
            }
            h
        })
        .collect();
    let algebra = AffineAlgebra::new(p, e, b.radius(), components, project(b.constant()))?;
    let projection =
        StateMap((0..b.states()).map(|s| encode_vector(&project(&decode_vector(s, p, d)), p) as u32).collect());
    Ok(AffineQuotient { algebra, projection })
}

/// The partition of F_p^d into cosets of `w`.
pub fn coset_congruence(w: &Subspace) -> Congruence {
    let (p, d) = (w.p(), w.ambient_dim());
    let m = (p as u64).pow(d as u32);
    let labels: Vec<u64> = (0..m).map(|s| encode_vector(&w.reduce(&decode_vector(s, p, d)), p)).collect();
    Congruence::from_labels(&labels)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineClassification {
    pub component_bijective: Vec<bool>,
    pub bijective_condition: bool,
    pub left: Option<isize>,
    pub right: Option<isize>,
    /// `(i, j)` with `i < j` when the rule lies in the class with those witnesses.
    pub class: Option<(isize, isize)>,
    pub additive: bool,
    pub canonical_additive: bool,
}

pub fn classify_affine(b: &AffineAlgebra) -> AffineClassification {
    let (left, right) = b.witnesses();
    let class = match (left, right) {
        (Some(i), Some(j)) if i < j => Some((i, j)),
        _ => None,
    };
    AffineClassification {
        component_bijective: b.components().iter().map(FpMatrix::is_invertible).collect(),
        bijective_condition: b.bijective_condition(),
        left,
        right,
        class,
        additive: b.idempotent().is_some(),
        canonical_additive: b.dim() == 1 && b.constant() == [0],
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    pub k: u32,
    pub l: usize,
    pub states: usize,
    pub holds: bool,
    /// How the witness was obtained.
    pub method: &'static str,
    pub witness: Option<StateMap>,
}

/// Compares `B^[p^k·l]` with the product of `p^k` copies of `B^[l]`.
pub fn verify_splitting(b: &CanonicalAdditive, k: u32, l: usize, caps: &Caps) -> Result<SplittingReport> {
    if l == 0 {
        return Err(Error::Precondition("l must be positive".into()));
    }
    let q = (b.p() as usize).pow(k);
    let table = b.to_table(caps)?;
    let lhs = table.power(q * l, caps)?;
    let factor = table.power(l, caps)?;
    let rhs = LocalAlgebra::product(&vec![factor; q], caps)?;
    let (method, witness) = if l == 1 && lhs.table() == rhs.table() {
        // Both sides carry the scalar components a_i·I in the same encoding.
        ("coefficient identity", Some(StateMap::identity(lhs.states())))
    } else {
        ("isomorphism search", are_isomorphic(&lhs, &rhs, caps)?)
    };
    let holds = witness.as_ref().is_some_and(|w| w.is_isomorphism(&lhs, &rhs));
    Ok(SplittingReport { k, l, states: lhs.states(), holds, method, witness })
}
