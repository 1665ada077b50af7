use std::collections::HashMap;

use super::{fit_affine, log_p, prime_base, AffineAlgebra};
use crate::algebra::{invariant_signature, LocalAlgebra, StateMap};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::linalg::{decode_vector, encode_vector, sub_vectors, FpMatrix};

/// The bijection `x ↦ P x + t` between two vector encodings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: FpMatrix,
    pub translation: Vec<u32>,
}

impl AffineMap {
    pub fn state_map(&self) -> StateMap {
        let p = self.linear.p();
        let d = self.linear.rows();
        let m = (p as u64).pow(d as u32);
        StateMap(
            (0..m)
                .map(|s| {
                    let x = decode_vector(s, p, d);
                    let y: Vec<u32> =
                        self.linear.apply(&x).iter().zip(&self.translation).map(|(a, b)| (a + b) % p).collect();
                    encode_vector(&y, p) as u32
                })
                .collect(),
        )
    }
}

/// Searches an affine bijection `x ↦ P x + t` with `P M_k = N_k P` for every
/// component and `(Σ N_k − I) t = P c − c'`.
pub fn affine_isomorphism(a: &AffineAlgebra, b: &AffineAlgebra, caps: &Caps) -> Result<Option<AffineMap>> {
    if a.radius() != b.radius() {
        return Err(Error::RadiusMismatch(a.radius(), b.radius()));
    }
    if a.p() != b.p() || a.dim() != b.dim() {
        return Ok(None);
    }
    let (p, d) = (a.p(), a.dim());
    if d == 0 {
        return Ok(Some(AffineMap { linear: FpMatrix::zeros(p, 0, 0), translation: Vec::new() }));
    }
    // Unknown P[u][v] sits at column u*d + v.
    let k = a.components().len();
    let mut system = FpMatrix::zeros(p, k * d * d, d * d);
    for (ci, (mk, nk)) in a.components().iter().zip(b.components()).enumerate() {
        for s in 0..d {
            for t in 0..d {
                let row = ci * d * d + s * d + t;
                for u in 0..d {
                    // (P M)[s][t] = Σ_u P[s][u] M[u][t]
                    let x = (system.get(row, s * d + u) + mk.get(u, t)) % p;
                    system.set(row, s * d + u, x);
                    // −(N P)[s][t] = −Σ_u N[s][u] P[u][t]
                    let y = (system.get(row, u * d + t) + p - nk.get(s, u)) % p;
                    system.set(row, u * d + t, y);
                }
            }
        }
    }
    let kernel = system.kernel();
    let count = (p as u128).checked_pow(kernel.len() as u32).unwrap_or(u128::MAX);
    if count > caps.subspace_reps as u128 {
        return Err(Error::cap("linear conjugacy search", count, caps.subspace_reps as u128));
    }
    let mut sum_n = FpMatrix::scalar(p, d, p - 1);
    for n in b.components() {
        sum_n = sum_n.add(n)?;
    }
    for code in 1..count as u64 {
        let coeffs = decode_vector(code, p, kernel.len());
        let mut entries = vec![0u32; d * d];
        for (c, v) in coeffs.iter().zip(&kernel) {
            for (e, &x) in entries.iter_mut().zip(v) {
                *e = (*e + c * x) % p;
            }
        }
        let pm = FpMatrix::from_raw(p, d, d, entries);
        if !pm.is_invertible() {
            continue;
        }
        let rhs = sub_vectors(&pm.apply(a.constant()), b.constant(), p);
        if let Some(t) = sum_n.solve(&rhs) {
            return Ok(Some(AffineMap { linear: pm, translation: t }));
        }
    }
    Ok(None)
}

/// Coordinates that make `(S, ⊕)` a vector space, where `⊕` is read off the
/// permutive positions `i < j`.
fn group_coordinates(a: &LocalAlgebra, i: usize, j: usize, p: u32, d: usize) -> Option<Vec<u32>> {
    let m = a.states();
    let k = a.arity();
    let at = |assign: &[(usize, u32)]| {
        let mut nb = vec![0u32; k];
        for &(pos, s) in assign {
            nb[pos] = s;
        }
        a.apply(&nb)
    };
    let inverse = |pos: usize| -> Option<Vec<u32>> {
        let mut inv = vec![u32::MAX; m];
        for s in 0..m as u32 {
            let t = at(&[(pos, s)]) as usize;
            if inv[t] != u32::MAX {
                return None;
            }
            inv[t] = s;
        }
        Some(inv)
    };
    let (ui, vi) = (inverse(i)?, inverse(j)?);
    let mut op = vec![0u32; m * m];
    for x in 0..m {
        for y in 0..m {
            op[x * m + y] = at(&[(i, ui[x]), (j, vi[y])]);
        }
    }
    let add = |x: u32, y: u32| op[x as usize * m + y as usize];
    let zero = (0..m as u32).find(|&e| (0..m as u32).all(|x| add(e, x) == x))?;
    for x in 0..m as u32 {
        for y in 0..m as u32 {
            if add(x, y) != add(y, x) {
                return None;
            }
            for z in 0..m as u32 {
                if add(add(x, y), z) != add(x, add(y, z)) {
                    return None;
                }
            }
        }
        let mut acc = zero;
        for _ in 0..p {
            acc = add(acc, x);
        }
        if acc != zero {
            return None;
        }
    }
    // Greedy basis in ascending state order.
    let mut coords: HashMap<u32, Vec<u32>> = HashMap::from([(zero, Vec::new())]);
    for g in 0..m as u32 {
        if coords.contains_key(&g) {
            continue;
        }
        let mut next = HashMap::new();
        for (&x, cx) in &coords {
            let mut y = x;
            for c in 0..p {
                let mut cy = cx.clone();
                cy.push(c);
                next.insert(y, cy);
                y = add(y, g);
            }
        }
        coords = next;
    }
    if coords.len() != m {
        return None;
    }
    let phi: Vec<u32> = (0..m as u32)
        .map(|s| {
            let v = &coords[&s];
            (v.len() == d).then(|| encode_vector(v, p) as u32)
        })
        .collect::<Option<_>>()?;
    Some(phi)
}

/// Next permutation in lexicographic order; false once exhausted.
fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("a larger element exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// A relabeling `φ` and affine form such that relabeling `a` by `φ` gives the
/// table of the affine form.
pub fn is_affine_up_to_iso(a: &LocalAlgebra, caps: &Caps) -> Result<Option<(StateMap, AffineAlgebra)>> {
    let m = a.states();
    if m == 1 {
        let aff = fit_affine(a, 2)?.expect("one-state algebras are affine");
        return Ok(Some((StateMap::identity(1), aff)));
    }
    let Some(p) = prime_base(m) else {
        return Ok(None);
    };
    let d = log_p(m, p)?;
    let r = a.radius() as isize;
    if let (Some(i), Some(j)) = a.permutivity() {
        if i < j {
            let Some(phi) = group_coordinates(a, (i + r) as usize, (j + r) as usize, p, d) else {
                return Ok(None);
            };
            let relabeled = a.relabel(&phi)?;
            return Ok(fit_affine(&relabeled, p)?.map(|aff| (StateMap(phi), aff)));
        }
    }
    if m > caps.relabel_states {
        return Err(Error::cap("affine recognition by relabeling", m as u128, caps.relabel_states as u128));
    }
    // Translations preserve affinity, so state 0 may be fixed.
    let mut rest: Vec<u32> = (1..m as u32).collect();
    loop {
        let mut phi = vec![0u32];
        phi.extend_from_slice(&rest);
        if let Some(aff) = fit_affine(&a.relabel(&phi)?, p)? {
            return Ok(Some((StateMap(phi), aff)));
        }
        if !next_permutation(&mut rest) {
            return Ok(None);
        }
    }
}

/// Isomorphism test that uses generic backtracking for small algebras and
/// linear conjugacy for larger ones with two permutive positions.
pub fn are_isomorphic(a: &LocalAlgebra, b: &LocalAlgebra, caps: &Caps) -> Result<Option<StateMap>> {
    if a.radius() != b.radius() {
        return Err(Error::RadiusMismatch(a.radius(), b.radius()));
    }
    if a.states() != b.states() || a.permutivity() != b.permutivity() {
        return Ok(None);
    }
    if a.table() == b.table() {
        return Ok(Some(StateMap::identity(a.states())));
    }
    if a.states() <= caps.iso_states {
        return a.isomorphism_search(b, caps);
    }
    if invariant_signature(a) != invariant_signature(b) {
        return Ok(None);
    }
    if let (Some(i), Some(j)) = a.permutivity() {
        if i < j {
            let (pa, pb) = match (is_affine_up_to_iso(a, caps)?, is_affine_up_to_iso(b, caps)?) {
                (Some(pa), Some(pb)) => (pa, pb),
                (None, None) => return a.isomorphism_search(b, caps),
                // Affinity up to relabeling is an isomorphism invariant.
                _ => return Ok(None),
            };
            let ((pa, fa), (pb, fb)) = (pa, pb);
            let Some(map) = affine_isomorphism(&fa, &fb, caps)? else {
                return Ok(None);
            };
            let back = pb.inverse().expect("relabelings are bijections");
            let phi = pa.then(&map.state_map()).then(&back);
            debug_assert!(phi.is_isomorphism(a, b));
            return Ok(Some(phi));
        }
    }
    a.isomorphism_search(b, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::CanonicalAdditive;
    use crate::algebra::Congruence;

    #[test]
    fn recognizes_relabeled_affine() {
        let caps = Caps::default();
        let a = LocalAlgebra::eca(105);
        let (phi, _) = is_affine_up_to_iso(&a, &caps).unwrap().unwrap();
        assert!(phi.is_bijection());
        assert!(is_affine_up_to_iso(&LocalAlgebra::eca(110), &caps).unwrap().is_none());

        let z4 = LocalAlgebra::from_fn(4, 1, &caps, |x| (x[0] + x[2]) % 4).unwrap();
        let q = z4.quotient(&Congruence::from_labels(&[0, 1, 0, 1])).unwrap();
        let (_, aff) = is_affine_up_to_iso(&q, &caps).unwrap().unwrap();
        assert_eq!(aff, CanonicalAdditive::new(2, vec![1, 0, 1]).unwrap().to_affine());
    }

    #[test]
    fn z4_is_not_affine() {
        let caps = Caps::default();
        let z4 = LocalAlgebra::from_fn(4, 1, &caps, |x| (x[0] + x[2]) % 4).unwrap();
        assert!(is_affine_up_to_iso(&z4, &caps).unwrap().is_none());
    }

    #[test]
    fn conjugacy_finds_scrambled_copy() {
        let caps = Caps::default();
        let b = CanonicalAdditive::new(3, vec![2, 1, 1]).unwrap().to_table(&caps).unwrap();
        let big = b.power(2, &caps).unwrap();
        let perm: Vec<u32> = (0..9).map(|s| (s * 4 + 7) % 9).collect();
        let scrambled = big.relabel(&perm).unwrap();
        let small = Caps { iso_states: 2, ..caps };
        let phi = are_isomorphic(&big, &scrambled, &small).unwrap().unwrap();
        assert!(phi.is_isomorphism(&big, &scrambled));
    }

    #[test]
    fn permutations_enumerate() {
        let mut v = vec![0, 1, 2];
        let mut n = 1;
        while next_permutation(&mut v) {
            n += 1;
        }
        assert_eq!(n, 6);
        assert_eq!(v, vec![2, 1, 0]);
    }
}
