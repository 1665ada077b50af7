use std::collections::{BTreeSet, HashSet};

use super::matrix::{check_prime, FpMatrix};
use super::subspace::{decode_vector, Subspace};
use crate::caps::Caps;
use crate::error::{Error, Result};

fn check_maps(maps: &[FpMatrix], p: u32, n: usize) -> Result<()> {
    check_prime(p)?;
    for m in maps {
        if m.p() != p {
            return Err(Error::DimensionMismatch(format!("map over F_{} in F_{p}", m.p())));
        }
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!("{}x{} map on F_{p}^{n}", m.rows(), m.cols())));
        }
    }
    Ok(())
}

/// Smallest subspace containing `seed` and invariant under every map.
pub fn invariant_closure(p: u32, n: usize, seed: &[Vec<u32>], maps: &[FpMatrix]) -> Result<Subspace> {
    check_maps(maps, p, n)?;
    let w = Subspace::span(p, n, seed)?;
    Ok(closure_of(w, maps))
}

fn closure_of(mut w: Subspace, maps: &[FpMatrix]) -> Subspace {
    loop {
        let mut vs = w.basis().to_vec();
        for m in maps {
            vs.extend(w.basis().iter().map(|v| m.apply(v)));
        }
        let next = Subspace::span_unchecked(w.p(), w.ambient_dim(), &vs);
        if next.dim() == w.dim() {
            return w;
        }
        w = next;
    }
}

/// Representatives of the one-dimensional subspaces: vectors whose first nonzero entry is 1.
fn line_representatives(p: u32, n: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (p as u64).pow(n as u32);
    (1..total).map(move |code| decode_vector(code, p, n)).filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
}

fn line_count(p: u32, n: usize) -> u128 {
    ((p as u128).pow(n as u32) - 1) / (p as u128 - 1)
}

/// Lattice of subspaces invariant under all maps, ordered by dimension then basis.
pub fn common_invariant_subspaces(p: u32, n: usize, maps: &[FpMatrix], caps: &Caps) -> Result<Vec<Subspace>> {
    check_maps(maps, p, n)?;
    let needed = line_count(p, n);
    if needed > caps.subspace_reps as u128 {
        return Err(Error::cap("invariant subspace enumeration", needed, caps.subspace_reps as u128));
    }
    let mut seen: HashSet<Subspace> = HashSet::new();
    let mut found: Vec<Subspace> = Vec::new();
    for v in line_representatives(p, n) {
        let w = closure_of(Subspace::span_unchecked(p, n, &[v]), maps);
        if seen.insert(w.clone()) {
            found.push(w);
        }
    }
    // Joins of invariant subspaces stay invariant; close under pairwise joins.
    let mut frontier = found.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        let snapshot = found.clone();
        for a in &frontier {
            for b in &snapshot {
                let j = a.join(b);
                if seen.insert(j.clone()) {
                    found.push(j.clone());
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut all: BTreeSet<Subspace> = found.into_iter().collect();
    all.insert(Subspace::zero(p, n));
    Ok(all.into_iter().collect())
}

/// True iff only `{0}` and the full space are invariant under every map.
pub fn is_simple(p: u32, n: usize, maps: &[FpMatrix], caps: &Caps) -> Result<bool> {
    check_maps(maps, p, n)?;
    let needed = line_count(p, n);
    if needed > caps.subspace_reps as u128 {
        return Err(Error::cap("simplicity test", needed, caps.subspace_reps as u128));
    }
    Ok(line_representatives(p, n).all(|v| closure_of(Subspace::span_unchecked(p, n, &[v]), maps).is_full()))
}
