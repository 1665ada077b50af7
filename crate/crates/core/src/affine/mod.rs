//! Affine rules over F_p^d and their scalar specialization.

mod closure;
mod polynomial;
mod recognize;

use serde::Serialize;

pub use closure::{
    classify_affine, coset_congruence, quotient_affine, subalgebra_affine, verify_splitting, AffineClassification,
    AffineQuotient, AffineSubalgebra, SplittingReport,
};
pub use polynomial::{
    check_structure, component_matrices, e0_evolution, CoefficientProfile, StructureCheck, StructureReport,
};
pub use recognize::{affine_isomorphism, are_isomorphic, is_affine_up_to_iso, AffineMap};

use crate::algebra::{checked_pow, increment, LocalAlgebra};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::linalg::{add_vectors, check_prime, decode_vector, encode_vector, FpMatrix};

/// `f(x_{-r}, …, x_r) = Σ M_i x_i + c` over F_p^d.
///
/// States are vectors encoded as `Σ v_t · p^(d-t)`, first coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineAlgebra {
    p: u32,
    d: usize,
    r: usize,
    components: Vec<FpMatrix>,
    constant: Vec<u32>,
}

impl AffineAlgebra {
    pub fn new(p: u32, d: usize, r: usize, components: Vec<FpMatrix>, constant: Vec<u32>) -> Result<Self> {
        check_prime(p)?;
        if components.len() != 2 * r + 1 {
            return Err(Error::DimensionMismatch(format!("{} components for radius {r}", components.len())));
        }
        if let Some(m) = components.iter().find(|m| m.p() != p || m.rows() != d || m.cols() != d) {
            return Err(Error::DimensionMismatch(format!(
                "component is {}x{} over F_{}, expected {d}x{d} over F_{p}",
                m.rows(),
                m.cols(),
                m.p()
            )));
        }
        if constant.len() != d {
            return Err(Error::DimensionMismatch(format!("constant of length {}", constant.len())));
        }
        if let Some(&bad) = constant.iter().find(|&&x| x >= p) {
            return Err(Error::ValueOutOfRange { value: bad as u64, bound: p as u64 });
        }
        Ok(AffineAlgebra { p, d, r, components, constant })
    }

    /// Block-diagonal sum; the first summand supplies the leading coordinates.
    pub fn direct_sum(parts: &[AffineAlgebra]) -> Result<Self> {
        let first = parts.first().ok_or(Error::Empty("direct sum of no algebras"))?;
        let (p, r) = (first.p, first.r);
        if let Some(bad) = parts.iter().find(|a| a.p != p || a.r != r) {
            return Err(Error::DimensionMismatch(format!(
                "summands over F_{p} radius {r} and F_{} radius {}",
                bad.p, bad.r
            )));
        }
        let d: usize = parts.iter().map(|a| a.d).sum();
        let components = (0..2 * r + 1)
            .map(|k| {
                let mut m = FpMatrix::zeros(p, d, d);
                let mut off = 0;
                for a in parts {
                    for i in 0..a.d {
                        for j in 0..a.d {
                            m.set(off + i, off + j, a.components[k].get(i, j));
                        }
                    }
                    off += a.d;
                }
                m
            })
            .collect();
        let constant = parts.iter().flat_map(|a| a.constant.iter().copied()).collect();
        Ok(AffineAlgebra { p, d, r, components, constant })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn radius(&self) -> usize {
        self.r
    }

    pub fn components(&self) -> &[FpMatrix] {
        &self.components
    }

    /// Component at position `i ∈ -r..=r`.
    pub fn component(&self, i: isize) -> &FpMatrix {
        &self.components[(i + self.r as isize) as usize]
    }

    pub fn constant(&self) -> &[u32] {
        &self.constant
    }

    pub fn states(&self) -> u64 {
        (self.p as u64).pow(self.d as u32)
    }

    pub fn eval(&self, xs: &[Vec<u32>]) -> Vec<u32> {
        xs.iter()
            .zip(&self.components)
            .fold(self.constant.clone(), |acc, (x, m)| add_vectors(&acc, &m.apply(x), self.p))
    }

    pub fn to_table(&self, caps: &Caps) -> Result<LocalAlgebra> {
        let m = self.states();
        let k = 2 * self.r + 1;
        let len = checked_pow(m as usize, k).unwrap_or(u64::MAX);
        if len > caps.table {
            return Err(Error::cap("truth table", len as u128, caps.table as u128));
        }
        // contrib[k][s] = M_k · v(s), as vectors.
        let contrib: Vec<Vec<Vec<u32>>> = self
            .components
            .iter()
            .map(|mat| (0..m).map(|s| mat.apply(&decode_vector(s, self.p, self.d))).collect())
            .collect();
        let mut nb = vec![0u32; k];
        let mut table = Vec::with_capacity(len as usize);
        for _ in 0..len {
            let mut acc = self.constant.clone();
            for (pos, &s) in nb.iter().enumerate() {
                acc = add_vectors(&acc, &contrib[pos][s as usize], self.p);
            }
            table.push(encode_vector(&acc, self.p) as u32);
            increment(&mut nb, m as u32);
        }
        Ok(LocalAlgebra::from_raw(m as usize, self.r, table))
    }

    /// At least two components are bijections.
    pub fn bijective_condition(&self) -> bool {
        self.components.iter().filter(|m| m.is_invertible()).count() >= 2
    }

    /// Outermost nonzero components, if they are bijective.
    pub fn witnesses(&self) -> (Option<isize>, Option<isize>) {
        let r = self.r as isize;
        let nonzero: Vec<usize> = (0..self.components.len()).filter(|&k| !self.components[k].is_zero()).collect();
        let pick = |k: Option<&usize>| k.filter(|&&k| self.components[k].is_invertible()).map(|&k| k as isize - r);
        if self.d == 0 {
            return (Some(-r), Some(r));
        }
        (pick(nonzero.first()), pick(nonzero.last()))
    }

    /// Components vanish outside `i..=j` and are bijective at `i` and `j`.
    pub fn in_class(&self, i: isize, j: isize) -> bool {
        let r = self.r as isize;
        if !(-r <= i && i < j && j <= r) {
            return false;
        }
        (-r..=r).all(|k| {
            let m = self.component(k);
            if k < i || k > j {
                m.is_zero()
            } else if k == i || k == j {
                m.is_invertible()
            } else {
                true
            }
        })
    }

    /// Some `v` with `f(v, …, v) = v`.
    pub fn idempotent(&self) -> Option<Vec<u32>> {
        let mut sum = FpMatrix::scalar(self.p, self.d, self.p - 1);
        for m in &self.components {
            sum = sum.add(m).expect("components share a shape");
        }
        let rhs: Vec<u32> = self.constant.iter().map(|&c| (self.p - c) % self.p).collect();
        sum.solve(&rhs)
    }
}

/// An additive rule on F_p with scalar coefficients `a_{-r}, …, a_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CanonicalAdditive {
    p: u32,
    r: usize,
    coeffs: Vec<u32>,
}

impl CanonicalAdditive {
    pub fn new(p: u32, coeffs: Vec<u32>) -> Result<Self> {
        check_prime(p)?;
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients; an odd count 2r+1 is required",
                coeffs.len()
            )));
        }
        if let Some(&bad) = coeffs.iter().find(|&&a| a >= p) {
            return Err(Error::ValueOutOfRange { value: bad as u64, bound: p as u64 });
        }
        Ok(CanonicalAdditive { p, r: coeffs.len() / 2, coeffs })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn radius(&self) -> usize {
        self.r
    }

    pub fn coefficients(&self) -> &[u32] {
        &self.coeffs
    }

    /// `a_i`, zero outside `-r..=r`.
    pub fn coefficient(&self, i: isize) -> u32 {
        let k = i + self.r as isize;
        if (0..self.coeffs.len() as isize).contains(&k) {
            self.coeffs[k as usize]
        } else {
            0
        }
    }

    /// Positions with a nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<isize> {
        let r = self.r as isize;
        (-r..=r).filter(|&i| self.coefficient(i) != 0).collect()
    }

    pub fn to_affine(&self) -> AffineAlgebra {
        let components = self.coeffs.iter().map(|&a| FpMatrix::scalar(self.p, 1, a)).collect();
        AffineAlgebra { p: self.p, d: 1, r: self.r, components, constant: vec![0] }
    }

    pub fn to_table(&self, caps: &Caps) -> Result<LocalAlgebra> {
        self.to_affine().to_table(caps)
    }

    /// Why the rule is not doubly bijective, or `None` if it is.
    pub fn doubly_bijective_failure(&self) -> Option<String> {
        let support = self.support();
        if support.len() < 2 {
            return Some(format!(
                "only {} nonzero coefficient(s): not in any class with two bijective components",
                support.len()
            ));
        }
        let (i, j) = (support[0], support[support.len() - 1]);
        if self.coefficient(i + 1) == 0 {
            return Some(format!("a_{} = 0 next to the leftmost nonzero a_{i}", i + 1));
        }
        if self.coefficient(j - 1) == 0 {
            return Some(format!("a_{} = 0 next to the rightmost nonzero a_{j}", j - 1));
        }
        None
    }

    pub fn is_doubly_bijective(&self) -> bool {
        self.doubly_bijective_failure().is_none()
    }
}

/// Reads an affine form off the table of `a` under the fixed vector encoding.
pub fn fit_affine(a: &LocalAlgebra, p: u32) -> Result<Option<AffineAlgebra>> {
    check_prime(p)?;
    let d = log_p(a.states(), p)?;
    let r = a.radius();
    let k = a.arity();
    let zero = vec![0u32; k];
    let c = decode_vector(a.apply(&zero) as u64, p, d);
    let components: Vec<FpMatrix> = (0..k)
        .map(|pos| {
            let mut mat = FpMatrix::zeros(p, d, d);
            for t in 0..d {
                let mut nb = zero.clone();
                nb[pos] = (p as u64).pow((d - 1 - t) as u32) as u32;
                let col = crate::linalg::sub_vectors(&decode_vector(a.apply(&nb) as u64, p, d), &c, p);
                for (row, &x) in col.iter().enumerate() {
                    mat.set(row, t, x);
                }
            }
            mat
        })
        .collect();
    let candidate = AffineAlgebra { p, d, r, components, constant: c };
    let rebuilt = candidate.to_table(&Caps { table: u64::MAX, ..Caps::default() })?;
    Ok((rebuilt.table() == a.table()).then_some(candidate))
}

/// `d` with `m = p^d`.
pub(crate) fn log_p(m: usize, p: u32) -> Result<usize> {
    let mut d = 0;
    let mut x = m;
    while x > 1 && x.is_multiple_of(p as usize) {
        x /= p as usize;
        d += 1;
    }
    if x != 1 {
        return Err(Error::NotPowerOf { m, p });
    }
    Ok(d)
}

/// The prime `p` with `m = p^d`, if any (`None` for `m = 1`).
pub fn prime_base(m: usize) -> Option<u32> {
    let p = (2..=m).find(|q| m.is_multiple_of(*q))? as u32;
    log_p(m, p).ok().map(|_| p)
}
