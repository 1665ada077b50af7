use serde::Serialize;

use super::CanonicalAdditive;
use crate::error::{Error, Result};
use crate::linalg::{pow_mod, FpMatrix};

/// `F^n(e^0)` on the positions `-nr..=nr`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientProfile {
    pub p: u32,
    pub r: usize,
    pub n: usize,
    pub values: Vec<u32>,
}

impl CoefficientProfile {
    /// Value at position `k`, zero outside the stored window.
    pub fn at(&self, k: isize) -> u32 {
        let off = k + (self.n * self.r) as isize;
        if (0..self.values.len() as isize).contains(&off) {
            self.values[off as usize]
        } else {
            0
        }
    }

    /// Product of generating functions, i.e. the profile of `n + other.n` steps.
    pub fn convolve(&self, other: &CoefficientProfile) -> CoefficientProfile {
        CoefficientProfile {
            p: self.p,
            r: self.r,
            n: self.n + other.n,
            values: poly_mul(&self.values, &other.values, self.p),
        }
    }
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    out.into_iter().map(|v| v as u32).collect()
}

/// Powers the generating function `l(x) = Σ a_{-e} x^e` by repeated squaring.
pub fn e0_evolution(a: &CanonicalAdditive, n: usize) -> Result<CoefficientProfile> {
    if n == 0 {
        return Err(Error::Precondition("at least one step is required".into()));
    }
    let p = a.p();
    let r = a.radius();
    // Dense on exponents -r..=r: index e + r holds a_{-e}.
    let base: Vec<u32> = a.coefficients().iter().rev().copied().collect();
    let mut acc: Option<Vec<u32>> = None;
    let mut sq = base;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => sq.clone(),
                Some(v) => poly_mul(&v, &sq, p),
            });
        }
        e >>= 1;
        if e > 0 {
            sq = poly_mul(&sq, &sq, p);
        }
    }
    Ok(CoefficientProfile { p, r, n, values: acc.expect("n is positive") })
}

/// Matrices of the components of the `n`-th iterative power, from `F^n(e^0)`.
///
/// Entry `(s, t)` of the matrix at position `i` is `c_{-in+s-t}`.
pub fn component_matrices(a: &CanonicalAdditive, n: usize) -> Result<Vec<FpMatrix>> {
    let c = e0_evolution(a, n)?;
    let r = a.radius() as isize;
    let n_i = n as isize;
    Ok((-r..=r)
        .map(|i| {
            let entries =
                (0..n_i).flat_map(|s| (0..n_i).map(move |t| (s, t))).map(|(s, t)| c.at(-i * n_i + s - t)).collect();
            FpMatrix::from_raw(a.p(), n, n, entries)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureCheck {
    pub name: String,
    pub passed: bool,
    pub expected: Option<u32>,
    pub found: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub n: usize,
    pub leftmost: isize,
    pub rightmost: isize,
    pub checks: Vec<StructureCheck>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn binom2(n: usize, p: u32) -> u32 {
    let n = n as u64;
    ((n * n.saturating_sub(1) / 2) % p as u64) as u32
}

/// Checks the zero blocks and the first diagonals of the outermost matrices.
pub fn check_structure(a: &CanonicalAdditive, n: usize) -> Result<StructureReport> {
    let support = a.support();
    let (Some(&i), Some(&j)) = (support.first(), support.last()) else {
        return Err(Error::Precondition("the rule has no nonzero coefficient".into()));
    };
    let p = a.p();
    let mats = component_matrices(a, n)?;
    let r = a.radius() as isize;
    let at = |k: isize| &mats[(k + r) as usize];
    let mul = |x: u32, y: u32| ((x as u64 * y as u64) % p as u64) as u32;
    let nm = (n as u64 % p as u64) as u32;
    let pw = |x: u32, e: usize| if e == 0 { 1 } else { pow_mod(x, e as u64, p) };
    let mut checks = Vec::new();

    for k in (-r..i).chain(j + 1..=r) {
        checks.push(StructureCheck {
            name: format!("A_{k} is zero"),
            passed: at(k).is_zero(),
            expected: None,
            found: None,
        });
    }

    // (matrix position, neighbor step, orientation): the leftmost matrix is
    // upper triangular, the rightmost is lower triangular.
    for (pos, step, upper) in [(i, 1isize, true), (j, -1isize, false)] {
        let m = at(pos);
        let (name, tri) = if upper { ("upper", "below") } else { ("lower", "above") };
        let triangular = (0..n).all(|s| {
            (0..n).all(|t| {
                let outside = if upper { s > t } else { s < t };
                !outside || m.get(s, t) == 0
            })
        });
        checks.push(StructureCheck {
            name: format!("A_{pos} is {name} triangular (zero {tri} the diagonal)"),
            passed: triangular,
            expected: None,
            found: None,
        });
        let lead = a.coefficient(pos);
        let next = a.coefficient(pos + step);
        let next2 = a.coefficient(pos + 2 * step);
        let diag = pw(lead, n);
        let first = mul(nm, mul(pw(lead, n.saturating_sub(1)), next));
        let second = (mul(nm, mul(pw(lead, n.saturating_sub(1)), next2))
            + mul(binom2(n, p), mul(pw(lead, n.saturating_sub(2)), mul(next, next))))
            % p;
        let entry = |s: usize, off: usize| if upper { m.get(s, s + off) } else { m.get(s + off, s) };
        let side = if upper { "super" } else { "sub" };
        for (off, expected, label) in [
            (0usize, diag, "diagonal".to_string()),
            (1, first, format!("first {side}diagonal")),
            (2, second, format!("second {side}diagonal")),
        ] {
            if off >= n {
                continue;
            }
            let found: Vec<u32> = (0..n - off).map(|s| entry(s, off)).collect();
            let ok = found.iter().all(|&x| x == expected);
            checks.push(StructureCheck {
                name: format!("A_{pos} {label}"),
                passed: ok,
                expected: Some(expected),
                found: Some(*found.iter().find(|&&x| x != expected).unwrap_or(&expected)),
            });
        }
    }
    Ok(StructureReport { n, leftmost: i, rightmost: j, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(p: u32, a: &[u32]) -> CanonicalAdditive {
        CanonicalAdditive::new(p, a.to_vec()).unwrap()
    }

    #[test]
    fn ternary_profile() {
        let c = e0_evolution(&rule(3, &[2, 1, 1]), 4).unwrap();
        assert_eq!(c.values, vec![1, 1, 2, 1, 1, 2, 2, 2, 1]);
    }

    #[test]
    fn frobenius_spacing() {
        let c = e0_evolution(&rule(2, &[1, 1, 1]), 2).unwrap();
        assert_eq!(c.values, vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn single_step_reverses() {
        let c = e0_evolution(&rule(5, &[1, 2, 3]), 1).unwrap();
        assert_eq!(c.values, vec![3, 2, 1]);
        assert_eq!(c.at(-1), 3);
        assert_eq!(c.at(7), 0);
    }

    #[test]
    fn matrices_examples() {
        let ms = component_matrices(&rule(3, &[2, 0, 1]), 2).unwrap();
        assert!(ms.iter().all(|m| *m == FpMatrix::identity(3, 2)));
        let ms = component_matrices(&rule(2, &[1, 1, 1]), 3).unwrap();
        let mid = FpMatrix::from_rows(2, &[vec![1, 0, 1], vec![0, 1, 0], vec![1, 0, 1]]).unwrap();
        assert_eq!(ms[1], mid);
        assert!(!mid.is_invertible());
    }

    #[test]
    fn structure_examples() {
        let rep = check_structure(&rule(2, &[1, 1, 1]), 3).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let diag = rep.checks.iter().find(|c| c.name == "A_-1 diagonal").unwrap();
        assert_eq!(diag.expected, Some(1));
        let sup = rep.checks.iter().find(|c| c.name == "A_-1 first superdiagonal").unwrap();
        assert_eq!(sup.expected, Some(1));

        let rep = check_structure(&rule(3, &[2, 1, 1]), 4).unwrap();
        assert!(rep.passed());
        let diag = rep.checks.iter().find(|c| c.name == "A_-1 diagonal").unwrap();
        assert_eq!(diag.expected, Some(1));

        let rep = check_structure(&rule(3, &[1, 2, 1]), 3).unwrap();
        let sup = rep.checks.iter().find(|c| c.name == "A_-1 first superdiagonal").unwrap();
        assert_eq!(sup.expected, Some(0));

        assert!(check_structure(&rule(2, &[0, 0, 0]), 2).is_err());
    }
}
