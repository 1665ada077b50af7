use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{checked_pow, increment, LocalAlgebra, StateMap};
use crate::error::{Error, Result};

const EXHAUSTIVE_LIMIT: u64 = 1 << 20;
const RANDOM_WINDOWS: usize = 4096;

/// Direction of a state map between two automata.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TranslationKind {
    /// `ι : A → B` injective; checks `ι∘F = G∘ι`.
    Embed,
    /// `π : B → A` surjective; checks `F∘π = π∘G`.
    Project,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranslationReport {
    pub holds: bool,
    pub windows_checked: u64,
    pub exhaustive: bool,
    /// A window over the map's domain on which the two sides differ.
    pub counterexample: Option<Vec<u32>>,
}

/// Checks that a state map commutes with the global rules of `a` and `b` on
/// windows of the given width, comparing the cells left after `steps` steps.
pub fn check_translation(
    a: &LocalAlgebra,
    b: &LocalAlgebra,
    map: &StateMap,
    kind: TranslationKind,
    width: usize,
    steps: usize,
) -> Result<TranslationReport> {
    if a.radius() != b.radius() {
        return Err(Error::RadiusMismatch(a.radius(), b.radius()));
    }
    let (dom, cod) = match kind {
        TranslationKind::Embed => (a, b),
        TranslationKind::Project => (b, a),
    };
    if map.len() != dom.states() || map.0.iter().any(|&t| t as usize >= cod.states()) {
        return Err(Error::DimensionMismatch(format!(
            "map must send {} states into {} states",
            dom.states(),
            cod.states()
        )));
    }
    if width < 2 * steps * a.radius() + 1 {
        return Err(Error::WordTooShort { len: width, iterations: steps, radius: a.radius() });
    }
    let commutes = |w: &[u32]| -> bool {
        let mapped: Vec<u32> = w.iter().map(|&s| map.apply(s)).collect();
        let left: Vec<u32> = dom.unravel(w, steps).expect("width checked").iter().map(|&s| map.apply(s)).collect();
        left == cod.unravel(&mapped, steps).expect("width checked")
    };
    let total = checked_pow(dom.states(), width).unwrap_or(u64::MAX);
    let mut report = TranslationReport {
        holds: true,
        windows_checked: 0,
        exhaustive: total <= EXHAUSTIVE_LIMIT,
        counterexample: None,
    };
    if report.exhaustive {
        let mut w = vec![0u32; width];
        for _ in 0..total {
            report.windows_checked += 1;
            if !commutes(&w) {
                report.holds = false;
                report.counterexample = Some(w);
                return Ok(report);
            }
            increment(&mut w, dom.states() as u32);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..RANDOM_WINDOWS {
            let w: Vec<u32> = (0..width).map(|_| rng.gen_range(0..dom.states() as u32)).collect();
            report.windows_checked += 1;
            if !commutes(&w) {
                report.holds = false;
                report.counterexample = Some(w);
                return Ok(report);
            }
        }
    }
    Ok(report)
}
