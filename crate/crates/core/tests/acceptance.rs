//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use casim::affine::{check_structure, component_matrices, verify_splitting, AffineAlgebra, CanonicalAdditive};
use casim::algebra::{check_translation, Boundary, Congruence, LocalAlgebra, StateMap, TranslationKind};
use casim::linalg::{decode_vector, encode_vector, is_simple, FpMatrix};
use casim::render::grid;
use casim::simulation::{simulates, verify_affine_closure, verify_characterization, Bounds, Outcome, Verdict};
use casim::{are_isomorphic, fit_affine, Caps};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn caps() -> Caps {
    Caps::default()
}

fn rule(p: u32, a: &[u32]) -> CanonicalAdditive {
    CanonicalAdditive::new(p, a.to_vec()).unwrap()
}

/// Every coefficient triple over F_p.
fn all_rules(p: u32) -> impl Iterator<Item = CanonicalAdditive> {
    (0..p.pow(3)).map(move |code| rule(p, &decode_vector(code as u64, p, 3)))
}

fn z4() -> LocalAlgebra {
    LocalAlgebra::from_fn(4, 1, &caps(), |x| (x[0] + x[2]) % 4).unwrap()
}

fn unit_profile() -> Check {
    let a = rule(3, &[2, 1, 1]).to_table(&caps()).unwrap();
    let d = a.evolve(&[1], Boundary::Background(0), 4).unwrap();
    let expected: [[u32; 9]; 5] = [
        [0, 0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 1, 1, 2, 0, 0, 0],
        [0, 0, 1, 2, 2, 1, 1, 0, 0],
        [0, 1, 0, 0, 1, 0, 0, 2, 0],
        [1, 1, 2, 1, 1, 2, 2, 2, 1],
    ];
    let rows = grid(&d);
    ensure(rows.len() == 5, || format!("{} rows", rows.len()))?;
    for (k, (got, want)) in rows.iter().zip(&expected).enumerate() {
        ensure(got.as_slice() == want, || format!("row {k}: {got:?} != {want:?}"))?;
    }
    Ok("five rows match digit for digit".into())
}

fn frobenius_components() -> Check {
    let mut count = 0;
    for p in [2u32, 3, 5] {
        for q in [p, p * p].into_iter().filter(|&q| q <= 9) {
            for a in all_rules(p) {
                let mats = component_matrices(&a, q as usize).unwrap();
                for (k, m) in mats.iter().enumerate() {
                    let want = FpMatrix::scalar(p, q as usize, a.coefficients()[k]);
                    ensure(*m == want, || format!("{:?} at n={q}, component {k}", a.coefficients()))?;
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} (rule, p^k) pairs are scalar"))
}

/// Column `t` of the component at `i` is `f^[n]` on `e_t` placed at `i`.
fn matrices_from_table(power: &LocalAlgebra, p: u32, n: usize) -> Vec<FpMatrix> {
    let r = power.radius();
    (0..power.arity())
        .map(|pos| {
            let mut m = FpMatrix::zeros(p, n, n);
            for t in 0..n {
                let mut unit = vec![0u32; n];
                unit[t] = 1;
                let mut nb = vec![0u32; 2 * r + 1];
                nb[pos] = encode_vector(&unit, p) as u32;
                for (s, x) in decode_vector(power.apply(&nb) as u64, p, n).into_iter().enumerate() {
                    m.set(s, t, x);
                }
            }
            m
        })
        .collect()
}

fn assembly_oracle() -> Check {
    let mut count = 0;
    for p in [2u32, 3] {
        for n in (1..).take_while(|&n| (p as u64).pow(3 * n as u32) <= 3u64.pow(9)) {
            for a in all_rules(p) {
                let power = a.to_table(&caps()).unwrap().power(n, &caps()).unwrap();
                let from_table = matrices_from_table(&power, p, n);
                let assembled = component_matrices(&a, n).unwrap();
                ensure(from_table == assembled, || format!("{:?} over F_{p}, n={n}", a.coefficients()))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} (rule, n) cases agree"))
}

fn triangular_structure() -> Check {
    let mut count = 0;
    for p in [2u32, 3] {
        for a in all_rules(p).filter(|a| a.support().len() >= 2) {
            for n in 1..=6 {
                let rep = check_structure(&a, n).unwrap();
                if let Some(bad) = rep.checks.iter().find(|c| !c.passed) {
                    return Err(format!("{:?} over F_{p}, n={n}: {}", a.coefficients(), bad.name));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} (rule, n) reports pass"))
}

/// Smallest set containing `v` closed under addition and every map.
fn invariant_set(p: u32, n: usize, v: &[u32], maps: &[FpMatrix]) -> usize {
    let apply = |m: &FpMatrix, x: &[u32]| -> Vec<u32> {
        (0..n).map(|s| (0..n).map(|t| m.get(s, t) * x[t]).sum::<u32>() % p).collect()
    };
    let mut seen: HashSet<Vec<u32>> = HashSet::from([vec![0; n], v.to_vec()]);
    let mut queue = vec![v.to_vec()];
    while let Some(x) = queue.pop() {
        let mut next: Vec<Vec<u32>> = maps.iter().map(|m| apply(m, &x)).collect();
        next.extend(seen.iter().map(|y| x.iter().zip(y).map(|(a, b)| (a + b) % p).collect::<Vec<u32>>()));
        for y in next {
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    seen.len()
}

fn simplicity() -> Check {
    let mut count = 0;
    let mut oracle = 0;
    for p in [2u32, 3] {
        for a in all_rules(p).filter(CanonicalAdditive::is_doubly_bijective) {
            for n in (1..=5).filter(|n| n % p as usize != 0) {
                let mats = component_matrices(&a, n).unwrap();
                let simple = is_simple(p, n, &mats, &caps()).unwrap();
                ensure(simple, || format!("{:?} over F_{p}, n={n} not simple", a.coefficients()))?;
                let full = (p as usize).pow(n as u32);
                if full <= 81 {
                    let all_full =
                        (1..full as u64).all(|code| invariant_set(p, n, &decode_vector(code, p, n), &mats) == full);
                    ensure(all_full, || format!("oracle disagrees for {:?}, n={n}", a.coefficients()))?;
                    oracle += 1;
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} cases simple, {oracle} cross-checked exhaustively"))
}

fn splitting() -> Check {
    let mut cases: Vec<CanonicalAdditive> = vec![rule(2, &[1, 1, 1]), rule(2, &[1, 0, 1])];
    cases.extend(all_rules(3).filter(|a| a.support().len() >= 2));
    for b in &cases {
        let rep = verify_splitting(b, 1, 1, &caps()).unwrap();
        let table = b.to_table(&caps()).unwrap();
        let q = b.p() as usize;
        let lhs = table.power(q, &caps()).unwrap();
        let rhs = LocalAlgebra::product(&vec![table; q], &caps()).unwrap();
        let replayed = rep.witness.as_ref().is_some_and(|w| w.is_isomorphism(&lhs, &rhs));
        ensure(rep.holds && replayed, || format!("{:?} over F_{}", b.coefficients(), b.p()))?;
    }
    Ok(format!("{} witnesses replayed", cases.len()))
}

fn quotient_fixture() -> Check {
    let z4 = z4();
    let parity = Congruence::from_labels(&[0, 1, 0, 1]);
    ensure(z4.is_congruence(&parity), || "parity is not a congruence".into())?;
    let q = z4.quotient(&parity).unwrap();
    let eca90 = LocalAlgebra::eca(90);
    let iso = are_isomorphic(&q, &eca90, &caps()).unwrap().ok_or("quotient is not ECA-90")?;
    ensure(iso.is_isomorphism(&q, &eca90), || "witness does not replay".into())?;
    let pi = StateMap(vec![0, 1, 0, 1]);
    let mut windows = 0;
    for steps in 1..=3 {
        let rep = check_translation(&eca90, &z4, &pi, TranslationKind::Project, 7, steps).unwrap();
        ensure(rep.holds && rep.exhaustive, || format!("fails at {steps} steps: {:?}", rep.counterexample))?;
        windows += rep.windows_checked;
    }
    Ok(format!("parity quotient is ECA-90; {windows} width-7 windows commute"))
}

fn characterization() -> Check {
    let mut summary = Vec::new();
    let cases = [
        (rule(2, &[1, 1, 1]), Bounds::new(2, 2, 16)),
        (rule(3, &[2, 1, 1]), Bounds::new(2, 1, 16)),
        (rule(3, &[1, 1, 1]), Bounds::new(2, 1, 16)),
        (rule(3, &[1, 2, 1]), Bounds::new(2, 1, 16)),
    ];
    for (b, bounds) in &cases {
        let rep = verify_characterization(b, bounds).unwrap();
        ensure(rep.outcome == Outcome::Pass, || format!("{:?}: {:?} {:?}", b.coefficients(), rep.outcome, rep.notes))?;
        summary.push(format!("{:?}:{}", b.coefficients(), rep.members.len()));
    }
    let b = rule(3, &[2, 0, 1]);
    let rep = verify_characterization(&b, &Bounds::new(2, 1, 16)).unwrap();
    ensure(rep.outcome == Outcome::Fail, || format!("(2,0,1) gave {:?}", rep.outcome))?;
    let target = rule(3, &[1, 1, 1]).to_table(&caps()).unwrap();
    let witness = rep
        .violations()
        .find(|v| {
            let member = v.derivation.build(&b.to_table(&caps()).unwrap(), &caps()).unwrap();
            v.states == 3 && v.derivation.powers == [2] && are_isomorphic(&member, &target, &caps()).unwrap().is_some()
        })
        .ok_or("no size-3 sub-automaton of B^[2] isomorphic to (1,1,1)")?;
    Ok(format!("{} pass; (2,0,1) fails at {}", summary.join(" "), witness.description))
}

fn incomparability() -> Check {
    let bounds = Bounds::default();
    let (e60, e90, e150) = (LocalAlgebra::eca(60), LocalAlgebra::eca(90), LocalAlgebra::eca(150));
    let v = simulates(&e90, &e150, &bounds).unwrap();
    ensure(v.is_no(), || format!("ECA-90 vs ECA-150: {v:?}"))?;
    let back = simulates(&e150, &e90, &bounds).unwrap();
    ensure(!back.is_yes(), || format!("ECA-150 vs ECA-90: {back:?}"))?;
    let v60 = simulates(&e60, &e150, &bounds).unwrap();
    ensure(v60.is_no(), || format!("ECA-60 vs ECA-150: {v60:?}"))?;
    let label = |v: &Verdict| match v {
        Verdict::Yes(_) => "Yes",
        Verdict::No(_) => "No",
        Verdict::Unknown(_) => "Unknown",
    };
    Ok(format!("90<=150: No, 150<=90: {}, 60<=150: No", label(&back)))
}

fn matrix(p: u32, rows: &[&[u32]]) -> FpMatrix {
    FpMatrix::from_rows(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn affine_closure() -> Check {
    let bounds = Bounds::new(2, 2, 16);
    let mut passed = Vec::new();
    for n in [60u8, 150] {
        let b = fit_affine(&LocalAlgebra::eca(n), 2).unwrap().unwrap();
        let rep = verify_affine_closure(&b, &bounds).unwrap();
        ensure(rep.outcome == Outcome::Pass, || format!("ECA-{n}: {:?} {:?}", rep.outcome, rep.notes))?;
        passed.push(format!("ECA-{n}:{}", rep.items.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sampled = 0;
    while sampled < 6 {
        let d = 1 + sampled % 2;
        let comps: Vec<FpMatrix> = (0..3)
            .map(|_| FpMatrix::new(2, d, d, (0..d * d).map(|_| rng.gen_range(0..2)).collect()).unwrap())
            .collect();
        let constant = (0..d).map(|_| rng.gen_range(0..2)).collect();
        let b = AffineAlgebra::new(2, d, 1, comps, constant).unwrap();
        if !b.bijective_condition() || casim::affine::classify_affine(&b).class.is_none() {
            continue;
        }
        let rep = verify_affine_closure(&b, &bounds).unwrap();
        ensure(rep.outcome == Outcome::Pass, || format!("random {b:?}: {:?}", rep.outcome))?;
        sampled += 1;
    }
    passed.push(format!("{sampled} random"));

    let small = Bounds::new(1, 1, 4);
    let zero = FpMatrix::zeros(2, 2, 2);
    let counterexamples = [
        ("all-zero components", [zero.clone(), zero.clone(), zero.clone()], None),
        ("non-surjective image", [matrix(2, &[&[1, 0], &[0, 0]]), zero.clone(), zero.clone()], Some([0, 1, 0, 2])),
        (
            "single bijective component",
            [matrix(2, &[&[0, 1], &[1, 0]]), zero.clone(), zero.clone()],
            Some([0, 1, 1, 2]),
        ),
    ];
    for (name, comps, labels) in counterexamples {
        let b = AffineAlgebra::new(2, 2, 1, comps.to_vec(), vec![0, 0]).unwrap();
        if let Some(labels) = labels {
            // Blocks of unequal size are not cosets, and 3 states is no power of 2.
            let table = b.to_table(&caps()).unwrap();
            let theta = Congruence::from_labels(&labels);
            ensure(table.is_congruence(&theta), || format!("{name}: {theta} is not a congruence"))?;
            let q = table.quotient(&theta).unwrap();
            ensure(q.states() == 3, || format!("{name}: quotient has {} states", q.states()))?;
            passed.push(format!("{name}: congruence {theta} is not linear"));
        }
        let rep = verify_affine_closure(&b, &small).unwrap();
        ensure(rep.outcome == Outcome::NotApplicable, || format!("{name}: {:?}", rep.outcome))?;
        let bad = rep.non_affine().next().ok_or_else(|| format!("{name}: every member affine"))?;
        passed.push(format!("{name} -> {} states via {}", bad.states, bad.description));
    }
    Ok(passed.join("; "))
}

fn two_state_rules() -> impl Iterator<Item = LocalAlgebra> {
    (0..=255u8).map(LocalAlgebra::eca)
}

/// Block of `n` pair states to the pair of blocks.
fn unzip_blocks(n: usize, ma: usize, mb: usize) -> StateMap {
    let m = ma * mb;
    StateMap(
        (0..m.pow(n as u32) as u64)
            .map(|s| {
                let digits = decode_vector(s, m as u32, n);
                let a: Vec<u32> = digits.iter().map(|&x| x / mb as u32).collect();
                let b: Vec<u32> = digits.iter().map(|&x| x % mb as u32).collect();
                (encode_vector(&a, ma as u32) * mb.pow(n as u32) as u64 + encode_vector(&b, mb as u32)) as u32
            })
            .collect(),
    )
}

fn operator_laws() -> Check {
    let c = caps();
    let mut powers = 0;
    for a in two_state_rules() {
        for m in 1..=4usize {
            for n in (1..=4usize).filter(|n| m * n <= 4) {
                let lhs = a.power(m, &c).unwrap().power(n, &c).unwrap();
                let rhs = a.power(m * n, &c).unwrap();
                ensure(StateMap::identity(lhs.states()).is_isomorphism(&lhs, &rhs), || {
                    format!("rule {:?}, m={m}, n={n}", a.table())
                })?;
                powers += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rules: Vec<LocalAlgebra> = two_state_rules().collect();
    let mut products = 0;
    // Every rule against four random partners up to n = 2, then 64 random pairs at n = 3.
    let mut pairs: Vec<(usize, usize, usize)> = (0..rules.len())
        .flat_map(|a| (0..4).map(move |_| a))
        .flat_map(|a| [1, 2].map(|n| (a, n)))
        .map(|(a, n)| (a, rng.gen_range(0..rules.len()), n))
        .collect();
    pairs.extend((0..64).map(|_| (rng.gen_range(0..rules.len()), rng.gen_range(0..rules.len()), 3)));
    for (a, b, n) in pairs {
        let (a, b) = (&rules[a], &rules[b]);
        let lhs = LocalAlgebra::product(&[a.clone(), b.clone()], &c).unwrap().power(n, &c).unwrap();
        let rhs = LocalAlgebra::product(&[a.power(n, &c).unwrap(), b.power(n, &c).unwrap()], &c).unwrap();
        ensure(unzip_blocks(n, 2, 2).is_isomorphism(&lhs, &rhs), || format!("product law at n={n}"))?;
        products += 1;
    }
    let mut sh = 0;
    for _ in 0..100 {
        let table: Vec<u32> = (0..27).map(|_| rng.gen_range(0..3)).collect();
        let a = LocalAlgebra::new(3, 1, table).unwrap();
        for theta in a.congruences(&c).unwrap() {
            let q = a.quotient(&theta).unwrap();
            for carrier in q.subalgebras(&c).unwrap() {
                let pre: Vec<u32> = (0..3u32).filter(|&s| carrier.contains(&theta.label(s))).collect();
                ensure(a.is_closed(&pre), || "preimage of a subalgebra is not closed".into())?;
                let t = a.restrict(&pre).unwrap();
                let labels: Vec<u32> = pre.iter().map(|&s| theta.label(s)).collect();
                let lhs = t.quotient(&Congruence::from_labels(&labels)).unwrap();
                let rhs = q.restrict(&carrier).unwrap();
                ensure(are_isomorphic(&lhs, &rhs, &c).unwrap().is_some(), || "SH member not in HS".into())?;
                sh += 1;
            }
        }
    }
    Ok(format!("{powers} power laws, {products} product laws, {sh} SH members found in HS"))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 11] = [
        ("unit profile", unit_profile),
        ("frobenius components", frobenius_components),
        ("matrix assembly oracle", assembly_oracle),
        ("triangular structure", triangular_structure),
        ("simplicity", simplicity),
        ("splitting isomorphism", splitting),
        ("quotient fixture", quotient_fixture),
        ("characterization", characterization),
        ("incomparability", incomparability),
        ("affine closure", affine_closure),
        ("operator laws", operator_laws),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.2}s): {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.2}s): {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
