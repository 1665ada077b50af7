use std::path::{Path, PathBuf};

use casim::affine::{check_structure, classify_affine, component_matrices, e0_evolution, verify_splitting};
use casim::format::{print_affine, print_ca};
use casim::linalg::{common_invariant_subspaces, is_simple, FpMatrix};
use casim::render::{glyph, to_pgm, to_text};
use casim::simulation::{
    classify_canonical, simulates, verify_affine_closure, verify_characterization, Bounds, CapacityClass, Outcome,
    Verdict,
};
use casim::{are_isomorphic, AffineAlgebra, Boundary, CanonicalAdditive, Caps, Congruence, LocalAlgebra};
use serde_json::json;

use crate::input::{read, Input};
use crate::report::{Report, Status};
use crate::{BoundArgs, Check, CliError, Command, Output, Render};

pub fn run(command: &Command, caps: &Caps) -> Result<Output, CliError> {
    match command {
        Command::Show { file } => show(&read(file.as_deref())?, caps),
        Command::Eca { number } => Ok(Output::File(print_ca(&LocalAlgebra::eca(*number)))),
        Command::Canonical { p, a, affine } => {
            let rule = CanonicalAdditive::new(*p, a.clone())?;
            Ok(Output::File(if *affine { print_affine(&rule.to_affine()) } else { print_ca(&rule.to_table(caps)?) }))
        }
        Command::Power { n, file } => {
            let a = read(file.as_deref())?.table(caps)?;
            Ok(Output::File(print_ca(&a.power(*n, caps)?)))
        }
        Command::Product { files } => product(files, caps),
        Command::Evolve { init, steps, boundary, render, dots, file } => {
            let a = read(file.as_deref())?.table(caps)?;
            let word = parse_word(init)?;
            let d = a.evolve(&word, parse_boundary(boundary)?, *steps)?;
            Ok(Output::File(match render {
                Render::Text => to_text(&d, *dots),
                Render::Pgm => to_pgm(&d),
            }))
        }
        Command::Subalgebras { file } => subalgebras(&read(file.as_deref())?, caps),
        Command::Congruences { file } => congruences(&read(file.as_deref())?, caps),
        Command::Quotient { classes, of, check, file } => {
            let input = read(file.as_deref())?;
            match (check, of) {
                (true, Some(of)) => quotient_check(&input, &read(Some(of))?, classes.as_deref(), caps),
                _ => {
                    let classes = classes
                        .as_deref()
                        .ok_or_else(|| CliError::Parse("quotient needs --classes or --of with --check".into()))?;
                    let a = input.table(caps)?;
                    let c = Congruence::from_blocks(a.states(), &parse_classes(classes)?)?;
                    Ok(Output::File(print_ca(&a.quotient(&c)?)))
                }
            }
        }
        Command::Iso { a, b } => iso(&read(Some(a))?, &read(Some(b))?, caps),
        Command::FitAffine { p, relabel, file } => fit(&read(file.as_deref())?, *p, *relabel, caps),
        Command::E0 { n, file } => e0(&read(file.as_deref())?, *n, caps),
        Command::Matrices { n, file } => {
            let input = read(file.as_deref())?;
            let (_, mats) = operators(&input, *n, caps)?;
            let r = (mats.len() / 2) as isize;
            let mut out = String::new();
            for (k, m) in mats.iter().enumerate() {
                out.push_str(&format!("component {}\n", k as isize - r));
                out.push_str(&matrix_text(m));
            }
            Ok(Output::File(out))
        }
        Command::Structure { n, file } => structure(&read(file.as_deref())?, *n, caps),
        Command::InvariantSubspaces { n, file } => invariant(&read(file.as_deref())?, *n, caps),
        Command::Simple { n, file } => simple(&read(file.as_deref())?, *n, caps),
        Command::Split { k, l, file } => split(&read(file.as_deref())?, *k, *l, caps),
        Command::Classify { file } => classify(&read(file.as_deref())?, caps),
        Command::Simulates { a, b, bounds } => simulation(&read(Some(a))?, &read(Some(b))?, bounds, caps),
        Command::Verify { check, file, bounds } => verify(*check, &read(file.as_deref())?, bounds, caps),
    }
}

fn make_bounds(b: &BoundArgs, caps: &Caps) -> Bounds {
    Bounds::new(b.n_max, b.k_max, b.size_cap).with_caps(*caps)
}

fn list(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn matrix_text(m: &FpMatrix) -> String {
    let sep = if m.p() <= 10 { "" } else { " " };
    m.row_vecs().iter().map(|row| row.iter().map(u32::to_string).collect::<Vec<_>>().join(sep) + "\n").collect()
}

fn parse_word(init: &str) -> Result<Vec<u32>, CliError> {
    let bad = || CliError::Parse(format!("bad --init value {init:?}"));
    if let Some(s) = init.strip_prefix("single:") {
        return Ok(vec![s.parse().map_err(|_| bad())?]);
    }
    if init.contains(',') {
        return init.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect();
    }
    let word: Vec<u32> = init.chars().map(|c| c.to_digit(36).ok_or_else(bad)).collect::<Result<_, _>>()?;
    if word.is_empty() {
        return Err(bad());
    }
    Ok(word)
}

fn parse_boundary(s: &str) -> Result<Boundary, CliError> {
    let bad = || CliError::Parse(format!("bad --boundary value {s:?}"));
    match s.split_once(':') {
        Some(("background", b)) => Ok(Boundary::Background(b.parse().map_err(|_| bad())?)),
        Some(("cyclic", n)) => Ok(Boundary::Cyclic(n.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn parse_classes(s: &str) -> Result<Vec<Vec<u32>>, CliError> {
    s.split('/')
        .map(|block| {
            block
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| CliError::Parse(format!("bad --classes value {s:?}"))))
                .collect()
        })
        .collect()
}

fn product(files: &[PathBuf], caps: &Caps) -> Result<Output, CliError> {
    if files.iter().filter(|f| f.as_path() == Path::new("-")).count() > 1 {
        return Err(CliError::Parse("standard input can be named only once".into()));
    }
    let factors = files.iter().map(|f| read(Some(f))?.table(caps)).collect::<Result<Vec<_>, _>>()?;
    Ok(Output::File(print_ca(&LocalAlgebra::product(&factors, caps)?)))
}

fn show(input: &Input, caps: &Caps) -> Result<Output, CliError> {
    let a = input.table(caps)?;
    let mut r = Report::new("show", vec![input.name.clone()]);
    let (left, right) = a.permutivity();
    let perm = |w: Option<isize>| w.map_or("none".to_string(), |k| k.to_string());
    r.line(format!("states {}", a.states()));
    r.line(format!("radius {}", a.radius()));
    r.line(format!("permutive left {} right {}", perm(left), perm(right)));
    r.line(format!("idempotents {}", list(&a.idempotents())));
    let affine = input.affine_up_to_iso(caps);
    match &affine {
        Ok(Some((phi, aff))) => {
            let relabeled = phi.iter().enumerate().any(|(k, &s)| s != k as u32);
            r.line(format!(
                "affine over F_{} dim {}{}",
                aff.p(),
                aff.dim(),
                if relabeled { " after relabeling" } else { "" }
            ));
        }
        Ok(None) => r.line("affine no"),
        Err(e) => r.line(format!("affine unknown ({e})")),
    }
    r.item(json!({
        "states": a.states(),
        "radius": a.radius(),
        "permutivity": [left, right],
        "idempotents": a.idempotents(),
        "affine_p": affine.ok().flatten().map(|(_, aff)| aff.p()),
    }));
    Ok(Output::Report(r))
}

fn subalgebras(input: &Input, caps: &Caps) -> Result<Output, CliError> {
    let subs = input.table(caps)?.subalgebras(caps)?;
    let mut r = Report::new("subalgebras", vec![input.name.clone()]);
    for s in &subs {
        r.line(format!("{{{}}}", s.iter().map(u32::to_string).collect::<Vec<_>>().join(", ")));
        r.item(s);
    }
    r.line(format!("{} subalgebras", subs.len()));
    Ok(Output::Report(r))
}

fn congruences(input: &Input, caps: &Caps) -> Result<Output, CliError> {
    let congs = input.table(caps)?.congruences(caps)?;
    let mut r = Report::new("congruences", vec![input.name.clone()]);
    for c in &congs {
        r.line(c.to_string());
        r.item(c.blocks());
    }
    r.line(format!("{} congruences", congs.len()));
    Ok(Output::Report(r))
}

fn quotient_check(input: &Input, of: &Input, classes: Option<&str>, caps: &Caps) -> Result<Output, CliError> {
    let a = input.table(caps)?;
    let b = of.table(caps)?;
    let mut r = Report::new("quotient", vec![input.name.clone(), of.name.clone()]);
    let candidates = match classes {
        Some(s) => vec![Congruence::from_blocks(b.states(), &parse_classes(s)?)?],
        None => b.congruences(caps)?.into_iter().filter(|c| c.block_count() == a.states()).collect(),
    };
    for c in candidates {
        if !b.is_congruence(&c) {
            r.line(format!("{c} is not a congruence of {}", of.name));
            continue;
        }
        let q = b.quotient(&c)?;
        if let Some(phi) = are_isomorphic(&q, &a, caps)? {
            r.line(format!("{} / {c} is isomorphic to {}", of.name, input.name));
            r.line(format!("iso {}", list(&phi.0)));
            r.witness(json!({ "classes": c.blocks(), "iso": phi }));
            return Ok(Output::Report(r));
        }
        r.line(format!("{} / {c} is not isomorphic to {}", of.name, input.name));
    }
    r.line(format!("{} is not a quotient of {}", input.name, of.name));
    r.result = Status::Fail;
    Ok(Output::Report(r))
}

fn iso(a: &Input, b: &Input, caps: &Caps) -> Result<Output, CliError> {
    let mut r = Report::new("iso", vec![a.name.clone(), b.name.clone()]);
    match are_isomorphic(&a.table(caps)?, &b.table(caps)?, caps)? {
        Some(phi) => {
            r.line(format!("iso {}", list(&phi.0)));
            r.witness(&phi);
        }
        None => {
            r.line("not isomorphic");
            r.result = Status::Fail;
        }
    }
    Ok(Output::Report(r))
}

fn fit(input: &Input, p: Option<u32>, relabel: bool, caps: &Caps) -> Result<Output, CliError> {
    match input.affine(p) {
        Ok(aff) => return Ok(Output::File(print_affine(&aff))),
        Err(CliError::Input(_)) if relabel => {}
        Err(CliError::Input(msg)) => {
            let mut r = Report::new("fit-affine", vec![input.name.clone()]);
            r.line(msg);
            r.result = Status::Fail;
            return Ok(Output::Report(r));
        }
        Err(e) => return Err(e),
    }
    match input.affine_up_to_iso(caps)? {
        Some((phi, aff)) if p.is_none_or(|p| p == aff.p()) => {
            Ok(Output::File(format!("# relabel {}\n{}", list(&phi), print_affine(&aff))))
        }
        _ => {
            let mut r = Report::new("fit-affine", vec![input.name.clone()]);
            r.line("not affine under any relabeling");
            r.result = Status::Fail;
            Ok(Output::Report(r))
        }
    }
}

fn e0(input: &Input, n: usize, caps: &Caps) -> Result<Output, CliError> {
    let prof = e0_evolution(&input.canonical(caps)?, n)?;
    let lo = -((prof.n * prof.r) as isize);
    let digits: String =
        if prof.p <= 10 { prof.values.iter().map(|&v| glyph(v)).collect() } else { list(&prof.values) };
    let mut r = Report::new("e0", vec![input.name.clone()]);
    r.line(format!("positions {lo}..{}", -lo));
    r.line(digits);
    r.item(&prof);
    Ok(Output::Report(r))
}

/// The field, the dimension and the component matrices, of the `n`-th power when `n` is given.
fn operators(input: &Input, n: Option<usize>, caps: &Caps) -> Result<((u32, usize), Vec<FpMatrix>), CliError> {
    match n {
        Some(n) => {
            let c = input.canonical(caps)?;
            Ok(((c.p(), n), component_matrices(&c, n)?))
        }
        None => {
            let aff = affine_any(input, caps)?;
            Ok(((aff.p(), aff.dim()), aff.components().to_vec()))
        }
    }
}

fn affine_any(input: &Input, caps: &Caps) -> Result<AffineAlgebra, CliError> {
    match input.affine(None) {
        Ok(a) => Ok(a),
        Err(CliError::Input(msg)) => input.affine_up_to_iso(caps)?.map(|(_, a)| a).ok_or(CliError::Input(msg)),
        Err(e) => Err(e),
    }
}

fn structure(input: &Input, n: usize, caps: &Caps) -> Result<Output, CliError> {
    let rep = check_structure(&input.canonical(caps)?, n)?;
    let mut r = Report::new("structure", vec![input.name.clone()]);
    r.line(format!("n {} leftmost {} rightmost {}", rep.n, rep.leftmost, rep.rightmost));
    for c in &rep.checks {
        let vals = match (c.expected, c.found) {
            (Some(e), Some(f)) => format!(" (expected {e}, found {f})"),
            _ => String::new(),
        };
        r.line(format!("{} {}{vals}", if c.passed { "ok  " } else { "FAIL" }, c.name));
        r.item(c);
    }
    r.result = Status::from_bool(rep.passed());
    Ok(Output::Report(r))
}

fn invariant(input: &Input, n: Option<usize>, caps: &Caps) -> Result<Output, CliError> {
    let ((p, dim), mats) = operators(input, n, caps)?;
    let subs = common_invariant_subspaces(p, dim, &mats, caps)?;
    let mut r = Report::new("invariant-subspaces", vec![input.name.clone()]);
    for s in &subs {
        let basis: Vec<String> = s.basis().iter().map(|v| v.iter().map(u32::to_string).collect()).collect();
        r.line(format!("dim {}: [{}]", s.dim(), basis.join(", ")));
        r.item(s.basis());
    }
    r.line(format!("{} invariant subspaces", subs.len()));
    Ok(Output::Report(r))
}

fn simple(input: &Input, n: Option<usize>, caps: &Caps) -> Result<Output, CliError> {
    let ((p, dim), mats) = operators(input, n, caps)?;
    let ok = is_simple(p, dim, &mats, caps)?;
    let mut r = Report::new("simple", vec![input.name.clone()]);
    r.line(if ok { "no proper invariant subspace" } else { "has a proper invariant subspace" });
    r.result = Status::from_bool(ok);
    Ok(Output::Report(r))
}

fn split(input: &Input, k: u32, l: usize, caps: &Caps) -> Result<Output, CliError> {
    let rep = verify_splitting(&input.canonical(caps)?, k, l, caps)?;
    let mut r = Report::new("split", vec![input.name.clone()]);
    r.line(format!("states {} method {}", rep.states, rep.method));
    if let Some(w) = &rep.witness {
        r.line(format!("iso {}", list(&w.0)));
        r.witness(w);
    }
    r.item(&rep);
    r.result = Status::from_bool(rep.holds);
    Ok(Output::Report(r))
}

fn classify(input: &Input, caps: &Caps) -> Result<Output, CliError> {
    let mut r = Report::new("classify", vec![input.name.clone()]);
    let Some(aff) = affine_any(input, caps).ok() else {
        r.line("affine no");
        return Ok(Output::Report(r));
    };
    let c = classify_affine(&aff);
    let w = |k: Option<isize>| k.map_or("none".into(), |k| k.to_string());
    r.line(format!("affine over F_{} dim {}", aff.p(), aff.dim()));
    r.line(format!("bijective components {:?}", c.component_bijective));
    r.line(format!("witnesses left {} right {}", w(c.left), w(c.right)));
    match c.class {
        Some((i, j)) => r.line(format!("class ({i}, {j})")),
        None => r.line("class none"),
    }
    r.line(format!("additive {}", c.additive));
    r.item(&c);
    if let Some(cap) = input.canonical(caps).ok().and_then(|k| classify_canonical(&k).ok()) {
        let what = match &cap {
            CapacityClass::Constant => "constant".to_string(),
            CapacityClass::Projection { coordinate } => format!("projection onto {coordinate}"),
            CapacityClass::Products { doubly_bijective, zero_center } => {
                format!("products of powers (doubly bijective {doubly_bijective}, zero center {zero_center})")
            }
        };
        r.line(format!("capacity {} {what}", cap.number()));
        r.item(&cap);
    }
    Ok(Output::Report(r))
}

fn simulation(a: &Input, b: &Input, bounds: &BoundArgs, caps: &Caps) -> Result<Output, CliError> {
    let bounds = make_bounds(bounds, caps);
    let mut r = Report::new("simulates", vec![a.name.clone(), b.name.clone()]);
    r.bounds(bounds);
    match simulates(&a.table(caps)?, &b.table(caps)?, &bounds)? {
        Verdict::Yes(w) => {
            r.line(format!("{} simulates {}", b.name, a.name));
            r.line(format!("derivation {}", w.derivation.describe()));
            r.line(format!("method {}", w.method));
            r.line(format!("iso {}", list(&w.iso.0)));
            r.witness(&w);
        }
        Verdict::No(why) => {
            r.line(format!("{} does not simulate {}: {why}", b.name, a.name));
            r.result = Status::Fail;
        }
        Verdict::Unknown(b) => {
            r.line(format!("no derivation found with n <= {}, k <= {}, size <= {}", b.n_max, b.k_max, b.size_cap));
            r.result = Status::Unknown;
        }
    }
    Ok(Output::Report(r))
}

fn outcome_status(o: Outcome) -> Status {
    match o {
        Outcome::Pass => Status::Pass,
        Outcome::Fail => Status::Fail,
        Outcome::Incomplete | Outcome::NotApplicable => Status::Unknown,
    }
}

fn verify(check: Check, input: &Input, bounds: &BoundArgs, caps: &Caps) -> Result<Output, CliError> {
    let bounds = make_bounds(bounds, caps);
    let mut r = Report::new("verify", vec![input.name.clone()]);
    r.bounds(bounds);
    match check {
        Check::Characterization => {
            let rep = verify_characterization(&input.canonical(caps)?, &bounds)?;
            for m in &rep.members {
                let how = match &m.matched {
                    Some(ls) if ls.is_empty() => "one state".to_string(),
                    Some(ls) => ls.iter().map(|l| format!("B^[{l}]")).collect::<Vec<_>>().join(" x "),
                    None => "no product of powers".to_string(),
                };
                r.line(format!(
                    "{} {:>4} states  {}  ~ {how}",
                    if m.ok() { "ok  " } else { "FAIL" },
                    m.states,
                    m.description
                ));
                r.item(m);
            }
            rep.notes.iter().for_each(|n| r.line(format!("note: {n}")));
            r.line(format!("outcome {:?}", rep.outcome));
            r.result = outcome_status(rep.outcome);
        }
        Check::AffineClosure => {
            let rep = verify_affine_closure(&affine_any(input, caps)?, &bounds)?;
            match rep.class {
                Some((i, j)) => r.line(format!("class ({i}, {j})")),
                None => r.line("class none"),
            }
            for it in &rep.items {
                let aff = match it.affine {
                    Some(true) => "affine",
                    Some(false) => "not affine",
                    None => "unrecognized",
                };
                let mark = if it.in_class {
                    "ok  "
                } else if it.affine.is_some() {
                    "FAIL"
                } else {
                    "?   "
                };
                r.line(format!("{mark} {:>4} states  {}  {aff}", it.states, it.description));
                r.item(it);
            }
            rep.notes.iter().for_each(|n| r.line(format!("note: {n}")));
            r.line(format!("outcome {:?}", rep.outcome));
            r.result = outcome_status(rep.outcome);
        }
    }
    Ok(Output::Report(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words() {
        assert_eq!(parse_word("single:2").unwrap(), vec![2]);
        assert_eq!(parse_word("0110").unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(parse_word("10, 11").unwrap(), vec![10, 11]);
        assert!(parse_word("").is_err());
        assert!(parse_word("single:x").is_err());
    }

    #[test]
    fn boundaries() {
        assert_eq!(parse_boundary("background:1").unwrap(), Boundary::Background(1));
        assert_eq!(parse_boundary("cyclic:7").unwrap(), Boundary::Cyclic(7));
        assert!(parse_boundary("torus:3").is_err());
    }

    #[test]
    fn classes() {
        assert_eq!(parse_classes("0,2/1,3").unwrap(), vec![vec![0, 2], vec![1, 3]]);
        assert!(parse_classes("0,a").is_err());
    }
}
