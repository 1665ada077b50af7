use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use casim::format::{print_affine, print_ca, Document};
use casim::{fit_affine, LocalAlgebra};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn casim(args: &[&str], stdin: &str) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_casim"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Runs each stage on the previous stage's output, requiring success along the way.
fn pipe(stages: &[&[&str]]) -> Run {
    let mut text = String::new();
    let mut last = None;
    for (k, args) in stages.iter().enumerate() {
        let run = casim(args, &text);
        if k + 1 < stages.len() {
            assert_eq!(run.code, 0, "{args:?}: {}", run.stderr);
        }
        text = run.stdout.clone();
        last = Some(run);
    }
    last.unwrap()
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.display().to_string()
}

fn temp(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("casim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn cube_middle_matrix() {
    let run = pipe(&[&["eca", "150"], &["power", "-n", "3"], &["matrices"]]);
    assert_eq!(run.code, 0);
    let middle = run.stdout.split("component 0\n").nth(1).unwrap();
    assert!(middle.starts_with("101\n010\n101\n"), "{}", run.stdout);
}

#[test]
fn cube_middle_matrix_from_rule() {
    let run = pipe(&[&["eca", "150"], &["matrices", "-n", "3"]]);
    assert!(run.stdout.contains("component 0\n101\n010\n101\ncomponent 1"));
}

#[test]
fn ternary_unit_profile() {
    let run = pipe(&[
        &["canonical", "-p", "3", "-a", "2", "1", "1"],
        &["evolve", "--init", "single:1", "--steps", "4", "--render", "text"],
    ]);
    assert_eq!(run.stdout, "000010000\n000112000\n001221100\n010010020\n112112221\n");
}

#[test]
fn parity_quotient_check() {
    let z4 = fixture("z4.ca");
    let run = pipe(&[&["eca", "90"], &["quotient", "--of", &z4, "--check"]]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert!(run.stdout.contains("{0,2} {1,3}"));
    assert!(run.stdout.ends_with("RESULT: PASS\n"));

    let run = pipe(&[&["eca", "150"], &["quotient", "--of", &z4, "--check"]]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.ends_with("RESULT: FAIL\n"));
}

#[test]
fn explicit_quotient_matches_eca90() {
    let run = casim(&["quotient", "--classes", "0,2/1,3", &fixture("z4.ca")], "");
    assert_eq!(run.code, 0, "{}", run.stderr);
    let q = temp("q.ca", &run.stdout);
    let e = temp("e90.ca", &casim(&["eca", "90"], "").stdout);
    assert_eq!(casim(&["iso", &q, &e], "").code, 0);
}

#[test]
fn non_congruence_is_an_error() {
    let run = casim(&["quotient", "--classes", "0,1/2,3", &fixture("z4.ca")], "");
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("congruence"), "{}", run.stderr);
}

#[test]
fn powers_compose_through_pipes() {
    let twice = pipe(&[&["eca", "90"], &["power", "-n", "2"], &["power", "-n", "2"]]).stdout;
    let once = pipe(&[&["eca", "90"], &["power", "-n", "4"]]).stdout;
    let (a, b) = (temp("twice.ca", &twice), temp("once.ca", &once));
    assert_eq!(casim(&["iso", &a, &b], "").code, 0);
}

#[test]
fn iso_fails_with_exit_one() {
    let a = temp("iso90.ca", &casim(&["eca", "90"], "").stdout);
    let run = casim(&["iso", &a, "-"], &casim(&["eca", "150"], "").stdout);
    assert_eq!(run.code, 1);
    assert!(run.stdout.ends_with("RESULT: FAIL\n"));
}

#[test]
fn simulation_verdicts() {
    let e90 = temp("s90.ca", &casim(&["eca", "90"], "").stdout);
    let e150 = temp("s150.ca", &casim(&["eca", "150"], "").stdout);
    let yes = casim(&["simulates", &e90, &fixture("z4.ca")], "");
    assert_eq!(yes.code, 0, "{}", yes.stdout);
    let no = casim(&["simulates", &e90, &e150], "");
    assert_eq!(no.code, 1);
    assert!(no.stdout.ends_with("RESULT: FAIL\n"));
    let unknown = casim(&["simulates", &e150, &e90, "--n-max", "1", "--k-max", "1"], "");
    assert_eq!(unknown.code, 1);
    assert!(unknown.stdout.ends_with("RESULT: UNKNOWN\n"), "{}", unknown.stdout);
}

#[test]
fn json_report_shape() {
    let e90 = temp("j90.ca", &casim(&["eca", "90"], "").stdout);
    let run = casim(&["simulates", &e90, &fixture("z4.ca"), "--json"], "");
    let v: serde_json::Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(v["command"], "simulates");
    assert_eq!(v["result"], "PASS");
    assert_eq!(v["inputs"].as_array().unwrap().len(), 2);
    assert_eq!(v["bounds"]["n_max"], 2);
    assert!(v["items"].is_array());
    assert!(v["witness"]["derivation"]["powers"].is_array());
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "characterization", "--n-max", "1"];
    let input = casim(&["eca", "150"], "").stdout;
    let first = casim(&args, &input);
    assert_eq!(first.code, 0, "{}", first.stdout);
    assert_eq!(first.stdout, casim(&args, &input).stdout);
}

#[test]
fn affine_closure_of_eca60() {
    let run = pipe(&[&["eca", "60"], &["verify", "affine-closure", "--n-max", "2", "--k-max", "1"]]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert!(run.stdout.contains("class (-1, 0)"));
}

#[test]
fn checks_report_failure() {
    assert_eq!(pipe(&[&["eca", "90"], &["simple", "-n", "2"]]).code, 1);
    assert_eq!(pipe(&[&["eca", "150"], &["simple", "-n", "3"]]).code, 0);
    assert_eq!(pipe(&[&["eca", "150"], &["structure", "-n", "5"]]).code, 0);
    assert_eq!(pipe(&[&["eca", "150"], &["split", "-k", "1", "-l", "1"]]).code, 0);
    assert_eq!(pipe(&[&["eca", "110"], &["fit-affine"]]).code, 1);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(casim(&["eca", "256"], "").code, 2);
    assert_eq!(casim(&["frobnicate"], "").code, 2);
    assert_eq!(casim(&["show"], "CA v1\nstates 2\n").code, 2);
    let run = casim(&["show"], "CA v1\nstates 2\nradius 1\ntable 0110\n");
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("line 4"), "{}", run.stderr);
    assert_eq!(casim(&["canonical", "-p", "4", "-a", "1", "0", "1"], "").code, 2);
    assert_eq!(pipe(&[&["eca", "90"], &["evolve", "--boundary", "torus:3"]]).code, 2);
}

#[test]
fn cap_exceeded_suggests_raising_it() {
    let run = pipe(&[&["eca", "90"], &["power", "-n", "4"], &["congruences"]]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("--cap"), "{}", run.stderr);
    let raised = pipe(&[&["eca", "90"], &["power", "-n", "4"], &["congruences", "--cap", "2"]]);
    assert_eq!(raised.code, 0, "{}", raised.stderr);
}

#[test]
fn out_writes_the_file() {
    let dir = std::env::temp_dir().join(format!("casim-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("e.ca");
    let run = casim(&["eca", "30", "--out", path.to_str().unwrap()], "");
    assert_eq!((run.code, run.stdout.as_str()), (0, ""));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, print_ca(&LocalAlgebra::eca(30)));
}

#[test]
fn fixtures_round_trip() {
    for name in ["z4.ca", "ternary.affine"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let reprinted = match Document::parse(&text).unwrap() {
            Document::Ca(a) => print_ca(&a),
            Document::Affine(a) => print_affine(&a),
        };
        assert_eq!(Document::parse(&reprinted).unwrap(), Document::parse(&text).unwrap());
    }
}

#[test]
fn affine_ecas_fit_their_tables() {
    for n in [60u8, 90, 102, 105, 150, 170, 195, 240] {
        let table = casim(&["eca", &n.to_string()], "").stdout;
        let run = casim(&["fit-affine", "-p", "2"], &table);
        assert_eq!(run.code, 0, "rule {n}");
        let Document::Affine(aff) = Document::parse(&run.stdout).unwrap() else { panic!("rule {n}") };
        assert_eq!(aff.to_table(&Default::default()).unwrap(), LocalAlgebra::eca(n));
        assert_eq!(fit_affine(&LocalAlgebra::eca(n), 2).unwrap(), Some(aff));
    }
}

#[test]
fn ternary_affine_file_feeds_rule_commands() {
    let f = fixture("ternary.affine");
    let run = casim(&["e0", "-n", "4", &f], "");
    assert!(run.stdout.contains("112112221\n"), "{}", run.stdout);
    let run = casim(&["classify", &f], "");
    assert!(run.stdout.contains("capacity 3"), "{}", run.stdout);
    let run = casim(&["evolve", "--init", "single:1", "--steps", "1", "--render", "pgm", &f], "");
    assert_eq!(run.stdout, "P2\n3 2\n255\n0 127 0\n127 127 255\n");
}

#[test]
fn cyclic_and_dotted_rendering() {
    let run = pipe(&[&["eca", "90"], &["evolve", "--steps", "2", "--dots"]]);
    assert_eq!(run.stdout, "..1..\n.1.1.\n1...1\n");
    let run = pipe(&[&["eca", "90"], &["evolve", "--init", "00100", "--steps", "1", "--boundary", "cyclic:5"]]);
    assert_eq!(run.stdout, "00100\n01010\n");
}

#[test]
fn listings() {
    let run = pipe(&[&["eca", "150"], &["subalgebras"]]);
    assert_eq!(run.stdout, "{0}\n{1}\n{0, 1}\n3 subalgebras\nRESULT: PASS\n");
    let run = casim(&["congruences", &fixture("z4.ca")], "");
    assert!(run.stdout.contains("{0,2} {1,3}\n"));
    let run = pipe(&[&["eca", "150"], &["show"]]);
    assert!(run.stdout.contains("permutive left -1 right 1\n"));
    let run = casim(&["product", "-", &fixture("z4.ca")], &casim(&["eca", "90"], "").stdout);
    assert!(run.stdout.contains("states 8\n"), "{}", run.stdout);
}
