//! Plain-text file formats for local algebras (`CA v1`) and affine rules
//! (`AFFINE v1`).
//!
//! ```text
//! CA v1
//! states 2
//! radius 1
//! table 01101001
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::affine::AffineAlgebra;
use crate::algebra::LocalAlgebra;
use crate::error::{Error, Result};
use crate::linalg::FpMatrix;

pub const CA_HEADER: &str = "CA v1";
pub const AFFINE_HEADER: &str = "AFFINE v1";

/// Largest state count written as a digit string.
const DIGIT_STATES: usize = 10;

/// Either file kind, as read from an unknown source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Ca(LocalAlgebra),
    Affine(AffineAlgebra),
}

impl Document {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        let (no, head) = lines.next_line("a header")?;
        match head {
            CA_HEADER => parse_ca(text).map(Document::Ca),
            AFFINE_HEADER => parse_affine(text).map(Document::Affine),
            other => Err(Error::Parse {
                line: no,
                msg: format!("expected `{CA_HEADER}` or `{AFFINE_HEADER}`, found `{other}`"),
            }),
        }
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate(), last: 0 }
    }

    fn next_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            self.last = i + 1;
            let line = raw.trim();
            if !line.is_empty() && !line.starts_with('#') {
                return Ok((i + 1, line));
            }
        }
        Err(Error::Parse { line: self.last + 1, msg: format!("unexpected end of input, expected {what}") })
    }

    fn keyed(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (no, line) = self.next_line(&format!("`{key}`"))?;
        match line.split_once(char::is_whitespace) {
            Some((k, rest)) if k == key => Ok((no, rest.trim())),
            _ if line == key => Ok((no, "")),
            _ => Err(Error::Parse { line: no, msg: format!("expected `{key} …`, found `{line}`") }),
        }
    }

    fn value<T: FromStr>(&mut self, key: &str) -> Result<T> {
        let (no, rest) = self.keyed(key)?;
        number(no, rest)
    }

    fn finish(&mut self) -> Result<()> {
        match self.next_line("") {
            Ok((no, line)) => Err(Error::Parse { line: no, msg: format!("trailing content `{line}`") }),
            Err(_) => Ok(()),
        }
    }
}

fn number<T: FromStr>(line: usize, word: &str) -> Result<T> {
    word.parse().map_err(|_| Error::Parse { line, msg: format!("`{word}` is not a valid number") })
}

fn numbers(line: usize, text: &str) -> Result<Vec<u32>> {
    text.split_whitespace().map(|w| number(line, w)).collect()
}

fn expect_header(lines: &mut Lines, header: &str) -> Result<()> {
    let (no, head) = lines.next_line("a header")?;
    if head != header {
        return Err(Error::Parse { line: no, msg: format!("expected `{header}`, found `{head}`") });
    }
    Ok(())
}

fn at_line(line: usize) -> impl FnOnce(Error) -> Error {
    move |e| match e {
        e @ Error::Parse { .. } => e,
        other => Error::Parse { line, msg: other.to_string() },
    }
}

pub fn parse_ca(text: &str) -> Result<LocalAlgebra> {
    let mut lines = Lines::new(text);
    expect_header(&mut lines, CA_HEADER)?;
    let m: usize = lines.value("states")?;
    let r: usize = lines.value("radius")?;
    let (no, line) = lines.next_line("`table` or `table-list`")?;
    let table = match line.split_once(char::is_whitespace).unwrap_or((line, "")) {
        ("table", digits) => digits
            .trim()
            .chars()
            .map(|c| c.to_digit(10).ok_or_else(|| Error::Parse { line: no, msg: format!("`{c}` is not a digit") }))
            .collect::<Result<Vec<_>>>()?,
        ("table-list", values) => numbers(no, values)?,
        _ => return Err(Error::Parse { line: no, msg: format!("expected a table, found `{line}`") }),
    };
    lines.finish()?;
    LocalAlgebra::new(m, r, table).map_err(at_line(no))
}

pub fn print_ca(a: &LocalAlgebra) -> String {
    let mut out = format!("{CA_HEADER}\nstates {}\nradius {}\n", a.states(), a.radius());
    if a.states() <= DIGIT_STATES {
        out.push_str("table ");
        out.extend(a.table().iter().map(|&s| char::from_digit(s, 10).expect("state below ten")));
    } else {
        out.push_str("table-list");
        for s in a.table() {
            let _ = write!(out, " {s}");
        }
    }
    out.push('\n');
    out
}

pub fn parse_affine(text: &str) -> Result<AffineAlgebra> {
    let mut lines = Lines::new(text);
    expect_header(&mut lines, AFFINE_HEADER)?;
    let p: u32 = lines.value("p")?;
    let d: usize = lines.value("dim")?;
    let (rno, rest) = lines.keyed("radius")?;
    let r: usize = number(rno, rest)?;
    let mut components = Vec::with_capacity(2 * r + 1);
    for i in -(r as isize)..=r as isize {
        let (no, rest) = lines.keyed("component")?;
        let k: isize = number(no, rest)?;
        if k != i {
            return Err(Error::Parse { line: no, msg: format!("expected component {i}, found {k}") });
        }
        let mut rows = Vec::with_capacity(d);
        for _ in 0..d {
            let (no, row) = lines.next_line("a matrix row")?;
            let row = numbers(no, row)?;
            if row.len() != d {
                return Err(Error::Parse { line: no, msg: format!("row has {} entries, expected {d}", row.len()) });
            }
            rows.push((no, row));
        }
        let entries = rows.iter().flat_map(|(_, r)| r.iter().copied()).collect();
        let first = rows.first().map_or(no, |(n, _)| *n);
        components.push(FpMatrix::new(p, d, d, entries).map_err(at_line(first))?);
    }
    let (no, rest) = lines.keyed("constant")?;
    let constant = if rest.is_empty() && d > 0 {
        let (no, line) = lines.next_line("the constant vector")?;
        numbers(no, line)?
    } else {
        numbers(no, rest)?
    };
    lines.finish()?;
    AffineAlgebra::new(p, d, r, components, constant).map_err(at_line(rno))
}

pub fn print_affine(a: &AffineAlgebra) -> String {
    let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    let mut out = format!("{AFFINE_HEADER}\np {}\ndim {}\nradius {}\n", a.p(), a.dim(), a.radius());
    let r = a.radius() as isize;
    for (i, m) in (-r..=r).zip(a.components()) {
        let _ = writeln!(out, "component {i}");
        for row in 0..m.rows() {
            let _ = writeln!(out, "{}", join(m.row(row)));
        }
    }
    let _ = writeln!(out, "constant\n{}", join(a.constant()));
    out
}
