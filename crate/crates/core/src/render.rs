//! Text and PGM renderings of space-time diagrams.

use std::fmt::Write as _;

use crate::algebra::SpaceTimeDiagram;

const GLYPHS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// Grid of states, rows aligned on absolute cell positions.
pub fn grid(d: &SpaceTimeDiagram) -> Vec<Vec<u32>> {
    if d.is_cyclic() {
        return d.rows().to_vec();
    }
    let (lo, hi) = (d.min_origin(), d.max_end());
    (0..d.rows().len()).map(|k| (lo..hi).map(|pos| d.cell(k, pos)).collect()).collect()
}

pub fn glyph(s: u32) -> char {
    GLYPHS.get(s as usize).map_or('?', |&b| b as char)
}

/// One line per time step; `dots` writes state 0 as `.`.
pub fn to_text(d: &SpaceTimeDiagram, dots: bool) -> String {
    let mut out = String::new();
    for row in grid(d) {
        out.extend(row.iter().map(|&s| if dots && s == 0 { '.' } else { glyph(s) }));
        out.push('\n');
    }
    out
}

/// Plain PGM with state `s` at gray level `⌊255·s/(m−1)⌋`.
pub fn to_pgm(d: &SpaceTimeDiagram) -> String {
    let rows = grid(d);
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let m = d.states() as u64;
    let level = |s: u32| if m <= 1 { 0 } else { 255 * s as u64 / (m - 1) };
    let mut out = format!("P2\n{width} {}\n255\n", rows.len());
    for row in rows {
        let line: Vec<String> = (0..width).map(|c| row.get(c).map_or(0, |&s| level(s)).to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Boundary, LocalAlgebra};

    #[test]
    fn eca90_text() {
        let d = LocalAlgebra::eca(90).evolve(&[1], Boundary::Background(0), 2).unwrap();
        assert_eq!(to_text(&d, true), "..1..\n.1.1.\n1...1\n");
        assert_eq!(to_text(&d, false), "00100\n01010\n10001\n");
    }

    #[test]
    fn pgm_levels() {
        let d = LocalAlgebra::eca(90).evolve(&[1], Boundary::Background(0), 1).unwrap();
        assert_eq!(to_pgm(&d), "P2\n3 2\n255\n0 255 0\n255 0 255\n");
        let one = LocalAlgebra::singleton(1).evolve(&[0, 0], Boundary::Background(0), 1).unwrap();
        assert_eq!(to_pgm(&one), "P2\n4 2\n255\n0 0 0 0\n0 0 0 0\n");
    }

    #[test]
    fn cyclic_rows_are_kept() {
        let d = LocalAlgebra::eca(90).evolve(&[1], Boundary::Cyclic(5), 1).unwrap();
        assert_eq!(to_text(&d, false), "00100\n01010\n");
    }
}
