use std::io::Read;
use std::path::Path;

use casim::affine::prime_base;
use casim::format::Document;
use casim::simulation::as_canonical_additive;
use casim::{fit_affine, is_affine_up_to_iso, AffineAlgebra, CanonicalAdditive, Caps, LocalAlgebra};

use crate::CliError;

/// A parsed input together with the name it was read from.
pub struct Input {
    pub name: String,
    pub doc: Document,
}

/// Reads `path`, or standard input for `None` and `-`.
pub fn read(path: Option<&Path>) -> Result<Input, CliError> {
    let (name, text) = match path {
        Some(p) if p != Path::new("-") => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            (p.display().to_string(), text)
        }
        _ => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::Io(format!("standard input: {e}")))?;
            ("<stdin>".to_string(), text)
        }
    };
    let doc = Document::parse(&text).map_err(|e| CliError::Parse(format!("{name}: {e}")))?;
    Ok(Input { name, doc })
}

impl Input {
    pub fn table(&self, caps: &Caps) -> Result<LocalAlgebra, CliError> {
        match &self.doc {
            Document::Ca(a) => Ok(a.clone()),
            Document::Affine(a) => Ok(a.to_table(caps)?),
        }
    }

    /// The affine form, read directly or fitted to the table's own encoding.
    pub fn affine(&self, p: Option<u32>) -> Result<AffineAlgebra, CliError> {
        match &self.doc {
            Document::Affine(a) => Ok(a.clone()),
            Document::Ca(a) => {
                let p = base(a, p)?;
                fit_affine(a, p)?.ok_or_else(|| {
                    CliError::Input(format!("{}: the table is not affine over F_{p} in its encoding", self.name))
                })
            }
        }
    }

    /// The affine form of the table after relabeling states if needed.
    pub fn affine_up_to_iso(&self, caps: &Caps) -> Result<Option<(Vec<u32>, AffineAlgebra)>, CliError> {
        match &self.doc {
            Document::Affine(a) => Ok(Some(((0..a.states() as u32).collect(), a.clone()))),
            Document::Ca(a) => Ok(is_affine_up_to_iso(a, caps)?.map(|(phi, aff)| (phi.0, aff))),
        }
    }

    /// A one-dimensional linear rule, recognized up to relabeling for tables.
    pub fn canonical(&self, caps: &Caps) -> Result<CanonicalAdditive, CliError> {
        let not = || CliError::Input(format!("{}: not a canonical additive rule", self.name));
        match &self.doc {
            Document::Affine(a) => {
                if a.dim() != 1 || a.constant() != [0] {
                    return Err(not());
                }
                Ok(CanonicalAdditive::new(a.p(), a.components().iter().map(|m| m.get(0, 0)).collect())?)
            }
            Document::Ca(a) => {
                if let Some(p) = prime_base(a.states()).filter(|&p| p as usize == a.states()) {
                    if let Some(aff) = fit_affine(a, p)? {
                        if aff.constant() == [0] {
                            return Ok(CanonicalAdditive::new(
                                p,
                                aff.components().iter().map(|m| m.get(0, 0)).collect(),
                            )?);
                        }
                    }
                }
                as_canonical_additive(a, caps)?.map(|(_, c)| c).ok_or_else(not)
            }
        }
    }
}

fn base(a: &LocalAlgebra, p: Option<u32>) -> Result<u32, CliError> {
    match p {
        Some(p) => Ok(p),
        None => {
            prime_base(a.states()).ok_or_else(|| CliError::Input(format!("{} states is not a prime power", a.states())))
        }
    }
}
