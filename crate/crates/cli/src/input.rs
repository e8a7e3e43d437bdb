use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use steiner_core::{fixture, parse_design, parse_family, Design, DifferenceFamily};

/// Where a family comes from on the command line.
#[derive(Debug, Clone)]
pub enum FamilySource<'a> {
    File(&'a Path),
    Fixture(&'a str),
}

impl std::fmt::Display for FamilySource<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilySource::File(p) => write!(f, "{}", p.display()),
            FamilySource::Fixture(n) => write!(f, "fixture {n}"),
        }
    }
}

pub fn load_family(source: &FamilySource<'_>) -> Result<DifferenceFamily> {
    match source {
        FamilySource::Fixture(name) => Ok(fixture(name)?.family),
        FamilySource::File(path) => {
            let text = read(path)?;
            parse_family(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
        }
    }
}

pub fn load_design(path: &Path) -> Result<Design> {
    let text = read(path)?;
    parse_design(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
