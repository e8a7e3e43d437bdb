//! The ten published (225,8,1) and (289,9,1) difference families.
//!
//! Each family is stored as a canonical family-format text file under
//! `fixtures/` and compiled in.

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::design::design_params;
use crate::family::{parse_family, DifferenceFamily};
use crate::group::GroupSpec;

macro_rules! fixture_table {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../fixtures/", $name, ".df")))),*]
    };
}

const FIXTURES: &[(&str, &str)] = fixture_table![
    "s2-8-225-g3355-1",
    "s2-8-225-g3355-2",
    "s2-8-225-g559-1",
    "s2-8-225-g559-2",
    "s2-8-225-g559-3",
    "s2-8-225-g559-4",
    "s2-9-289-1717-1",
    "s2-9-289-1717-2",
    "s2-9-289-1717-3",
    "s2-9-289-1717-4",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown fixture `{name}`; valid names: {}", valid.join(", "))]
pub struct FixtureError {
    pub name: String,
    pub valid: Vec<&'static str>,
}

/// Expected S(2,k,v) parameters of a fixture's development.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpectedParams {
    pub v: u64,
    pub k: u64,
    pub b: u64,
    pub r: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureEntry {
    pub name: &'static str,
    pub text: &'static str,
    pub group: GroupSpec,
    pub family: DifferenceFamily,
    pub expected: ExpectedParams,
}

pub fn list_fixtures() -> Vec<&'static str> {
    FIXTURES.iter().map(|&(name, _)| name).collect()
}

/// Looks up a fixture by name. `g1717` is accepted as an alias for `1717`.
pub fn fixture(name: &str) -> Result<FixtureEntry, FixtureError> {
    let wanted = name.replace("-g1717-", "-1717-");
    let &(name, text) = FIXTURES
        .iter()
        .find(|(n, _)| *n == wanted)
        .ok_or_else(|| FixtureError {
            name: name.into(),
            valid: list_fixtures(),
        })?;
    let family = parse_family(text).expect("embedded fixture parses");
    let v = family.spec().order() as u64;
    let k = family.k() as u64;
    let params = design_params(v, k).expect("fixture parameters are valid");
    Ok(FixtureEntry {
        name,
        text,
        group: family.spec().clone(),
        expected: ExpectedParams {
            v,
            k,
            b: params.b.expect("fixture parameters are feasible"),
            r: params.r.expect("fixture parameters are feasible"),
        },
        family,
    })
}

pub fn all_fixtures() -> Vec<FixtureEntry> {
    FIXTURES
        .iter()
        .map(|(name, _)| fixture(name).expect("listed fixture exists"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::format_family;
    use alloc::string::ToString;

    fn labels(f: &DifferenceFamily, block: usize) -> Vec<String> {
        f.blocks()[block].elements().map(|e| e.to_token()).collect()
    }

    #[test]
    fn ten_fixtures_by_group() {
        let all = all_fixtures();
        assert_eq!(all.len(), 10);
        let count = |g: &str| all.iter().filter(|f| f.group.to_string() == g).count();
        assert_eq!(count("Z3xZ3xZ5xZ5"), 2);
        assert_eq!(count("Z5xZ5xZ9"), 4);
        assert_eq!(count("Z17xZ17"), 4);
    }

    #[test]
    fn published_blocks() {
        let f = fixture("s2-8-225-g3355-1").unwrap().family;
        assert_eq!(
            labels(&f, 0),
            ["0000", "0001", "0103", "1003", "1210", "1241", "2112", "2144"]
        );
        let f = fixture("s2-9-289-1717-4").unwrap().family;
        assert_eq!(
            labels(&f, 3),
            ["00", "12", "49", "7F", "8B", "93", "AB", "D4", "F1"]
        );
        assert_eq!(fixture("s2-9-289-g1717-4").unwrap().name, "s2-9-289-1717-4");
    }

    #[test]
    fn unknown_fixture() {
        let e = fixture("nonexistent").unwrap_err();
        assert_eq!(e.valid.len(), 10);
        assert!(alloc::format!("{e}").contains("s2-8-225-g559-3"));
    }

    #[test]
    fn embedded_text_is_canonical() {
        for f in all_fixtures() {
            assert_eq!(format_family(&f.family), f.text, "{}", f.name);
        }
    }

    #[test]
    fn expected_params() {
        for f in all_fixtures() {
            let e = f.expected;
            match e.v {
                225 => assert_eq!((e.k, e.b, e.r), (8, 900, 32)),
                289 => assert_eq!((e.k, e.b, e.r), (9, 1156, 36)),
                v => panic!("unexpected v = {v}"),
            }
        }
    }

    #[test]
    fn shared_blocks_as_published() {
        let blocks = |n: &str| fixture(n).unwrap().family.blocks().to_vec();
        let shared = |a: &str, b: &str| -> Vec<usize> {
            let (x, y) = (blocks(a), blocks(b));
            (0..4).filter(|&i| x[i] == y[i]).collect()
        };
        assert_eq!(shared("s2-8-225-g3355-1", "s2-8-225-g3355-2"), [0, 1, 2]);
        assert_eq!(shared("s2-8-225-g559-1", "s2-8-225-g559-2"), [0, 2, 3]);
        assert_eq!(shared("s2-8-225-g559-2", "s2-8-225-g559-3"), [0, 1, 2]);
        assert_eq!(shared("s2-8-225-g559-1", "s2-8-225-g559-4"), [0, 1, 3]);
        assert_eq!(shared("s2-9-289-1717-1", "s2-9-289-1717-2"), [0, 1, 2]);
        assert_eq!(shared("s2-9-289-1717-3", "s2-9-289-1717-4"), [0, 1, 2]);
        assert!(shared("s2-9-289-1717-1", "s2-9-289-1717-3").is_empty());
    }
}
