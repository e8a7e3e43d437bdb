//! Difference families, their difference census, and the λ = 1 check.
//!
//! The census counts ordered pairs: every `(x, y)` with `x != y` in the
//! same base block contributes one to `x - y`. A family has λ = 1 exactly
//! when every non-identity element is hit once.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use thiserror::Error;

use crate::group::{GroupElement, GroupError, GroupSpec};
use crate::text::{self, ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("block size must be at least 2, got {0}")]
    BlockTooSmall(usize),
    #[error("duplicate element {0} in block")]
    DuplicateElement(String),
    #[error("block {block} has {found} elements, expected {expected}")]
    InconsistentBlockSize {
        block: usize,
        expected: usize,
        found: usize,
    },
    #[error("family has no blocks")]
    NoBlocks,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A base block: distinct elements sorted by canonical index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseBlock {
    spec: GroupSpec,
    points: Vec<u32>,
}

impl BaseBlock {
    pub fn new(elements: &[GroupElement]) -> Result<Self, FamilyError> {
        let spec = elements
            .first()
            .ok_or(FamilyError::BlockTooSmall(0))?
            .spec()
            .clone();
        if elements.iter().any(|e| e.spec() != &spec) {
            return Err(GroupError::SpecMismatch.into());
        }
        let indices: Vec<u32> = elements.iter().map(GroupElement::index).collect();
        Self::from_indices(&spec, &indices)
    }

    pub fn from_indices(spec: &GroupSpec, indices: &[u32]) -> Result<Self, FamilyError> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= spec.order()) {
            return Err(GroupError::IndexOutOfRange {
                index: bad as u64,
                order: spec.order(),
            }
            .into());
        }
        if indices.len() < 2 {
            return Err(FamilyError::BlockTooSmall(indices.len()));
        }
        let mut points = indices.to_vec();
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(FamilyError::DuplicateElement(spec.index_token(w[0])));
        }
        Ok(Self {
            spec: spec.clone(),
            points,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Canonical indices, ascending.
    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.points.iter().map(|&i| {
            self.spec
                .element_from_index(i as u64)
                .expect("stored indices are in range")
        })
    }

    /// `{x + shift : x in self}`.
    pub fn translate(&self, shift: u32) -> Self {
        let mut points: Vec<u32> = self
            .points
            .iter()
            .map(|&x| self.spec.add_index(x, shift))
            .collect();
        points.sort_unstable();
        Self {
            spec: self.spec.clone(),
            points,
        }
    }
}

/// `b` base blocks of size `k` over one group, kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DifferenceFamily {
    spec: GroupSpec,
    k: usize,
    blocks: Vec<BaseBlock>,
}

impl DifferenceFamily {
    pub fn new(spec: GroupSpec, k: usize, mut blocks: Vec<BaseBlock>) -> Result<Self, FamilyError> {
        if k < 2 {
            return Err(FamilyError::BlockTooSmall(k));
        }
        if blocks.is_empty() {
            return Err(FamilyError::NoBlocks);
        }
        for (i, block) in blocks.iter().enumerate() {
            if block.spec() != &spec {
                return Err(GroupError::SpecMismatch.into());
            }
            if block.len() != k {
                return Err(FamilyError::InconsistentBlockSize {
                    block: i,
                    expected: k,
                    found: block.len(),
                });
            }
        }
        blocks.sort_by(|a, b| a.points.cmp(&b.points));
        Ok(Self { spec, k, blocks })
    }

    /// Builds a family from raw index lists.
    pub fn from_index_blocks(
        spec: GroupSpec,
        k: usize,
        blocks: &[&[u32]],
    ) -> Result<Self, FamilyError> {
        let blocks = blocks
            .iter()
            .map(|b| BaseBlock::from_indices(&spec, b))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(spec, k, blocks)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[BaseBlock] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// `b k (k-1) = v - 1`.
    pub fn divisibility_ok(&self) -> bool {
        let (b, k) = (self.blocks.len() as u64, self.k as u64);
        b * k * (k - 1) == self.spec.order() as u64 - 1
    }

    /// Returns a copy with block `block`'s element at `position` replaced.
    /// The result may fail validation (e.g. when it creates a duplicate).
    pub fn with_replaced_element(
        &self,
        block: usize,
        position: usize,
        replacement: u32,
    ) -> Result<Self, FamilyError> {
        let mut blocks = self.blocks.clone();
        let mut points = blocks[block].points.clone();
        points[position] = replacement;
        blocks[block] = BaseBlock::from_indices(&self.spec, &points)?;
        Self::new(self.spec.clone(), self.k, blocks)
    }
}

/// Dense per-element difference counts; slot 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceCensus {
    counts: Vec<u32>,
}

impl DifferenceCensus {
    /// Census of arbitrary point sets (partial blocks included).
    pub fn of_point_sets<'a>(spec: &GroupSpec, blocks: impl IntoIterator<Item = &'a [u32]>) -> Self {
        let mut counts = alloc::vec![0u32; spec.order() as usize];
        for block in blocks {
            for (i, &x) in block.iter().enumerate() {
                for &y in &block[i + 1..] {
                    counts[spec.sub_index(x, y) as usize] += 1;
                    counts[spec.sub_index(y, x) as usize] += 1;
                }
            }
        }
        Self { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, index: u32) -> u32 {
        self.counts[index as usize]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }
}

pub fn difference_census(f: &DifferenceFamily) -> DifferenceCensus {
    DifferenceCensus::of_point_sets(f.spec(), f.blocks().iter().map(BaseBlock::points))
}

/// Certificate of the λ = 1 check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lambda1Report {
    pub is_family: bool,
    pub divisibility_ok: bool,
    /// Non-identity element indices that never occur as a difference.
    pub missing: Vec<u32>,
    /// `(element index, count)` for counts of two or more.
    pub repeated: Vec<(u32, u32)>,
    /// Number of non-identity elements covered exactly once.
    pub covered_once: u32,
    /// `v - 1`.
    pub nonzero_elements: u32,
}

pub fn verify_lambda1(f: &DifferenceFamily) -> Lambda1Report {
    let census = difference_census(f);
    let mut missing = Vec::new();
    let mut repeated = Vec::new();
    let mut covered_once = 0;
    for (i, &c) in census.counts().iter().enumerate().skip(1) {
        match c {
            0 => missing.push(i as u32),
            1 => covered_once += 1,
            _ => repeated.push((i as u32, c)),
        }
    }
    let divisibility_ok = f.divisibility_ok();
    Lambda1Report {
        is_family: divisibility_ok && missing.is_empty() && repeated.is_empty(),
        divisibility_ok,
        missing,
        repeated,
        covered_once,
        nonzero_elements: f.spec().order() - 1,
    }
}

/// Parses the line-oriented family format:
///
/// ```text
/// group Z17xZ17
/// k 9
/// 00 01 03 13 22 33 4A 6G AE
/// ...
/// ```
///
/// Elements are digit labels or, for groups with a factor above 17,
/// residue tuples such as `(3,20)`. `#` starts a comment.
pub fn parse_family(input: &str) -> Result<DifferenceFamily, ParseError> {
    let mut lines = text::content_lines(input).peekable();
    let group_tok = text::header(&mut lines, "group", 0)?;
    let spec = GroupSpec::parse(group_tok.text).map_err(|e| group_tok.error(e))?;
    let k_tok = text::header(&mut lines, "k", group_tok.line)?;
    let k = k_tok.parse_u64()?;
    if k < 2 {
        return Err(k_tok.error(ParseErrorKind::BlockSizeTooSmall { k }));
    }
    let k = k as usize;

    let mut blocks = Vec::new();
    for line in lines {
        if line.tokens.len() != k {
            let at = line.tokens.get(k).unwrap_or(&line.tokens[0]);
            return Err(at.error(ParseErrorKind::WrongBlockSize {
                expected: k,
                found: line.tokens.len(),
            }));
        }
        let mut points: Vec<u32> = Vec::with_capacity(k);
        for tok in &line.tokens {
            let e = spec.parse_element(tok.text).map_err(|e| tok.error(e))?;
            let idx = e.index();
            if points.contains(&idx) {
                return Err(tok.error(ParseErrorKind::DuplicateElement {
                    token: tok.text.into(),
                }));
            }
            points.push(idx);
        }
        blocks.push(BaseBlock::from_indices(&spec, &points).expect("validated above"));
    }
    if blocks.is_empty() {
        return Err(ParseError {
            line: k_tok.line + 1,
            column: 1,
            kind: ParseErrorKind::NoBlocks,
        });
    }
    Ok(DifferenceFamily::new(spec, k, blocks).expect("validated above"))
}

/// Canonical text form; inverse of [`parse_family`].
pub fn format_family(f: &DifferenceFamily) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "group {}", f.spec());
    let _ = writeln!(out, "k {}", f.k());
    for block in f.blocks() {
        for (i, e) in block.elements().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&e.to_token());
        }
        out.push('\n');
    }
    out
}
