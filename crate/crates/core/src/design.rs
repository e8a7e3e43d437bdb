//! Block designs: development of a family and the pair-coverage check.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use thiserror::Error;

use crate::family::DifferenceFamily;
use crate::text::{self, ParseError, ParseErrorKind};

/// Maximum number of offending pairs kept in a [`PairCoverageReport`].
pub const OFFENDING_PAIR_CAP: usize = 100;

/// Largest `C(v,2)` for which pair coverage allocates its counter array.
pub const MAX_PAIR_COUNTERS: u64 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("v = {v} must exceed k = {k} >= 2")]
    InvalidParams { v: u64, k: u64 },
    #[error("block {block}: point {point} out of range for v = {v}")]
    PointOutOfRange { block: usize, point: u32, v: u32 },
    #[error("block {block} has {found} points, expected {expected}")]
    WrongBlockSize {
        block: usize,
        expected: usize,
        found: usize,
    },
    #[error("block {block} repeats point {point}")]
    RepeatedPoint { block: usize, point: u32 },
    #[error("divisibility fails: b*k*(k-1) = {lhs} but v-1 = {rhs}")]
    Divisibility { lhs: u64, rhs: u64 },
    #[error("v = {v} is too large for dense pair counting")]
    TooLarge { v: u32 },
}

/// Points `0..v` and a sorted list of sorted `k`-subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    v: u32,
    k: usize,
    points: Vec<u32>,
    duplicates_merged: usize,
}

impl Design {
    pub fn new(v: u32, k: usize, blocks: Vec<Vec<u32>>) -> Result<Self, DesignError> {
        if k < 2 || v as u64 <= k as u64 {
            return Err(DesignError::InvalidParams {
                v: v as u64,
                k: k as u64,
            });
        }
        let mut sorted = Vec::with_capacity(blocks.len());
        for (i, mut block) in blocks.into_iter().enumerate() {
            if block.len() != k {
                return Err(DesignError::WrongBlockSize {
                    block: i,
                    expected: k,
                    found: block.len(),
                });
            }
            if let Some(&point) = block.iter().find(|&&p| p >= v) {
                return Err(DesignError::PointOutOfRange { block: i, point, v });
            }
            block.sort_unstable();
            if let Some(w) = block.windows(2).find(|w| w[0] == w[1]) {
                return Err(DesignError::RepeatedPoint {
                    block: i,
                    point: w[0],
                });
            }
            sorted.push(block);
        }
        sorted.sort_unstable();
        Ok(Self {
            v,
            k,
            points: sorted.concat(),
            duplicates_merged: 0,
        })
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_blocks(&self) -> usize {
        self.points.len() / self.k
    }

    pub fn blocks(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.points.chunks_exact(self.k)
    }

    /// Translates dropped by [`develop`] because they coincided with
    /// another block. Always zero for a λ = 1 family.
    pub fn duplicates_merged(&self) -> usize {
        self.duplicates_merged
    }
}

/// All translates `B + g` of every base block, with coinciding translates
/// merged (and counted in [`Design::duplicates_merged`]).
pub fn develop(f: &DifferenceFamily) -> Result<Design, DesignError> {
    if !f.divisibility_ok() {
        let (b, k) = (f.num_blocks() as u64, f.k() as u64);
        return Err(DesignError::Divisibility {
            lhs: b * k * (k - 1),
            rhs: f.spec().order() as u64 - 1,
        });
    }
    let spec = f.spec();
    let v = spec.order();
    let k = f.k();
    let mut blocks: Vec<Vec<u32>> = Vec::with_capacity(f.num_blocks() * v as usize);
    for base in f.blocks() {
        for g in 0..v {
            let mut block: Vec<u32> = base.points().iter().map(|&x| spec.add_index(x, g)).collect();
            block.sort_unstable();
            blocks.push(block);
        }
    }
    blocks.sort_unstable();
    let before = blocks.len();
    blocks.dedup();
    let duplicates_merged = before - blocks.len();
    Ok(Design {
        v,
        k,
        points: blocks.concat(),
        duplicates_merged,
    })
}

/// Certificate of the S(2,k,v) property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCoverageReport {
    pub is_steiner: bool,
    /// multiplicity -> number of unordered pairs with that multiplicity.
    pub histogram: BTreeMap<u32, u64>,
    /// First pairs (in pair order) whose multiplicity is not 1, capped at
    /// [`OFFENDING_PAIR_CAP`].
    pub offending_pairs: Vec<(u32, u32, u32)>,
    /// Total number of pairs whose multiplicity is not 1.
    pub offending_total: u64,
}

#[inline]
fn pair_slot(lo: u32, hi: u32) -> usize {
    debug_assert!(lo < hi);
    (hi as usize * (hi as usize - 1)) / 2 + lo as usize
}

pub fn pair_coverage(d: &Design) -> Result<PairCoverageReport, DesignError> {
    let v = d.v() as u64;
    let total_pairs = v * (v - 1) / 2;
    if total_pairs > MAX_PAIR_COUNTERS {
        return Err(DesignError::TooLarge { v: d.v() });
    }
    let mut counts = alloc::vec![0u32; total_pairs as usize];
    for block in d.blocks() {
        // Blocks are sorted, so block[i] < block[j] for i < j.
        for (j, &hi) in block.iter().enumerate() {
            let base = (hi as usize * (hi as usize).saturating_sub(1)) / 2;
            for &lo in &block[..j] {
                counts[base + lo as usize] += 1;
            }
        }
    }

    let mut histogram = BTreeMap::new();
    let mut offending_pairs = Vec::new();
    let mut offending_total = 0u64;
    for hi in 1..d.v() {
        for lo in 0..hi {
            let m = counts[pair_slot(lo, hi)];
            *histogram.entry(m).or_insert(0u64) += 1;
            if m != 1 {
                offending_total += 1;
                if offending_pairs.len() < OFFENDING_PAIR_CAP {
                    offending_pairs.push((lo, hi, m));
                }
            }
        }
    }
    let is_steiner = histogram.len() == 1 && histogram.get(&1) == Some(&total_pairs);
    Ok(PairCoverageReport {
        is_steiner,
        histogram,
        offending_pairs,
        offending_total,
    })
}

/// Number of blocks through each point.
pub fn point_replication(d: &Design) -> Vec<u32> {
    let mut r = alloc::vec![0u32; d.v() as usize];
    for &p in &d.points {
        r[p as usize] += 1;
    }
    r
}

/// Counting parameters of a putative S(2,k,v).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DesignParams {
    pub v: u64,
    pub k: u64,
    /// `v(v-1) / (k(k-1))` when integral and feasible.
    pub b: Option<u64>,
    /// `(v-1) / (k-1)` when integral and feasible.
    pub r: Option<u64>,
    pub feasible: bool,
}

pub fn design_params(v: u64, k: u64) -> Result<DesignParams, DesignError> {
    if k < 2 || v <= k {
        return Err(DesignError::InvalidParams { v, k });
    }
    let pairs = v as u128 * (v as u128 - 1);
    let per_block = k as u128 * (k as u128 - 1);
    let feasible = (v - 1).is_multiple_of(k - 1) && pairs.is_multiple_of(per_block);
    Ok(DesignParams {
        v,
        k,
        b: feasible.then(|| (pairs / per_block) as u64),
        r: feasible.then(|| (v - 1) / (k - 1)),
        feasible,
    })
}

/// Parses the design format: `v <int>`, `k <int>`, then one block of point
/// indices per line.
pub fn parse_design(input: &str) -> Result<Design, ParseError> {
    let mut lines = text::content_lines(input);
    let v_tok = text::header(&mut lines, "v", 0)?;
    let v = v_tok.parse_u64()?;
    let k_tok = text::header(&mut lines, "k", v_tok.line)?;
    let k = k_tok.parse_u64()?;
    if k < 2 {
        return Err(k_tok.error(ParseErrorKind::BlockSizeTooSmall { k }));
    }
    if v <= k || v > crate::group::MAX_ORDER as u64 {
        return Err(v_tok.error(ParseErrorKind::BadPointCount { v, k }));
    }
    let (v, k) = (v as u32, k as usize);

    let mut blocks = Vec::new();
    for line in lines {
        if line.tokens.len() != k {
            let at = line.tokens.get(k).unwrap_or(&line.tokens[0]);
            return Err(at.error(ParseErrorKind::WrongBlockSize {
                expected: k,
                found: line.tokens.len(),
            }));
        }
        let mut block = Vec::with_capacity(k);
        for tok in &line.tokens {
            let p = tok.parse_u64()?;
            if p >= v as u64 {
                return Err(tok.error(ParseErrorKind::PointOutOfRange { point: p, v }));
            }
            if block.contains(&(p as u32)) {
                return Err(tok.error(ParseErrorKind::DuplicateElement {
                    token: tok.text.into(),
                }));
            }
            block.push(p as u32);
        }
        blocks.push(block);
    }
    Ok(Design::new(v, k, blocks).expect("validated above"))
}

pub fn format_design(d: &Design) -> String {
    let mut out = String::with_capacity(d.points.len() * 4 + 16);
    let _ = writeln!(out, "v {}", d.v());
    let _ = writeln!(out, "k {}", d.k());
    for block in d.blocks() {
        for (i, p) in block.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{p}");
        }
        out.push('\n');
    }
    out
}
