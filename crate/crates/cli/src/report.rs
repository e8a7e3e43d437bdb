//! Serializable certificates for `--json` output and search statistics.

use serde::Serialize;
use steiner_core::{
    format_family, DifferenceFamily, GroupSpec, Lambda1Report, PairCoverageReport, SearchOutcome,
};

#[derive(Debug, Serialize)]
pub struct FamilyCertificate {
    pub group: String,
    pub k: usize,
    pub blocks: usize,
    pub is_family: bool,
    pub divisibility_ok: bool,
    pub covered_once: u32,
    pub nonzero_elements: u32,
    pub missing: Vec<String>,
    pub repeated: Vec<(String, u32)>,
}

impl FamilyCertificate {
    pub fn new(f: &DifferenceFamily, r: &Lambda1Report) -> Self {
        let spec: &GroupSpec = f.spec();
        Self {
            group: spec.to_string(),
            k: f.k(),
            blocks: f.num_blocks(),
            is_family: r.is_family,
            divisibility_ok: r.divisibility_ok,
            covered_once: r.covered_once,
            nonzero_elements: r.nonzero_elements,
            missing: r.missing.iter().map(|&i| spec.index_token(i)).collect(),
            repeated: r
                .repeated
                .iter()
                .map(|&(i, c)| (spec.index_token(i), c))
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DesignCertificate {
    pub v: u32,
    pub k: usize,
    pub blocks: usize,
    pub is_steiner: bool,
    pub pairs_total: u64,
    pub pairs_covered_once: u64,
    /// `[multiplicity, pairs]`, ascending by multiplicity.
    pub histogram: Vec<(u32, u64)>,
    pub offending_pairs: Vec<(u32, u32, u32)>,
    pub offending_total: u64,
    pub replication_min: u32,
    pub replication_max: u32,
}

impl DesignCertificate {
    pub fn new(v: u32, k: usize, blocks: usize, r: &PairCoverageReport, replication: &[u32]) -> Self {
        let pairs_total = v as u64 * (v as u64 - 1) / 2;
        Self {
            v,
            k,
            blocks,
            is_steiner: r.is_steiner,
            pairs_total,
            pairs_covered_once: r.histogram.get(&1).copied().unwrap_or(0),
            histogram: r.histogram.iter().map(|(&m, &p)| (m, p)).collect(),
            offending_pairs: r.offending_pairs.clone(),
            offending_total: r.offending_total,
            replication_min: replication.iter().copied().min().unwrap_or(0),
            replication_max: replication.iter().copied().max().unwrap_or(0),
        }
    }
}

/// Search statistics without wall-clock time, so equal runs serialize
/// identically.
#[derive(Debug, Serialize)]
pub struct SearchStats {
    pub found: bool,
    pub terminated_by: &'static str,
    pub restarts_used: u64,
    pub nodes_expanded: u64,
    pub family: Option<String>,
}

impl SearchStats {
    pub fn new(o: &SearchOutcome) -> Self {
        Self {
            found: o.found.is_some(),
            terminated_by: o.terminated_by.as_str(),
            restarts_used: o.restarts_used,
            nodes_expanded: o.nodes_expanded,
            family: o.found.as_ref().map(format_family),
        }
    }
}
