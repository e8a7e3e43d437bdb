//! Difference families over finite abelian groups and the Steiner systems
//! they generate.
//!
//! * [`group`]: cyclic-product groups, labels, mixed-radix indices.
//! * [`family`]: base blocks, the difference census, the λ = 1 check.
//! * [`design`]: development into a block design, pair coverage.
//! * [`search`]: seeded backtracking search for new families.
//! * [`fixtures`]: the ten published (225,8,1) and (289,9,1) families.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod design;
pub mod family;
pub mod fixtures;
pub mod group;
pub mod search;
mod text;

pub use design::{
    design_params, develop, format_design, pair_coverage, parse_design, point_replication,
    Design, DesignError, DesignParams, PairCoverageReport,
};
pub use family::{
    difference_census, format_family, parse_family, verify_lambda1, BaseBlock, DifferenceCensus,
    DifferenceFamily, FamilyError, Lambda1Report,
};
pub use fixtures::{all_fixtures, fixture, list_fixtures, FixtureEntry, FixtureError};
pub use group::{GroupElement, GroupError, GroupSpec};
pub use search::{
    search_difference_family, search_with, Budget, NoClock, PartialFamily, SearchConfig,
    SearchError, SearchOutcome, Strategy, Termination,
};
pub use text::{ParseError, ParseErrorKind};
