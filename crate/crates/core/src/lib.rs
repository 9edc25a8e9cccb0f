//! Finite trace combinatorics over ordered parameter sequences.
//!
//! A [`Row`] records which positions of an ordered sequence a fixed element
//! relates to; a [`TraceMatrix`] is a set of such rows. On top of these the
//! crate computes switch ranks ([`rank`]), encodes rows by small defining
//! schemes ([`scheme`]), builds lower-bound witness families ([`witness`]),
//! generates reference families ([`zoo`]) and fits growth exponents of trace
//! counts ([`density`]).

pub mod boolop;
pub mod combinatorics;
pub mod density;
pub mod error;
pub mod rank;
pub mod scheme;
pub mod trace;
pub mod witness;
pub mod zoo;

pub use boolop::BoolOp;
pub use density::{
    check_bound, coincidence_report, default_grid, fit, fit_with, CoincidenceReport, DensityEstimate, FitOptions,
    Verdict,
};
pub use error::{Error, Result};
pub use rank::{brute_min_switch_rank, decompose, family_rank, joint_cuts, min_switch_rank, SwitchDecomposition};
pub use scheme::{certify, decode, encode, encode_set, BoundCertificate, Certification, SchemeEntry, SchemeParams};
pub use trace::{CutSet, Row, TraceMatrix};
pub use witness::{build_witness_family, verify_lower_bound, WitnessPattern};
pub use zoo::{FamilySpec, RankTruth};
