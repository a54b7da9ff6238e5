//! A desk-scale laboratory for mechanical learning over finite binary
//! pattern spaces.
//!
//! - [`pattern`]: patterns, pattern spaces and labeled datasets.
//! - [`xform`], [`table`], [`canon`]: X-form expressions, their truth tables
//!   and the canonical minimal DNF used to compare them.
//! - [`sufficiency`]: exact counting of consistent hypotheses and the
//!   data-sufficiency decision.
//! - [`learner`]: an incremental learning machine holding a lower/upper
//!   X-form interval.
//! - [`nn`]: small threshold networks, their extracted functions and
//!   X-form trajectories during training.
//! - [`jsonl`]: the line-record encoding shared by every file format.

pub mod canon;
pub mod jsonl;
pub mod learner;
pub mod nn;
pub mod pattern;
pub mod sufficiency;
pub mod table;
pub mod xform;

pub use canon::{canonical_form, canonical_min_dnf, CanonicalForm};
pub use pattern::{
    enumerate_patterns, load_dataset, parse_pattern, validate_dataset, Dataset, DatasetError,
    LabeledSample, Pattern, PatternError,
};
pub use table::{equivalent, truth_table, TruthTable};
pub use xform::{evaluate, parse_xform, random_xform, XForm, XFormError};
