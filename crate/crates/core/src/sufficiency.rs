//! Data sufficiency over a hypothesis class.
//!
//! All counting is extensional: class members are deduplicated by truth
//! table, and a dataset is sufficient for a target when the target fits it
//! and exactly one member of the class does.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::canon::canonical_min_dnf;
use crate::jsonl;
use crate::pattern::{Dataset, LabeledSample};
use crate::table::{truth_table, TruthTable};
use crate::xform::{evaluate, XForm, XFormError};

/// Widest pattern space whose full function space may be enumerated.
pub const ALL_FUNCTIONS_MAX_WIDTH: usize = 4;
/// Widest pattern space for bounded-DNF classes.
pub const BOUNDED_DNF_MAX_WIDTH: usize = 4;
/// Largest dataset for which the exhaustive subset search is allowed.
pub const EXHAUSTIVE_SUBSET_CAP: usize = 12;
pub const DEFAULT_WITNESS_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SufficiencyError {
    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("hypothesis class too large: {0}")]
    ClassTooLarge(String),
    #[error("invalid hypothesis class: {0}")]
    InvalidClass(String),
    #[error("the input dataset is not sufficient for the target")]
    NotSufficientInput,
    #[error("exhaustive subset search over {size} samples exceeds the cap of {EXHAUSTIVE_SUBSET_CAP}")]
    SubsetSearchTooLarge { size: usize },
    #[error(transparent)]
    XForm(#[from] XFormError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassKind {
    /// Every boolean function on the pattern space.
    AllFunctions,
    /// Disjunctions of at most `k` product terms, the empty disjunction included.
    BoundedDnf(usize),
    ExplicitList(Vec<XForm>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisClass {
    width: usize,
    kind: ClassKind,
}

impl HypothesisClass {
    pub fn new(width: usize, kind: ClassKind) -> Result<Self, SufficiencyError> {
        crate::pattern::check_width(width).map_err(|e| SufficiencyError::InvalidClass(e.to_string()))?;
        match &kind {
            ClassKind::AllFunctions if width > ALL_FUNCTIONS_MAX_WIDTH => {
                return Err(SufficiencyError::ClassTooLarge(format!(
                    "all functions on {width} bits (limit {ALL_FUNCTIONS_MAX_WIDTH})"
                )))
            }
            ClassKind::BoundedDnf(0) => {
                return Err(SufficiencyError::InvalidClass("bounded DNF needs k >= 1".into()))
            }
            ClassKind::BoundedDnf(_) if width > BOUNDED_DNF_MAX_WIDTH => {
                return Err(SufficiencyError::ClassTooLarge(format!(
                    "bounded DNF on {width} bits (limit {BOUNDED_DNF_MAX_WIDTH})"
                )))
            }
            ClassKind::ExplicitList(list) => {
                if list.is_empty() {
                    return Err(SufficiencyError::InvalidClass("explicit list is empty".into()));
                }
                for f in list {
                    f.validate(width)?;
                }
            }
            _ => {}
        }
        Ok(Self { width, kind })
    }

    pub fn all_functions(width: usize) -> Result<Self, SufficiencyError> {
        Self::new(width, ClassKind::AllFunctions)
    }

    pub fn bounded_dnf(width: usize, k: usize) -> Result<Self, SufficiencyError> {
        Self::new(width, ClassKind::BoundedDnf(k))
    }

    pub fn explicit(width: usize, list: Vec<XForm>) -> Result<Self, SufficiencyError> {
        Self::new(width, ClassKind::ExplicitList(list))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn kind(&self) -> &ClassKind {
        &self.kind
    }

    /// Distinct member functions in lexicographic truth-table order.
    pub fn members(&self) -> Result<MemberSet, SufficiencyError> {
        let width = self.width;
        Ok(match &self.kind {
            ClassKind::AllFunctions => {
                let count = 1u64 << (1u32 << width);
                MemberSet::Packed { width, tables: (0..count).collect() }
            }
            ClassKind::BoundedDnf(k) => MemberSet::Packed { width, tables: bounded_dnf_tables(width, *k) },
            ClassKind::ExplicitList(list) => {
                let tables: BTreeSet<TruthTable> =
                    list.iter().map(|f| truth_table(f, width)).collect::<Result<_, _>>()?;
                MemberSet::Tables(tables.into_iter().collect())
            }
        })
    }

    fn check_dataset(&self, d: &Dataset) -> Result<(), SufficiencyError> {
        if d.width() != self.width {
            return Err(SufficiencyError::WidthMismatch { expected: self.width, found: d.width() });
        }
        Ok(())
    }
}

/// Packed tables follow [`TruthTable::from_packed`]: output 0 is the most
/// significant of the `2^width` low bits.
fn bounded_dnf_tables(width: usize, k: usize) -> Vec<u64> {
    let len = 1u32 << width;
    let full = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
    let cubes: Vec<u64> = (0..3u32.pow(width as u32))
        .map(|mut code| {
            // each base is 0 = absent, 1 = positive, 2 = negated
            let mut lits = Vec::with_capacity(width);
            for i in 0..width {
                lits.push((i, code % 3));
                code /= 3;
            }
            (0..len).fold(0u64, |acc, idx| {
                let on = lits.iter().all(|&(i, lit)| {
                    let bit = (idx >> (width - 1 - i)) & 1 == 1;
                    match lit {
                        1 => bit,
                        2 => !bit,
                        _ => true,
                    }
                });
                if on {
                    acc | (1u64 << (len - 1 - idx))
                } else {
                    acc
                }
            })
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut seen: HashSet<u64> = HashSet::from([0]);
    let mut frontier = vec![0u64];
    for _ in 0..k {
        let mut next = Vec::new();
        for &t in &frontier {
            for &c in &cubes {
                let u = (t | c) & full;
                if seen.insert(u) {
                    next.push(u);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let mut tables: Vec<u64> = seen.into_iter().collect();
    tables.sort_unstable();
    tables
}

/// Materialized class members, deduplicated and sorted lexicographically.
#[derive(Debug, Clone)]
pub enum MemberSet {
    Packed { width: usize, tables: Vec<u64> },
    Tables(Vec<TruthTable>),
}

/// Dataset constraints in the form each member representation checks fastest.
struct Constraints {
    care: u64,
    want: u64,
    samples: Vec<(usize, bool)>,
}

impl Constraints {
    fn new(width: usize, samples: impl IntoIterator<Item = LabeledSample>) -> Self {
        let len = 1usize << width;
        let mut c = Constraints { care: 0, want: 0, samples: Vec::new() };
        for s in samples {
            let idx = s.pattern.index();
            if len <= 64 {
                let bit = 1u64 << (len - 1 - idx);
                c.care |= bit;
                if s.label {
                    c.want |= bit;
                }
            }
            c.samples.push((idx, s.label));
        }
        c
    }
}

impl MemberSet {
    pub fn len(&self) -> usize {
        match self {
            MemberSet::Packed { tables, .. } => tables.len(),
            MemberSet::Tables(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn table(&self, i: usize) -> TruthTable {
        match self {
            MemberSet::Packed { width, tables } => TruthTable::from_packed(*width, tables[i]),
            MemberSet::Tables(t) => t[i].clone(),
        }
    }

    /// Output of member `i` on the pattern with index `pattern_index`.
    pub fn output(&self, i: usize, pattern_index: usize) -> bool {
        match self {
            MemberSet::Packed { width, tables } => {
                let len = 1usize << width;
                (tables[i] >> (len - 1 - pattern_index)) & 1 == 1
            }
            MemberSet::Tables(t) => t[i].outputs()[pattern_index],
        }
    }

    fn fits(&self, i: usize, c: &Constraints) -> bool {
        match self {
            MemberSet::Packed { tables, .. } => (tables[i] ^ c.want) & c.care == 0,
            MemberSet::Tables(t) => c.samples.iter().all(|&(idx, label)| t[i].outputs()[idx] == label),
        }
    }

    fn consistent_indices<'a>(&'a self, c: &'a Constraints) -> impl Iterator<Item = usize> + 'a {
        (0..self.len()).filter(move |&i| self.fits(i, c))
    }

    /// Members consistent with `d`, in lexicographic order.
    pub fn consistent_with(&self, d: &Dataset) -> Vec<TruthTable> {
        let width = match self {
            MemberSet::Packed { width, .. } => *width,
            MemberSet::Tables(t) => t.first().map_or(d.width(), TruthTable::width),
        };
        let c = Constraints::new(width, d.iter());
        self.consistent_indices(&c).map(|i| self.table(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SufficiencyReport {
    pub consistent_count: u64,
    /// Canonical forms of the first consistent members in truth-table order.
    pub witnesses: Vec<XForm>,
    pub sufficient: bool,
    /// `None` when no target was given.
    pub target_consistent: Option<bool>,
}

#[derive(Serialize)]
struct ReportRecord<'a> {
    consistent_count: u64,
    sufficient: bool,
    target_consistent: Option<bool>,
    witnesses: &'a [String],
}

impl SufficiencyReport {
    pub fn to_record(&self) -> String {
        let witnesses: Vec<String> = self.witnesses.iter().map(|w| w.to_string()).collect();
        jsonl::to_line(&ReportRecord {
            consistent_count: self.consistent_count,
            sufficient: self.sufficient,
            target_consistent: self.target_consistent,
            witnesses: &witnesses,
        })
    }
}

/// True iff `f` agrees with every sample of `d`.
pub fn consistent(f: &XForm, d: &Dataset) -> Result<bool, SufficiencyError> {
    check_target(f, d.width())?;
    for s in d.iter() {
        if evaluate(f, &s.pattern)? != s.label {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_target(f: &XForm, width: usize) -> Result<(), SufficiencyError> {
    if f.max_var() > width {
        return Err(SufficiencyError::WidthMismatch { expected: width, found: f.max_var() });
    }
    f.validate(width)?;
    Ok(())
}

/// Exact number of distinct class members consistent with `d`.
pub fn consistent_count(
    c: &HypothesisClass,
    d: &Dataset,
    witness_limit: usize,
) -> Result<SufficiencyReport, SufficiencyError> {
    c.check_dataset(d)?;
    let members = c.members()?;
    Ok(count_members(&members, c.width, d, witness_limit))
}

fn count_members(members: &MemberSet, width: usize, d: &Dataset, witness_limit: usize) -> SufficiencyReport {
    let constraints = Constraints::new(width, d.iter());
    let mut count = 0u64;
    let mut witnesses = Vec::new();
    for i in members.consistent_indices(&constraints) {
        count += 1;
        if witnesses.len() < witness_limit {
            witnesses.push(canonical_min_dnf(&members.table(i)));
        }
    }
    SufficiencyReport { consistent_count: count, witnesses, sufficient: false, target_consistent: None }
}

pub fn is_sufficient(
    c: &HypothesisClass,
    d: &Dataset,
    target: &XForm,
) -> Result<SufficiencyReport, SufficiencyError> {
    is_sufficient_with_limit(c, d, target, DEFAULT_WITNESS_LIMIT)
}

pub fn is_sufficient_with_limit(
    c: &HypothesisClass,
    d: &Dataset,
    target: &XForm,
    witness_limit: usize,
) -> Result<SufficiencyReport, SufficiencyError> {
    check_target(target, c.width)?;
    let mut report = consistent_count(c, d, witness_limit)?;
    let target_consistent = consistent(target, d)?;
    report.target_consistent = Some(target_consistent);
    report.sufficient = target_consistent && report.consistent_count == 1;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubsetSearch {
    /// Exhaustive up to [`EXHAUSTIVE_SUBSET_CAP`] samples, greedy above.
    #[default]
    Auto,
    Exhaustive,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetResult {
    pub subset: Dataset,
    /// False when produced by greedy backward elimination.
    pub certified_minimal: bool,
}

/// Smallest subset of `d` that is still sufficient for `target`.
///
/// Exhaustive mode tries subsets by increasing size, each size in
/// lexicographic order of pattern sequences. Greedy mode scans samples in
/// pattern order and drops each one whose removal keeps sufficiency.
pub fn minimal_sufficient_subset(
    c: &HypothesisClass,
    d: &Dataset,
    target: &XForm,
    mode: SubsetSearch,
) -> Result<SubsetResult, SufficiencyError> {
    if !is_sufficient_with_limit(c, d, target, 0)?.sufficient {
        return Err(SufficiencyError::NotSufficientInput);
    }
    let members = c.members()?;
    let samples = d.samples();
    let exhaustive = match mode {
        SubsetSearch::Exhaustive if samples.len() > EXHAUSTIVE_SUBSET_CAP => {
            return Err(SufficiencyError::SubsetSearchTooLarge { size: samples.len() })
        }
        SubsetSearch::Exhaustive => true,
        SubsetSearch::Greedy => false,
        SubsetSearch::Auto => samples.len() <= EXHAUSTIVE_SUBSET_CAP,
    };
    // the target fits every subset of d, so sufficiency reduces to a unique survivor
    let unique = |picked: &[LabeledSample]| {
        let constraints = Constraints::new(c.width, picked.iter().copied());
        members.consistent_indices(&constraints).take(2).count() == 1
    };
    let build = |picked: Vec<LabeledSample>| {
        Dataset::with_width(c.width, picked).expect("subset of a valid dataset is valid")
    };

    if exhaustive {
        for size in 0..=samples.len() {
            let mut combo: Vec<usize> = (0..size).collect();
            loop {
                let picked: Vec<LabeledSample> = combo.iter().map(|&i| samples[i]).collect();
                if unique(&picked) {
                    return Ok(SubsetResult { subset: build(picked), certified_minimal: true });
                }
                if !next_combination(&mut combo, samples.len()) {
                    break;
                }
            }
        }
        unreachable!("the full dataset is sufficient");
    }

    let mut kept = samples;
    let mut i = 0;
    while i < kept.len() {
        let mut trial = kept.clone();
        trial.remove(i);
        if unique(&trial) {
            kept = trial;
        } else {
            i += 1;
        }
    }
    Ok(SubsetResult { subset: build(kept), certified_minimal: false })
}

/// Advances `combo` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
