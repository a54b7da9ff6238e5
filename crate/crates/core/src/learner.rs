//! Incremental learning machine.
//!
//! The machine's internal representation is an interval of X-forms. `lower`
//! fits exactly the positive patterns seen so far, `upper` fits everything
//! except the negative ones, and every hypothesis consistent with the data
//! lies pointwise between them. Each novel sample squeezes the interval by
//! one pattern and appends a [`TraceEvent`].

use serde::Serialize;
use thiserror::Error;

use crate::canon::canonical_min_dnf;
use crate::jsonl;
use crate::pattern::{Dataset, LabeledSample, Pattern};
use crate::sufficiency::{ClassKind, HypothesisClass, MemberSet, SufficiencyError};
use crate::table::TruthTable;
use crate::xform::XForm;

/// Classes with more distinct members than this are not tracked exactly.
pub const COUNTING_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LearnError {
    #[error("pattern {0} was already observed with the opposite label")]
    ConflictingSample(Pattern),
    #[error("width mismatch: machine has width {expected}, sample has width {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Class(#[from] SufficiencyError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    /// 1-based count of novel samples.
    pub step: usize,
    pub sample: LabeledSample,
    pub lower_after: XForm,
    pub upper_after: XForm,
    /// Patterns still undetermined.
    pub gap: usize,
    pub consistent_remaining: Option<usize>,
}

#[derive(Serialize)]
struct TraceRecord {
    step: usize,
    pattern: String,
    label: u8,
    lower: String,
    upper: String,
    gap: usize,
}

impl TraceEvent {
    pub fn to_record(&self) -> String {
        jsonl::to_line(&TraceRecord {
            step: self.step,
            pattern: self.sample.pattern.to_string(),
            label: u8::from(self.sample.label),
            lower: self.lower_after.to_string(),
            upper: self.upper_after.to_string(),
            gap: self.gap,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feed {
    Novel,
    /// Already observed with the same label; nothing changed.
    Duplicate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Converged,
    NotConvergedStreamExhausted,
}

impl RunStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunStatus::Converged => "converged",
            RunStatus::NotConvergedStreamExhausted => "not_converged_stream_exhausted",
        }
    }
}

#[derive(Debug, Clone)]
pub struct LearningMachine {
    width: usize,
    class: HypothesisClass,
    observed: Dataset,
    lower_outputs: Vec<bool>,
    upper_outputs: Vec<bool>,
    lower: XForm,
    upper: XForm,
    trace: Vec<TraceEvent>,
    members: Option<MemberSet>,
    // indices into `members` still consistent with `observed`
    survivors: Vec<usize>,
}

impl LearningMachine {
    pub fn new(width: usize, class: HypothesisClass) -> Result<Self, LearnError> {
        if class.width() != width {
            return Err(LearnError::WidthMismatch { expected: width, found: class.width() });
        }
        let members = Some(class.members()?).filter(|m| m.len() <= COUNTING_CAP);
        let survivors = members.as_ref().map_or(Vec::new(), |m| (0..m.len()).collect());
        let len = 1usize << width;
        Ok(Self {
            width,
            observed: Dataset::empty(width).expect("class width already validated"),
            lower_outputs: vec![false; len],
            upper_outputs: vec![true; len],
            lower: XForm::Const0,
            upper: XForm::Const1,
            trace: Vec::new(),
            members,
            survivors,
            class,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn class(&self) -> &HypothesisClass {
        &self.class
    }

    pub fn observed(&self) -> &Dataset {
        &self.observed
    }

    pub fn lower(&self) -> &XForm {
        &self.lower
    }

    pub fn upper(&self) -> &XForm {
        &self.upper
    }

    /// The hypothesis reported downstream: the smallest consistent function.
    pub fn current_hypothesis(&self) -> &XForm {
        &self.lower
    }

    pub fn lower_table(&self) -> TruthTable {
        TruthTable::new(self.width, self.lower_outputs.clone()).expect("length fixed at construction")
    }

    pub fn upper_table(&self) -> TruthTable {
        TruthTable::new(self.width, self.upper_outputs.clone()).expect("length fixed at construction")
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    pub fn gap(&self) -> usize {
        (1usize << self.width) - self.observed.len()
    }

    /// Class members still consistent with the observed samples, when tracked.
    pub fn consistent_remaining(&self) -> Option<usize> {
        self.members.as_ref().map(|_| self.survivors.len())
    }

    pub fn converged(&self) -> bool {
        match (self.class.kind(), self.consistent_remaining()) {
            (ClassKind::AllFunctions, _) | (_, None) => self.gap() == 0,
            (_, Some(n)) => n == 1,
        }
    }

    pub fn feed(&mut self, sample: LabeledSample) -> Result<Feed, LearnError> {
        let found = sample.pattern.width();
        if found != self.width {
            return Err(LearnError::WidthMismatch { expected: self.width, found });
        }
        match self.observed.label(&sample.pattern) {
            Some(l) if l == sample.label => return Ok(Feed::Duplicate),
            Some(_) => return Err(LearnError::ConflictingSample(sample.pattern)),
            None => {}
        }
        self.observed.insert(sample).expect("checked above");
        let idx = sample.pattern.index();
        if sample.label {
            self.lower_outputs[idx] = true;
            self.lower = canonical_min_dnf(&self.lower_table());
        } else {
            self.upper_outputs[idx] = false;
            self.upper = canonical_min_dnf(&self.upper_table());
        }
        if let Some(members) = &self.members {
            self.survivors.retain(|&i| members.output(i, idx) == sample.label);
        }
        self.trace.push(TraceEvent {
            step: self.trace.len() + 1,
            sample,
            lower_after: self.lower.clone(),
            upper_after: self.upper.clone(),
            gap: self.gap(),
            consistent_remaining: self.consistent_remaining(),
        });
        Ok(Feed::Novel)
    }

    /// Feeds `samples` in order, stopping as soon as the machine has converged.
    pub fn run_to_convergence<I>(&mut self, samples: I) -> Result<RunStatus, LearnError>
    where
        I: IntoIterator<Item = LabeledSample>,
    {
        for s in samples {
            if self.converged() {
                break;
            }
            self.feed(s)?;
        }
        Ok(if self.converged() { RunStatus::Converged } else { RunStatus::NotConvergedStreamExhausted })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{enumerate_patterns, parse_pattern};
    use crate::table::truth_table;
    use crate::xform::parse_xform;

    fn s(p: &str, l: bool) -> LabeledSample {
        LabeledSample::new(parse_pattern(p).unwrap(), l)
    }

    fn all(width: usize) -> HypothesisClass {
        HypothesisClass::all_functions(width).unwrap()
    }

    fn and_stream() -> Vec<LabeledSample> {
        vec![s("00", false), s("01", false), s("10", false), s("11", true)]
    }

    #[test]
    fn fresh_machine() {
        let m = LearningMachine::new(2, all(2)).unwrap();
        assert_eq!((m.lower(), m.upper(), m.gap()), (&XForm::Const0, &XForm::Const1, 4));
        assert!(!m.converged());
        assert_eq!(LearningMachine::new(3, all(3)).unwrap().gap(), 8);
        let single = HypothesisClass::explicit(1, vec![XForm::Var(1)]).unwrap();
        let m = LearningMachine::new(1, single).unwrap();
        assert_eq!(m.consistent_remaining(), Some(1));
        assert!(m.converged());
        assert!(matches!(LearningMachine::new(3, all(2)), Err(LearnError::WidthMismatch { .. })));
    }

    #[test]
    fn feed_examples() {
        let mut m = LearningMachine::new(2, all(2)).unwrap();
        assert_eq!(m.feed(s("11", true)).unwrap(), Feed::Novel);
        assert_eq!(m.lower().to_string(), "b1 & b2");
        assert_eq!(m.upper(), &XForm::Const1);
        assert_eq!(m.gap(), 3);
        m.feed(s("00", false)).unwrap();
        assert_eq!((m.lower().to_string(), m.upper().to_string(), m.gap()), ("b1 & b2".into(), "b1 | b2".into(), 2));
        assert_eq!(m.consistent_remaining(), Some(4));
        assert_eq!(m.feed(s("11", false)), Err(LearnError::ConflictingSample(parse_pattern("11").unwrap())));
        assert_eq!(m.feed(s("111", false)), Err(LearnError::WidthMismatch { expected: 2, found: 3 }));
    }

    #[test]
    fn duplicates_leave_no_trace() {
        let mut m = LearningMachine::new(2, all(2)).unwrap();
        m.feed(s("11", true)).unwrap();
        let before = m.trace().len();
        assert_eq!(m.feed(s("11", true)).unwrap(), Feed::Duplicate);
        assert_eq!(m.trace().len(), before);
    }

    #[test]
    fn converges_on_full_and_table() {
        let mut m = LearningMachine::new(2, all(2)).unwrap();
        assert_eq!(m.run_to_convergence(and_stream()).unwrap(), RunStatus::Converged);
        assert_eq!(m.trace().len(), 4);
        assert_eq!(m.lower().to_string(), "b1 & b2");
        assert_eq!(m.lower(), m.upper());
    }

    #[test]
    fn every_order_of_and_converges_the_same() {
        let base = and_stream();
        let mut finals = Vec::new();
        let mut order = [0usize, 1, 2, 3];
        permute(&mut order, 0, &mut |o| {
            let mut m = LearningMachine::new(2, all(2)).unwrap();
            let status = m.run_to_convergence(o.iter().map(|&i| base[i])).unwrap();
            assert_eq!((status, m.trace().len()), (RunStatus::Converged, 4));
            finals.push((m.lower().clone(), m.upper().clone()));
        });
        assert_eq!(finals.len(), 24);
        assert!(finals.windows(2).all(|w| w[0] == w[1]));
    }

    fn permute(v: &mut [usize; 4], k: usize, f: &mut impl FnMut(&[usize; 4])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, f);
            v.swap(k, i);
        }
    }

    #[test]
    fn stream_exhausted() {
        let mut m = LearningMachine::new(2, all(2)).unwrap();
        let status = m.run_to_convergence(and_stream().into_iter().take(3)).unwrap();
        assert_eq!((status, m.gap()), (RunStatus::NotConvergedStreamExhausted, 1));
    }

    #[test]
    fn singleton_class_needs_no_data() {
        let single = HypothesisClass::explicit(1, vec![XForm::Var(1)]).unwrap();
        let mut m = LearningMachine::new(1, single).unwrap();
        let status = m.run_to_convergence(vec![s("1", true)]).unwrap();
        assert_eq!(status, RunStatus::Converged);
        assert!(m.trace().is_empty());
    }

    #[test]
    fn restricted_class_converges_early() {
        let target = parse_xform("b1&b2", 2).unwrap();
        let c = HypothesisClass::explicit(2, vec![target.clone(), parse_xform("b1|b2", 2).unwrap()]).unwrap();
        let mut m = LearningMachine::new(2, c).unwrap();
        let status = m.run_to_convergence(vec![s("01", false), s("00", false), s("11", true)]).unwrap();
        assert_eq!(status, RunStatus::Converged);
        assert_eq!(m.trace().len(), 1);
        assert_eq!(m.trace()[0].consistent_remaining, Some(1));
    }

    #[test]
    fn interval_brackets_every_consistent_function() {
        let mut m = LearningMachine::new(2, all(2)).unwrap();
        for sample in [s("10", true), s("01", false)] {
            m.feed(sample).unwrap();
            let (lo, hi) = (m.lower_table(), m.upper_table());
            assert_eq!(truth_table(m.lower(), 2).unwrap(), lo);
            assert_eq!(truth_table(m.upper(), 2).unwrap(), hi);
            for bits in 0..16 {
                let t = TruthTable::from_packed(2, bits);
                let fits = m.observed().iter().all(|s| t.output(&s.pattern) == s.label);
                if fits {
                    assert!(lo.implies(&t) && t.implies(&hi));
                }
            }
        }
        assert_eq!(enumerate_patterns(2).unwrap().len() - m.observed().len(), m.gap());
    }

    #[test]
    fn trace_record_format() {
        let mut m = LearningMachine::new(2, all(2)).unwrap();
        m.feed(s("11", true)).unwrap();
        assert_eq!(
            m.trace()[0].to_record(),
            r#"{"step": 1, "pattern": "11", "label": 1, "lower": "b1 & b2", "upper": "1", "gap": 3}"#
        );
    }
}
