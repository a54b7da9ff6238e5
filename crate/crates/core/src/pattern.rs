//! Bit patterns, pattern spaces and labeled datasets.
//!
//! A pattern of width `N` is stored as an `N`-bit integer whose most
//! significant bit is base index 1 (the leftmost character of the textual
//! form). Integer order of the stored value is therefore the lexicographic
//! order of the bit strings, which every enumeration in the crate relies on.

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

/// Largest supported pattern width.
pub const MAX_WIDTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("empty pattern")]
    EmptyPattern,
    #[error("non-binary character at position {0}")]
    NonBinaryCharacter(usize),
    #[error("pattern width {0} exceeds the maximum of {MAX_WIDTH}")]
    WidthExceeded(usize),
    #[error("pattern value {value} does not fit in width {width}")]
    ValueOutOfRange { width: usize, value: u32 },
    #[error("truth table of width {width} needs {} outputs, got {len}", 1usize << .width)]
    TableLength { width: usize, len: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatasetError {
    #[error("samples have mixed widths ({0} and {1})")]
    MixedWidths(usize, usize),
    #[error("conflicting labels for pattern(s): {}", join_patterns(.0))]
    Conflicts(Vec<Pattern>),
    #[error("malformed record on line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("empty dataset with no declared width")]
    MissingWidth,
    #[error(transparent)]
    Width(#[from] PatternError),
    #[error("read failed: {0}")]
    Io(String),
}

fn join_patterns(patterns: &[Pattern]) -> String {
    patterns.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

pub(crate) fn check_width(width: usize) -> Result<(), PatternError> {
    match width {
        0 => Err(PatternError::EmptyPattern),
        w if w > MAX_WIDTH => Err(PatternError::WidthExceeded(w)),
        _ => Ok(()),
    }
}

/// A point of the pattern space of a given width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    // field order matters for the derived Ord: width first, then lexicographic bits
    width: u8,
    value: u16,
}

impl Pattern {
    /// Builds the pattern whose bit string, read as a binary number, is `value`.
    pub fn new(width: usize, value: u32) -> Result<Self, PatternError> {
        check_width(width)?;
        if u64::from(value) >> width != 0 {
            return Err(PatternError::ValueOutOfRange { width, value });
        }
        Ok(Self { width: width as u8, value: value as u16 })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self, PatternError> {
        check_width(bits.len())?;
        let value = bits.iter().fold(0u32, |acc, &b| (acc << 1) | u32::from(b));
        Self::new(bits.len(), value)
    }

    pub fn width(&self) -> usize {
        usize::from(self.width)
    }

    /// Position of this pattern in [`enumerate_patterns`] order.
    pub fn index(&self) -> usize {
        usize::from(self.value)
    }

    /// Bit at 1-based `position`, or `None` outside `1..=width`.
    pub fn bit(&self, position: usize) -> Option<bool> {
        if position == 0 || position > self.width() {
            return None;
        }
        Some((self.value >> (self.width() - position)) & 1 == 1)
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.width()).map(move |i| self.bit(i).unwrap_or(false))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Pattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pattern(s)
    }
}

/// Parses a `0`/`1` string; positions in errors are 1-based.
pub fn parse_pattern(text: &str) -> Result<Pattern, PatternError> {
    if text.is_empty() {
        return Err(PatternError::EmptyPattern);
    }
    let mut value = 0u32;
    let mut width = 0usize;
    for (i, c) in text.chars().enumerate() {
        let bit = match c {
            '0' => 0,
            '1' => 1,
            _ => return Err(PatternError::NonBinaryCharacter(i + 1)),
        };
        width += 1;
        if width > MAX_WIDTH {
            return Err(PatternError::WidthExceeded(text.chars().count()));
        }
        value = (value << 1) | bit;
    }
    Pattern::new(width, value)
}

/// All `2^width` patterns in ascending lexicographic order.
pub fn enumerate_patterns(width: usize) -> Result<Vec<Pattern>, PatternError> {
    check_width(width)?;
    Ok((0..1u32 << width)
        .map(|v| Pattern { width: width as u8, value: v as u16 })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledSample {
    pub pattern: Pattern,
    pub label: bool,
}

impl LabeledSample {
    pub fn new(pattern: Pattern, label: bool) -> Self {
        Self { pattern, label }
    }
}

/// A conflict-free set of labeled samples of one width, ordered by pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dataset {
    width: usize,
    samples: BTreeMap<Pattern, bool>,
}

impl Dataset {
    pub fn empty(width: usize) -> Result<Self, PatternError> {
        check_width(width)?;
        Ok(Self { width, samples: BTreeMap::new() })
    }

    /// Validates `samples` against an explicit width. Accepts an empty list.
    pub fn with_width<I>(width: usize, samples: I) -> Result<Self, DatasetError>
    where
        I: IntoIterator<Item = LabeledSample>,
    {
        let mut out = Self::empty(width)?;
        let mut conflicts = Vec::new();
        for s in samples {
            if s.pattern.width() != width {
                return Err(DatasetError::MixedWidths(width, s.pattern.width()));
            }
            match out.samples.get(&s.pattern) {
                Some(&l) if l != s.label => conflicts.push(s.pattern),
                Some(_) => {}
                None => {
                    out.samples.insert(s.pattern, s.label);
                }
            }
        }
        if conflicts.is_empty() {
            Ok(out)
        } else {
            conflicts.sort();
            conflicts.dedup();
            Err(DatasetError::Conflicts(conflicts))
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn label(&self, pattern: &Pattern) -> Option<bool> {
        self.samples.get(pattern).copied()
    }

    /// Samples in lexicographic pattern order.
    pub fn iter(&self) -> impl Iterator<Item = LabeledSample> + '_ {
        self.samples.iter().map(|(&pattern, &label)| LabeledSample { pattern, label })
    }

    pub fn samples(&self) -> Vec<LabeledSample> {
        self.iter().collect()
    }

    /// Inserts a sample; `Ok(false)` when it was already present with the same label.
    pub fn insert(&mut self, sample: LabeledSample) -> Result<bool, DatasetError> {
        if sample.pattern.width() != self.width {
            return Err(DatasetError::MixedWidths(self.width, sample.pattern.width()));
        }
        match self.samples.get(&sample.pattern) {
            Some(&l) if l == sample.label => Ok(false),
            Some(_) => Err(DatasetError::Conflicts(vec![sample.pattern])),
            None => {
                self.samples.insert(sample.pattern, sample.label);
                Ok(true)
            }
        }
    }

    pub fn is_subset_of(&self, other: &Dataset) -> bool {
        self.width == other.width && self.iter().all(|s| other.label(&s.pattern) == Some(s.label))
    }
}

/// Validates a non-empty list of samples, inferring the width from the first one.
///
/// Duplicates with equal labels collapse; every pattern seen with both labels
/// is reported.
pub fn validate_dataset(samples: &[LabeledSample]) -> Result<Dataset, DatasetError> {
    let width = samples.first().map(|s| s.pattern.width()).ok_or(DatasetError::MissingWidth)?;
    if let Some(s) = samples.iter().find(|s| s.pattern.width() != width) {
        return Err(DatasetError::MixedWidths(width, s.pattern.width()));
    }
    Dataset::with_width(width, samples.iter().copied())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    pattern: String,
    label: u8,
}

/// Reads dataset records in file order, without conflict checking.
///
/// Blank lines are skipped but still counted for error line numbers.
pub fn read_samples<R: BufRead>(reader: R) -> Result<Vec<LabeledSample>, DatasetError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| DatasetError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |reason: String| DatasetError::MalformedRecord { line: line_no, reason };
        let record: Record = serde_json::from_str(&line).map_err(|e| malformed(e.to_string()))?;
        let pattern = parse_pattern(&record.pattern).map_err(|e| malformed(e.to_string()))?;
        let label = match record.label {
            0 => false,
            1 => true,
            other => return Err(malformed(format!("label must be 0 or 1, got {other}"))),
        };
        out.push(LabeledSample { pattern, label });
    }
    Ok(out)
}

/// Loads and validates a dataset. `width` is required only when the stream
/// holds no records; when given it must match every record.
pub fn load_dataset<R: BufRead>(reader: R, width: Option<usize>) -> Result<Dataset, DatasetError> {
    let samples = read_samples(reader)?;
    match width {
        Some(w) => Dataset::with_width(w, samples),
        None if samples.is_empty() => Err(DatasetError::MissingWidth),
        None => validate_dataset(&samples),
    }
}

/// One dataset record line, without the trailing newline.
pub fn sample_record(sample: &LabeledSample) -> String {
    format!("{{\"pattern\": \"{}\", \"label\": {}}}", sample.pattern, u8::from(sample.label))
}
