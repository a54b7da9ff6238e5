//! Extensional form of a boolean function: one output per pattern, in
//! lexicographic pattern order.

use std::fmt;

use crate::pattern::{check_width, Pattern, PatternError};
use crate::xform::{XForm, XFormError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    width: usize,
    outputs: Vec<bool>,
}

impl TruthTable {
    /// `outputs.len()` must equal `2^width`.
    pub fn new(width: usize, outputs: Vec<bool>) -> Result<Self, PatternError> {
        check_width(width)?;
        if outputs.len() != 1usize << width {
            return Err(PatternError::TableLength { width, len: outputs.len() });
        }
        Ok(Self { width, outputs })
    }

    pub fn constant(width: usize, value: bool) -> Result<Self, PatternError> {
        check_width(width)?;
        Self::new(width, vec![value; 1usize << width])
    }

    /// Reads `2^width` outputs from `bits`, output 0 in the most significant
    /// position, so integer order of `bits` is lexicographic table order.
    /// Requires `width <= 6`.
    pub fn from_packed(width: usize, bits: u64) -> Self {
        assert!((1..=6).contains(&width), "packed tables need 1 <= width <= 6");
        let len = 1usize << width;
        let outputs = (0..len).map(|k| (bits >> (len - 1 - k)) & 1 == 1).collect();
        Self { width, outputs }
    }

    /// Inverse of [`TruthTable::from_packed`]; `None` above width 6.
    pub fn to_packed(&self) -> Option<u64> {
        (self.width <= 6).then(|| self.outputs.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b)))
    }

    /// Parses a `0`/`1` string of length `2^width`.
    pub fn parse(text: &str) -> Option<Self> {
        let len = text.len();
        if !len.is_power_of_two() || len < 2 {
            return None;
        }
        let outputs = text
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Self::new(len.trailing_zeros() as usize, outputs).ok()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn outputs(&self) -> &[bool] {
        &self.outputs
    }

    pub fn output(&self, pattern: &Pattern) -> bool {
        self.outputs[pattern.index()]
    }

    pub fn ones(&self) -> usize {
        self.outputs.iter().filter(|&&b| b).count()
    }

    /// True iff every 1 of `self` is a 1 of `other`.
    pub fn implies(&self, other: &TruthTable) -> bool {
        self.width == other.width && self.outputs.iter().zip(&other.outputs).all(|(&a, &b)| !a || b)
    }

    pub fn disagreements(&self, other: &TruthTable) -> usize {
        self.outputs.iter().zip(&other.outputs).filter(|(a, b)| a != b).count()
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.outputs {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Packed bit rows, 64 patterns per word, pattern `k` at bit `k % 64` of word `k / 64`.
struct Rows {
    words: Vec<u64>,
}

impl Rows {
    fn splat(len: usize, value: bool) -> Self {
        let n = len.div_ceil(64);
        let mut words = vec![if value { u64::MAX } else { 0 }; n];
        trim(&mut words, len);
        Rows { words }
    }
}

fn trim(words: &mut [u64], len: usize) {
    if !len.is_multiple_of(64) {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << (len % 64)) - 1;
        }
    }
}

fn rows_of(f: &XForm, width: usize, len: usize) -> Result<Rows, XFormError> {
    Ok(match f {
        XForm::Const0 => Rows::splat(len, false),
        XForm::Const1 => Rows::splat(len, true),
        XForm::Var(i) => {
            if *i == 0 || *i > width {
                return Err(XFormError::VariableOutOfRange(*i));
            }
            let shift = width - i;
            let mut rows = Rows::splat(len, false);
            for k in 0..len {
                if (k >> shift) & 1 == 1 {
                    rows.words[k / 64] |= 1u64 << (k % 64);
                }
            }
            rows
        }
        XForm::Not(c) => {
            let mut rows = rows_of(c, width, len)?;
            rows.words.iter_mut().for_each(|w| *w = !*w);
            trim(&mut rows.words, len);
            rows
        }
        XForm::And(cs) | XForm::Or(cs) => {
            let is_and = matches!(f, XForm::And(_));
            let mut acc = Rows::splat(len, is_and);
            for c in cs {
                let rows = rows_of(c, width, len)?;
                for (a, b) in acc.words.iter_mut().zip(rows.words) {
                    if is_and {
                        *a &= b
                    } else {
                        *a |= b
                    }
                }
            }
            acc
        }
    })
}

/// Truth table of `f` over all patterns of `width`, computed word-parallel.
pub fn truth_table(f: &XForm, width: usize) -> Result<TruthTable, XFormError> {
    check_width(width).map_err(|_| XFormError::InvalidWidth(width))?;
    let len = 1usize << width;
    let rows = rows_of(f, width, len)?;
    let outputs = (0..len).map(|k| (rows.words[k / 64] >> (k % 64)) & 1 == 1).collect();
    Ok(TruthTable { width, outputs })
}

/// Extensional equality of two X-forms over `width` bits.
pub fn equivalent(f: &XForm, g: &XForm, width: usize) -> Result<bool, XFormError> {
    Ok(truth_table(f, width)? == truth_table(g, width)?)
}
