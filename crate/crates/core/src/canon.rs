//! Canonical minimal DNF of a truth table.
//!
//! Prime implicants come from Quine-McCluskey merging. Up to width 4 the
//! cover is an exact minimum (fewest implicants) found by exhaustive search;
//! among minimum covers the lexicographically smallest implicant sequence
//! wins. Implicants are ordered literal by literal: lower base index first,
//! and `b_i` before `!b_i` on the same index. Wider tables fall back to a
//! greedy cover and are reported as not certified minimal.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use crate::table::TruthTable;
use crate::xform::XForm;

/// Widest table for which the cover is certified minimal.
pub const EXACT_COVER_MAX_WIDTH: usize = 4;

/// A product term. Bit `width - i` of `care`/`value` refers to base `b_i`,
/// matching the pattern encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Implicant {
    care: u32,
    value: u32,
}

impl Implicant {
    pub fn covers(&self, index: u32) -> bool {
        index & self.care == self.value
    }

    /// `(base index, negated)` pairs in ascending base order.
    pub fn literals(&self, width: usize) -> Vec<(usize, bool)> {
        (1..=width)
            .filter_map(|i| {
                let bit = 1u32 << (width - i);
                (self.care & bit != 0).then_some((i, self.value & bit == 0))
            })
            .collect()
    }

    fn cmp_in(&self, other: &Implicant, width: usize) -> Ordering {
        self.literals(width).cmp(&other.literals(width))
    }

    pub fn to_xform(&self, width: usize) -> XForm {
        let mut lits: Vec<XForm> = self
            .literals(width)
            .into_iter()
            .map(|(i, neg)| if neg { XForm::Var(i).negate() } else { XForm::Var(i) })
            .collect();
        match lits.len() {
            0 => XForm::Const1,
            1 => lits.pop().unwrap(),
            _ => XForm::And(lits),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub xform: XForm,
    /// Cover in canonical order.
    pub implicants: Vec<Implicant>,
    /// False when the greedy fallback produced the cover.
    pub certified_minimal: bool,
}

/// Prime implicants of the on-set, sorted in canonical implicant order.
pub fn prime_implicants(t: &TruthTable) -> Vec<Implicant> {
    let width = t.width();
    let full = if width == 32 { u32::MAX } else { (1u32 << width) - 1 };
    let mut level: BTreeSet<(u32, u32)> = t
        .outputs()
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(k, _)| (full, k as u32))
        .collect();
    let mut primes = Vec::new();
    while !level.is_empty() {
        let present: HashSet<(u32, u32)> = level.iter().copied().collect();
        let mut merged: HashSet<(u32, u32)> = HashSet::new();
        let mut next = BTreeSet::new();
        for &(care, value) in &level {
            for b in 0..width {
                let bit = 1u32 << b;
                if care & bit == 0 || value & bit != 0 {
                    continue;
                }
                let partner = (care, value | bit);
                if present.contains(&partner) {
                    merged.insert((care, value));
                    merged.insert(partner);
                    next.insert((care & !bit, value));
                }
            }
        }
        primes.extend(
            level
                .iter()
                .filter(|imp| !merged.contains(imp))
                .map(|&(care, value)| Implicant { care, value }),
        );
        level = next;
    }
    primes.sort_by(|a, b| a.cmp_in(b, width));
    primes
}

/// The canonical X-form of `t`. Total on valid tables.
pub fn canonical_min_dnf(t: &TruthTable) -> XForm {
    canonical_form(t).xform
}

pub fn canonical_form(t: &TruthTable) -> CanonicalForm {
    let width = t.width();
    let ones = t.ones();
    if ones == 0 {
        return CanonicalForm { xform: XForm::Const0, implicants: vec![], certified_minimal: true };
    }
    if ones == t.outputs().len() {
        return CanonicalForm {
            xform: XForm::Const1,
            implicants: vec![Implicant { care: 0, value: 0 }],
            certified_minimal: true,
        };
    }
    let primes = prime_implicants(t);
    let minterms: Vec<u32> =
        t.outputs().iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k as u32).collect();
    let (chosen, certified_minimal) = if width <= EXACT_COVER_MAX_WIDTH {
        (exact_cover(&primes, &minterms), true)
    } else {
        (greedy_cover(&primes, &minterms), false)
    };
    let implicants: Vec<Implicant> = chosen.into_iter().map(|i| primes[i]).collect();
    let mut terms: Vec<XForm> = implicants.iter().map(|imp| imp.to_xform(width)).collect();
    let xform = if terms.len() == 1 { terms.pop().unwrap() } else { XForm::Or(terms) };
    CanonicalForm { xform, implicants, certified_minimal }
}

/// Minimum cover as sorted prime indices; ties go to the smallest index
/// sequence, which is the smallest implicant sequence since `primes` is sorted.
fn exact_cover(primes: &[Implicant], minterms: &[u32]) -> Vec<usize> {
    assert!(minterms.len() <= 32);
    let covered_by: Vec<u32> = primes
        .iter()
        .map(|p| {
            minterms
                .iter()
                .enumerate()
                .filter(|(_, &m)| p.covers(m))
                .fold(0u32, |acc, (pos, _)| acc | (1 << pos))
        })
        .collect();
    let covering: Vec<Vec<usize>> = (0..minterms.len())
        .map(|pos| (0..primes.len()).filter(|&p| covered_by[p] & (1 << pos) != 0).collect())
        .collect();
    let all = if minterms.len() == 32 { u32::MAX } else { (1u32 << minterms.len()) - 1 };

    for k in 1..=primes.len() {
        let mut best: Option<Vec<usize>> = None;
        let mut chosen = Vec::with_capacity(k);
        search(k, all, &mut chosen, &covered_by, &covering, &mut best);
        if let Some(b) = best {
            return b;
        }
    }
    unreachable!("the full prime set always covers the on-set")
}

fn search(
    k: usize,
    uncovered: u32,
    chosen: &mut Vec<usize>,
    covered_by: &[u32],
    covering: &[Vec<usize>],
    best: &mut Option<Vec<usize>>,
) {
    if uncovered == 0 {
        let mut cover = chosen.clone();
        cover.sort_unstable();
        if best.as_ref().is_none_or(|b| cover < *b) {
            *best = Some(cover);
        }
        return;
    }
    if chosen.len() == k {
        return;
    }
    // every cover must pick some prime for the lowest uncovered minterm
    let pos = uncovered.trailing_zeros() as usize;
    for &p in &covering[pos] {
        chosen.push(p);
        search(k, uncovered & !covered_by[p], chosen, covered_by, covering, best);
        chosen.pop();
    }
}

/// Essential primes first, then repeatedly the prime covering the most
/// uncovered minterms (smallest index on ties). Returns sorted indices.
fn greedy_cover(primes: &[Implicant], minterms: &[u32]) -> Vec<usize> {
    let mut covered = vec![false; minterms.len()];
    let mut chosen = BTreeSet::new();
    for &m in minterms {
        let mut it = primes.iter().enumerate().filter(|(_, p)| p.covers(m));
        if let (Some((only, _)), None) = (it.next(), it.next()) {
            chosen.insert(only);
        }
    }
    for &p in &chosen {
        for (pos, &m) in minterms.iter().enumerate() {
            if primes[p].covers(m) {
                covered[pos] = true;
            }
        }
    }
    while covered.iter().any(|c| !c) {
        let (best, _) = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| !chosen.contains(i))
            .map(|(i, p)| {
                let gain =
                    minterms.iter().zip(&covered).filter(|(&m, &c)| !c && p.covers(m)).count();
                (i, gain)
            })
            .fold((usize::MAX, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        chosen.insert(best);
        for (pos, &m) in minterms.iter().enumerate() {
            if primes[best].covers(m) {
                covered[pos] = true;
            }
        }
    }
    chosen.into_iter().collect()
}
