//! Bit-serial maximum/minimum search driven by one-hot in-memory ANDs.
//!
//! Each step ANDs every stored word with a one-hot mask, MSB first. For a
//! maximum the near-memory logic keeps the candidates that returned 1, for a
//! minimum those that returned 0. If no candidate has the kept value the set
//! is left as is, so it never empties. The scan ends when the width is
//! exhausted or a single candidate remains; ties go to the lowest row.

use std::fmt;
use std::str::FromStr;

use crate::array::ArrayState;
use crate::error::{LimError, Result};
use crate::types::{Bit, Mask, OperationKind, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchMode {
    Max,
    Min,
}

impl SearchMode {
    pub fn flipped(self) -> Self {
        match self {
            SearchMode::Max => SearchMode::Min,
            SearchMode::Min => SearchMode::Max,
        }
    }

    fn kept(self) -> Bit {
        match self {
            SearchMode::Max => Bit::One,
            SearchMode::Min => Bit::Zero,
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::Max => "max",
            SearchMode::Min => "min",
        })
    }
}

impl FromStr for SearchMode {
    type Err = LimError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "max" | "maximum" => Ok(SearchMode::Max),
            "min" | "minimum" => Ok(SearchMode::Min),
            _ => Err(LimError::Parse {
                line: 0,
                msg: format!("unknown search mode '{s}'"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Encoding {
    Unsigned,
    TwosComplement,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Unsigned => "unsigned",
            Encoding::TwosComplement => "twos_complement",
        })
    }
}

impl FromStr for Encoding {
    type Err = LimError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "unsigned" | "u" => Ok(Encoding::Unsigned),
            "twos_complement" | "signed" | "twos" | "s" => Ok(Encoding::TwosComplement),
            _ => Err(LimError::Parse {
                line: 0,
                msg: format!("unknown encoding '{s}'"),
            }),
        }
    }
}

/// Membership bitmap over the rows of an array.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CandidateSet {
    len: usize,
    bits: Vec<u64>,
}

impl CandidateSet {
    pub fn empty(len: usize) -> Self {
        CandidateSet {
            len,
            bits: vec![0; len.div_ceil(64)],
        }
    }

    pub fn all(len: usize) -> Self {
        let mut s = Self::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn from_rows(len: usize, rows: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(len);
        for r in rows {
            s.insert(r);
        }
        s
    }

    /// Number of rows the set ranges over.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, row: usize) {
        assert!(row < self.len, "row {row} outside candidate universe {}", self.len);
        self.bits[row / 64] |= 1 << (row % 64);
    }

    pub fn contains(&self, row: usize) -> bool {
        row < self.len && self.bits[row / 64] & (1 << (row % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|b| *b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |r| self.contains(*r))
    }

    pub fn first(&self) -> Option<usize> {
        self.bits
            .iter()
            .enumerate()
            .find(|(_, b)| **b != 0)
            .map(|(i, b)| i * 64 + b.trailing_zeros() as usize)
    }

    pub fn is_subset(&self, other: &CandidateSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// `0`/`1` per row, row 0 first.
    pub fn to_bitstring(&self) -> String {
        (0..self.len)
            .map(|r| if self.contains(r) { '1' } else { '0' })
            .collect()
    }
}

/// One MSB-to-LSB step of the scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepTrace {
    pub bit_position: usize,
    pub mask: Mask,
    /// Discard rule applied at this bit (inverted at the sign bit for
    /// two's-complement words).
    pub rule: SearchMode,
    pub and_results: Vec<Bit>,
    pub candidates_before: CandidateSet,
    pub candidates_after: CandidateSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremeResult {
    pub row: usize,
    pub value: Word,
    pub steps: Vec<StepTrace>,
    pub final_candidates: CandidateSet,
}

pub fn step(candidates: &CandidateSet, and_results: &[Bit], mode: SearchMode) -> CandidateSet {
    let keep = mode.kept();
    let kept = CandidateSet::from_rows(
        candidates.universe(),
        candidates
            .iter()
            .filter(|r| and_results.get(*r).copied() == Some(keep)),
    );
    if kept.is_empty() {
        candidates.clone()
    } else {
        kept
    }
}

pub fn priority_select(candidates: &CandidateSet) -> Result<usize> {
    candidates.first().ok_or(LimError::EmptySet)
}

fn rule_at(position: usize, mode: SearchMode, encoding: Encoding) -> SearchMode {
    match encoding {
        // a 0 sign bit is the larger value
        Encoding::TwosComplement if position == 0 => mode.flipped(),
        _ => mode,
    }
}

pub fn find_extreme(
    array: &mut ArrayState,
    mode: SearchMode,
    encoding: Encoding,
) -> Result<ExtremeResult> {
    array.variant().check(OperationKind::And)?;
    let rows = array.rows();
    let width = array.cols();
    let mut candidates = CandidateSet::all(rows);
    let mut steps = Vec::new();
    for position in 0..width {
        if candidates.count() <= 1 {
            break;
        }
        let mask = Mask::one_hot(width, position)?;
        let (and_results, _) = array.and_op(&mask)?;
        let rule = rule_at(position, mode, encoding);
        let after = step(&candidates, &and_results, rule);
        steps.push(StepTrace {
            bit_position: position,
            mask,
            rule,
            and_results,
            candidates_before: candidates,
            candidates_after: after.clone(),
        });
        candidates = after;
    }
    let row = priority_select(&candidates)?;
    Ok(ExtremeResult {
        row,
        value: array.row(row)?,
        steps,
        final_candidates: candidates,
    })
}

/// First row holding the extremum, by direct comparison of decoded values.
/// Used as the built-in cross-check of [`find_extreme`].
pub fn direct_scan(words: &[Word], mode: SearchMode, encoding: Encoding) -> Option<usize> {
    let key = |w: &Word| -> i128 {
        match encoding {
            Encoding::Unsigned => w.to_u64().expect("width <= 64") as i128,
            Encoding::TwosComplement => w.to_i64().expect("width <= 64") as i128,
        }
    };
    let mut best: Option<(usize, i128)> = None;
    for (i, w) in words.iter().enumerate() {
        let k = key(w);
        let better = match (best, mode) {
            (None, _) => true,
            (Some((_, b)), SearchMode::Max) => k > b,
            (Some((_, b)), SearchMode::Min) => k < b,
        };
        if better {
            best = Some((i, k));
        }
    }
    best.map(|(i, _)| i)
}
