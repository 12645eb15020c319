//! Seeded batches of random extremum searches, run in parallel.

use crate::array::ArrayState;
use crate::error::Result;
use crate::exec::Exec;
use crate::maxmin::{direct_scan, find_extreme, Encoding, SearchMode};
use crate::rng::SplitMix64;
use crate::types::{ArrayGeometry, CellVariant, Word};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchInstance {
    pub variant: CellVariant,
    pub mode: SearchMode,
    pub encoding: Encoding,
    pub width: usize,
    pub words: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceOutcome {
    pub row: usize,
    pub steps: usize,
    pub oracle_row: usize,
}

impl InstanceOutcome {
    pub fn agrees(&self) -> bool {
        self.row == self.oracle_row
    }
}

/// Bounds for [`generate`].
#[derive(Debug, Clone, Copy)]
pub struct InstanceSpace {
    pub widths: (usize, usize),
    pub rows: (usize, usize),
}

impl Default for InstanceSpace {
    fn default() -> Self {
        InstanceSpace {
            widths: (2, 64),
            rows: (1, 256),
        }
    }
}

/// `count` instances drawn from one SplitMix64 stream.
///
/// Every fourth instance draws its words from a pool of at most four values
/// so that tied extrema are common.
pub fn generate(seed: u64, count: usize, space: InstanceSpace) -> Vec<SearchInstance> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|i| {
            let variant = CellVariant::LIM[rng.range_inclusive(0, 2)];
            let mode = if rng.next_u64() & 1 == 0 {
                SearchMode::Max
            } else {
                SearchMode::Min
            };
            let encoding = if rng.next_u64() & 1 == 0 {
                Encoding::Unsigned
            } else {
                Encoding::TwosComplement
            };
            let width = rng.range_inclusive(space.widths.0, space.widths.1);
            let rows = rng.range_inclusive(space.rows.0, space.rows.1);
            let words = if i % 4 == 3 {
                let pool: Vec<Word> = (0..rng.range_inclusive(1, 4)).map(|_| rng.word(width)).collect();
                (0..rows)
                    .map(|_| pool[rng.range_inclusive(0, pool.len() - 1)].clone())
                    .collect()
            } else {
                (0..rows).map(|_| rng.word(width)).collect()
            };
            SearchInstance {
                variant,
                mode,
                encoding,
                width,
                words,
            }
        })
        .collect()
}

pub fn run_instance(inst: &SearchInstance) -> Result<InstanceOutcome> {
    let geo = ArrayGeometry::new(inst.words.len(), inst.width)?;
    // instances are already spread over threads
    let mut array = ArrayState::new(geo, inst.variant).with_exec(Exec::Sequential);
    for (r, w) in inst.words.iter().enumerate() {
        array.write_word(r, w)?;
    }
    let res = find_extreme(&mut array, inst.mode, inst.encoding)?;
    let oracle_row = direct_scan(&inst.words, inst.mode, inst.encoding).expect("rows >= 1");
    Ok(InstanceOutcome {
        row: res.row,
        steps: res.steps.len(),
        oracle_row,
    })
}

pub fn run_batch(instances: &[SearchInstance], exec: Exec) -> Result<Vec<InstanceOutcome>> {
    exec.map_slice(instances, run_instance).into_iter().collect()
}
