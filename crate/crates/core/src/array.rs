//! Stateful memory array with read, write, search and in-memory AND.
//!
//! Rows are packed MSB-first into 64-bit limbs. The row kernels evaluate the
//! wired line of every row at once from the packed contents; [`reference`]
//! evaluates the same operations cell by cell through [`crate::cell`] and is
//! kept as an independent route for tests.

use crate::cell::{self, LineLevel};
use crate::error::{LimError, Result};
use crate::exec::Exec;
use crate::types::{
    limb_bit, limbs_for, ArrayGeometry, Bit, CellVariant, Mask, OperationKind, Word,
};

/// Rows × limbs above which row kernels fan out over threads.
const PAR_LIMB_THRESHOLD: usize = 1 << 14;

/// Abstract sensing window granted by the dummy line per Search/AND: its
/// always-matching line charges once and then switches off every real sense
/// amplifier current source.
pub const DUMMY_WINDOW_UNITS: u64 = 1;

/// Record of what one operation did to the shared lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensingEvent {
    pub operation: OperationKind,
    pub variant: CellVariant,
    pub rows: usize,
    pub cols: usize,
    /// Row lines that charged (Search/AND). Zero for Read/Write.
    pub lines_charged: usize,
    /// Row lines held discharged by a conducting pull-down (Search/AND).
    pub lines_discharged: usize,
    /// Sensed per-row result for Search/AND; empty for Read/Write.
    pub per_row_result: Vec<Bit>,
    pub dummy_window_units: u64,
    /// In-cell AND gate outputs that toggled during this operation.
    pub gate_commutations: u64,
    /// Bitline pairs driven or sensed by the operation.
    pub bitlines_driven: usize,
}

impl SensingEvent {
    fn access(op: OperationKind, variant: CellVariant, g: ArrayGeometry) -> Self {
        SensingEvent {
            operation: op,
            variant,
            rows: g.rows,
            cols: g.cols,
            lines_charged: 0,
            lines_discharged: 0,
            per_row_result: Vec::new(),
            dummy_window_units: 0,
            gate_commutations: 0,
            bitlines_driven: g.cols,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    PreDischarge,
    MaskLoad,
    /// Dynamic AND gate output precharge (`PRE̅` low).
    GatePrecharge,
    PrechargeBitlines,
    Evaluate,
    Sense,
    DummyDisable,
    Drive,
    Settle,
}

/// Ordered phases of one operation. Phases sharing a step overlap in time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseSequence {
    pub steps: Vec<Vec<Phase>>,
}

impl PhaseSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// True if `a` and `b` are issued in the same step.
    pub fn overlapped(&self, a: Phase, b: Phase) -> bool {
        self.steps.iter().any(|s| s.contains(&a) && s.contains(&b))
    }

    /// Clock cycles occupied: row operations spend a whole cycle pre-discharging
    /// with the mask already on the bitlines, then evaluate in the next one.
    pub fn cycles(&self) -> usize {
        if self.steps.iter().flatten().any(|p| *p == Phase::PreDischarge) {
            2
        } else {
            1
        }
    }
}

pub fn phase_sequence(op: OperationKind, variant: CellVariant) -> Result<PhaseSequence> {
    variant.check(op)?;
    use Phase::*;
    let steps = match op {
        OperationKind::Search | OperationKind::And => {
            let mut first = vec![PreDischarge, MaskLoad];
            if op == OperationKind::And && variant == CellVariant::LimDynamic {
                first.push(GatePrecharge);
            }
            vec![first, vec![Evaluate], vec![Sense], vec![DummyDisable]]
        }
        OperationKind::Read => vec![vec![PrechargeBitlines], vec![Evaluate], vec![Sense]],
        OperationKind::Write => vec![vec![Drive], vec![Settle]],
    };
    Ok(PhaseSequence { steps })
}

#[derive(Debug, Clone)]
pub struct ArrayState {
    geometry: ArrayGeometry,
    variant: CellVariant,
    limbs_per_row: usize,
    cells: Vec<u64>,
    /// Last output of every static AND gate (LimStatic only).
    gate_state: Vec<u64>,
    exec: Exec,
}

impl ArrayState {
    pub fn new(geometry: ArrayGeometry, variant: CellVariant) -> Self {
        let limbs_per_row = limbs_for(geometry.cols);
        let n = geometry.rows * limbs_per_row;
        ArrayState {
            geometry,
            variant,
            limbs_per_row,
            cells: vec![0; n],
            gate_state: if variant == CellVariant::LimStatic {
                vec![0; n]
            } else {
                Vec::new()
            },
            exec: Exec::default(),
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn geometry(&self) -> ArrayGeometry {
        self.geometry
    }

    pub fn variant(&self) -> CellVariant {
        self.variant
    }

    pub fn rows(&self) -> usize {
        self.geometry.rows
    }

    pub fn cols(&self) -> usize {
        self.geometry.cols
    }

    fn row_limbs(&self, row: usize) -> &[u64] {
        let start = row * self.limbs_per_row;
        &self.cells[start..start + self.limbs_per_row]
    }

    fn check_row(&self, row: usize) -> Result<()> {
        if row >= self.rows() {
            return Err(LimError::IndexOutOfRange {
                index: row,
                len: self.rows(),
            });
        }
        Ok(())
    }

    fn check_width(&self, width: usize) -> Result<()> {
        if width != self.cols() {
            return Err(LimError::WidthMismatch {
                expected: self.cols(),
                got: width,
            });
        }
        Ok(())
    }

    pub fn cell(&self, row: usize, col: usize) -> Bit {
        let (limb, m) = limb_bit(col);
        Bit::from_bool(self.row_limbs(row)[limb] & m != 0)
    }

    /// Stored row without producing a sensing event.
    pub fn row(&self, row: usize) -> Result<Word> {
        self.check_row(row)?;
        Ok(Word::from_limbs(self.cols(), self.row_limbs(row).to_vec()))
    }

    pub fn write_word(&mut self, row: usize, word: &Word) -> Result<SensingEvent> {
        self.check_row(row)?;
        self.check_width(word.width())?;
        let start = row * self.limbs_per_row;
        self.cells[start..start + self.limbs_per_row].copy_from_slice(word.limbs());
        Ok(SensingEvent::access(OperationKind::Write, self.variant, self.geometry))
    }

    pub fn read_word(&self, row: usize) -> Result<(Word, SensingEvent)> {
        let word = self.row(row)?;
        Ok((
            word,
            SensingEvent::access(OperationKind::Read, self.variant, self.geometry),
        ))
    }

    fn map_rows<F>(&self, f: F) -> Vec<Bit>
    where
        F: Fn(&[u64]) -> bool + Sync + Send,
    {
        let exec = if self.cells.len() >= PAR_LIMB_THRESHOLD {
            self.exec
        } else {
            Exec::Sequential
        };
        exec.map_range(self.rows(), |r| Bit::from_bool(f(self.row_limbs(r))))
    }

    fn row_event(&self, op: OperationKind, results: Vec<Bit>, charged: usize) -> SensingEvent {
        let mut ev = SensingEvent::access(op, self.variant, self.geometry);
        ev.lines_charged = charged;
        ev.lines_discharged = self.rows() - charged;
        ev.per_row_result = results;
        ev.dummy_window_units = DUMMY_WINDOW_UNITS;
        ev
    }

    /// Exact-match search. A row's matchline charges iff every bit matches.
    pub fn search(&self, key: &Word) -> Result<(Vec<Bit>, SensingEvent)> {
        self.variant.check(OperationKind::Search)?;
        self.check_width(key.width())?;
        let k = key.limbs();
        let matches = self.map_rows(|row| row == k);
        let charged = matches.iter().filter(|b| b.is_one()).count();
        let ev = self.row_event(OperationKind::Search, matches.clone(), charged);
        Ok((matches, ev))
    }

    /// Sensed AND-line result of every row, without touching gate history.
    ///
    /// Dynamic and static cells report the OR of `D·M` over the row; the
    /// special-purpose cell reports the AND of the selected bits. The two agree
    /// for one-hot masks.
    pub fn and_results(&self, mask: &Mask) -> Result<Vec<Bit>> {
        self.variant.check(OperationKind::And)?;
        self.check_width(mask.width())?;
        let m = mask.limbs();
        Ok(match self.variant {
            CellVariant::LimSpecial => {
                self.map_rows(|row| row.iter().zip(m).all(|(d, m)| d & m == *m))
            }
            _ => self.map_rows(|row| row.iter().zip(m).any(|(d, m)| d & m != 0)),
        })
    }

    /// In-memory AND with gate-commutation accounting.
    pub fn and_op(&mut self, mask: &Mask) -> Result<(Vec<Bit>, SensingEvent)> {
        let results = self.and_results(mask)?;
        let ones = results.iter().filter(|b| b.is_one()).count();
        // Dynamic/static lines are discharged when the result is 1; the
        // special-purpose line charges when it is 1.
        let charged = match self.variant {
            CellVariant::LimSpecial => ones,
            _ => self.rows() - ones,
        };
        let commutations = self.gate_commutations(mask);
        let mut ev = self.row_event(OperationKind::And, results.clone(), charged);
        ev.gate_commutations = commutations;
        Ok((results, ev))
    }

    fn gate_commutations(&mut self, mask: &Mask) -> u64 {
        let m = mask.limbs();
        let lpr = self.limbs_per_row;
        match self.variant {
            CellVariant::LimDynamic => {
                // Every gate is precharged high; those with D·M = 0 discharge.
                let high: u64 = self
                    .cells
                    .chunks(lpr)
                    .map(|row| {
                        row.iter()
                            .zip(m)
                            .map(|(d, m)| (d & m).count_ones() as u64)
                            .sum::<u64>()
                    })
                    .sum();
                self.geometry.cells() as u64 - high
            }
            CellVariant::LimStatic => {
                let mut toggled = 0u64;
                for (row, gates) in self.cells.chunks(lpr).zip(self.gate_state.chunks_mut(lpr)) {
                    for ((d, m), g) in row.iter().zip(m).zip(gates.iter_mut()) {
                        let out = d & m;
                        toggled += (out ^ *g).count_ones() as u64;
                        *g = out;
                    }
                }
                toggled
            }
            _ => 0,
        }
    }
}

pub fn new_array(geometry: ArrayGeometry, variant: CellVariant) -> ArrayState {
    ArrayState::new(geometry, variant)
}

/// Cell-by-cell evaluation through the per-cell logic functions.
pub mod reference {
    use super::*;

    pub fn and_results(array: &ArrayState, mask: &Mask) -> Result<Vec<Bit>> {
        let v = array.variant();
        v.check(OperationKind::And)?;
        array.check_width(mask.width())?;
        (0..array.rows())
            .map(|r| {
                let states = (0..array.cols())
                    .map(|c| cell::pulldown_state(v, array.cell(r, c), mask.bit(c)))
                    .collect::<Result<Vec<_>>>()?;
                cell::sensed_and(v, cell::resolve_line(&states)?)
            })
            .collect()
    }

    pub fn search(array: &ArrayState, key: &Word) -> Result<Vec<Bit>> {
        array.variant().check(OperationKind::Search)?;
        array.check_width(key.width())?;
        (0..array.rows())
            .map(|r| {
                let states: Vec<_> = (0..array.cols())
                    .map(|c| cell::cam_bit_mismatch(array.cell(r, c), key.bit(c)))
                    .collect();
                Ok(Bit::from_bool(cell::resolve_line(&states)? == LineLevel::Charged))
            })
            .collect()
    }
}
