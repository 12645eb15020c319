use std::fmt;

use crate::error::{LimError, Result};
use crate::types::{ArrayGeometry, CellVariant, OperationKind};

/// Building blocks referenced by a reduced array netlist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockKind {
    Cell,
    DummyRowCell,
    DummyColCell,
    Sa,
    Mlsa,
    Andsa,
    DummyLoad,
    Precharge,
    DelaySa,
    BitlineDriver,
    DummyLine,
}

impl BlockKind {
    pub fn name(self) -> &'static str {
        match self {
            BlockKind::Cell => "cell",
            BlockKind::DummyRowCell => "dummy-row cell",
            BlockKind::DummyColCell => "dummy-column cell",
            BlockKind::Sa => "SA",
            BlockKind::Mlsa => "MLSA",
            BlockKind::Andsa => "ANDSA",
            BlockKind::DummyLoad => "dummy load",
            BlockKind::Precharge => "precharge",
            BlockKind::DelaySa => "delay-SA",
            BlockKind::BitlineDriver => "bitline driver",
            BlockKind::DummyLine => "dummy line",
        }
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellRole {
    /// Farthest from the wordline driver and the bitline drivers/SA:
    /// first row, last column.
    ReadWriteCritical,
    /// Farthest from the MLSA/ANDSA: first row, first column.
    SearchAndCritical,
    /// First-row placeholder keeping only row-signal transistors.
    DummyRow,
    /// Last-column placeholder keeping only bitline transistors.
    DummyCol,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellSite {
    pub row: usize,
    pub col: usize,
    pub role: CellRole,
}

/// Row signals a cell of `variant` connects to.
pub fn row_signals(variant: CellVariant) -> Vec<&'static str> {
    let mut s = vec!["WL"];
    if variant.supports(OperationKind::Search) {
        s.push("ML");
    }
    if variant.is_lim() {
        s.push("ANDL");
    }
    if variant == CellVariant::LimDynamic {
        s.push("PRE");
    }
    s
}

/// Worst-case array: the two critical cells, the dummy first row and last
/// column, and the peripheral blocks around them.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedArrayModel {
    pub geometry: ArrayGeometry,
    pub variant: CellVariant,
    pub real_cells: [CellSite; 2],
    pub dummy_row_cells: Vec<CellSite>,
    pub dummy_col_cells: Vec<CellSite>,
    /// OR-gate input sections hung on the dummy sense amplifier output, one
    /// per array row.
    pub dummy_loads: usize,
    pub dummy_line: bool,
    pub peripherals: Vec<BlockKind>,
}

impl ReducedArrayModel {
    pub fn cell_instances(&self) -> usize {
        self.real_cells.len() + self.dummy_row_cells.len() + self.dummy_col_cells.len()
    }

    pub fn last_col(&self) -> usize {
        self.geometry.cols - 1
    }

    /// Every block kind the netlist instantiates.
    pub fn needed_blocks(&self) -> Vec<BlockKind> {
        let mut b = vec![BlockKind::Cell, BlockKind::DummyRowCell, BlockKind::DummyColCell];
        b.extend(self.peripherals.iter().copied());
        if self.dummy_line {
            b.push(BlockKind::DummyLine);
        }
        if self.dummy_loads > 0 {
            b.push(BlockKind::DummyLoad);
        }
        b.sort();
        b.dedup();
        b
    }
}

pub fn build_reduced_model(geometry: ArrayGeometry, variant: CellVariant) -> Result<ReducedArrayModel> {
    if !geometry.is_block_aligned() {
        return Err(LimError::GeometryNotBlockAligned {
            rows: geometry.rows,
            cols: geometry.cols,
        });
    }
    let last = geometry.cols - 1;
    let real_cells = [
        CellSite {
            row: 0,
            col: last,
            role: CellRole::ReadWriteCritical,
        },
        CellSite {
            row: 0,
            col: 0,
            role: CellRole::SearchAndCritical,
        },
    ];
    let dummy_row_cells = (1..last)
        .map(|col| CellSite {
            row: 0,
            col,
            role: CellRole::DummyRow,
        })
        .collect();
    let dummy_col_cells = (1..geometry.rows)
        .map(|row| CellSite {
            row,
            col: last,
            role: CellRole::DummyCol,
        })
        .collect();

    let has_dummy_line = variant != CellVariant::Sram6T;
    let mut peripherals = vec![
        BlockKind::BitlineDriver,
        BlockKind::Precharge,
        BlockKind::DelaySa,
        BlockKind::Sa,
    ];
    if variant.supports(OperationKind::Search) {
        peripherals.push(BlockKind::Mlsa);
    }
    if variant.is_lim() {
        peripherals.push(BlockKind::Andsa);
    }

    Ok(ReducedArrayModel {
        geometry,
        variant,
        real_cells,
        dummy_row_cells,
        dummy_col_cells,
        dummy_loads: if has_dummy_line { geometry.rows } else { 0 },
        dummy_line: has_dummy_line,
        peripherals,
    })
}
