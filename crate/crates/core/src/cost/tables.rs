use std::fmt;
use std::str::FromStr;

use super::calibration::CalibrationTable;
use crate::error::{LimError, Result};
use crate::types::{CellVariant, OperationKind};

use CellVariant::{CamNor as CAM, LimDynamic as DYN, LimSpecial as SP, LimStatic as ST, Sram6T as SRAM};

/// Signed percentage increase of `edp_row` over `edp_col`.
///
/// Positive variations are relative to the column value and negative ones to
/// the row value, which makes the result exactly antisymmetric and lets
/// reductions go past -100%: `(230, 118)` gives `+94.91`, `(76, 118)` gives
/// `-55.26`.
pub fn relative_variation(edp_row: f64, edp_col: f64) -> Result<f64> {
    for v in [edp_row, edp_col] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(LimError::NonPositiveEdp(v));
        }
    }
    let diff = edp_row - edp_col;
    Ok(if edp_row >= edp_col {
        100.0 * diff / edp_col
    } else {
        100.0 * diff / edp_row
    })
}

/// Two-decimal signed rendering used in every exported table.
pub fn format_percent(p: f64) -> String {
    format!("{p:+.2}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComparisonKind {
    Read,
    Write,
    Search,
    And,
    WriteVsRead,
    SearchVsWrite,
    SearchVsRead,
    AndVsSearch,
    AndVsWrite,
    AndVsRead,
}

enum Presence {
    /// Strictly below the diagonal.
    Lower,
    Diagonal,
    /// Columns up to and including the row's own memory.
    UpToOwn,
}

struct Layout {
    row_op: OperationKind,
    col_op: OperationKind,
    rows: &'static [CellVariant],
    cols: &'static [CellVariant],
    presence: Presence,
}

const FIVE: &[CellVariant] = &[SRAM, CAM, SP, DYN, ST];
const FIVE_ST_FIRST: &[CellVariant] = &[SRAM, CAM, SP, ST, DYN];
const SEARCHERS: &[CellVariant] = &[CAM, SP, DYN, ST];
const LIMS: &[CellVariant] = &[SP, DYN, ST];

impl ComparisonKind {
    pub const ALL: [ComparisonKind; 10] = [
        ComparisonKind::Read,
        ComparisonKind::Write,
        ComparisonKind::Search,
        ComparisonKind::And,
        ComparisonKind::WriteVsRead,
        ComparisonKind::SearchVsWrite,
        ComparisonKind::SearchVsRead,
        ComparisonKind::AndVsSearch,
        ComparisonKind::AndVsWrite,
        ComparisonKind::AndVsRead,
    ];

    fn layout(self) -> Layout {
        use OperationKind as Op;
        let (row_op, col_op, rows, cols, presence) = match self {
            ComparisonKind::Read => (Op::Read, Op::Read, FIVE, FIVE, Presence::Lower),
            ComparisonKind::Write => (Op::Write, Op::Write, FIVE, FIVE, Presence::Lower),
            ComparisonKind::Search => (Op::Search, Op::Search, SEARCHERS, SEARCHERS, Presence::Lower),
            ComparisonKind::And => (Op::And, Op::And, LIMS, LIMS, Presence::Lower),
            ComparisonKind::WriteVsRead => (Op::Write, Op::Read, FIVE_ST_FIRST, FIVE_ST_FIRST, Presence::Diagonal),
            ComparisonKind::SearchVsWrite => (Op::Search, Op::Write, SEARCHERS, FIVE, Presence::UpToOwn),
            ComparisonKind::SearchVsRead => (Op::Search, Op::Read, SEARCHERS, FIVE, Presence::UpToOwn),
            ComparisonKind::AndVsSearch => (Op::And, Op::Search, LIMS, SEARCHERS, Presence::UpToOwn),
            ComparisonKind::AndVsWrite => (Op::And, Op::Write, LIMS, FIVE, Presence::UpToOwn),
            ComparisonKind::AndVsRead => (Op::And, Op::Read, LIMS, FIVE, Presence::UpToOwn),
        };
        Layout {
            row_op,
            col_op,
            rows,
            cols,
            presence,
        }
    }

    pub fn row_op(self) -> OperationKind {
        self.layout().row_op
    }

    pub fn col_op(self) -> OperationKind {
        self.layout().col_op
    }

    pub fn row_memories(self) -> &'static [CellVariant] {
        self.layout().rows
    }

    pub fn col_memories(self) -> &'static [CellVariant] {
        self.layout().cols
    }

    /// Whether the published layout shows a value at this position.
    pub fn has_cell(self, row: CellVariant, col: CellVariant) -> bool {
        let l = self.layout();
        let (Some(ri), Some(ci)) = (
            l.rows.iter().position(|v| *v == row),
            l.cols.iter().position(|v| *v == col),
        ) else {
            return false;
        };
        match l.presence {
            Presence::Lower => ci < ri,
            Presence::Diagonal => ci == ri,
            Presence::UpToOwn => l.cols.iter().position(|v| *v == row).is_some_and(|own| ci <= own),
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            ComparisonKind::Read => "Read",
            ComparisonKind::Write => "Write",
            ComparisonKind::Search => "Search",
            ComparisonKind::And => "AND",
            ComparisonKind::WriteVsRead => "Write vs Read",
            ComparisonKind::SearchVsWrite => "Search vs Write",
            ComparisonKind::SearchVsRead => "Search vs Read",
            ComparisonKind::AndVsSearch => "AND vs Search",
            ComparisonKind::AndVsWrite => "AND vs Write",
            ComparisonKind::AndVsRead => "AND vs Read",
        }
    }

    /// Base name of the exported CSV file.
    pub fn file_stem(self) -> &'static str {
        match self {
            ComparisonKind::Read => "read_vs_read",
            ComparisonKind::Write => "write_vs_write",
            ComparisonKind::Search => "search_vs_search",
            ComparisonKind::And => "and_vs_and",
            ComparisonKind::WriteVsRead => "write_vs_read",
            ComparisonKind::SearchVsWrite => "search_vs_write",
            ComparisonKind::SearchVsRead => "search_vs_read",
            ComparisonKind::AndVsSearch => "and_vs_search",
            ComparisonKind::AndVsWrite => "and_vs_write",
            ComparisonKind::AndVsRead => "and_vs_read",
        }
    }
}

impl fmt::Display for ComparisonKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_stem())
    }
}

impl FromStr for ComparisonKind {
    type Err = LimError;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase();
        ComparisonKind::ALL
            .into_iter()
            .find(|k| k.file_stem() == norm || k.title().to_ascii_lowercase() == norm)
            .ok_or_else(|| LimError::Parse {
                line: 0,
                msg: format!("unknown comparison table '{s}'"),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeVariation {
    pub row: (CellVariant, OperationKind),
    pub col: (CellVariant, OperationKind),
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub kind: ComparisonKind,
    pub size: usize,
    pub row_memories: Vec<CellVariant>,
    pub col_memories: Vec<CellVariant>,
    /// `cells[r][c]`, `None` where the layout omits the comparison.
    pub cells: Vec<Vec<Option<RelativeVariation>>>,
}

impl ComparisonTable {
    pub fn get(&self, row: CellVariant, col: CellVariant) -> Option<f64> {
        let r = self.row_memories.iter().position(|v| *v == row)?;
        let c = self.col_memories.iter().position(|v| *v == col)?;
        self.cells[r][c].map(|rv| rv.percent)
    }

    pub fn values(&self) -> impl Iterator<Item = RelativeVariation> + '_ {
        self.cells.iter().flatten().flatten().copied()
    }
}

pub fn comparison_table(cal: &CalibrationTable, kind: ComparisonKind, size: usize) -> Result<ComparisonTable> {
    let l = kind.layout();
    let cells = l
        .rows
        .iter()
        .map(|&r| {
            l.cols
                .iter()
                .map(|&c| {
                    if !kind.has_cell(r, c) {
                        return Ok(None);
                    }
                    let percent = relative_variation(
                        cal.edp_lookup(r, l.row_op, size)?,
                        cal.edp_lookup(c, l.col_op, size)?,
                    )?;
                    Ok(Some(RelativeVariation {
                        row: (r, l.row_op),
                        col: (c, l.col_op),
                        percent,
                    }))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonTable {
        kind,
        size,
        row_memories: l.rows.to_vec(),
        col_memories: l.cols.to_vec(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 0.005
    }

    #[test]
    fn relative_variation_examples() {
        assert!(close(relative_variation(230.0, 118.0).unwrap(), 94.915));
        assert!(close(relative_variation(76.0, 118.0).unwrap(), -55.263));
        assert_eq!(relative_variation(100.0, 100.0).unwrap(), 0.0);
        assert_eq!(relative_variation(0.0, 1.0), Err(LimError::NonPositiveEdp(0.0)));
        assert!(relative_variation(1.0, -2.0).is_err());
    }

    #[test]
    fn formatting() {
        assert_eq!(format_percent(94.9152), "+94.92");
        assert_eq!(format_percent(-55.2631), "-55.26");
        assert_eq!(format_percent(0.0), "+0.00");
    }

    #[test]
    fn table_examples() {
        let cal = CalibrationTable::seed();
        let read = comparison_table(&cal, ComparisonKind::Read, 256).unwrap();
        assert!((read.get(DYN, CAM).unwrap() - 96.08).abs() < 0.01);
        assert_eq!(read.get(CAM, DYN), None);
        let wr = comparison_table(&cal, ComparisonKind::WriteVsRead, 256).unwrap();
        assert!((wr.get(ST, ST).unwrap() - 49.92).abs() < 0.01);
        assert_eq!(wr.values().count(), 5);
        let avs = comparison_table(&cal, ComparisonKind::AndVsSearch, 256).unwrap();
        assert!((avs.get(ST, ST).unwrap() + 690.79).abs() < 0.01);
        assert!(comparison_table(&cal, ComparisonKind::Read, 128).is_err());
    }

    #[test]
    fn layout_cell_counts() {
        let cal = CalibrationTable::seed();
        let counts: Vec<usize> = ComparisonKind::ALL
            .iter()
            .map(|k| comparison_table(&cal, *k, 256).unwrap().values().count())
            .collect();
        assert_eq!(counts, vec![10, 10, 6, 3, 5, 14, 14, 9, 12, 12]);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ComparisonKind::ALL {
            assert_eq!(k.file_stem().parse::<ComparisonKind>().unwrap(), k);
        }
    }

    #[test]
    fn swapping_arguments_flips_sign() {
        for (a, b) in [(1.0, 2.0), (961.0, 76.0), (3.5, 3.25)] {
            let x = relative_variation(a, b).unwrap();
            let y = relative_variation(b, a).unwrap();
            assert_eq!(x.signum(), -y.signum());
            assert!((x + y).abs() < 1e-9);
        }
    }
}
