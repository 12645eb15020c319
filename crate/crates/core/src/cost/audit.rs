//! Re-derives every published comparison cell from the calibration table and
//! classifies the ones that do not follow from it.
//!
//! A printed value that misses the regenerated one by more than
//! [`AUDIT_TOLERANCE_PP`] is only accepted as explained when one of three
//! mechanical checks holds:
//!
//! * truncation: the printed text is the regenerated value cut (not rounded)
//!   to the printed number of decimals;
//! * digit slip: printed and regenerated text, at the printed precision,
//!   differ in exactly one digit;
//! * copied cell: the printed value is, within tolerance, the regenerated
//!   value of a different cell in any table.
//!
//! Anything else is reported as unexplained.

use std::fmt;

use super::calibration::CalibrationTable;
use super::reference::{REFERENCE_CELLS, REFERENCE_EDP, REFERENCE_SIZE};
use super::tables::{comparison_table, ComparisonKind, ComparisonTable};
use crate::error::{LimError, Result};
use crate::types::{CellVariant, OperationKind};

/// Percentage points of slack allowed for rounding in printed values.
pub const AUDIT_TOLERANCE_PP: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub enum Anomaly {
    Truncated,
    DigitSlip { regenerated_text: String },
    CopiedFrom {
        kind: ComparisonKind,
        row: CellVariant,
        col: CellVariant,
    },
}

impl fmt::Display for Anomaly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Anomaly::Truncated => f.write_str("printed value truncated instead of rounded"),
            Anomaly::DigitSlip { regenerated_text } => {
                write!(f, "single-digit slip of {regenerated_text}")
            }
            Anomaly::CopiedFrom { kind, row, col } => write!(
                f,
                "value of {} cell ({}, {})",
                kind.title(),
                row.label(),
                col.label()
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AuditStatus {
    Reproduced,
    Explained(Anomaly),
    Unexplained,
}

impl AuditStatus {
    pub fn label(&self) -> &'static str {
        match self {
            AuditStatus::Reproduced => "pass",
            AuditStatus::Explained(_) => "explained",
            AuditStatus::Unexplained => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditCell {
    pub kind: ComparisonKind,
    pub row: CellVariant,
    pub col: CellVariant,
    pub printed_text: &'static str,
    pub printed: f64,
    pub regenerated: f64,
    pub status: AuditStatus,
}

impl AuditCell {
    pub fn deviation(&self) -> f64 {
        (self.printed - self.regenerated).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdpCheck {
    pub variant: CellVariant,
    pub op: OperationKind,
    pub expected: Option<f64>,
    pub got: std::result::Result<f64, LimError>,
}

impl EdpCheck {
    pub fn passed(&self) -> bool {
        match (&self.expected, &self.got) {
            (Some(e), Ok(g)) => e == g,
            (None, Err(LimError::UnsupportedOperation { .. })) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub size: usize,
    pub edp: Vec<EdpCheck>,
    pub cells: Vec<AuditCell>,
}

impl AuditReport {
    pub fn count(&self, label: &str) -> usize {
        self.cells.iter().filter(|c| c.status.label() == label).count()
    }

    pub fn reproduced(&self) -> usize {
        self.count("pass")
    }

    pub fn explained(&self) -> impl Iterator<Item = &AuditCell> {
        self.cells
            .iter()
            .filter(|c| matches!(c.status, AuditStatus::Explained(_)))
    }

    pub fn unexplained(&self) -> impl Iterator<Item = &AuditCell> {
        self.cells
            .iter()
            .filter(|c| c.status == AuditStatus::Unexplained)
    }

    pub fn edp_failures(&self) -> usize {
        self.edp.iter().filter(|e| !e.passed()).count()
    }

    pub fn passed(&self) -> bool {
        self.edp_failures() == 0 && self.unexplained().next().is_none()
    }
}

fn decimals(text: &str) -> usize {
    text.split_once('.').map_or(0, |(_, frac)| frac.len())
}

fn is_truncation(printed_text: &str, printed: f64, regenerated: f64) -> bool {
    let scale = 10f64.powi(decimals(printed_text) as i32);
    ((regenerated * scale).trunc() / scale - printed).abs() < 1e-9
}

fn digit_slip(printed_text: &str, printed: f64, regenerated: f64) -> Option<String> {
    if printed.signum() != regenerated.signum() {
        return None;
    }
    let d = decimals(printed_text);
    let want = format!("{:.*}", d, regenerated.abs());
    let got = format!("{:.*}", d, printed.abs());
    let differing = want.chars().zip(got.chars()).filter(|(a, b)| a != b).count();
    (want.len() == got.len() && differing == 1).then(|| format!("{:+.*}", d, regenerated))
}

fn classify(
    cell: &super::reference::ReferenceCell,
    printed: f64,
    regenerated: f64,
    tables: &[ComparisonTable],
) -> AuditStatus {
    if (printed - regenerated).abs() <= AUDIT_TOLERANCE_PP {
        return AuditStatus::Reproduced;
    }
    if is_truncation(cell.printed, printed, regenerated) {
        return AuditStatus::Explained(Anomaly::Truncated);
    }
    if let Some(regenerated_text) = digit_slip(cell.printed, printed, regenerated) {
        return AuditStatus::Explained(Anomaly::DigitSlip { regenerated_text });
    }
    for t in tables {
        for rv in t.values() {
            let same = t.kind == cell.kind && rv.row.0 == cell.row && rv.col.0 == cell.col;
            if !same && (rv.percent - printed).abs() <= AUDIT_TOLERANCE_PP {
                return AuditStatus::Explained(Anomaly::CopiedFrom {
                    kind: t.kind,
                    row: rv.row.0,
                    col: rv.col.0,
                });
            }
        }
    }
    AuditStatus::Unexplained
}

/// Audits the calibration against the published 256x256 values.
pub fn audit(cal: &CalibrationTable) -> Result<AuditReport> {
    let size = REFERENCE_SIZE;
    let edp = REFERENCE_EDP
        .iter()
        .flat_map(|(v, ops)| {
            OperationKind::ALL
                .iter()
                .zip(ops)
                .map(move |(op, expected)| EdpCheck {
                    variant: *v,
                    op: *op,
                    expected: *expected,
                    got: cal.edp_lookup(*v, *op, size),
                })
        })
        .collect();

    let tables = ComparisonKind::ALL
        .iter()
        .map(|k| comparison_table(cal, *k, size))
        .collect::<Result<Vec<_>>>()?;

    let cells = REFERENCE_CELLS
        .iter()
        .map(|r| {
            let printed: f64 = r.printed.parse().expect("reference values are numeric");
            let table = tables.iter().find(|t| t.kind == r.kind).expect("all kinds built");
            let regenerated = table.get(r.row, r.col).expect("reference cell in layout");
            AuditCell {
                kind: r.kind,
                row: r.row,
                col: r.col,
                printed_text: r.printed,
                printed,
                regenerated,
                status: classify(r, printed, regenerated, &tables),
            }
        })
        .collect();

    Ok(AuditReport { size, edp, cells })
}
