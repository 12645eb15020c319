//! Per-cell combinational behavior of the five memory cell variants.
//!
//! Every shared row line (matchline or AND line) uses current-saving sensing:
//! the line is pre-discharged and only charges during evaluation when no
//! pull-down on it conducts.
//!
//! The three logic-in-memory cells differ in what their pull-down encodes:
//!
//! * `LimDynamic` / `LimStatic`: an AND gate computes `D·BL` and drives the
//!   pull-down, so the line carries the inverted OR of the per-cell products.
//!   The AND sense amplifier inverts it back.
//! * `LimSpecial`: no gate. The pull-down is driven by `D̄` and footed by the
//!   selection bitline, so the line itself carries the AND of the selected
//!   cells.

use crate::error::{LimError, Result};
use crate::types::{Bit, CellVariant, OperationKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PullDownState {
    Conducting,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineLevel {
    Charged,
    Discharged,
}

fn require_lim(variant: CellVariant) -> Result<()> {
    variant.check(OperationKind::And)
}

/// Logical output of the in-cell AND for a logical mask bit.
pub fn and_gate_output(variant: CellVariant, d: Bit, m: Bit) -> Result<Bit> {
    require_lim(variant)?;
    Ok(Bit::from_bool(d.is_one() && m.is_one()))
}

pub fn pulldown_state(variant: CellVariant, d: Bit, m: Bit) -> Result<PullDownState> {
    require_lim(variant)?;
    let conducting = match variant {
        CellVariant::LimSpecial => m.is_one() && !d.is_one(),
        _ => d.is_one() && m.is_one(),
    };
    Ok(if conducting {
        PullDownState::Conducting
    } else {
        PullDownState::Off
    })
}

/// Wired resolution of a pre-discharged line.
pub fn resolve_line(states: &[PullDownState]) -> Result<LineLevel> {
    if states.is_empty() {
        return Err(LimError::InvalidWidth("a line needs at least one cell".into()));
    }
    Ok(if states.iter().all(|s| *s == PullDownState::Off) {
        LineLevel::Charged
    } else {
        LineLevel::Discharged
    })
}

/// Value reported by the AND sense amplifier for a resolved line.
pub fn sensed_and(variant: CellVariant, level: LineLevel) -> Result<Bit> {
    require_lim(variant)?;
    Ok(match variant {
        CellVariant::LimSpecial => Bit::from_bool(level == LineLevel::Charged),
        _ => Bit::from_bool(level == LineLevel::Discharged),
    })
}

/// NOR CAM cell: a mismatching bit holds the matchline down.
pub fn cam_bit_mismatch(d: Bit, key_bit: Bit) -> PullDownState {
    if d != key_bit {
        PullDownState::Conducting
    } else {
        PullDownState::Off
    }
}

/// Physical `(BL, BL̄)` levels that carry a logical mask bit for `variant`.
///
/// Dynamic and static cells select a column with `BL = 1`; the special-purpose
/// cell uses the active-low encoding, so a selected column has `BL = 0` and
/// `BL̄ = 1` (its footer is gated by `BL̄`). Search keys and write data use the
/// plain `(value, !value)` encoding for every variant.
pub fn mask_bitlines(variant: CellVariant, m: Bit) -> (Bit, Bit) {
    match variant {
        CellVariant::LimSpecial => (!m, m),
        _ => (m, !m),
    }
}

pub fn data_bitlines(value: Bit) -> (Bit, Bit) {
    (value, !value)
}

/// Evaluation phase of the dynamic AND gate's internal node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynamicPhase {
    /// `PRE̅` low: the gate output is precharged high.
    Precharge,
    Evaluate,
}

/// Gate output node of the dynamic cell, from physical inputs. The gate is a
/// NOR of `D̄` and `BL̄`.
pub fn dynamic_gate_node(phase: DynamicPhase, d: Bit, bl: Bit) -> Bit {
    match phase {
        DynamicPhase::Precharge => Bit::One,
        DynamicPhase::Evaluate => {
            let (d_bar, bl_bar) = (!d, !bl);
            Bit::from_bool(!(d_bar.is_one() || bl_bar.is_one()))
        }
    }
}

/// A signal value over one operation: either constant or switching once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signal {
    Steady(Bit),
    Switch { from: Bit, to: Bit },
}

impl Signal {
    fn between(from: Bit, to: Bit) -> Self {
        if from == to {
            Signal::Steady(from)
        } else {
            Signal::Switch { from, to }
        }
    }

    pub fn final_value(self) -> Bit {
        match self {
            Signal::Steady(b) => b,
            Signal::Switch { to, .. } => to,
        }
    }
}

/// One row of a cell truth table under current-saving sensing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruthRow {
    pub d: Bit,
    pub bl: Bit,
    pub d_bar: Bit,
    pub bl_bar: Bit,
    /// Gate output node (dynamic cell only).
    pub gate: Option<Signal>,
    /// The row line as seen at the cell pin.
    pub line: Signal,
}

/// Dynamic cell over a precharge/evaluate cycle, from physical bitline levels.
pub fn dynamic_truth_row(d: Bit, bl: Bit) -> TruthRow {
    let pre = dynamic_gate_node(DynamicPhase::Precharge, d, bl);
    let out = dynamic_gate_node(DynamicPhase::Evaluate, d, bl);
    let pull = if out.is_one() {
        PullDownState::Conducting
    } else {
        PullDownState::Off
    };
    let line_end = match resolve_line(&[pull]).expect("one cell") {
        LineLevel::Charged => Bit::One,
        LineLevel::Discharged => Bit::Zero,
    };
    TruthRow {
        d,
        bl,
        d_bar: !d,
        bl_bar: !bl,
        gate: Some(Signal::between(pre, out)),
        line: Signal::between(Bit::Zero, line_end),
    }
}

/// Special-purpose cell over one evaluation, from physical bitline levels.
pub fn special_truth_row(d: Bit, bl: Bit) -> TruthRow {
    let bl_bar = !bl;
    let pull = if bl_bar.is_one() && (!d).is_one() {
        PullDownState::Conducting
    } else {
        PullDownState::Off
    };
    let line_end = match resolve_line(&[pull]).expect("one cell") {
        LineLevel::Charged => Bit::One,
        LineLevel::Discharged => Bit::Zero,
    };
    TruthRow {
        d,
        bl,
        d_bar: !d,
        bl_bar,
        gate: None,
        line: Signal::between(Bit::Zero, line_end),
    }
}

/// Number of transistors a cell hangs on its bitline pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitlineLoad {
    pub variant: CellVariant,
    pub transistors_on_bitlines: u32,
}

impl BitlineLoad {
    /// Default counts. Only their ordering is meaningful:
    /// SRAM < CAM <= special = dynamic < static.
    pub fn default_for(variant: CellVariant) -> Self {
        let transistors_on_bitlines = match variant {
            CellVariant::Sram6T => 2,
            CellVariant::CamNor => 4,
            CellVariant::LimSpecial => 5,
            CellVariant::LimDynamic => 5,
            CellVariant::LimStatic => 6,
        };
        BitlineLoad {
            variant,
            transistors_on_bitlines,
        }
    }

    pub fn with_count(variant: CellVariant, transistors_on_bitlines: u32) -> Result<Self> {
        if transistors_on_bitlines == 0 {
            return Err(LimError::InvalidWidth(
                "a cell must load its bitlines with at least one transistor".into(),
            ));
        }
        Ok(BitlineLoad {
            variant,
            transistors_on_bitlines,
        })
    }
}
