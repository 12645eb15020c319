//! Transition-count cost estimate in abstract energy·delay units.
//!
//! It is not calibrated against the published products; it only reproduces
//! their orderings from what each operation does to the lines.

use crate::array::SensingEvent;
use crate::cell::BitlineLoad;
use crate::error::{LimError, Result};
use crate::types::SimulationParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostCoefficients {
    /// Per charged row line.
    pub charge: f64,
    /// Per discharged line per unit of sensing window (current-source leak).
    pub leak: f64,
    /// Per toggled in-cell gate.
    pub gate: f64,
    /// Per transistor hung on a driven bitline.
    pub bitline: f64,
}

impl Default for CostCoefficients {
    fn default() -> Self {
        CostCoefficients {
            charge: 10.0,
            leak: 1.0,
            gate: 5.0,
            bitline: 2.0,
        }
    }
}

impl CostCoefficients {
    pub fn new(charge: f64, leak: f64, gate: f64, bitline: f64) -> Result<Self> {
        for c in [charge, leak, gate, bitline] {
            if !(c > 0.0) || !c.is_finite() {
                return Err(LimError::NonPositiveEdp(c));
            }
        }
        Ok(CostCoefficients {
            charge,
            leak,
            gate,
            bitline,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralEstimate {
    pub charge_events: u64,
    pub leak_window_units: u64,
    pub lines_discharged: u64,
    pub gate_commutations: u64,
    pub bitline_load_units: u64,
    pub estimate: f64,
}

/// `charge·charged + leak·window·discharged + gate·commutations +
/// bitline·load`, scaled by `vdd²`.
///
/// `load` is the transistor count hung on every driven bitline pair:
/// per-cell count × rows × driven pairs.
pub fn structural_estimate_with(
    event: &SensingEvent,
    load: BitlineLoad,
    params: SimulationParams,
    k: CostCoefficients,
) -> StructuralEstimate {
    let charge_events = event.lines_charged as u64;
    let leak_window_units = event.dummy_window_units;
    let lines_discharged = event.lines_discharged as u64;
    let gate_commutations = event.gate_commutations;
    let bitline_load_units =
        load.transistors_on_bitlines as u64 * event.rows as u64 * event.bitlines_driven as u64;
    let raw = k.charge * charge_events as f64
        + k.leak * (leak_window_units * lines_discharged) as f64
        + k.gate * gate_commutations as f64
        + k.bitline * bitline_load_units as f64;
    StructuralEstimate {
        charge_events,
        leak_window_units,
        lines_discharged,
        gate_commutations,
        bitline_load_units,
        estimate: raw * params.vdd * params.vdd,
    }
}

pub fn structural_estimate(event: &SensingEvent, load: BitlineLoad, params: SimulationParams) -> StructuralEstimate {
    structural_estimate_with(event, load, params, CostCoefficients::default())
}
