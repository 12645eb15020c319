//! Behavioral simulator for logic-in-memory arrays.
//!
//! Covers five cell variants (6T SRAM, NOR CAM and three CAM cells extended
//! with an in-cell AND), the bit-serial maximum/minimum search built on the
//! in-memory AND, an energy-delay cost model, and generation of reduced
//! worst-case array netlists with their stimuli.

pub mod array;
pub mod batch;
pub mod cell;
pub mod cost;
pub mod error;
pub mod exec;
pub mod maxmin;
pub mod netlist;
pub mod rng;
pub mod types;

pub use array::{new_array, phase_sequence, ArrayState, Phase, PhaseSequence, SensingEvent};
pub use error::{LimError, Result};
pub use exec::Exec;
pub use maxmin::{find_extreme, CandidateSet, Encoding, ExtremeResult, SearchMode, StepTrace};
pub use types::{
    make_word, one_hot_mask, ArrayGeometry, Bit, CellVariant, Mask, OperationKind,
    SimulationParams, Word,
};
