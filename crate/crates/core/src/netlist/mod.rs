//! Reduced worst-case array netlists and their stimulus decks.
//!
//! Only the cells on the longest wordline, bitline and matchline paths are
//! real; the rest of the first row and last column are dummy cells carrying
//! just the transistors that load those lines.

pub mod emit;
pub mod library;
pub mod lint;
pub mod model;
pub mod stimuli;

pub use emit::{array_ports, emit_netlist, SA_DELAY_PARAM, TOP_SUBCKT};
pub use library::{placeholder_library_text, PrimitiveLibrary, PLACEHOLDER_INCLUDE};
pub use lint::{lint, parse_netlist_summary, parse_spice, LintIssue, NetlistSummary};
pub use model::{build_reduced_model, row_signals, BlockKind, CellRole, CellSite, ReducedArrayModel};
pub use stimuli::{emit_stimuli, parse_ops, StimulusOp, StimulusProgram, EDGE_NS};
