use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use super::emit::SA_DELAY_PARAM;
use crate::cell::{data_bitlines, mask_bitlines};
use crate::error::{LimError, Result};
use crate::types::{ArrayGeometry, Bit, CellVariant, Mask, OperationKind, SimulationParams, Word};

/// Rise/fall time of every generated piecewise-linear edge.
pub const EDGE_NS: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StimulusOp {
    Write { row: usize, word: Word },
    Read { row: usize },
    Search { key: Word },
    And { mask: Mask },
}

impl StimulusOp {
    pub fn kind(&self) -> OperationKind {
        match self {
            StimulusOp::Write { .. } => OperationKind::Write,
            StimulusOp::Read { .. } => OperationKind::Read,
            StimulusOp::Search { .. } => OperationKind::Search,
            StimulusOp::And { .. } => OperationKind::And,
        }
    }

    /// Clock cycles the operation occupies: one for reads and writes, two
    /// (pre-discharge, then evaluate and sense) for searches and ANDs.
    pub fn cycles(&self) -> usize {
        match self.kind() {
            OperationKind::Write | OperationKind::Read => 1,
            OperationKind::Search | OperationKind::And => 2,
        }
    }
}

impl fmt::Display for StimulusOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StimulusOp::Write { row, word } => write!(f, "write {row} {word}"),
            StimulusOp::Read { row } => write!(f, "read {row}"),
            StimulusOp::Search { key } => write!(f, "search {key}"),
            StimulusOp::And { mask } => write!(f, "and {mask}"),
        }
    }
}

impl FromStr for StimulusOp {
    type Err = LimError;

    /// `write <row> <bits>`, `read <row>`, `search <bits>` or `and <bits>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| LimError::Parse { line: 0, msg };
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let row = |t: &str| t.parse::<usize>().map_err(|_| bad(format!("invalid row '{t}'")));
        match tokens.as_slice() {
            [op, r, bits] if op.eq_ignore_ascii_case("write") => Ok(StimulusOp::Write {
                row: row(r)?,
                word: bits.parse()?,
            }),
            [op, r] if op.eq_ignore_ascii_case("read") => Ok(StimulusOp::Read { row: row(r)? }),
            [op, bits] if op.eq_ignore_ascii_case("search") => Ok(StimulusOp::Search { key: bits.parse()? }),
            [op, bits] if op.eq_ignore_ascii_case("and") => Ok(StimulusOp::And { mask: bits.parse()? }),
            _ => Err(bad(format!("cannot parse operation '{}'", s.trim()))),
        }
    }
}

/// Parses a `;`- or newline-separated operation list.
pub fn parse_ops(text: &str) -> Result<Vec<StimulusOp>> {
    text.split([';', '\n'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

/// A sequence of operations applied to the reduced array, starting after
/// one idle cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct StimulusProgram {
    pub geometry: ArrayGeometry,
    pub ops: Vec<StimulusOp>,
    pub params: SimulationParams,
    /// Sense-amplifier enable delay; half a clock cycle when `None`.
    pub sa_delay_ns: Option<f64>,
    /// Netlist file pulled in by the stimulus deck.
    pub netlist_include: Option<String>,
}

impl StimulusProgram {
    pub fn new(geometry: ArrayGeometry, ops: Vec<StimulusOp>) -> Self {
        StimulusProgram {
            geometry,
            ops,
            params: SimulationParams::default(),
            sa_delay_ns: None,
            netlist_include: None,
        }
    }

    pub fn sa_delay(&self) -> f64 {
        self.sa_delay_ns.unwrap_or(self.params.t_clk_ns / 2.0)
    }

    /// First cycle of each operation.
    pub fn start_cycles(&self) -> Vec<usize> {
        let mut cycle = 1;
        self.ops
            .iter()
            .map(|op| {
                let c = cycle;
                cycle += op.cycles();
                c
            })
            .collect()
    }

    pub fn total_cycles(&self) -> usize {
        1 + self.ops.iter().map(StimulusOp::cycles).sum::<usize>()
    }

    fn validate(&self, variant: CellVariant) -> Result<()> {
        let cols = self.geometry.cols;
        for op in &self.ops {
            variant.check(op.kind())?;
            let (row, width) = match op {
                StimulusOp::Write { row, word } => (Some(*row), Some(word.width())),
                StimulusOp::Read { row } => (Some(*row), None),
                StimulusOp::Search { key } => (None, Some(key.width())),
                StimulusOp::And { mask } => (None, Some(mask.width())),
            };
            if let Some(r) = row {
                // The reduced array only instantiates row 0.
                if r != 0 {
                    return Err(LimError::IndexOutOfRange { index: r, len: 1 });
                }
            }
            if let Some(w) = width {
                if w != cols {
                    return Err(LimError::WidthMismatch { expected: cols, got: w });
                }
            }
        }
        if let Some(d) = self.sa_delay_ns {
            if !(d >= 0.0) || d > self.params.t_clk_ns {
                return Err(LimError::Parse {
                    line: 0,
                    msg: format!("SA delay {d} ns outside one clock cycle"),
                });
            }
        }
        Ok(())
    }

    /// Piecewise-constant logic level of every driven line: each entry is a
    /// time (ns) and the level from that time on. The first entry is at 0.
    pub fn waveforms(&self, variant: CellVariant) -> Result<BTreeMap<String, Vec<(f64, Bit)>>> {
        self.validate(variant)?;
        let t = self.params.t_clk_ns;
        let n = self.geometry.cols - 1;
        let (idle_bl, idle_blb) = mask_bitlines(variant, Bit::Zero);

        let mut w = Waves::default();
        w.init("WL0", Bit::Zero);
        w.init("WE", Bit::Zero);
        w.init("DIN", Bit::Zero);
        w.init("PCHB", Bit::One);
        w.init("SAE", Bit::Zero);
        w.init("BL0", idle_bl);
        w.init("BLB0", idle_blb);
        let searchable = variant.supports(OperationKind::Search);
        if searchable {
            w.init("ENB", Bit::One);
        }
        let dynamic = variant == CellVariant::LimDynamic;
        if dynamic {
            w.init("PRE0", Bit::One);
        }

        for (op, start) in self.ops.iter().zip(self.start_cycles()) {
            let t0 = start as f64 * t;
            let half = t0 + t / 2.0;
            let end = t0 + op.cycles() as f64 * t;
            match op {
                StimulusOp::Write { word, .. } => {
                    let (bl0, blb0) = data_bitlines(word.bit(0));
                    w.set("WE", t0, Bit::One);
                    w.set("DIN", t0, word.bit(n));
                    w.set("BL0", t0, bl0);
                    w.set("BLB0", t0, blb0);
                    w.set("WL0", half, Bit::One);
                    w.set("WL0", end, Bit::Zero);
                    w.set("WE", end, Bit::Zero);
                    w.set("BL0", end, idle_bl);
                    w.set("BLB0", end, idle_blb);
                }
                StimulusOp::Read { .. } => {
                    w.set("PCHB", t0, Bit::Zero);
                    w.set("PCHB", half, Bit::One);
                    w.set("WL0", half, Bit::One);
                    w.set("SAE", half, Bit::One);
                    w.set("WL0", end, Bit::Zero);
                    w.set("SAE", end, Bit::Zero);
                }
                StimulusOp::Search { key } => {
                    let (bl0, blb0) = data_bitlines(key.bit(0));
                    let eval = t0 + t;
                    w.set("WE", t0, Bit::One);
                    w.set("DIN", t0, key.bit(n));
                    w.set("BL0", t0, bl0);
                    w.set("BLB0", t0, blb0);
                    w.set("ENB", eval, Bit::Zero);
                    w.set("ENB", end, Bit::One);
                    w.set("WE", end, Bit::Zero);
                    w.set("BL0", end, idle_bl);
                    w.set("BLB0", end, idle_blb);
                }
                StimulusOp::And { mask } => {
                    let (bl0, blb0) = mask_bitlines(variant, mask.bit(0));
                    let (bl_last, _) = mask_bitlines(variant, mask.bit(n));
                    let eval = t0 + t;
                    w.set("WE", t0, Bit::One);
                    w.set("DIN", t0, bl_last);
                    w.set("BL0", t0, bl0);
                    w.set("BLB0", t0, blb0);
                    if dynamic {
                        w.set("PRE0", t0, Bit::Zero);
                        w.set("PRE0", eval, Bit::One);
                    }
                    w.set("ENB", eval, Bit::Zero);
                    w.set("ENB", end, Bit::One);
                    w.set("WE", end, Bit::Zero);
                    w.set("BL0", end, idle_bl);
                    w.set("BLB0", end, idle_blb);
                }
            }
        }
        Ok(w.0)
    }
}

#[derive(Default)]
struct Waves(BTreeMap<String, Vec<(f64, Bit)>>);

impl Waves {
    fn init(&mut self, node: &str, level: Bit) {
        self.0.insert(node.to_string(), vec![(0.0, level)]);
    }

    fn set(&mut self, node: &str, time: f64, level: Bit) {
        let wave = self.0.get_mut(node).expect("node initialised before use");
        let last = *wave.last().expect("non-empty");
        if last.1 == level {
            return;
        }
        if (last.0 - time).abs() < 1e-12 {
            wave.pop();
            if wave.last().map(|p| p.1) == Some(level) {
                return;
            }
        }
        wave.push((time, level));
    }
}

fn ns(t: f64) -> String {
    format!("{t:.3}n")
}

fn pwl(wave: &[(f64, Bit)], vdd: f64) -> String {
    let v = |b: Bit| if b.is_one() { format!("{vdd}") } else { "0".to_string() };
    let mut pts = vec![format!("0n {}", v(wave[0].1))];
    let mut prev = wave[0].1;
    for &(time, level) in &wave[1..] {
        pts.push(format!("{} {}", ns(time), v(prev)));
        pts.push(format!("{} {}", ns(time + EDGE_NS), v(level)));
        prev = level;
    }
    format!("PWL({})", pts.join(" "))
}

/// Renders the stimulus deck: parameters, supplies, one PWL source per
/// driven line and a transient analysis covering every cycle.
pub fn emit_stimuli(program: &StimulusProgram, variant: CellVariant) -> Result<String> {
    let waves = program.waveforms(variant)?;
    let p = program.params;
    let mut out = String::new();
    let _ = writeln!(out, "* Stimuli for {} {}", variant.token(), program.geometry);
    let _ = writeln!(out, "* clock {} ns, {} cycles (cycle 0 idle)", p.t_clk_ns, program.total_cycles());
    for (op, start) in program.ops.iter().zip(program.start_cycles()) {
        let _ = writeln!(out, "* cycle {start}: {op}");
    }
    let _ = writeln!(
        out,
        ".param tclk={} {SA_DELAY_PARAM}={} vdd={}",
        ns(p.t_clk_ns),
        ns(program.sa_delay()),
        p.vdd
    );
    if let Some(inc) = &program.netlist_include {
        let _ = writeln!(out, ".include \"{inc}\"");
    }
    let _ = writeln!(out, "VVDD VDD 0 DC {}", p.vdd);
    out.push_str("VGND GND 0 DC 0\n");
    for (node, wave) in &waves {
        let _ = writeln!(out, "V{node} {node} 0 {}", pwl(wave, p.vdd));
    }
    let _ = writeln!(out, ".tran 1p {}", ns(program.total_cycles() as f64 * p.t_clk_ns));
    out.push_str(".end\n");
    Ok(out)
}
