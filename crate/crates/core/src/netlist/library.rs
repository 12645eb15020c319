use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::model::{row_signals, BlockKind};
use crate::error::{LimError, Result};
use crate::types::CellVariant;

/// Maps every block of a reduced array onto a subcircuit name, plus the
/// files that define those subcircuits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveLibrary {
    pub includes: Vec<String>,
    subckts: BTreeMap<BlockKind, String>,
}

pub const PLACEHOLDER_INCLUDE: &str = "primitives.sp";

fn cell_prefix(variant: CellVariant) -> &'static str {
    match variant {
        CellVariant::Sram6T => "sram6t",
        CellVariant::CamNor => "cam_nor",
        CellVariant::LimSpecial => "and_sp",
        CellVariant::LimDynamic => "and_dyn",
        CellVariant::LimStatic => "and_st",
    }
}

fn shared_name(block: BlockKind) -> Option<&'static str> {
    Some(match block {
        BlockKind::Sa => "voltage_latch_sa",
        BlockKind::Mlsa => "cs_mlsa",
        BlockKind::Andsa => "cs_andsa",
        BlockKind::DummyLoad => "or_dummy_load",
        BlockKind::Precharge => "bl_precharge",
        BlockKind::DelaySa => "delay_sa",
        BlockKind::BitlineDriver => "bl_driver",
        _ => return None,
    })
}

fn variant_name(variant: CellVariant, block: BlockKind) -> Option<String> {
    let p = cell_prefix(variant);
    match block {
        BlockKind::Cell => Some(format!("{p}_cell")),
        BlockKind::DummyRowCell => Some(format!("{p}_dummy_row")),
        BlockKind::DummyColCell => Some(format!("{p}_dummy_col")),
        BlockKind::DummyLine if variant != CellVariant::Sram6T => Some(format!("{p}_dummy_line")),
        _ => None,
    }
}

/// Port list of a block's subcircuit for `variant`, in connection order.
pub fn block_ports(variant: CellVariant, block: BlockKind) -> Vec<String> {
    let rows = || row_signals(variant).into_iter().map(String::from);
    let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let mut ports = match block {
        BlockKind::Cell => {
            let mut p = vec!["WL".to_string(), "BL".into(), "BLB".into()];
            p.extend(rows().skip(1));
            p
        }
        BlockKind::DummyRowCell => rows().collect(),
        BlockKind::DummyColCell => v(&["BL", "BLB"]),
        BlockKind::BitlineDriver => v(&["WE", "DIN", "BL", "BLB"]),
        BlockKind::Precharge => v(&["PCHB", "BL", "BLB"]),
        BlockKind::DelaySa => v(&["EN", "EN_D"]),
        BlockKind::Sa => v(&["EN", "BL", "BLB", "OUT"]),
        BlockKind::Mlsa | BlockKind::Andsa => v(&["ENB", "DIS", "LINE", "OUT"]),
        BlockKind::DummyLine => v(&["LINE"]),
        BlockKind::DummyLoad => v(&["IN"]),
    };
    ports.push("VDD".into());
    ports.push("GND".into());
    ports
}

/// Instance parameters a block's subcircuit accepts.
pub fn block_params(block: BlockKind) -> &'static [&'static str] {
    match block {
        BlockKind::DelaySa => &["td"],
        BlockKind::DummyLine => &["n"],
        _ => &[],
    }
}

impl PrimitiveLibrary {
    pub fn empty() -> Self {
        PrimitiveLibrary {
            includes: Vec::new(),
            subckts: BTreeMap::new(),
        }
    }

    /// The placeholder primitives shipped in `data/primitives.sp`.
    pub fn placeholder(variant: CellVariant) -> Self {
        let mut lib = PrimitiveLibrary::empty();
        lib.includes.push(PLACEHOLDER_INCLUDE.to_string());
        for block in ALL_BLOCKS {
            if let Some(name) = shared_name(block).map(String::from).or_else(|| variant_name(variant, block)) {
                lib.subckts.insert(block, name);
            }
        }
        lib
    }

    pub fn with_include(mut self, path: impl Into<String>) -> Self {
        self.includes = vec![path.into()];
        self
    }

    pub fn set(&mut self, block: BlockKind, subckt: impl Into<String>) {
        self.subckts.insert(block, subckt.into());
    }

    pub fn remove(&mut self, block: BlockKind) -> Option<String> {
        self.subckts.remove(&block)
    }

    pub fn get(&self, block: BlockKind) -> Result<&str> {
        self.subckts
            .get(&block)
            .map(String::as_str)
            .ok_or_else(|| LimError::MissingPrimitive(block.name().to_string()))
    }
}

const ALL_BLOCKS: [BlockKind; 11] = [
    BlockKind::Cell,
    BlockKind::DummyRowCell,
    BlockKind::DummyColCell,
    BlockKind::Sa,
    BlockKind::Mlsa,
    BlockKind::Andsa,
    BlockKind::DummyLoad,
    BlockKind::Precharge,
    BlockKind::DelaySa,
    BlockKind::BitlineDriver,
    BlockKind::DummyLine,
];

fn write_placeholder(out: &mut String, name: &str, ports: &[String], params: &[&str]) {
    let _ = write!(out, ".subckt {name} {}", ports.join(" "));
    for p in params {
        let _ = write!(out, " {p}=1");
    }
    out.push('\n');
    out.push_str("RLEAK VDD GND 1e12\n");
    let _ = writeln!(out, ".ends {name}");
    out.push('\n');
}

/// Text of the placeholder library: one empty subcircuit per primitive,
/// with the right ports, so that generated decks parse without a PDK.
pub fn placeholder_library_text() -> String {
    let mut out = String::from(
        "* Placeholder primitives for reduced-array netlists.\n\
         * Each subcircuit only declares its ports; replace this file with\n\
         * transistor-level cells and peripherals from a real design kit.\n\n",
    );
    for block in ALL_BLOCKS {
        if let Some(name) = shared_name(block) {
            write_placeholder(&mut out, name, &block_ports(CellVariant::CamNor, block), block_params(block));
        }
    }
    for variant in CellVariant::ALL {
        for block in ALL_BLOCKS {
            if let Some(name) = variant_name(variant, block) {
                write_placeholder(&mut out, &name, &block_ports(variant, block), block_params(block));
            }
        }
    }
    out
}
