use std::fmt::Write as _;

use super::library::{block_ports, PrimitiveLibrary};
use super::model::{row_signals, BlockKind, ReducedArrayModel};
use crate::error::Result;
use crate::types::{CellVariant, OperationKind};

pub const TOP_SUBCKT: &str = "lim_array";
pub const TOP_INSTANCE: &str = "XTOP";
/// Parameter holding the sense-amplifier enable delay, defined by the
/// stimulus deck.
pub const SA_DELAY_PARAM: &str = "tsadelay";

/// Names of the lines a reduced array exposes, in port order.
pub fn array_ports(model: &ReducedArrayModel) -> Vec<String> {
    let n = model.last_col();
    let v = model.variant;
    let mut p: Vec<String> = row_signals(v).iter().map(|s| format!("{s}0")).collect();
    p.extend([
        "BL0".to_string(),
        "BLB0".to_string(),
        format!("BL{n}"),
        format!("BLB{n}"),
    ]);
    p.extend(["WE", "DIN", "PCHB", "SAE", "SAE_D", "SAO"].map(String::from));
    if v.supports(OperationKind::Search) {
        p.extend(["ENB", "MLSAO"].map(String::from));
    }
    if v.is_lim() {
        p.push("ANDSAO".into());
    }
    if model.dummy_line {
        p.extend(["DML", "DSAO"].map(String::from));
    }
    p
}

struct Builder<'a> {
    lib: &'a PrimitiveLibrary,
    variant: CellVariant,
    out: String,
}

impl Builder<'_> {
    fn inst(&mut self, name: &str, block: BlockKind, nodes: &[String], params: &str) -> Result<()> {
        let subckt = self.lib.get(block)?;
        debug_assert_eq!(nodes.len() + 2, block_ports(self.variant, block).len(), "{name}");
        let _ = write!(self.out, "{name} {} VDD GND {subckt}", nodes.join(" "));
        if !params.is_empty() {
            let _ = write!(self.out, " {params}");
        }
        self.out.push('\n');
        Ok(())
    }
}

fn s(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

/// Renders the reduced array as a SPICE subcircuit plus a top-level
/// instance. Output depends only on the model and library.
pub fn emit_netlist(model: &ReducedArrayModel, lib: &PrimitiveLibrary) -> Result<String> {
    for block in model.needed_blocks() {
        lib.get(block)?;
    }
    let v = model.variant;
    let n = model.last_col();
    let geo = model.geometry;
    let rows0: Vec<String> = row_signals(v).iter().map(|s| format!("{s}0")).collect();
    let ports = array_ports(model);

    let mut b = Builder {
        lib,
        variant: v,
        out: String::new(),
    };
    let _ = writeln!(b.out, "* Reduced worst-case array netlist");
    let _ = writeln!(b.out, "* variant: {} ({})", v.token(), v.label());
    let _ = writeln!(b.out, "* geometry: {geo}");
    let _ = writeln!(
        b.out,
        "* cell instances: {} (real 2, dummy row {}, dummy column {})",
        model.cell_instances(),
        model.dummy_row_cells.len(),
        model.dummy_col_cells.len()
    );
    let _ = writeln!(b.out, "* dummy loads: {}", model.dummy_loads);
    for inc in &lib.includes {
        let _ = writeln!(b.out, ".include \"{inc}\"");
    }
    b.out.push_str(".global VDD GND\n\n");
    let _ = writeln!(b.out, ".subckt {TOP_SUBCKT} {}", ports.join(" "));

    b.out.push_str("* critical cells\n");
    let mut rw = vec![rows0[0].clone(), format!("BL{n}"), format!("BLB{n}")];
    rw.extend(rows0[1..].iter().cloned());
    b.inst("XCELL_RW", BlockKind::Cell, &rw, "")?;
    let mut sa = vec![rows0[0].clone(), "BL0".into(), "BLB0".into()];
    sa.extend(rows0[1..].iter().cloned());
    b.inst("XCELL_SA", BlockKind::Cell, &sa, "")?;

    b.out.push_str("* dummy first row\n");
    for c in &model.dummy_row_cells {
        b.inst(&format!("XDROW_{}", c.col), BlockKind::DummyRowCell, &rows0, "")?;
    }
    b.out.push_str("* dummy last column\n");
    let last_bl = vec![format!("BL{n}"), format!("BLB{n}")];
    for c in &model.dummy_col_cells {
        b.inst(&format!("XDCOL_{}", c.row), BlockKind::DummyColCell, &last_bl, "")?;
    }

    b.out.push_str("* peripherals\n");
    let mut drv = s(&["WE", "DIN"]);
    drv.extend(last_bl.iter().cloned());
    b.inst("XBLDRV", BlockKind::BitlineDriver, &drv, "")?;
    let mut pch = s(&["PCHB"]);
    pch.extend(last_bl.iter().cloned());
    b.inst("XPCH", BlockKind::Precharge, &pch, "")?;
    b.inst("XDELAY", BlockKind::DelaySa, &s(&["SAE", "SAE_D"]), &format!("td={SA_DELAY_PARAM}"))?;
    let mut sense = s(&["SAE_D"]);
    sense.extend(last_bl.iter().cloned());
    sense.push("SAO".into());
    b.inst("XSA", BlockKind::Sa, &sense, "")?;

    let dis = if model.dummy_line { "DSAO" } else { "GND" };
    if v.supports(OperationKind::Search) {
        b.inst("XMLSA", BlockKind::Mlsa, &s(&["ENB", dis, "ML0", "MLSAO"]), "")?;
    }
    if v.is_lim() {
        b.inst("XANDSA", BlockKind::Andsa, &s(&["ENB", dis, "ANDL0", "ANDSAO"]), "")?;
    }

    if model.dummy_line {
        b.out.push_str("* dummy line and its sense amplifier\n");
        b.inst("XDML", BlockKind::DummyLine, &s(&["DML"]), &format!("n={}", geo.cols))?;
        let dummy_sa = if v.is_lim() { BlockKind::Andsa } else { BlockKind::Mlsa };
        b.inst("XDUMSA", dummy_sa, &s(&["ENB", "GND", "DML", "DSAO"]), "")?;
        b.out.push_str("* OR-gate input loads on the dummy sense output\n");
        for r in 0..model.dummy_loads {
            b.inst(&format!("XDLOAD_{r}"), BlockKind::DummyLoad, &s(&["DSAO"]), "")?;
        }
    }
    let _ = writeln!(b.out, ".ends {TOP_SUBCKT}\n");
    let _ = writeln!(b.out, "{TOP_INSTANCE} {} {TOP_SUBCKT}", ports.join(" "));
    Ok(b.out)
}
