//! Subcommand implementations. Each one resolves its settings from the
//! configuration file and command-line overrides, writes CSV or SPICE files
//! into the output directory and returns a short summary for stdout.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use lim_core::batch::{generate, run_batch, InstanceSpace};
use lim_core::cell::BitlineLoad;
use lim_core::cost::{
    audit, comparison_table, format_percent, structural_estimate_with, AuditStatus, CalibrationTable,
    ComparisonKind, CostCoefficients, PowerLawScaling,
};
use lim_core::maxmin::direct_scan;
use lim_core::netlist::{
    build_reduced_model, emit_netlist, emit_stimuli, parse_ops, PrimitiveLibrary, StimulusOp,
    StimulusProgram,
};
use lim_core::rng::SplitMix64;
use lim_core::{
    find_extreme, ArrayGeometry, ArrayState, CellVariant, Encoding, Exec, Mask, OperationKind,
    SearchMode, SimulationParams, Word,
};

use crate::config::Config;

/// Values given on the command line; each one wins over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub size: Option<usize>,
    pub variant: Option<String>,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub t_clk_ns: Option<f64>,
    pub vdd: Option<f64>,
    pub mode: Option<String>,
    pub encoding: Option<String>,
    pub width: Option<usize>,
    pub words: Option<String>,
    pub batch: Option<usize>,
    pub sequential: bool,
    pub ops: Option<String>,
    pub sa_delay_ns: Option<f64>,
    pub library: Option<String>,
    pub calibration: Option<PathBuf>,
    pub scaling_exponent: Option<f64>,
}

fn pick<T>(cli: Option<T>, cfg: &Config, section: &str, key: &str) -> Result<Option<T>>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    if cli.is_some() {
        return Ok(cli);
    }
    Ok(cfg.parsed(section, key)?)
}

fn parse_with<T>(cli: Option<String>, cfg: &Config, section: &str, key: &str) -> Result<Option<T>>
where
    T: FromStr,
    T::Err: std::error::Error + Send + Sync + 'static,
{
    match cli.or_else(|| cfg.get(section, key).map(String::from)) {
        None => Ok(None),
        Some(s) => Ok(Some(s.parse().with_context(|| format!("invalid {key} '{s}'"))?)),
    }
}

/// Words separated by commas or whitespace, MSB first.
pub fn parse_words(text: &str) -> Result<Vec<Word>> {
    let words: Vec<Word> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().with_context(|| format!("invalid word '{s}'")))
        .collect::<Result<_>>()?;
    if words.is_empty() {
        bail!("word list is empty");
    }
    if let Some(w) = words.iter().find(|w| w.width() != words[0].width()) {
        bail!("words of different widths ({} and {})", words[0].width(), w.width());
    }
    Ok(words)
}

fn random_words(seed: u64, rows: usize, width: usize) -> Vec<Word> {
    let mut rng = SplitMix64::new(seed);
    (0..rows).map(|_| rng.word(width)).collect()
}

fn ensure_dir(out: &Path) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))
}

fn fixed2(v: f64) -> String {
    format!("{v:.2}")
}

#[derive(Debug, Clone)]
pub struct ArraySettings {
    pub variant: CellVariant,
    pub rows: usize,
    pub cols: usize,
    pub params: SimulationParams,
}

impl ArraySettings {
    fn resolve(cfg: &Config, o: &Overrides, default_variant: CellVariant, default_size: usize) -> Result<Self> {
        let variant = parse_with(o.variant.clone(), cfg, "array", "variant")?.unwrap_or(default_variant);
        let size = pick(o.size, cfg, "", "size")?;
        let rows = match o.rows.or(size) {
            Some(r) => r,
            None => cfg.parsed("array", "rows")?.unwrap_or(default_size),
        };
        let cols = match o.cols.or(size) {
            Some(c) => c,
            None => cfg.parsed("array", "cols")?.unwrap_or(default_size),
        };
        let defaults = SimulationParams::default();
        let params = SimulationParams::new(
            pick(o.vdd, cfg, "array", "vdd")?.unwrap_or(defaults.vdd),
            pick(o.t_clk_ns, cfg, "array", "t_clk_ns")?.unwrap_or(defaults.t_clk_ns),
        )?;
        Ok(ArraySettings {
            variant,
            rows,
            cols,
            params,
        })
    }

    pub fn geometry(&self) -> Result<ArrayGeometry> {
        Ok(ArrayGeometry::new(self.rows, self.cols)?)
    }
}

// ---------------------------------------------------------------- maxmin

#[derive(Debug, Clone)]
pub struct MaxminSettings {
    pub variant: CellVariant,
    pub mode: SearchMode,
    pub encoding: Encoding,
    pub seed: u64,
    pub words: Vec<Word>,
    pub batch: Option<usize>,
    pub exec: Exec,
}

impl MaxminSettings {
    pub fn resolve(cfg: &Config, o: &Overrides) -> Result<Self> {
        let array = ArraySettings::resolve(cfg, o, CellVariant::LimStatic, 16)?;
        let seed = pick(o.seed, cfg, "", "seed")?.unwrap_or(1);
        let width = pick(o.width, cfg, "maxmin", "width")?.unwrap_or(8);
        let words = match o.words.clone().or_else(|| cfg.get("maxmin", "words").map(String::from)) {
            Some(text) => parse_words(&text)?,
            None => random_words(seed, array.rows, width),
        };
        Ok(MaxminSettings {
            variant: array.variant,
            mode: parse_with(o.mode.clone(), cfg, "maxmin", "mode")?.unwrap_or(SearchMode::Max),
            encoding: parse_with(o.encoding.clone(), cfg, "maxmin", "encoding")?.unwrap_or(Encoding::Unsigned),
            seed,
            words,
            batch: pick(o.batch, cfg, "maxmin", "batch")?,
            exec: if o.sequential { Exec::Sequential } else { Exec::default() },
        })
    }
}

fn decode(word: &Word, encoding: Encoding) -> String {
    let v = match encoding {
        Encoding::Unsigned => word.to_u64().map(|v| v.to_string()),
        Encoding::TwosComplement => word.to_i64().map(|v| v.to_string()),
    };
    v.unwrap_or_default()
}

pub fn run_maxmin(s: &MaxminSettings, out: &Path) -> Result<String> {
    ensure_dir(out)?;
    if let Some(count) = s.batch {
        return run_maxmin_batch(s, count, out);
    }
    let width = s.words[0].width();
    let geo = ArrayGeometry::new(s.words.len(), width)?;
    let mut array = ArrayState::new(geo, s.variant).with_exec(s.exec);
    for (r, w) in s.words.iter().enumerate() {
        array.write_word(r, w)?;
    }
    let res = find_extreme(&mut array, s.mode, s.encoding)?;
    let oracle = (width <= 64).then(|| direct_scan(&s.words, s.mode, s.encoding)).flatten();

    let mut w = csv_writer(&out.join("result.csv"))?;
    w.write_record(["row", "word", "value", "steps", "oracle_row", "oracle_value", "agrees"])?;
    w.write_record([
        res.row.to_string(),
        res.value.to_string(),
        decode(&res.value, s.encoding),
        res.steps.len().to_string(),
        oracle.map(|r| r.to_string()).unwrap_or_default(),
        oracle.map(|r| decode(&s.words[r], s.encoding)).unwrap_or_default(),
        oracle.map(|r| (r == res.row).to_string()).unwrap_or_default(),
    ])?;
    w.flush()?;

    let mut t = csv_writer(&out.join("trace.csv"))?;
    t.write_record([
        "step",
        "bit_position",
        "mask",
        "rule",
        "and_results",
        "candidates_before",
        "candidates_after",
    ])?;
    for (i, st) in res.steps.iter().enumerate() {
        let results: String = st.and_results.iter().map(|b| b.as_char()).collect();
        t.write_record([
            i.to_string(),
            st.bit_position.to_string(),
            st.mask.to_string(),
            st.rule.to_string(),
            results,
            st.candidates_before.to_bitstring(),
            st.candidates_after.to_bitstring(),
        ])?;
    }
    t.flush()?;

    if oracle.is_some_and(|r| r != res.row) {
        bail!("bit-serial result row {} disagrees with direct scan row {}", res.row, oracle.unwrap());
    }
    Ok(format!(
        "{} {} over {} rows x {} bits: row {} ({}), {} steps",
        s.mode,
        s.encoding,
        s.words.len(),
        width,
        res.row,
        res.value,
        res.steps.len()
    ))
}

fn run_maxmin_batch(s: &MaxminSettings, count: usize, out: &Path) -> Result<String> {
    let instances = generate(s.seed, count, InstanceSpace::default());
    let outcomes = run_batch(&instances, s.exec)?;
    let mut w = csv_writer(&out.join("batch.csv"))?;
    w.write_record([
        "index", "variant", "mode", "encoding", "rows", "width", "row", "steps", "oracle_row", "agrees",
    ])?;
    for (i, (inst, res)) in instances.iter().zip(&outcomes).enumerate() {
        w.write_record([
            i.to_string(),
            inst.variant.token().to_string(),
            inst.mode.to_string(),
            inst.encoding.to_string(),
            inst.words.len().to_string(),
            inst.width.to_string(),
            res.row.to_string(),
            res.steps.to_string(),
            res.oracle_row.to_string(),
            res.agrees().to_string(),
        ])?;
    }
    w.flush()?;
    let disagreements = outcomes.iter().filter(|o| !o.agrees()).count();
    if disagreements > 0 {
        bail!("{disagreements} of {count} instances disagree with the direct scan");
    }
    Ok(format!("{count} instances, all agree with the direct scan"))
}

// ---------------------------------------------------------------- compare

#[derive(Debug, Clone)]
pub struct CompareSettings {
    pub size: usize,
    pub calibration: Option<PathBuf>,
    pub scaling_exponent: Option<f64>,
}

impl CompareSettings {
    pub fn resolve(cfg: &Config, o: &Overrides) -> Result<Self> {
        let size = match o.size {
            Some(s) => s,
            None => match cfg.parsed("compare", "size")? {
                Some(s) => s,
                None => cfg.parsed("", "size")?.unwrap_or(lim_core::cost::SEED_SIZE),
            },
        };
        Ok(CompareSettings {
            size,
            calibration: o
                .calibration
                .clone()
                .or_else(|| cfg.get("compare", "calibration").map(PathBuf::from)),
            scaling_exponent: pick(o.scaling_exponent, cfg, "compare", "scaling_exponent")?,
        })
    }
}

/// Seed calibration, extended with records from `extra` (later records win).
pub fn load_calibration(extra: Option<&Path>) -> Result<CalibrationTable> {
    let mut cal = CalibrationTable::seed();
    if let Some(path) = extra {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let added = CalibrationTable::parse(&text).with_context(|| format!("in {}", path.display()))?;
        for (v, op, size, edp) in added.entries() {
            cal.insert(v, op, size, edp)?;
        }
    }
    Ok(cal)
}

pub fn run_compare(s: &CompareSettings, out: &Path) -> Result<String> {
    let mut cal = load_calibration(s.calibration.as_deref())?;
    if let Some(exponent) = s.scaling_exponent {
        cal.install_scaling_hook(Box::new(PowerLawScaling { exponent }))?;
    }
    // Build everything first so a missing point leaves no partial output.
    let tables = ComparisonKind::ALL
        .iter()
        .map(|k| comparison_table(&cal, *k, s.size))
        .collect::<lim_core::Result<Vec<_>>>()?;
    let mut edp_rows = Vec::new();
    for v in CellVariant::ALL {
        let mut row = vec![v.label().to_string()];
        for op in OperationKind::ALL {
            row.push(if v.supports(op) {
                fixed2(cal.edp_lookup(v, op, s.size)?)
            } else {
                String::new()
            });
        }
        edp_rows.push(row);
    }

    ensure_dir(out)?;
    let mut w = csv_writer(&out.join("edp.csv"))?;
    w.write_record(["memory", "write", "read", "search", "and"])?;
    for row in edp_rows {
        w.write_record(row)?;
    }
    w.flush()?;

    for t in &tables {
        let mut w = csv_writer(&out.join(format!("{}.csv", t.kind.file_stem())))?;
        let mut header = vec![String::new()];
        header.extend(t.col_memories.iter().map(|v| v.label().to_string()));
        w.write_record(&header)?;
        for (r, row) in t.row_memories.iter().zip(&t.cells) {
            let mut rec = vec![r.label().to_string()];
            rec.extend(row.iter().map(|c| c.map(|rv| format_percent(rv.percent)).unwrap_or_default()));
            w.write_record(&rec)?;
        }
        w.flush()?;
    }
    Ok(format!(
        "EDP and {} comparison tables for {}x{} written",
        tables.len(),
        s.size,
        s.size
    ))
}

// ---------------------------------------------------------------- audit

pub fn run_audit(calibration: Option<&Path>, out: &Path) -> Result<(bool, String)> {
    let cal = load_calibration(calibration)?;
    let report = audit(&cal)?;
    ensure_dir(out)?;
    let mut w = csv_writer(&out.join("audit.csv"))?;
    w.write_record([
        "table", "row", "col", "printed", "regenerated", "deviation", "status", "note",
    ])?;
    for c in &report.cells {
        let note = match &c.status {
            AuditStatus::Explained(a) => a.to_string(),
            _ => String::new(),
        };
        w.write_record([
            c.kind.title().to_string(),
            c.row.label().to_string(),
            c.col.label().to_string(),
            c.printed_text.to_string(),
            format_percent(c.regenerated),
            fixed2(c.deviation()),
            c.status.label().to_string(),
            note,
        ])?;
    }
    w.flush()?;
    let summary = format!(
        "{} cells: {} reproduced, {} explained, {} unexplained; EDP {}/{} match",
        report.cells.len(),
        report.reproduced(),
        report.explained().count(),
        report.unexplained().count(),
        report.edp.len() - report.edp_failures(),
        report.edp.len()
    );
    Ok((report.passed(), summary))
}

// ---------------------------------------------------------------- netlist

#[derive(Debug, Clone)]
pub struct NetlistSettings {
    pub array: ArraySettings,
    pub ops: Vec<StimulusOp>,
    pub sa_delay_ns: Option<f64>,
    pub library: Option<String>,
}

/// Write then read row 0, followed by a search and a one-hot AND where the
/// variant supports them.
pub fn default_ops(variant: CellVariant, cols: usize) -> Vec<StimulusOp> {
    let mut word = Word::zeros(cols);
    word.set(0, lim_core::Bit::One);
    let mut ops = vec![
        StimulusOp::Write {
            row: 0,
            word: word.clone(),
        },
        StimulusOp::Read { row: 0 },
    ];
    if variant.supports(OperationKind::Search) {
        ops.push(StimulusOp::Search { key: word });
    }
    if variant.supports(OperationKind::And) {
        ops.push(StimulusOp::And {
            mask: Mask::one_hot(cols, 0).expect("cols >= 1"),
        });
    }
    ops
}

impl NetlistSettings {
    pub fn resolve(cfg: &Config, o: &Overrides) -> Result<Self> {
        let array = ArraySettings::resolve(cfg, o, CellVariant::LimDynamic, 32)?;
        let ops = match o.ops.clone().or_else(|| cfg.get("netlist", "ops").map(String::from)) {
            Some(text) => parse_ops(&text)?,
            None => default_ops(array.variant, array.cols),
        };
        Ok(NetlistSettings {
            ops,
            sa_delay_ns: pick(o.sa_delay_ns, cfg, "netlist", "sa_delay_ns")?,
            library: o.library.clone().or_else(|| cfg.get("netlist", "library").map(String::from)),
            array,
        })
    }
}

pub const NETLIST_FILE: &str = "netlist.sp";
pub const STIMULI_FILE: &str = "stimuli.sp";

pub fn run_netlist(s: &NetlistSettings, out: &Path) -> Result<String> {
    let geo = s.array.geometry()?;
    let v = s.array.variant;
    let model = build_reduced_model(geo, v)?;
    let mut lib = PrimitiveLibrary::placeholder(v);
    if let Some(path) = &s.library {
        lib = lib.with_include(path.clone());
    }
    let netlist = emit_netlist(&model, &lib)?;
    let mut program = StimulusProgram::new(geo, s.ops.clone());
    program.params = s.array.params;
    program.sa_delay_ns = s.sa_delay_ns;
    program.netlist_include = Some(NETLIST_FILE.to_string());
    let stimuli = emit_stimuli(&program, v)?;

    ensure_dir(out)?;
    fs::write(out.join(NETLIST_FILE), netlist)?;
    fs::write(out.join(STIMULI_FILE), stimuli)?;
    Ok(format!(
        "{} {}: {} cell instances, {} dummy loads, {} cycles",
        v.token(),
        geo,
        model.cell_instances(),
        model.dummy_loads,
        program.total_cycles()
    ))
}

// ---------------------------------------------------------------- simulate

#[derive(Debug, Clone)]
pub struct SimulateSettings {
    pub array: ArraySettings,
    pub words: Vec<Word>,
    pub ops: Vec<StimulusOp>,
    pub coefficients: CostCoefficients,
    pub load: BitlineLoad,
}

impl SimulateSettings {
    pub fn resolve(cfg: &Config, o: &Overrides) -> Result<Self> {
        let array = ArraySettings::resolve(cfg, o, CellVariant::LimStatic, 8)?;
        let seed = pick(o.seed, cfg, "", "seed")?.unwrap_or(1);
        let words = match o.words.clone().or_else(|| cfg.get("simulate", "words").map(String::from)) {
            Some(text) => parse_words(&text)?,
            None => random_words(seed, array.rows, array.cols),
        };
        if words.len() != array.rows || words[0].width() != array.cols {
            bail!(
                "initial contents are {}x{} but the array is {}x{}",
                words.len(),
                words[0].width(),
                array.rows,
                array.cols
            );
        }
        let ops = match o.ops.clone().or_else(|| cfg.get("simulate", "ops").map(String::from)) {
            Some(text) => parse_ops(&text)?,
            None => default_ops(array.variant, array.cols),
        };
        let d = CostCoefficients::default();
        let coefficients = CostCoefficients::new(
            cfg.parsed("cost", "charge")?.unwrap_or(d.charge),
            cfg.parsed("cost", "leak")?.unwrap_or(d.leak),
            cfg.parsed("cost", "gate")?.unwrap_or(d.gate),
            cfg.parsed("cost", "bitline")?.unwrap_or(d.bitline),
        )?;
        let load = match cfg.parsed::<u32>("cost", "bitline_load")? {
            Some(n) => BitlineLoad::with_count(array.variant, n)?,
            None => BitlineLoad::default_for(array.variant),
        };
        Ok(SimulateSettings {
            array,
            words,
            ops,
            coefficients,
            load,
        })
    }
}

pub fn run_simulate(s: &SimulateSettings, out: &Path) -> Result<String> {
    let geo = s.array.geometry()?;
    let v = s.array.variant;
    let mut array = ArrayState::new(geo, v);
    for (r, w) in s.words.iter().enumerate() {
        array.write_word(r, w)?;
    }
    let mut records = Vec::new();
    let mut total = 0.0;
    for (i, op) in s.ops.iter().enumerate() {
        let (event, result) = match op {
            StimulusOp::Write { row, word } => (array.write_word(*row, word)?, String::new()),
            StimulusOp::Read { row } => {
                let (w, e) = array.read_word(*row)?;
                (e, w.to_string())
            }
            StimulusOp::Search { key } => {
                let (r, e) = array.search(key)?;
                (e, r.iter().map(|b| b.as_char()).collect())
            }
            StimulusOp::And { mask } => {
                let (r, e) = array.and_op(mask)?;
                (e, r.iter().map(|b| b.as_char()).collect())
            }
        };
        let est = structural_estimate_with(&event, s.load, s.array.params, s.coefficients);
        total += est.estimate;
        records.push([
            i.to_string(),
            op.to_string(),
            v.token().to_string(),
            event.lines_charged.to_string(),
            event.lines_discharged.to_string(),
            event.dummy_window_units.to_string(),
            event.gate_commutations.to_string(),
            event.bitlines_driven.to_string(),
            est.bitline_load_units.to_string(),
            fixed2(est.estimate),
            result,
        ]);
    }
    ensure_dir(out)?;
    let mut w = csv_writer(&out.join("events.csv"))?;
    w.write_record([
        "index",
        "op",
        "variant",
        "lines_charged",
        "lines_discharged",
        "window_units",
        "gate_commutations",
        "bitlines_driven",
        "bitline_load",
        "estimate",
        "result",
    ])?;
    for r in records {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(format!(
        "{} operations on {} {}, total estimate {:.2}",
        s.ops.len(),
        v.token(),
        geo,
        total
    ))
}
