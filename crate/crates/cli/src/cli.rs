use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use crate::commands::{self, Overrides};
use crate::config::Config;

#[derive(Debug, Parser)]
#[command(name = "limsim", version, about = "Logic-in-memory array simulator")]
pub struct Cli {
    /// Configuration file (`key = value` lines with `[section]` headers).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory the output files are written to.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Square array size (rows = cols), or the comparison size for `compare`.
    #[arg(long, global = true)]
    pub size: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct ArrayArgs {
    /// sram, cam, and_sp, and_dyn or and_st.
    #[arg(long)]
    pub variant: Option<String>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    #[arg(long)]
    pub vdd: Option<f64>,
    #[arg(long)]
    pub t_clk_ns: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bit-serial maximum/minimum search over stored words.
    Maxmin {
        #[command(flatten)]
        array: ArrayArgs,
        /// max or min.
        #[arg(long)]
        mode: Option<String>,
        /// unsigned or twos_complement.
        #[arg(long)]
        encoding: Option<String>,
        /// Width of randomly drawn words.
        #[arg(long)]
        width: Option<usize>,
        /// Comma-separated words, MSB first; replaces random contents.
        #[arg(long)]
        words: Option<String>,
        /// Run this many seeded random instances instead of one search.
        #[arg(long)]
        batch: Option<usize>,
        /// Run the batch on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Energy-delay products and relative-variation tables.
    Compare {
        /// Extra calibration records merged over the built-in ones.
        #[arg(long)]
        calibration: Option<PathBuf>,
        /// Install a power-law scaling hook with this exponent.
        #[arg(long)]
        scaling_exponent: Option<f64>,
    },
    /// Reduced worst-case array netlist and stimulus deck.
    Netlist {
        #[command(flatten)]
        array: ArrayArgs,
        /// Operation list, e.g. "write 0 1010; read 0".
        #[arg(long)]
        ops: Option<String>,
        #[arg(long)]
        sa_delay_ns: Option<f64>,
        /// Primitive library file to include instead of the placeholder.
        #[arg(long)]
        library: Option<String>,
    },
    /// Run an operation list on a behavioral array and estimate its cost.
    Simulate {
        #[command(flatten)]
        array: ArrayArgs,
        #[arg(long)]
        ops: Option<String>,
        /// Initial contents, one comma-separated word per row.
        #[arg(long)]
        words: Option<String>,
    },
    /// Re-derive the published comparison values from the calibration.
    Audit {
        #[arg(long)]
        calibration: Option<PathBuf>,
    },
}

fn array_overrides(o: &mut Overrides, a: ArrayArgs) {
    o.variant = a.variant;
    o.rows = a.rows;
    o.cols = a.cols;
    o.vdd = a.vdd;
    o.t_clk_ns = a.t_clk_ns;
}

/// Parses `args` (program name first), runs the subcommand and returns
/// the line to print.
pub fn run<I, T>(args: I) -> Result<String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    execute(cli)
}

pub fn execute(cli: Cli) -> Result<String> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let mut o = Overrides {
        seed: cli.seed,
        size: cli.size,
        ..Overrides::default()
    };
    let out = cli.out;
    match cli.command {
        Command::Maxmin {
            array,
            mode,
            encoding,
            width,
            words,
            batch,
            sequential,
        } => {
            array_overrides(&mut o, array);
            o.mode = mode;
            o.encoding = encoding;
            o.width = width;
            o.words = words;
            o.batch = batch;
            o.sequential = sequential;
            commands::run_maxmin(&commands::MaxminSettings::resolve(&cfg, &o)?, &out)
        }
        Command::Compare {
            calibration,
            scaling_exponent,
        } => {
            o.calibration = calibration;
            o.scaling_exponent = scaling_exponent;
            commands::run_compare(&commands::CompareSettings::resolve(&cfg, &o)?, &out)
        }
        Command::Netlist {
            array,
            ops,
            sa_delay_ns,
            library,
        } => {
            array_overrides(&mut o, array);
            o.ops = ops;
            o.sa_delay_ns = sa_delay_ns;
            o.library = library;
            commands::run_netlist(&commands::NetlistSettings::resolve(&cfg, &o)?, &out)
        }
        Command::Simulate { array, ops, words } => {
            array_overrides(&mut o, array);
            o.ops = ops;
            o.words = words;
            commands::run_simulate(&commands::SimulateSettings::resolve(&cfg, &o)?, &out)
        }
        Command::Audit { calibration } => {
            let path = calibration.or_else(|| cfg.get("compare", "calibration").map(PathBuf::from));
            let (passed, summary) = commands::run_audit(path.as_deref(), &out)?;
            if !passed {
                bail!("audit failed: {summary}");
            }
            Ok(summary)
        }
    }
}
