//! Shared vocabulary: bits, words, masks, geometries, cell variants and
//! operation kinds.
//!
//! Bit order is MSB-first everywhere: index 0 of a [`Word`] or [`Mask`] is the
//! most significant bit, and column 0 of an array stores it.

use std::fmt;
use std::ops::Not;
use std::str::FromStr;

use crate::error::{LimError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Bit {
    #[default]
    Zero,
    One,
}

impl Bit {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Bit::One
        } else {
            Bit::Zero
        }
    }

    pub fn is_one(self) -> bool {
        self == Bit::One
    }

    pub fn as_char(self) -> char {
        if self.is_one() {
            '1'
        } else {
            '0'
        }
    }
}

impl Not for Bit {
    type Output = Bit;
    fn not(self) -> Bit {
        match self {
            Bit::Zero => Bit::One,
            Bit::One => Bit::Zero,
        }
    }
}

impl From<bool> for Bit {
    fn from(b: bool) -> Self {
        Bit::from_bool(b)
    }
}

impl From<Bit> for bool {
    fn from(b: Bit) -> bool {
        b.is_one()
    }
}

pub(crate) const LIMB_BITS: usize = 64;

pub(crate) fn limbs_for(width: usize) -> usize {
    width.div_ceil(LIMB_BITS)
}

/// Mask of the valid bits in the last limb of a `width`-bit packed vector.
pub(crate) fn tail_mask(width: usize) -> u64 {
    match width % LIMB_BITS {
        0 => u64::MAX,
        r => !(u64::MAX >> r),
    }
}

#[inline]
pub(crate) fn limb_bit(index: usize) -> (usize, u64) {
    (index / LIMB_BITS, 1u64 << (LIMB_BITS - 1 - index % LIMB_BITS))
}

/// A fixed-width bit vector, MSB first, packed into 64-bit limbs.
///
/// Unused low bits of the last limb are always zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    width: usize,
    limbs: Vec<u64>,
}

impl Word {
    pub fn new(bits: &[Bit]) -> Result<Self> {
        if bits.is_empty() {
            return Err(LimError::InvalidWidth("a word needs at least one bit".into()));
        }
        let mut w = Word::zeros(bits.len());
        for (i, b) in bits.iter().enumerate() {
            w.set(i, *b);
        }
        Ok(w)
    }

    /// All-zero word. Panics on `width == 0`.
    pub fn zeros(width: usize) -> Self {
        assert!(width >= 1, "word width must be positive");
        Word {
            width,
            limbs: vec![0; limbs_for(width)],
        }
    }

    /// Low `width` bits of `value`, MSB first. `width` must be in 1..=64.
    pub fn from_u64(value: u64, width: usize) -> Result<Self> {
        if width == 0 || width > 64 {
            return Err(LimError::InvalidWidth(format!(
                "from_u64 needs a width in 1..=64, got {width}"
            )));
        }
        let v = if width == 64 {
            value
        } else {
            value & ((1u64 << width) - 1)
        };
        Ok(Word {
            width,
            limbs: vec![v << (64 - width)],
        })
    }

    pub(crate) fn from_limbs(width: usize, mut limbs: Vec<u64>) -> Self {
        debug_assert_eq!(limbs.len(), limbs_for(width));
        if let Some(last) = limbs.last_mut() {
            *last &= tail_mask(width);
        }
        Word { width, limbs }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn bit(&self, index: usize) -> Bit {
        assert!(index < self.width, "bit {index} out of range for width {}", self.width);
        let (limb, m) = limb_bit(index);
        Bit::from_bool(self.limbs[limb] & m != 0)
    }

    pub fn get(&self, index: usize) -> Result<Bit> {
        if index >= self.width {
            return Err(LimError::IndexOutOfRange {
                index,
                len: self.width,
            });
        }
        Ok(self.bit(index))
    }

    pub fn set(&mut self, index: usize, value: Bit) {
        assert!(index < self.width);
        let (limb, m) = limb_bit(index);
        if value.is_one() {
            self.limbs[limb] |= m;
        } else {
            self.limbs[limb] &= !m;
        }
    }

    pub fn bits(&self) -> impl Iterator<Item = Bit> + '_ {
        (0..self.width).map(move |i| self.bit(i))
    }

    pub fn to_bits(&self) -> Vec<Bit> {
        self.bits().collect()
    }

    pub fn count_ones(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    pub(crate) fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    /// Unsigned value for widths up to 64.
    pub fn to_u64(&self) -> Option<u64> {
        (self.width <= 64).then(|| self.limbs[0] >> (64 - self.width))
    }

    /// Two's-complement value for widths up to 64.
    pub fn to_i64(&self) -> Option<i64> {
        (self.width <= 64).then(|| (self.limbs[0] as i64) >> (64 - self.width))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            write!(f, "{}", b.as_char())?;
        }
        Ok(())
    }
}

fn parse_bits(s: &str) -> Result<Vec<Bit>> {
    s.trim()
        .chars()
        .filter(|c| *c != '_')
        .enumerate()
        .map(|(i, c)| match c {
            '0' => Ok(Bit::Zero),
            '1' => Ok(Bit::One),
            other => Err(LimError::Parse {
                line: 0,
                msg: format!("invalid bit '{other}' at position {i}"),
            }),
        })
        .collect()
}

impl FromStr for Word {
    type Err = LimError;
    fn from_str(s: &str) -> Result<Self> {
        Word::new(&parse_bits(s)?)
    }
}

/// Logical column-selection vector (1 = column selected).
///
/// The physical bitline encoding differs between cell variants; see
/// [`crate::cell::mask_bitlines`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mask(Word);

impl Mask {
    pub fn new(bits: &[Bit]) -> Result<Self> {
        Word::new(bits).map(Mask)
    }

    pub fn from_word(word: Word) -> Self {
        Mask(word)
    }

    /// Mask with a single selected column, counted from the MSB.
    pub fn one_hot(width: usize, position: usize) -> Result<Self> {
        if width == 0 {
            return Err(LimError::InvalidWidth("mask width must be positive".into()));
        }
        if position >= width {
            return Err(LimError::IndexOutOfRange {
                index: position,
                len: width,
            });
        }
        let mut w = Word::zeros(width);
        w.set(position, Bit::One);
        Ok(Mask(w))
    }

    pub fn width(&self) -> usize {
        self.0.width()
    }

    pub fn bit(&self, index: usize) -> Bit {
        self.0.bit(index)
    }

    pub fn as_word(&self) -> &Word {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.count_ones()
    }

    pub fn is_one_hot(&self) -> bool {
        self.count_ones() == 1
    }

    pub(crate) fn limbs(&self) -> &[u64] {
        self.0.limbs()
    }
}

impl fmt::Display for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Mask {
    type Err = LimError;
    fn from_str(s: &str) -> Result<Self> {
        s.parse::<Word>().map(Mask)
    }
}

pub fn make_word(bits: &[Bit]) -> Result<Word> {
    Word::new(bits)
}

pub fn one_hot_mask(width: usize, position: usize) -> Result<Mask> {
    Mask::one_hot(width, position)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellVariant {
    Sram6T,
    CamNor,
    LimDynamic,
    LimStatic,
    LimSpecial,
}

impl CellVariant {
    pub const ALL: [CellVariant; 5] = [
        CellVariant::Sram6T,
        CellVariant::CamNor,
        CellVariant::LimSpecial,
        CellVariant::LimDynamic,
        CellVariant::LimStatic,
    ];

    pub const LIM: [CellVariant; 3] = [
        CellVariant::LimDynamic,
        CellVariant::LimStatic,
        CellVariant::LimSpecial,
    ];

    pub fn is_lim(self) -> bool {
        matches!(
            self,
            CellVariant::LimDynamic | CellVariant::LimStatic | CellVariant::LimSpecial
        )
    }

    pub fn supports(self, op: OperationKind) -> bool {
        match op {
            OperationKind::Read | OperationKind::Write => true,
            OperationKind::Search => self != CellVariant::Sram6T,
            OperationKind::And => self.is_lim(),
        }
    }

    pub fn check(self, op: OperationKind) -> Result<()> {
        if self.supports(op) {
            Ok(())
        } else {
            Err(LimError::UnsupportedOperation { variant: self, op })
        }
    }

    /// Short label used in tables and CSV output.
    pub fn label(self) -> &'static str {
        match self {
            CellVariant::Sram6T => "SRAM",
            CellVariant::CamNor => "CAM",
            CellVariant::LimSpecial => "AND SP",
            CellVariant::LimDynamic => "AND DYN",
            CellVariant::LimStatic => "AND ST",
        }
    }

    /// Token used in calibration and config files.
    pub fn token(self) -> &'static str {
        match self {
            CellVariant::Sram6T => "sram",
            CellVariant::CamNor => "cam",
            CellVariant::LimSpecial => "and_sp",
            CellVariant::LimDynamic => "and_dyn",
            CellVariant::LimStatic => "and_st",
        }
    }
}

impl fmt::Display for CellVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CellVariant::Sram6T => "Sram6T",
            CellVariant::CamNor => "CamNor",
            CellVariant::LimDynamic => "LimDynamic",
            CellVariant::LimStatic => "LimStatic",
            CellVariant::LimSpecial => "LimSpecial",
        };
        f.write_str(name)
    }
}

impl FromStr for CellVariant {
    type Err = LimError;
    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, ' ' | '_' | '-'))
            .collect::<String>()
            .to_ascii_lowercase();
        Ok(match norm.as_str() {
            "sram" | "sram6t" => CellVariant::Sram6T,
            "cam" | "camnor" => CellVariant::CamNor,
            "andsp" | "limspecial" | "special" => CellVariant::LimSpecial,
            "anddyn" | "limdynamic" | "dynamic" => CellVariant::LimDynamic,
            "andst" | "limstatic" | "static" => CellVariant::LimStatic,
            _ => {
                return Err(LimError::Parse {
                    line: 0,
                    msg: format!("unknown cell variant '{s}'"),
                })
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperationKind {
    Write,
    Read,
    Search,
    And,
}

impl OperationKind {
    pub const ALL: [OperationKind; 4] = [
        OperationKind::Write,
        OperationKind::Read,
        OperationKind::Search,
        OperationKind::And,
    ];

    pub fn token(self) -> &'static str {
        match self {
            OperationKind::Write => "write",
            OperationKind::Read => "read",
            OperationKind::Search => "search",
            OperationKind::And => "and",
        }
    }
}

impl fmt::Display for OperationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            OperationKind::Write => "Write",
            OperationKind::Read => "Read",
            OperationKind::Search => "Search",
            OperationKind::And => "And",
        };
        f.write_str(name)
    }
}

impl FromStr for OperationKind {
    type Err = LimError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "write" | "w" => OperationKind::Write,
            "read" | "r" => OperationKind::Read,
            "search" | "s" => OperationKind::Search,
            "and" | "a" => OperationKind::And,
            _ => {
                return Err(LimError::Parse {
                    line: 0,
                    msg: format!("unknown operation '{s}'"),
                })
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArrayGeometry {
    pub rows: usize,
    pub cols: usize,
}

impl ArrayGeometry {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(LimError::InvalidWidth(format!(
                "geometry {rows}x{cols} must have at least one row and column"
            )));
        }
        Ok(ArrayGeometry { rows, cols })
    }

    pub fn square(size: usize) -> Result<Self> {
        Self::new(size, size)
    }

    pub fn is_block_aligned(&self) -> bool {
        self.rows.is_multiple_of(32) && self.cols.is_multiple_of(32)
    }

    pub fn cells(&self) -> usize {
        self.rows * self.cols
    }
}

impl fmt::Display for ArrayGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

/// Supply voltage and clock period of a simulated run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationParams {
    pub vdd: f64,
    pub t_clk_ns: f64,
}

impl SimulationParams {
    /// Clock used by the netlist generator when none is given.
    pub const DEFAULT_NETLIST_T_CLK_NS: f64 = 1.0;
    /// Clock used for the calibrated characterization runs.
    pub const CHARACTERIZATION_T_CLK_NS: f64 = 4.0;

    pub fn new(vdd: f64, t_clk_ns: f64) -> Result<Self> {
        if !(vdd > 0.0) || !vdd.is_finite() {
            return Err(LimError::Parse {
                line: 0,
                msg: format!("vdd must be positive, got {vdd}"),
            });
        }
        if !(t_clk_ns > 0.0) || !t_clk_ns.is_finite() {
            return Err(LimError::Parse {
                line: 0,
                msg: format!("t_clk must be positive, got {t_clk_ns}"),
            });
        }
        Ok(SimulationParams { vdd, t_clk_ns })
    }

    pub fn characterization() -> Self {
        SimulationParams {
            vdd: 1.0,
            t_clk_ns: Self::CHARACTERIZATION_T_CLK_NS,
        }
    }
}

impl Default for SimulationParams {
    fn default() -> Self {
        SimulationParams {
            vdd: 1.0,
            t_clk_ns: Self::DEFAULT_NETLIST_T_CLK_NS,
        }
    }
}
