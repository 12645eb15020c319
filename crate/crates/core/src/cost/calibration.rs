use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{LimError, Result};
use crate::types::{CellVariant, OperationKind};

/// Seed calibration shipped with the crate (256x256 arrays).
pub const SEED_CALIBRATION: &str = include_str!("../../data/calibration_256.txt");

pub const SEED_SIZE: usize = 256;

/// Extrapolates an energy-delay product from a calibrated point to another
/// array size. Installed hooks must be non-decreasing in size.
pub trait ScalingHook: Send + Sync {
    fn scale(
        &self,
        variant: CellVariant,
        op: OperationKind,
        reference_size: usize,
        reference_edp: f64,
        size: usize,
    ) -> f64;
}

/// `edp(size) = edp(ref) * (size / ref)^exponent`.
#[derive(Debug, Clone, Copy)]
pub struct PowerLawScaling {
    pub exponent: f64,
}

impl ScalingHook for PowerLawScaling {
    fn scale(&self, _: CellVariant, _: OperationKind, reference_size: usize, reference_edp: f64, size: usize) -> f64 {
        reference_edp * (size as f64 / reference_size as f64).powf(self.exponent)
    }
}

/// Sizes probed when checking an installed hook for monotonicity.
const HOOK_PROBE_SIZES: std::ops::RangeInclusive<usize> = 1..=64;
const HOOK_PROBE_STEP: usize = 32;

/// (memory, operation, size) → energy-delay product in pJ·ps.
pub struct CalibrationTable {
    entries: BTreeMap<(CellVariant, OperationKind, usize), f64>,
    hook: Option<Box<dyn ScalingHook>>,
}

impl std::fmt::Debug for CalibrationTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CalibrationTable")
            .field("entries", &self.entries)
            .field("hook", &self.hook.is_some())
            .finish()
    }
}

impl CalibrationTable {
    pub fn empty() -> Self {
        CalibrationTable {
            entries: BTreeMap::new(),
            hook: None,
        }
    }

    pub fn seed() -> Self {
        Self::parse(SEED_CALIBRATION).expect("seed calibration is well formed")
    }

    /// Parses `memory,op,size,edp_pj_ps` records. Blank lines, `#` comments
    /// and a leading `memory,...` header are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = Self::empty();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("memory,") {
                continue;
            }
            let err = |msg: String| LimError::Parse { line: line_no, msg };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(err(format!("expected 4 fields, found {}", fields.len())));
            }
            let variant: CellVariant = fields[0].parse().map_err(|e: LimError| err(e.to_string()))?;
            let op: OperationKind = fields[1].parse().map_err(|e: LimError| err(e.to_string()))?;
            let size: usize = fields[2]
                .parse()
                .map_err(|_| err(format!("invalid size '{}'", fields[2])))?;
            let edp: f64 = fields[3]
                .parse()
                .map_err(|_| err(format!("invalid edp '{}'", fields[3])))?;
            if table.entries.contains_key(&(variant, op, size)) {
                return Err(err(format!("duplicate entry {} {} {size}", variant.token(), op.token())));
            }
            table.insert(variant, op, size, edp)?;
        }
        Ok(table)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("memory,op,size,edp_pj_ps\n");
        for ((v, op, size), edp) in &self.entries {
            writeln!(out, "{},{},{},{}", v.token(), op.token(), size, edp).unwrap();
        }
        out
    }

    pub fn insert(&mut self, variant: CellVariant, op: OperationKind, size: usize, edp: f64) -> Result<()> {
        variant.check(op)?;
        if !(edp > 0.0) || !edp.is_finite() {
            return Err(LimError::NonPositiveEdp(edp));
        }
        self.entries.insert((variant, op, size), edp);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (CellVariant, OperationKind, usize, f64)> + '_ {
        self.entries.iter().map(|((v, o, s), e)| (*v, *o, *s, *e))
    }

    pub fn is_calibrated(&self, size: usize) -> bool {
        self.entries.keys().any(|(_, _, s)| *s == size)
    }

    fn nearest_calibrated(&self, variant: CellVariant, op: OperationKind, size: usize) -> Option<(usize, f64)> {
        self.entries
            .iter()
            .filter(|((v, o, _), _)| *v == variant && *o == op)
            .min_by_key(|((_, _, s), _)| s.abs_diff(size))
            .map(|((_, _, s), e)| (*s, *e))
    }

    /// Installs a scaling hook after checking it keeps every (memory, op)
    /// curve positive and non-decreasing in size.
    pub fn install_scaling_hook(&mut self, hook: Box<dyn ScalingHook>) -> Result<()> {
        let previous = self.hook.replace(hook);
        let mut keys: Vec<(CellVariant, OperationKind)> =
            self.entries.keys().map(|(v, o, _)| (*v, *o)).collect();
        keys.dedup();
        for (v, op) in keys {
            let mut last = 0.0f64;
            let mut sizes: Vec<usize> = HOOK_PROBE_SIZES.map(|k| k * HOOK_PROBE_STEP).collect();
            sizes.extend(self.entries.keys().filter(|(a, b, _)| *a == v && *b == op).map(|(_, _, s)| *s));
            sizes.sort_unstable();
            sizes.dedup();
            for size in sizes {
                let edp = self.edp_lookup(v, op, size)?;
                if !(edp > 0.0) || edp < last {
                    self.hook = previous;
                    return Err(LimError::NonMonotoneScaling {
                        variant: v,
                        op,
                        detail: format!("edp {edp} at size {size} after {last}"),
                    });
                }
                last = edp;
            }
        }
        Ok(())
    }

    pub fn clear_scaling_hook(&mut self) {
        self.hook = None;
    }

    pub fn edp_lookup(&self, variant: CellVariant, op: OperationKind, size: usize) -> Result<f64> {
        variant.check(op)?;
        if let Some(edp) = self.entries.get(&(variant, op, size)) {
            return Ok(*edp);
        }
        match (&self.hook, self.nearest_calibrated(variant, op, size)) {
            (Some(hook), Some((ref_size, ref_edp))) => Ok(hook.scale(variant, op, ref_size, ref_edp, size)),
            _ => Err(LimError::UncalibratedPoint { variant, op, size }),
        }
    }
}

impl Default for CalibrationTable {
    fn default() -> Self {
        Self::seed()
    }
}

pub fn edp_lookup(table: &CalibrationTable, variant: CellVariant, op: OperationKind, size: usize) -> Result<f64> {
    table.edp_lookup(variant, op, size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use CellVariant::*;
    use OperationKind::*;

    #[test]
    fn lookup_examples() {
        let t = CalibrationTable::seed();
        assert_eq!(t.edp_lookup(Sram6T, Read, 256), Ok(118.0));
        assert_eq!(t.edp_lookup(LimStatic, And, 256), Ok(76.0));
        assert!(matches!(t.edp_lookup(CamNor, And, 256), Err(LimError::UnsupportedOperation { .. })));
        assert!(matches!(t.edp_lookup(Sram6T, Search, 256), Err(LimError::UnsupportedOperation { .. })));
        assert!(matches!(t.edp_lookup(Sram6T, Read, 128), Err(LimError::UncalibratedPoint { .. })));
        assert_eq!(t.len(), 17);
    }

    #[test]
    fn text_round_trip() {
        let t = CalibrationTable::seed();
        let again = CalibrationTable::parse(&t.to_text()).unwrap();
        assert_eq!(t.entries().collect::<Vec<_>>(), again.entries().collect::<Vec<_>>());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = CalibrationTable::parse("# c\nsram,read,256\n").unwrap_err();
        assert!(matches!(e, LimError::Parse { line: 2, .. }));
        let e = CalibrationTable::parse("sram,read,256,-3\n").unwrap_err();
        assert_eq!(e, LimError::NonPositiveEdp(-3.0));
        let e = CalibrationTable::parse("cam,and,256,3\n").unwrap_err();
        assert!(matches!(e, LimError::UnsupportedOperation { .. }));
        let e = CalibrationTable::parse("sram,read,256,3\nsram,read,256,4\n").unwrap_err();
        assert!(matches!(e, LimError::Parse { line: 2, .. }));
        assert!(CalibrationTable::parse("flash,read,256,3").is_err());
    }

    #[test]
    fn scaling_hook_fills_uncalibrated_sizes() {
        let mut t = CalibrationTable::seed();
        t.install_scaling_hook(Box::new(PowerLawScaling { exponent: 1.5 })).unwrap();
        let at_128 = t.edp_lookup(Sram6T, Read, 128).unwrap();
        assert!((at_128 - 118.0 * 0.5f64.powf(1.5)).abs() < 1e-9);
        // calibrated points stay exact
        assert_eq!(t.edp_lookup(Sram6T, Read, 256), Ok(118.0));
        t.clear_scaling_hook();
        assert!(t.edp_lookup(Sram6T, Read, 128).is_err());
    }

    #[test]
    fn decreasing_hook_is_rejected() {
        let mut t = CalibrationTable::seed();
        let e = t.install_scaling_hook(Box::new(PowerLawScaling { exponent: -1.0 })).unwrap_err();
        assert!(matches!(e, LimError::NonMonotoneScaling { .. }));
        assert!(t.edp_lookup(Sram6T, Read, 128).is_err(), "rejected hook must not stay installed");
    }
}
