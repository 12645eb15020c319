//! Published relative variations at 256x256, as printed (text preserved so
//! the audit knows each value's printed precision).

use super::tables::ComparisonKind;
use crate::types::CellVariant;
use crate::types::CellVariant::{
    CamNor as CAM, LimDynamic as DYN, LimSpecial as SP, LimStatic as ST, Sram6T as SRAM,
};

pub const REFERENCE_SIZE: usize = 256;

pub struct ReferenceCell {
    pub kind: ComparisonKind,
    pub row: CellVariant,
    pub col: CellVariant,
    pub printed: &'static str,
}

const fn c(kind: ComparisonKind, row: CellVariant, col: CellVariant, printed: &'static str) -> ReferenceCell {
    ReferenceCell { kind, row, col, printed }
}

use ComparisonKind as K;

pub const REFERENCE_CELLS: &[ReferenceCell] = &[
    c(K::Read, CAM, SRAM, "+94.91"),
    c(K::Read, SP, SRAM, "+120.34"),
    c(K::Read, SP, CAM, "+13.04"),
    c(K::Read, DYN, SRAM, "+282.2"),
    c(K::Read, DYN, CAM, "+96.08"),
    c(K::Read, DYN, SP, "+73.46"),
    c(K::Read, ST, SRAM, "+443.22"),
    c(K::Read, ST, CAM, "+178.69"),
    c(K::Read, ST, SP, "+146.54"),
    c(K::Read, ST, DYN, "+42.13"),
    c(K::Write, CAM, SRAM, "+105"),
    c(K::Write, SP, SRAM, "+130.6"),
    c(K::Write, SP, CAM, "+12.36"),
    c(K::Write, DYN, SRAM, "+344.78"),
    c(K::Write, DYN, CAM, "+116.72"),
    c(K::Write, DYN, SP, "+92.88"),
    c(K::Write, ST, SRAM, "+617"),
    c(K::Write, ST, CAM, "249.45"),
    c(K::Write, ST, SP, "+211"),
    c(K::Write, ST, DYN, "+61.24"),
    c(K::Search, SP, CAM, "+203.81"),
    c(K::Search, DYN, CAM, "+388.13"),
    c(K::Search, DYN, SP, "+60.67"),
    c(K::Search, ST, CAM, "+154.66"),
    c(K::Search, ST, SP, "-19.30"),
    c(K::Search, ST, DYN, "-91.68"),
    c(K::And, DYN, SP, "+1948.98"),
    c(K::And, ST, SP, "-28.95"),
    c(K::And, ST, DYN, "-2542.1"),
    c(K::WriteVsRead, SRAM, SRAM, "+13.56"),
    c(K::WriteVsRead, CAM, CAM, "+19.56"),
    c(K::WriteVsRead, SP, SP, "+18.85"),
    c(K::WriteVsRead, ST, ST, "+49.92"),
    c(K::WriteVsRead, DYN, DYN, "+32.15"),
    c(K::SearchVsWrite, CAM, SRAM, "+76.12"),
    c(K::SearchVsWrite, CAM, CAM, "-16.52"),
    c(K::SearchVsWrite, SP, SRAM, "+435.07"),
    c(K::SearchVsWrite, SP, CAM, "+160.72"),
    c(K::SearchVsWrite, SP, SP, "+132.04"),
    c(K::SearchVsWrite, DYN, SRAM, "+759.7"),
    c(K::SearchVsWrite, DYN, CAM, "+318.91"),
    c(K::SearchVsWrite, DYN, SP, "+272.81"),
    c(K::SearchVsWrite, DYN, DYN, "+93.29"),
    c(K::SearchVsWrite, ST, SRAM, "+348.51"),
    c(K::SearchVsWrite, ST, CAM, "+118.54"),
    c(K::SearchVsWrite, ST, SP, "+94.5"),
    c(K::SearchVsWrite, ST, DYN, "-91.68"),
    c(K::SearchVsWrite, ST, ST, "-59.9"),
    c(K::SearchVsRead, CAM, SRAM, "+100"),
    c(K::SearchVsRead, CAM, CAM, "+2.61"),
    c(K::SearchVsRead, SP, SRAM, "+507.63"),
    c(K::SearchVsRead, SP, CAM, "+211.74"),
    c(K::SearchVsRead, SP, SP, "+175.77"),
    c(K::SearchVsRead, DYN, SRAM, "+876.27"),
    c(K::SearchVsRead, DYN, CAM, "+400.86"),
    c(K::SearchVsRead, DYN, SP, "+343.08"),
    c(K::SearchVsRead, DYN, DYN, "+115.43"),
    c(K::SearchVsRead, ST, SRAM, "+409.32"),
    c(K::SearchVsRead, ST, CAM, "+161.3"),
    c(K::SearchVsRead, ST, SP, "+131.15"),
    c(K::SearchVsRead, ST, DYN, "+33.26"),
    c(K::SearchVsRead, ST, ST, "-6.65"),
    c(K::AndVsSearch, SP, CAM, "-140.81"),
    c(K::AndVsSearch, SP, SP, "-631.63"),
    c(K::AndVsSearch, DYN, CAM, "+750.85"),
    c(K::AndVsSearch, DYN, SP, "+180.05"),
    c(K::AndVsSearch, DYN, DYN, "+74.3"),
    c(K::AndVsSearch, ST, CAM, "-210.52"),
    c(K::AndVsSearch, ST, SP, "-843.42"),
    c(K::AndVsSearch, ST, DYN, "-1415.79"),
    c(K::AndVsSearch, ST, ST, "-690.79"),
    c(K::AndVsWrite, SP, SRAM, "-36.7"),
    c(K::AndVsWrite, SP, CAM, "-180.61"),
    c(K::AndVsWrite, SP, SP, "-215"),
    c(K::AndVsWrite, DYN, SRAM, "+1398"),
    c(K::AndVsWrite, DYN, CAM, "+630.2"),
    c(K::AndVsWrite, DYN, SP, "+549.84"),
    c(K::AndVsWrite, DYN, DYN, "+236.91"),
    c(K::AndVsWrite, ST, SRAM, "-76.31"),
    c(K::AndVsWrite, ST, CAM, "-261.84"),
    c(K::AndVsWrite, ST, SP, "-306.57"),
    c(K::AndVsWrite, ST, DYN, "-684.21"),
    c(K::AndVsWrite, ST, ST, "-1164"),
    c(K::AndVsRead, SP, SRAM, "-20.41"),
    c(K::AndVsRead, SP, CAM, "-134.69"),
    c(K::AndVsRead, SP, SP, "-165.31"),
    c(K::AndVsRead, DYN, SRAM, "+1601.7"),
    c(K::AndVsRead, DYN, CAM, "+773.04"),
    c(K::AndVsRead, DYN, SP, "+672.31"),
    c(K::AndVsRead, DYN, DYN, "+345.23"),
    c(K::AndVsRead, ST, SRAM, "-55.26"),
    c(K::AndVsRead, ST, CAM, "-202.63"),
    c(K::AndVsRead, ST, SP, "-242.1"),
    c(K::AndVsRead, ST, DYN, "-1164.47"),
    c(K::AndVsRead, ST, ST, "-743.2"),
];

/// Published energy-delay products at 256x256 (pJ·ps), in
/// (memory, write, read, search, and) order; `None` where an operation is
/// not available.
pub const REFERENCE_EDP: &[(CellVariant, [Option<f64>; 4])] = &[
    (SRAM, [Some(134.0), Some(118.0), None, None]),
    (CAM, [Some(275.0), Some(230.0), Some(236.0), None]),
    (SP, [Some(309.0), Some(260.0), Some(717.0), Some(98.0)]),
    (DYN, [Some(596.0), Some(451.0), Some(1152.0), Some(2008.0)]),
    (ST, [Some(961.0), Some(641.0), Some(601.0), Some(76.0)]),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_reference_cell_sits_in_the_layout() {
        for r in REFERENCE_CELLS {
            assert!(r.kind.has_cell(r.row, r.col), "{} {:?} {:?}", r.kind, r.row, r.col);
            assert!(r.printed.parse::<f64>().is_ok());
        }
        assert_eq!(REFERENCE_CELLS.len(), 95);
    }
}
