//! SplitMix64, the portable generator behind every seeded run.
//!
//! Random words consume `ceil(width / 64)` outputs; output `k` supplies bits
//! `64k .. 64k+63` MSB first, and bits beyond `width` are dropped.

use crate::types::{limbs_for, Word};

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform integer in `lo..=hi` (Lemire-free modulo; bias is irrelevant here).
    pub fn range_inclusive(&mut self, lo: usize, hi: usize) -> usize {
        assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + (self.next_u64() % span) as usize
    }

    pub fn word(&mut self, width: usize) -> Word {
        let limbs = (0..limbs_for(width)).map(|_| self.next_u64()).collect();
        Word::from_limbs(width, limbs)
    }
}
