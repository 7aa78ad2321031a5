//! Deterministic random streams.
//!
//! Every random quantity in an episode is drawn from its own stream, keyed by
//! `(seed, round, lane)`:
//!
//! ```text
//! key   = mix64(mix64(seed ^ ROUND_SALT * (round + 1)) ^ LANE_SALT * (lane + 1))
//! state = key
//! next  = { state += GOLDEN; mix64(state) }          // SplitMix64
//! f64   = (next >> 11) * 2^-53
//! ```
//!
//! All arithmetic is wrapping on `u64`. `mix64` is the SplitMix64 finalizer.
//! Because each lane is keyed independently, adding a new random quantity
//! (a new lane) never shifts the draws of existing ones.

use rand::rand_core::impls;
use rand::RngCore;

pub const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const ROUND_SALT: u64 = 0xD134_2543_DE82_EF95;
const LANE_SALT: u64 = 0xA076_1D64_78BD_642F;
const REPLICATION_SALT: u64 = 0xE703_7ED1_A0B4_28DB;
const POINT_SALT: u64 = 0x8EBC_6AF0_9C88_C6E3;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent draw sites within one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Lane {
    InvestorOutcome = 0,
    InvestorImpulse = 1,
    InvestorRecall = 2,
    ManagerCost = 3,
    ManagerOutcome = 4,
    ManagerImpulse = 5,
    ManagerRecall = 6,
}

/// A SplitMix64 stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stream {
    state: u64,
}

impl Stream {
    pub fn from_key(key: u64) -> Self {
        Self { state: key }
    }

    /// The stream for one lane of one round of an episode.
    pub fn for_round(seed: u64, round: u64, lane: Lane) -> Self {
        let round_key = mix64(seed ^ ROUND_SALT.wrapping_mul(round.wrapping_add(1)));
        let lane_key = mix64(round_key ^ LANE_SALT.wrapping_mul(lane as u64 + 1));
        Self::from_key(lane_key)
    }
}

impl RngCore for Stream {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        impls::fill_bytes_via_next(self, dst)
    }
}

/// Seed of replication `index` under `base_seed`.
pub fn replication_seed(base_seed: u64, index: u64) -> u64 {
    mix64(base_seed ^ REPLICATION_SALT.wrapping_mul(index.wrapping_add(1)))
}

/// Seed of a sweep point, keyed by the grid value rather than its position so
/// that reordering a grid leaves each point's result unchanged.
pub fn point_seed(base_seed: u64, value: f64) -> u64 {
    // -0.0 and 0.0 are the same grid point
    let bits = if value == 0.0 { 0 } else { value.to_bits() };
    mix64(base_seed ^ mix64(bits ^ POINT_SALT))
}
