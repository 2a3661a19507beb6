//! Counter-based random streams.
//!
//! Every random quantity is drawn from its own ChaCha stream whose seed is a
//! hash of the master seed, a draw domain and the stable ids the draw belongs
//! to. Adding a user or growing a panel therefore never shifts anybody
//! else's draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a stream is used for. The discriminant is part of the key, so the
/// values must never be reordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    UserPlacement = 1,
    Shadow = 2,
    DirectFading = 3,
    RisNlos = 4,
    LosPhase = 5,
    InitAssociation = 6,
    InitPhase = 7,
    RandomAssociation = 8,
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds `(seed, domain, ids...)` into one 64-bit stream key.
pub fn stream_key(seed: u64, domain: Domain, ids: &[u64]) -> u64 {
    let mut h = splitmix64(seed ^ GOLDEN);
    h = splitmix64(h ^ domain as u64);
    for &id in ids {
        h = splitmix64(h ^ id);
    }
    h
}

/// A fresh generator for the given key.
pub fn stream(seed: u64, domain: Domain, ids: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_key(seed, domain, ids))
}

/// One uniform draw on `[0, 1)` for the given key.
pub fn uniform(seed: u64, domain: Domain, ids: &[u64]) -> f64 {
    use rand::Rng;
    stream(seed, domain, ids).random::<f64>()
}

/// Picks an index in `0..len` for the given key; `len` must be positive.
pub fn pick(seed: u64, domain: Domain, ids: &[u64], len: usize) -> usize {
    debug_assert!(len > 0);
    ((uniform(seed, domain, ids) * len as f64) as usize).min(len - 1)
}
