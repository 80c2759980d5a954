//! Exact compressive sensing over finite fields.
//!
//! A b-sparse vector over F_q is measured with a matrix whose lift to
//! F_{q^s} is a Reed–Solomon parity check, so recovery is syndrome decoding.

pub mod baseline;
pub mod experiments;
pub mod field;
pub mod format;
pub mod lifting;
pub mod matrix;
pub mod noisy;
pub mod rscode;
pub mod sensing;
pub mod tracking;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent generator for trial `id` under a master seed.
pub fn trial_rng(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}
