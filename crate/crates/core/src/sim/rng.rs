//! Random streams for the simulation.
//!
//! Every repetition owns four independent ChaCha8 streams. All streams share
//! the 256-bit key expanded from the run seed by `ChaCha8Rng::seed_from_u64`;
//! they differ only in the 64-bit ChaCha stream id, which is
//! `rep * 4 + purpose` with purpose 0 = IC series, 1 = volatilities,
//! 2 = signal panel, 3 = return noise. Draws from a stream never depend on
//! how many other repetitions exist or which worker runs them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamPurpose {
    Ic = 0,
    Vols = 1,
    Signals = 2,
    Noise = 3,
}

pub fn rep_stream(seed: u64, rep: u64, purpose: StreamPurpose) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep * 4 + purpose as u64);
    rng
}

/// The four streams of one repetition.
pub struct RepStreams {
    pub ic: ChaCha8Rng,
    pub vols: ChaCha8Rng,
    pub signals: ChaCha8Rng,
    pub noise: ChaCha8Rng,
}

impl RepStreams {
    pub fn new(seed: u64, rep: u64) -> Self {
        Self {
            ic: rep_stream(seed, rep, StreamPurpose::Ic),
            vols: rep_stream(seed, rep, StreamPurpose::Vols),
            signals: rep_stream(seed, rep, StreamPurpose::Signals),
            noise: rep_stream(seed, rep, StreamPurpose::Noise),
        }
    }
}
