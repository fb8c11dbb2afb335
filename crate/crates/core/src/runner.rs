//! Seeded Monte Carlo runs over `n` pairs.
//!
//! Every run draws from ChaCha20 (`rand_chacha`), keyed through
//! `SeedableRng::seed_from_u64`. Canonical runs use stream 0 sequentially.
//! Chunked runs split `n` into fixed-size chunks; chunk `k` uses the same key
//! on stream `k + 1`, so results depend on the chunk size but never on thread
//! scheduling.

use std::ops::{Add, AddAssign};

use rand_chacha::ChaCha20Rng;
use rand_core::SeedableRng;
use rayon::prelude::*;

use crate::angle::{DetectorSettings, SettingsQuad};
use crate::error::{Error, Result};
use crate::models::{sample_pair, ModelSpec, Outcome, PairResult};

/// Identity string recorded alongside every simulated record.
pub const PRNG_ID: &str = "chacha20/rand_chacha-0.9/seed_from_u64;u64>>11*2^-53";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Seed for the `index`-th run of a quad: `seed ⊕ index`.
    pub fn quad_member(self, index: u64) -> RngSeed {
        RngSeed(self.0 ^ index)
    }

    pub fn stream(self) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(self.0)
    }

    fn chunk_stream(self, chunk: u64) -> ChaCha20Rng {
        let mut rng = self.stream();
        rng.set_stream(chunk + 1);
        rng
    }
}

/// Tally of joint outcomes over a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Counts {
    pub n_pp: u64,
    pub n_pm: u64,
    pub n_mp: u64,
    pub n_mm: u64,
}

impl Counts {
    pub fn n(&self) -> u64 {
        self.n_pp + self.n_pm + self.n_mp + self.n_mm
    }

    /// Number of pairs whose product is `+1`.
    pub fn m(&self) -> u64 {
        self.n_pp + self.n_mm
    }

    pub fn record(&mut self, pair: PairResult) {
        match (pair.r_a, pair.r_b) {
            (Outcome::Plus, Outcome::Plus) => self.n_pp += 1,
            (Outcome::Plus, Outcome::Minus) => self.n_pm += 1,
            (Outcome::Minus, Outcome::Plus) => self.n_mp += 1,
            (Outcome::Minus, Outcome::Minus) => self.n_mm += 1,
        }
    }

    /// A tally with `m` positive products out of `n`, split as evenly as
    /// possible between the two cells of each sign. Panics if `m > n`.
    pub fn synthetic(n: u64, m: u64) -> Counts {
        assert!(m <= n, "m = {m} exceeds n = {n}");
        let minus = n - m;
        Counts {
            n_pp: m / 2,
            n_mm: m - m / 2,
            n_pm: minus / 2,
            n_mp: minus - minus / 2,
        }
    }
}

impl Add for Counts {
    type Output = Counts;

    fn add(self, rhs: Counts) -> Counts {
        Counts {
            n_pp: self.n_pp + rhs.n_pp,
            n_pm: self.n_pm + rhs.n_pm,
            n_mp: self.n_mp + rhs.n_mp,
            n_mm: self.n_mm + rhs.n_mm,
        }
    }
}

impl AddAssign for Counts {
    fn add_assign(&mut self, rhs: Counts) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for Counts {
    fn sum<I: Iterator<Item = Counts>>(iter: I) -> Counts {
        iter.fold(Counts::default(), Add::add)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecutionMode {
    /// One sequential stream. All pinned results use this mode.
    Canonical,
    /// Independent per-chunk streams, evaluated in parallel.
    Chunked { chunk_size: u64 },
}

/// Run description. `S` is [`DetectorSettings`] for a single run or
/// [`SettingsQuad`] for four.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig<S> {
    pub model: ModelSpec,
    pub settings: S,
    pub n: u64,
    pub seed: RngSeed,
    pub mode: ExecutionMode,
}

impl<S> RunConfig<S> {
    pub fn new(model: ModelSpec, settings: S, n: u64, seed: u64) -> Result<Self> {
        let config = RunConfig {
            model,
            settings,
            n,
            seed: RngSeed(seed),
            mode: ExecutionMode::Canonical,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn chunked(mut self, chunk_size: u64) -> Result<Self> {
        if chunk_size == 0 {
            return Err(Error::ZeroChunkSize);
        }
        self.mode = ExecutionMode::Chunked { chunk_size };
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::ZeroPairs);
        }
        if let ExecutionMode::Chunked { chunk_size: 0 } = self.mode {
            return Err(Error::ZeroChunkSize);
        }
        Ok(())
    }
}

/// Outcome tally of one run at one settings pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialBatch {
    pub settings: DetectorSettings,
    pub model: ModelSpec,
    pub seed: RngSeed,
    pub counts: Counts,
}

impl TrialBatch {
    pub fn n(&self) -> u64 {
        self.counts.n()
    }
}

fn tally(model: &ModelSpec, settings: &DetectorSettings, n: u64, rng: &mut ChaCha20Rng) -> Counts {
    let mut counts = Counts::default();
    for _ in 0..n {
        counts.record(sample_pair(model, settings, rng));
    }
    counts
}

pub fn run_experiment(config: &RunConfig<DetectorSettings>) -> Result<TrialBatch> {
    config.validate()?;
    let RunConfig { model, settings, n, seed, mode } = *config;
    let counts = match mode {
        ExecutionMode::Canonical => tally(&model, &settings, n, &mut seed.stream()),
        ExecutionMode::Chunked { chunk_size } => {
            let chunks = n.div_ceil(chunk_size);
            (0..chunks)
                .into_par_iter()
                .map(|k| {
                    let len = chunk_size.min(n - k * chunk_size);
                    tally(&model, &settings, len, &mut seed.chunk_stream(k))
                })
                .collect::<Vec<_>>()
                .into_iter()
                .sum()
        }
    };
    Ok(TrialBatch { settings, model, seed, counts })
}

/// Runs the four pairs of a quad, in [`SettingsQuad::pairs`] order, with
/// seeds `seed ⊕ 0 .. seed ⊕ 3`.
pub fn run_quad(config: &RunConfig<SettingsQuad>) -> Result<[TrialBatch; 4]> {
    config.validate()?;
    let pairs = config.settings.pairs();
    let mut out = Vec::with_capacity(4);
    for (i, settings) in pairs.into_iter().enumerate() {
        let single = RunConfig {
            model: config.model,
            settings,
            n: config.n,
            seed: config.seed.quad_member(i as u64),
            mode: config.mode,
        };
        out.push(run_experiment(&single)?);
    }
    Ok(out.try_into().expect("exactly four settings pairs"))
}
