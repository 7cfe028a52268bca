//! Builders for the three construction lemmas. Each builder returns its
//! polynomial, its exceptional-set complement and a [`Report`] produced by a
//! separate checker that only uses the `series` and `dyadic` primitives.
//!
//! [`Report`]: crate::check::Report

mod certificate;
mod one;
mod three;
mod two;

use serde::{Deserialize, Serialize};

use crate::series::PairLimits;

pub use certificate::{energy_floor, power_sum_certificate};
pub use one::{lemma1_build, lemma1_verify, Lemma1Limits, Lemma1Result};
pub use three::{lemma3_build, lemma3_verify, presplit, Lemma3Result};
pub use two::{lemma2_build, lemma2_verify, Lemma2Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Keeps the `M₀ = 2(N₁²+1)` gap and claims the spherical conditions.
    #[default]
    Strict,
    /// `M₀ = N₁+1`; spherical conditions are reported as not claimed.
    Rect,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "strict" => Ok(Mode::Strict),
            "rect" => Ok(Mode::Rect),
            other => Err(format!("unknown mode '{other}' (expected strict or rect)")),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Rect => "rect",
        })
    }
}

/// Limits shared by the two-dimensional builders.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub mode: Mode,
    /// Every frequency on either axis must be `< fmax`.
    pub fmax: u64,
    pub retries: u32,
    pub refine_iters: usize,
    pub seed: u64,
    /// Cap on the number of pieces after pre-splitting in Lemma 3.
    pub max_pieces: usize,
    pub pairs: PairLimits,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            mode: Mode::Strict,
            fmax: 1 << 10,
            retries: 2,
            refine_iters: 150,
            seed: 0,
            max_pieces: 4096,
            pairs: PairLimits::default(),
        }
    }
}

impl Limits {
    pub(crate) fn lemma1(&self, fmax: u64, seed: u64) -> Lemma1Limits {
        Lemma1Limits { fmax, retries: self.retries, refine_iters: self.refine_iters, seed }
    }
}

/// Deterministic seed for a sub-construction (splitmix64 over the path).
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    let mut z = seed;
    for &p in path {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(p.wrapping_mul(0xD1B5_4A32_D192_ED03));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

/// Largest rank `p` with `2^p ≤ fmax`, i.e. all rank-`p` frequencies are `< fmax`.
pub(crate) fn max_rank_for(fmax: u64) -> u32 {
    63 - fmax.max(1).leading_zeros()
}
