use std::collections::BTreeMap;

use crate::dyadic::walsh::resolving_rank;
use crate::{Error, Real, Result};

/// Sparse one-dimensional Walsh polynomial `Σ c_k W_k`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WalshSeries1D<T> {
    coeffs: BTreeMap<u64, T>,
}

impl<T: Real> WalshSeries1D<T> {
    pub fn new() -> Self {
        WalshSeries1D { coeffs: BTreeMap::new() }
    }

    /// Keeps only coefficients with `|c| > drop_below`.
    pub fn from_dense(offset: u64, values: &[T], drop_below: T) -> Self {
        let coeffs = values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.abs() > drop_below)
            .map(|(j, &v)| (offset + j as u64, v))
            .collect();
        WalshSeries1D { coeffs }
    }

    pub fn insert(&mut self, k: u64, c: T) {
        if c == T::zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    pub fn get(&self, k: u64) -> T {
        self.coeffs.get(&k).copied().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, T)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_freq(&self) -> Option<u64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_freq(&self) -> Option<u64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Smallest grid rank that resolves every frequency.
    pub fn resolving_rank(&self) -> u32 {
        self.max_freq().map(resolving_rank).unwrap_or(0)
    }

    pub fn power_norm(&self, exponent: T) -> T {
        self.coeffs.values().fold(T::zero(), |acc, c| acc + c.abs().powf(exponent))
    }

    pub fn energy(&self) -> T {
        self.coeffs.values().fold(T::zero(), |acc, &c| acc + c * c)
    }
}

/// Sparse double Walsh series `Σ c_{k,ν} W_k(x)W_ν(y)` with block boundaries
/// `1 = N_0 < N_1 < … < N_S`; block `s` owns the square `[N_{s-1}, N_s)²`.
#[derive(Clone, Debug, PartialEq)]
pub struct WalshSeries2D<T> {
    coeffs: BTreeMap<(u64, u64), T>,
    blocks: Vec<u64>,
}

impl<T: Real> Default for WalshSeries2D<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> WalshSeries2D<T> {
    pub fn new() -> Self {
        WalshSeries2D { coeffs: BTreeMap::new(), blocks: vec![1] }
    }

    /// Series without block structure (a single polynomial).
    pub fn from_coeffs(coeffs: impl IntoIterator<Item = ((u64, u64), T)>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| *c != T::zero()).collect();
        WalshSeries2D { coeffs, blocks: vec![1] }
    }

    pub fn insert(&mut self, k: u64, nu: u64, c: T) {
        if c == T::zero() {
            self.coeffs.remove(&(k, nu));
        } else {
            self.coeffs.insert((k, nu), c);
        }
    }

    pub fn get(&self, k: u64, nu: u64) -> T {
        self.coeffs.get(&(k, nu)).copied().unwrap_or_else(T::zero)
    }

    /// Nonzero coefficients sorted by `(k, ν)`.
    pub fn iter(&self) -> impl Iterator<Item = ((u64, u64), T)> + '_ {
        self.coeffs.iter().map(|(&kv, &c)| (kv, c))
    }

    pub fn coeff_vec(&self) -> Vec<((u64, u64), T)> {
        self.iter().collect()
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn depth(&self) -> usize {
        self.blocks.len() - 1
    }

    /// Appends the block `[N_{S}, end)` and its coefficients, which must lie
    /// inside the new diagonal square.
    pub fn push_block(&mut self, end: u64, coeffs: impl IntoIterator<Item = ((u64, u64), T)>) -> Result<()> {
        let start = *self.blocks.last().unwrap();
        if end <= start {
            return Err(Error::InvalidParameter(format!("block end {end} must exceed {start}")));
        }
        let mut staged = Vec::new();
        for ((k, nu), c) in coeffs {
            if !(start..end).contains(&k) || !(start..end).contains(&nu) {
                return Err(Error::InvalidParameter(format!(
                    "coefficient ({k}, {nu}) outside block square [{start}, {end})²"
                )));
            }
            staged.push(((k, nu), c));
        }
        for ((k, nu), c) in staged {
            self.insert(k, nu, c);
        }
        self.blocks.push(end);
        Ok(())
    }

    /// Half-open frequency range `[N_{s-1}, N_s)` of block `s` (1-based).
    pub fn block_range(&self, s: usize) -> std::ops::Range<u64> {
        self.blocks[s - 1]..self.blocks[s]
    }

    /// Coefficients of block `s` (1-based), sorted by `(k, ν)`.
    pub fn block_coeffs(&self, s: usize) -> Vec<((u64, u64), T)> {
        let r = self.block_range(s);
        self.coeffs
            .range((r.start, r.start)..(r.end, 0))
            .filter(|((_, nu), _)| r.contains(nu))
            .map(|(&kv, &c)| (kv, c))
            .collect()
    }

    /// Every nonzero coefficient lies in a diagonal block square.
    pub fn is_block_diagonal(&self) -> bool {
        self.coeffs.keys().all(|&(k, nu)| {
            let s = self.blocks.partition_point(|&b| b <= k);
            s >= 1 && s < self.blocks.len() && self.block_range(s).contains(&nu)
        })
    }

    pub fn max_freqs(&self) -> (u64, u64) {
        max_freqs(self.coeffs.keys().copied())
    }

    pub fn resolving_ranks(&self) -> (u32, u32) {
        let (a, b) = self.max_freqs();
        (resolving_rank(a), resolving_rank(b))
    }

    pub fn with_blocks(coeffs: Vec<((u64, u64), T)>, blocks: Vec<u64>) -> Result<Self> {
        if blocks.is_empty() || blocks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("block boundaries must increase".into()));
        }
        let s = WalshSeries2D { coeffs: coeffs.into_iter().filter(|(_, c)| *c != T::zero()).collect(), blocks };
        if !s.is_block_diagonal() {
            return Err(Error::InvalidParameter("coefficient outside diagonal blocks".into()));
        }
        Ok(s)
    }
}

pub fn max_freqs(keys: impl Iterator<Item = (u64, u64)>) -> (u64, u64) {
    keys.fold((0, 0), |(a, b), (k, nu)| (a.max(k), b.max(nu)))
}

/// `Σ |c|^exponent` over a coefficient set.
pub fn coeff_power_norm<T: Real>(coeffs: &[((u64, u64), T)], exponent: T) -> Result<T> {
    if exponent <= T::zero() {
        return Err(Error::InvalidParameter("power-norm exponent must be positive".into()));
    }
    Ok(coeffs.iter().fold(T::zero(), |acc, (_, c)| acc + c.abs().powf(exponent)))
}
