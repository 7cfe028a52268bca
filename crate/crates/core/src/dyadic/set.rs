use serde::{Deserialize, Serialize};

use super::grid::finest;
use crate::{Error, Result};

/// Union of rank-`rank` cells of `[0,1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicSet1D {
    rank: u32,
    mask: Vec<bool>,
}

impl DyadicSet1D {
    pub fn full(rank: u32) -> Self {
        DyadicSet1D { rank, mask: vec![true; 1usize << rank] }
    }

    pub fn from_mask(mask: Vec<bool>) -> Result<Self> {
        if !mask.len().is_power_of_two() {
            return Err(Error::Shape(format!("mask length {} is not a power of two", mask.len())));
        }
        Ok(DyadicSet1D { rank: mask.len().trailing_zeros(), mask })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask[i]
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn measure(&self) -> f64 {
        self.count() as f64 * (-(self.rank as f64)).exp2()
    }

    pub fn refine(&self, rank: u32) -> Result<Self> {
        if rank < self.rank {
            return Err(Error::RankMismatch(format!("cannot refine set rank {} to {rank}", self.rank)));
        }
        let shift = rank - self.rank;
        let mask = (0..1usize << rank).map(|i| self.mask[i >> shift]).collect();
        Ok(DyadicSet1D { rank, mask })
    }

    /// `self × other`.
    pub fn product(&self, other: &DyadicSet1D) -> DyadicSet2D {
        let mut mask = Vec::with_capacity(self.mask.len() * other.mask.len());
        for &a in &self.mask {
            mask.extend(other.mask.iter().map(|&b| a && b));
        }
        DyadicSet2D { ranks: (self.rank, other.rank), mask }
    }
}

/// Union of cells of a rank-`(p, q)` grid on `[0,1]^2`, same layout as
/// [`DyadicGrid2D`](super::DyadicGrid2D).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicSet2D {
    ranks: (u32, u32),
    mask: Vec<bool>,
}

impl DyadicSet2D {
    pub fn full(ranks: (u32, u32)) -> Self {
        DyadicSet2D { ranks, mask: vec![true; 1usize << (ranks.0 + ranks.1)] }
    }

    pub fn empty(ranks: (u32, u32)) -> Self {
        DyadicSet2D { ranks, mask: vec![false; 1usize << (ranks.0 + ranks.1)] }
    }

    pub fn from_mask(ranks: (u32, u32), mask: Vec<bool>) -> Result<Self> {
        if mask.len() != 1usize << (ranks.0 + ranks.1) {
            return Err(Error::Shape(format!("mask of {} cells for ranks {:?}", mask.len(), ranks)));
        }
        Ok(DyadicSet2D { ranks, mask })
    }

    pub fn ranks(&self) -> (u32, u32) {
        self.ranks
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.mask[(i << self.ranks.1) + j]
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// `(count of cells)·2^(-p-q)`; exact in binary floating point.
    pub fn measure(&self) -> f64 {
        self.count() as f64 * (-((self.ranks.0 + self.ranks.1) as f64)).exp2()
    }

    pub fn refine(&self, ranks: (u32, u32)) -> Result<Self> {
        if ranks == self.ranks {
            return Ok(self.clone());
        }
        if ranks.0 < self.ranks.0 || ranks.1 < self.ranks.1 {
            return Err(Error::RankMismatch(format!(
                "cannot refine set ranks {:?} to {:?}",
                self.ranks, ranks
            )));
        }
        let (sx, sy) = (ranks.0 - self.ranks.0, ranks.1 - self.ranks.1);
        let mut mask = Vec::with_capacity(1usize << (ranks.0 + ranks.1));
        for i in 0..1usize << ranks.0 {
            for j in 0..1usize << ranks.1 {
                mask.push(self.contains(i >> sx, j >> sy));
            }
        }
        Ok(DyadicSet2D { ranks, mask })
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let ranks = finest(self.ranks, other.ranks);
        let a = self.refine(ranks).expect("finest ranks refine");
        let b = other.refine(ranks).expect("finest ranks refine");
        let mask = a.mask.iter().zip(&b.mask).map(|(&x, &y)| op(x, y)).collect();
        DyadicSet2D { ranks, mask }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        DyadicSet2D { ranks: self.ranks, mask: self.mask.iter().map(|b| !b).collect() }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.difference(other).count() == 0
    }

    pub fn to_rle(&self) -> RleMask {
        RleMask::encode(self.ranks, &self.mask)
    }

    pub fn from_rle(rle: &RleMask) -> Result<Self> {
        let mask = rle.decode()?;
        DyadicSet2D::from_mask(rle.ranks, mask)
    }
}

/// Run-length encoding of a cell mask: alternating run lengths starting
/// with a run of `false` (possibly empty).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RleMask {
    pub ranks: (u32, u32),
    pub runs: Vec<u64>,
}

impl RleMask {
    pub fn encode(ranks: (u32, u32), mask: &[bool]) -> Self {
        let mut runs = Vec::new();
        let mut current = false;
        let mut len = 0u64;
        for &b in mask {
            if b == current {
                len += 1;
            } else {
                runs.push(len);
                current = b;
                len = 1;
            }
        }
        runs.push(len);
        RleMask { ranks, runs }
    }

    pub fn decode(&self) -> Result<Vec<bool>> {
        let total = 1u64 << (self.ranks.0 + self.ranks.1);
        let sum: u64 = self.runs.iter().sum();
        if sum != total {
            return Err(Error::Shape(format!("RLE runs cover {sum} cells, expected {total}")));
        }
        let mut mask = Vec::with_capacity(total as usize);
        let mut current = false;
        for &run in &self.runs {
            mask.extend(std::iter::repeat(current).take(run as usize));
            current = !current;
        }
        Ok(mask)
    }
}
