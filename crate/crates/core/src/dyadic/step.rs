use serde::{Deserialize, Serialize};

use super::grid::{DyadicGrid1D, DyadicGrid2D};
use super::rational::Dyadic;
use crate::{Error, Real, Result};

/// Dyadic interval `[index/2^rank, (index+1)/2^rank]` (0-based index; the
/// conventional 1-based `Δ_m^{(i)}` is `DyadicInterval { rank: m, index: i-1 }`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicInterval {
    pub rank: u32,
    pub index: u64,
}

impl DyadicInterval {
    pub fn new(rank: u32, index: u64) -> Result<Self> {
        if rank >= 63 || index >> rank != 0 {
            return Err(Error::Shape(format!("interval index {index} out of range for rank {rank}")));
        }
        Ok(DyadicInterval { rank, index })
    }

    pub const UNIT: DyadicInterval = DyadicInterval { rank: 0, index: 0 };

    pub fn length(&self) -> Dyadic {
        Dyadic::new(1, self.rank)
    }

    /// Cell range covered at a finer rank.
    pub fn cells_at(&self, rank: u32) -> std::ops::Range<usize> {
        debug_assert!(rank >= self.rank);
        let shift = rank - self.rank;
        let start = (self.index as usize) << shift;
        start..start + (1usize << shift)
    }

    pub fn contains(&self, other: &DyadicInterval) -> bool {
        other.rank >= self.rank && other.index >> (other.rank - self.rank) == self.index
    }

    pub fn overlaps(&self, other: &DyadicInterval) -> bool {
        self.contains(other) || other.contains(self)
    }

    pub fn halves(&self) -> (DyadicInterval, DyadicInterval) {
        let r = self.rank + 1;
        (
            DyadicInterval { rank: r, index: 2 * self.index },
            DyadicInterval { rank: r, index: 2 * self.index + 1 },
        )
    }
}

/// Dyadic rectangle `Δ₁ × Δ₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicRect {
    pub x: DyadicInterval,
    pub y: DyadicInterval,
}

impl DyadicRect {
    pub fn new(x: DyadicInterval, y: DyadicInterval) -> Self {
        DyadicRect { x, y }
    }

    pub fn area(&self) -> Dyadic {
        self.x.length() * self.y.length()
    }

    pub fn overlaps(&self, other: &DyadicRect) -> bool {
        self.x.overlaps(&other.x) && self.y.overlaps(&other.y)
    }

    /// Bisects along the coarser axis (x on ties).
    pub fn bisect(&self) -> (DyadicRect, DyadicRect) {
        if self.x.rank <= self.y.rank {
            let (a, b) = self.x.halves();
            (DyadicRect::new(a, self.y), DyadicRect::new(b, self.y))
        } else {
            let (a, b) = self.y.halves();
            (DyadicRect::new(self.x, a), DyadicRect::new(self.x, b))
        }
    }
}

/// `Σ γ_s χ_{Δ_s}` on `[0,1]` with disjoint dyadic intervals and exact values.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StepFunction1D {
    pieces: Vec<(DyadicInterval, Dyadic)>,
}

impl StepFunction1D {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(pieces: Vec<(DyadicInterval, Dyadic)>) -> Result<Self> {
        for (a, (ia, _)) in pieces.iter().enumerate() {
            for (ib, _) in &pieces[a + 1..] {
                if ia.overlaps(ib) {
                    return Err(Error::Shape(format!("overlapping pieces {ia:?} and {ib:?}")));
                }
            }
        }
        let pieces = pieces.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(StepFunction1D { pieces })
    }

    /// `γ·χ_Δ`.
    pub fn indicator(interval: DyadicInterval, value: Dyadic) -> Self {
        StepFunction1D::new(vec![(interval, value)]).expect("single piece")
    }

    pub fn pieces(&self) -> &[(DyadicInterval, Dyadic)] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn max_rank(&self) -> u32 {
        self.pieces.iter().map(|(i, _)| i.rank).max().unwrap_or(0)
    }

    pub fn rasterize<T: Real>(&self, rank: u32) -> Result<DyadicGrid1D<T>> {
        if rank < self.max_rank() {
            return Err(Error::Resolution { needed: self.max_rank(), have: rank });
        }
        let mut g = DyadicGrid1D::zeros(rank);
        for (iv, v) in &self.pieces {
            let val = v.to_real::<T>();
            for c in iv.cells_at(rank) {
                g.values_mut()[c] = val;
            }
        }
        Ok(g)
    }
}

/// `Σ γ_ν χ_{Δ_ν}` on `[0,1]^2` with pairwise disjoint dyadic rectangles.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StepFunction2D {
    pieces: Vec<(DyadicRect, Dyadic)>,
}

impl StepFunction2D {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(pieces: Vec<(DyadicRect, Dyadic)>) -> Result<Self> {
        for (a, (ra, _)) in pieces.iter().enumerate() {
            for (rb, _) in &pieces[a + 1..] {
                if ra.overlaps(rb) {
                    return Err(Error::Shape(format!("overlapping pieces {ra:?} and {rb:?}")));
                }
            }
        }
        let pieces = pieces.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(StepFunction2D { pieces })
    }

    pub fn indicator(rect: DyadicRect, value: Dyadic) -> Self {
        StepFunction2D::new(vec![(rect, value)]).expect("single piece")
    }

    pub fn pieces(&self) -> &[(DyadicRect, Dyadic)] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn max_ranks(&self) -> (u32, u32) {
        self.pieces
            .iter()
            .fold((0, 0), |(a, b), (r, _)| (a.max(r.x.rank), b.max(r.y.rank)))
    }

    /// `Σ |γ_ν|·|Δ_ν|`, exact.
    pub fn l1_exact(&self) -> Dyadic {
        self.pieces.iter().fold(Dyadic::ZERO, |acc, (r, v)| acc + v.abs() * r.area())
    }

    /// `∫∫ f²`, exact.
    pub fn l2_squared_exact(&self) -> Dyadic {
        self.pieces.iter().fold(Dyadic::ZERO, |acc, (r, v)| acc + *v * *v * r.area())
    }

    pub fn sup_exact(&self) -> Dyadic {
        self.pieces.iter().map(|(_, v)| v.abs()).max().unwrap_or(Dyadic::ZERO)
    }

    /// Exact cellwise evaluation; cells outside every piece are zero.
    pub fn rasterize<T: Real>(&self, ranks: (u32, u32)) -> Result<DyadicGrid2D<T>> {
        let need = self.max_ranks();
        if ranks.0 < need.0 || ranks.1 < need.1 {
            return Err(Error::Resolution { needed: need.0.max(need.1), have: ranks.0.min(ranks.1) });
        }
        let mut g = DyadicGrid2D::zeros(ranks);
        let ny = 1usize << ranks.1;
        for (rect, v) in &self.pieces {
            let val = v.to_real::<T>();
            for i in rect.x.cells_at(ranks.0) {
                for j in rect.y.cells_at(ranks.1) {
                    g.values_mut()[i * ny + j] = val;
                }
            }
        }
        Ok(g)
    }
}
