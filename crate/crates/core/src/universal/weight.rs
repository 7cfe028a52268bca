//! The layered weight `μ`, truncated at the built depth.

use serde::{Deserialize, Serialize};

use super::build::BlockRecord;
use crate::check::{Check, Report};
use crate::dyadic::{finest, DyadicGrid2D, DyadicSet2D};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightLevel {
    pub n: usize,
    pub mu: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightFunction {
    pub eps: f64,
    pub n0: usize,
    /// `h_1, …, h_S`.
    pub heights: Vec<f64>,
    /// `Ω_{n₀}, Ω_{n₀+1}, …, Ω_S`, increasing.
    pub omegas: Vec<DyadicSet2D>,
    /// `μ_n` for `n = n₀+1, …, S`.
    pub levels: Vec<WeightLevel>,
}

/// `[log_{1/2} ε] + 1`.
pub fn weight_n0(eps: f64) -> usize {
    (-eps.log2()).floor() as usize + 1
}

/// `μ_n = [4^n · ∏_{s≤n} h_s]^{-1}`.
pub fn level_value(n: usize, heights: &[f64]) -> f64 {
    let prod: f64 = heights[..n].iter().product();
    1.0 / ((2.0 * n as f64).exp2() * prod)
}

pub fn build_weight(blocks: &[BlockRecord], eps: f64) -> Result<WeightFunction> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {eps} outside (0,1)")));
    }
    let n0 = weight_n0(eps);
    let depth = blocks.len();
    if depth <= n0 {
        return Err(Error::InsufficientDepth { n0: n0 as u32, depth });
    }
    let sets: Vec<&DyadicSet2D> = blocks.iter().map(|b| &b.set).collect();
    let heights: Vec<f64> = blocks.iter().map(|b| b.h).collect();
    from_parts(eps, &sets, heights)
}

/// Weight from the exceptional-set complements `E_1..E_S` and heights.
pub fn from_parts(eps: f64, sets: &[&DyadicSet2D], heights: Vec<f64>) -> Result<WeightFunction> {
    let n0 = weight_n0(eps);
    let depth = sets.len();
    if depth <= n0 || heights.len() != depth {
        return Err(Error::InsufficientDepth { n0: n0 as u32, depth });
    }
    // Ω_n = ∩_{s=n}^S E_s, built from the top down
    let mut omegas = Vec::with_capacity(depth - n0 + 1);
    let mut acc = DyadicSet2D::full((0, 0));
    for s in (n0..=depth).rev() {
        acc = acc.intersect(sets[s - 1]);
        omegas.push(acc.clone());
    }
    omegas.reverse();
    let levels = (n0 + 1..=depth).map(|n| WeightLevel { n, mu: level_value(n, &heights) }).collect();
    Ok(WeightFunction { eps, n0, heights, omegas, levels })
}

impl WeightFunction {
    pub fn depth(&self) -> usize {
        self.heights.len()
    }

    /// `Ω_n` for `n₀ ≤ n ≤ S`.
    pub fn omega(&self, n: usize) -> Option<&DyadicSet2D> {
        n.checked_sub(self.n0).and_then(|i| self.omegas.get(i))
    }

    /// `E = Ω_{n₀}`.
    pub fn base(&self) -> &DyadicSet2D {
        &self.omegas[0]
    }

    /// `B = ∪ Ω_n = Ω_S` after truncation.
    pub fn support(&self) -> &DyadicSet2D {
        self.omegas.last().unwrap()
    }

    pub fn ranks(&self) -> (u32, u32) {
        self.omegas.iter().fold((0, 0), |r, o| finest(r, o.ranks()))
    }

    /// `{μ ≠ 1} = B \ E`.
    pub fn reduced_set(&self) -> DyadicSet2D {
        self.support().difference(self.base())
    }

    /// `μ` on a grid at least as fine as [`ranks`](Self::ranks).
    pub fn grid(&self, ranks: (u32, u32)) -> Result<DyadicGrid2D<f64>> {
        let mut g = DyadicGrid2D::constant(ranks, 1.0);
        for (level, pair) in self.levels.iter().zip(self.omegas.windows(2)) {
            let band = pair[1].difference(&pair[0]).refine(ranks)?;
            for (v, inside) in g.values_mut().iter_mut().zip(band.mask()) {
                if *inside {
                    *v = level.mu;
                }
            }
        }
        Ok(g)
    }

    /// Conclusion (A) and the level bounds.
    pub fn check(&self) -> Result<Report> {
        let mut report = Report::new();
        let g = self.grid(self.ranks())?;
        let lo = g.values().iter().copied().fold(f64::INFINITY, f64::min);
        let hi = g.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        report.push(Check::holds("(A) 0 < mu", lo > 0.0));
        report.push(Check::le_exact("(A) mu <= 1", hi, 1.0));
        report.push(Check::lt_exact("(A) |{mu != 1}| < eps", self.reduced_set().measure(), self.eps));
        report.push(Check::lt_exact("|T \\ E| < eps", 1.0 - self.base().measure(), self.eps));
        report.push(Check::holds("h_s >= 1", self.heights.iter().all(|&h| h >= 1.0)));
        for l in &self.levels {
            report.push(Check::le(format!("mu_{} <= 4^-{}", l.n, l.n), l.mu, (-2.0 * l.n as f64).exp2()));
        }
        report.push(Check::holds("mu_n decreasing", self.levels.windows(2).all(|w| w[1].mu < w[0].mu)));
        Ok(report)
    }
}
