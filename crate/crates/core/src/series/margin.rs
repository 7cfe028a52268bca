//! Exact reduction of "for every measurable subset e ⊆ E" conditions.
//!
//! For piecewise-constant integrands, `max_{e⊆E} ∫_e (|g| − b)` is attained
//! by the cells of `E` where `|g| > b`, so the supremum is the positive-part
//! integral over `E`.

use serde::{Deserialize, Serialize};

use super::sums::{for_each_rect_cut, for_each_sph_cut};
use crate::dyadic::{finest, DyadicGrid1D, DyadicGrid2D, DyadicSet1D, DyadicSet2D};
use crate::{Real, Result};

/// `max_{e ⊆ E} ∫∫_e (|g| − budget) = Σ_{cells ∈ E} max(0, |g| − budget)·|cell|`.
pub fn worst_subset_margin<T: Real>(
    g: &DyadicGrid2D<T>,
    budget: &DyadicGrid2D<T>,
    set: &DyadicSet2D,
) -> Result<T> {
    let ranks = finest(finest(g.ranks(), budget.ranks()), set.ranks());
    let g = g.refine(ranks)?;
    let b = budget.refine(ranks)?;
    let e = set.refine(ranks)?;
    let total: T = g
        .values()
        .iter()
        .zip(b.values())
        .zip(e.mask())
        .filter(|(_, &inside)| inside)
        .map(|((gv, bv), _)| (gv.abs() - *bv).max(T::zero()))
        .sum();
    Ok(total * g.cell_measure())
}

/// One-dimensional [`worst_subset_margin`].
pub fn worst_subset_margin_1d<T: Real>(
    g: &DyadicGrid1D<T>,
    budget: &DyadicGrid1D<T>,
    set: &DyadicSet1D,
) -> Result<T> {
    let rank = g.rank().max(budget.rank()).max(set.rank());
    let g = g.refine(rank)?;
    let b = budget.refine(rank)?;
    let e = set.refine(rank)?;
    let total: T = g
        .values()
        .iter()
        .zip(b.values())
        .zip(e.mask())
        .filter(|(_, &inside)| inside)
        .map(|((gv, bv), _)| (gv.abs() - *bv).max(T::zero()))
        .sum();
    Ok(total * g.cell_measure())
}

/// `∫∫_E |g|`.
pub fn integral_over<T: Real>(g: &DyadicGrid2D<T>, set: &DyadicSet2D) -> Result<T> {
    worst_subset_margin(g, &DyadicGrid2D::zeros((0, 0)), set)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuantifierMode {
    /// Every pair of distinct rectangular and spherical cuts was evaluated.
    ExactPairs,
    /// Sufficient split bound `max_r margin(|S_r|, b) + max_R ∫_E |S_R|`.
    Split,
}

/// Limits on the exhaustive pair sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairLimits {
    pub max_pairs: u64,
    /// Cap on `pairs × |E| cells`, the actual work of the exact sweep.
    pub max_work: u64,
    /// Cap on stored spherical values, `thresholds × |E| cells`.
    pub max_stored: u64,
}

impl Default for PairLimits {
    fn default() -> Self {
        PairLimits { max_pairs: 1_000_000, max_work: 4_000_000_000, max_stored: 16_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantifiedSum {
    /// `max_{e⊆E} [max_r ∫_e|S_r| + max_R ∫_e|S_R| − ∫_e b]` (or its split
    /// upper bound).
    pub excess: f64,
    pub mode: QuantifierMode,
    pub rect_cuts: usize,
    pub sph_cuts: usize,
}

fn masked_cells(set: &DyadicSet2D) -> Vec<usize> {
    set.mask().iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

/// Combined rectangular + spherical partial-sum excess over the density
/// budget `budget`, quantified over all subsets of `set`.
pub fn rect_plus_sph_excess<T: Real>(
    coeffs: &[((u64, u64), T)],
    ranks: (u32, u32),
    budget: &DyadicGrid2D<T>,
    set: &DyadicSet2D,
    limits: PairLimits,
) -> Result<QuantifiedSum> {
    let b = budget.refine(ranks)?;
    let e = set.refine(ranks)?;
    let cells = masked_cells(&e);
    let h = T::exp2_neg(ranks.0 + ranks.1);
    let mut sph: Vec<Vec<T>> = Vec::new();
    let mut sph_int_max = T::zero();
    let mut sph_count = 0usize;
    let ks = coeffs.iter().map(|((k, _), _)| *k).collect::<std::collections::BTreeSet<_>>().len();
    let nus = coeffs.iter().map(|((_, nu), _)| *nu).collect::<std::collections::BTreeSet<_>>().len();
    let radii = coeffs
        .iter()
        .map(|((k, nu), _)| k * k + nu * nu)
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    let pairs = (ks * nus) as u64 * radii as u64;
    let exact = pairs <= limits.max_pairs
        && pairs.saturating_mul(cells.len() as u64) <= limits.max_work
        && (radii as u64).saturating_mul(cells.len() as u64) <= limits.max_stored;
    for_each_sph_cut(coeffs, ranks, |_, g| {
        sph_count += 1;
        let vals: Vec<T> = cells.iter().map(|&c| g.values()[c].abs()).collect();
        let int = vals.iter().copied().sum::<T>() * h;
        sph_int_max = sph_int_max.max(int);
        if exact {
            sph.push(vals);
        }
    })?;
    if sph.is_empty() {
        sph.push(vec![T::zero(); cells.len()]);
    }
    let mut best = T::zero();
    let mut rect_count = 0usize;
    let mut diff = vec![T::zero(); cells.len()];
    let mut visit_rect = |g: &DyadicGrid2D<T>| {
        rect_count += 1;
        for (d, &c) in diff.iter_mut().zip(&cells) {
            *d = g.values()[c].abs() - b.values()[c];
        }
        if exact {
            for bv in &sph {
                let s: T = diff.iter().zip(bv).map(|(d, v)| (*d + *v).max(T::zero())).sum();
                best = best.max(s * h);
            }
        } else {
            let s: T = diff.iter().map(|d| d.max(T::zero())).sum();
            best = best.max(s * h);
        }
    };
    if coeffs.is_empty() {
        visit_rect(&DyadicGrid2D::zeros(ranks));
    } else {
        for_each_rect_cut(coeffs, ranks, |_, g| visit_rect(g))?;
    }
    let excess = if exact { best } else { best + sph_int_max };
    Ok(QuantifiedSum {
        excess: excess.to_f64().unwrap(),
        mode: if exact { QuantifierMode::ExactPairs } else { QuantifierMode::Split },
        rect_cuts: rect_count,
        sph_cuts: sph_count,
    })
}

/// `max_r max_{e⊆E} ∫_e (|S_r| − b)` over rectangular cuts only.
pub fn rect_excess<T: Real>(
    coeffs: &[((u64, u64), T)],
    ranks: (u32, u32),
    budget: &DyadicGrid2D<T>,
    set: &DyadicSet2D,
) -> Result<f64> {
    let b = budget.refine(ranks)?;
    let e = set.refine(ranks)?;
    let cells = masked_cells(&e);
    let h = T::exp2_neg(ranks.0 + ranks.1);
    let mut best = T::zero();
    for_each_rect_cut(coeffs, ranks, |_, g| {
        let s: T = cells.iter().map(|&c| (g.values()[c].abs() - b.values()[c]).max(T::zero())).sum();
        best = best.max(s * h);
    })?;
    Ok(best.to_f64().unwrap())
}

/// Maxima of `∫_E |S|` over rectangular and over spherical cuts. With a
/// constant total budget the worst subset is `E` itself.
pub fn rect_and_sph_mass<T: Real>(
    coeffs: &[((u64, u64), T)],
    ranks: (u32, u32),
    set: &DyadicSet2D,
) -> Result<(f64, f64)> {
    let e = set.refine(ranks)?;
    let cells = masked_cells(&e);
    let h = T::exp2_neg(ranks.0 + ranks.1);
    let mass = |g: &DyadicGrid2D<T>| cells.iter().map(|&c| g.values()[c].abs()).sum::<T>() * h;
    let mut rect = T::zero();
    let mut sph = T::zero();
    for_each_rect_cut(coeffs, ranks, |_, g| rect = rect.max(mass(g)))?;
    for_each_sph_cut(coeffs, ranks, |_, g| sph = sph.max(mass(g)))?;
    Ok((rect.to_f64().unwrap(), sph.to_f64().unwrap()))
}

/// Maxima of the sup norm over rectangular and spherical cuts.
pub fn rect_and_sph_sup<T: Real>(coeffs: &[((u64, u64), T)], ranks: (u32, u32)) -> Result<(f64, f64)> {
    let mut rect = T::zero();
    let mut sph = T::zero();
    for_each_rect_cut(coeffs, ranks, |_, g| rect = rect.max(g.sup_norm()))?;
    for_each_sph_cut(coeffs, ranks, |_, g| sph = sph.max(g.sup_norm()))?;
    Ok((rect.to_f64().unwrap(), sph.to_f64().unwrap()))
}
