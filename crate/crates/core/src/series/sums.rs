//! Rectangular and spherical partial sums, evaluated exactly on dyadic grids
//! from the nonzero coefficients only.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::store::{max_freqs, WalshSeries1D, WalshSeries2D};
use crate::dyadic::walsh::{bit_reverse, resolving_rank, walsh_negative};
use crate::dyadic::{DyadicGrid1D, DyadicGrid2D};
use crate::{Error, Real, Result};

/// Which partial sum: `S_{n̄,m̄}` or the annulus `lower ≤ k²+ν² ≤ r2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PartialSumCut {
    Rect { n: u64, m: u64 },
    Sph { r2: u64, lower: u64 },
}

/// Integer threshold for `k²+ν² ≤ R²`; squares within `1e-9` of an integer
/// snap to it so that `R = √2` admits the lattice point `(1,1)`.
pub fn radius_threshold(r: f64) -> u64 {
    if r <= 0.0 {
        return 0;
    }
    (r * r + 1e-9).floor() as u64
}

pub(crate) fn signs<T: Real>(n: u64, rank: u32) -> Vec<T> {
    (0..1usize << rank)
        .map(|i| if walsh_negative(n, i, rank) { -T::one() } else { T::one() })
        .collect()
}

fn check_ranks(max: (u64, u64), ranks: (u32, u32)) -> Result<()> {
    let need = (resolving_rank(max.0), resolving_rank(max.1));
    if need.0 > ranks.0 || need.1 > ranks.1 {
        return Err(Error::Resolution { needed: need.0.max(need.1), have: ranks.0.min(ranks.1) });
    }
    Ok(())
}

/// Sum of an arbitrary coefficient subset on a rank-`ranks` grid; rows are
/// grouped by `k` so the cost is `(#distinct k)·cells`.
pub fn synthesize<T: Real>(coeffs: &[((u64, u64), T)], ranks: (u32, u32)) -> Result<DyadicGrid2D<T>> {
    check_ranks(max_freqs(coeffs.iter().map(|c| c.0)), ranks)?;
    let mut grid = DyadicGrid2D::zeros(ranks);
    let ny = 1usize << ranks.1;
    let mut by_k: BTreeMap<u64, Vec<T>> = BTreeMap::new();
    for &((k, nu), c) in coeffs {
        let row = by_k.entry(k).or_insert_with(|| vec![T::zero(); ny]);
        for (j, r) in row.iter_mut().enumerate() {
            if walsh_negative(nu, j, ranks.1) {
                *r = *r - c;
            } else {
                *r = *r + c;
            }
        }
    }
    let values = grid.values_mut();
    for (k, row) in by_k {
        for i in 0..1usize << ranks.0 {
            let out = &mut values[i * ny..(i + 1) * ny];
            if walsh_negative(k, i, ranks.0) {
                out.iter_mut().zip(&row).for_each(|(o, r)| *o = *o - *r);
            } else {
                out.iter_mut().zip(&row).for_each(|(o, r)| *o = *o + *r);
            }
        }
    }
    Ok(grid)
}

/// `S_{n̄,m̄} = Σ_{k ≤ n̄, ν ≤ m̄} c_{k,ν} W_k(x) W_ν(y)`.
pub fn rect_partial_sum<T: Real>(
    series: &WalshSeries2D<T>,
    n: u64,
    m: u64,
    ranks: (u32, u32),
) -> Result<DyadicGrid2D<T>> {
    let selected: Vec<_> = series.iter().filter(|((k, nu), _)| *k <= n && *nu <= m).collect();
    synthesize(&selected, ranks)
}

/// Annulus sum over `lower ≤ k²+ν² ≤ R²` (boundary points included);
/// `lower` defaults to 0.
pub fn sph_partial_sum<T: Real>(
    series: &WalshSeries2D<T>,
    r: f64,
    lower: Option<f64>,
    ranks: (u32, u32),
) -> Result<DyadicGrid2D<T>> {
    let hi = radius_threshold(r);
    let lo = lower.map(|l| (l - 1e-9).max(0.0).ceil() as u64).unwrap_or(0);
    let selected: Vec<_> = series
        .iter()
        .filter(|((k, nu), _)| {
            let q = k * k + nu * nu;
            lo <= q && q <= hi
        })
        .collect();
    synthesize(&selected, ranks)
}

/// The finite set of cuts at which partial sums over `coeffs` change:
/// rectangular cuts at (distinct k) × (distinct ν), spherical thresholds at
/// the distinct values of `k²+ν²` (sorted increasing).
pub fn distinct_cuts<T: Real>(coeffs: &[((u64, u64), T)]) -> Vec<PartialSumCut> {
    let ks: BTreeSet<u64> = coeffs.iter().map(|((k, _), _)| *k).collect();
    let nus: BTreeSet<u64> = coeffs.iter().map(|((_, nu), _)| *nu).collect();
    let lower = coeffs.iter().map(|((k, nu), _)| k * k + nu * nu).min().unwrap_or(0);
    let mut cuts: Vec<PartialSumCut> = ks
        .iter()
        .flat_map(|&n| nus.iter().map(move |&m| PartialSumCut::Rect { n, m }))
        .collect();
    let radii: BTreeSet<u64> = coeffs.iter().map(|((k, nu), _)| k * k + nu * nu).collect();
    cuts.extend(radii.into_iter().map(|r2| PartialSumCut::Sph { r2, lower }));
    cuts
}

/// Visits every distinct rectangular partial sum of `coeffs` in order of
/// increasing `n̄`, then `m̄`. Each visit costs one rank-1 update.
pub fn for_each_rect_cut<T: Real>(
    coeffs: &[((u64, u64), T)],
    ranks: (u32, u32),
    mut visit: impl FnMut(PartialSumCut, &DyadicGrid2D<T>),
) -> Result<()> {
    check_ranks(max_freqs(coeffs.iter().map(|c| c.0)), ranks)?;
    let ks: Vec<u64> = coeffs.iter().map(|((k, _), _)| *k).collect::<BTreeSet<_>>().into_iter().collect();
    let nus: Vec<u64> = coeffs.iter().map(|((_, nu), _)| *nu).collect::<BTreeSet<_>>().into_iter().collect();
    let nx = 1usize << ranks.0;
    let ny = 1usize << ranks.1;
    let nu_signs: Vec<Vec<T>> = nus.iter().map(|&nu| signs(nu, ranks.1)).collect();
    let nu_index: BTreeMap<u64, usize> = nus.iter().enumerate().map(|(i, &nu)| (nu, i)).collect();
    let mut by_k: BTreeMap<u64, Vec<(usize, T)>> = BTreeMap::new();
    for &((k, nu), c) in coeffs {
        by_k.entry(k).or_default().push((nu_index[&nu], c));
    }
    // column functions X_ν(x) = Σ_{k ≤ n̄} c_{k,ν} W_k(x)
    let mut columns = vec![vec![T::zero(); nx]; nus.len()];
    let mut grid = DyadicGrid2D::zeros(ranks);
    for &n in &ks {
        let ksign: Vec<T> = signs(n, ranks.0);
        for &(idx, c) in &by_k[&n] {
            columns[idx].iter_mut().zip(&ksign).for_each(|(x, s)| *x = *x + c * *s);
        }
        grid.values_mut().iter_mut().for_each(|v| *v = T::zero());
        for (idx, &m) in nus.iter().enumerate() {
            let col = &columns[idx];
            let ys = &nu_signs[idx];
            let values = grid.values_mut();
            for i in 0..nx {
                let a = col[i];
                if a != T::zero() {
                    let row = &mut values[i * ny..(i + 1) * ny];
                    row.iter_mut().zip(ys).for_each(|(o, s)| *o = *o + a * *s);
                }
            }
            visit(PartialSumCut::Rect { n, m }, &grid);
        }
    }
    Ok(())
}

/// Visits the spherical partial sums of `coeffs` at every distinct
/// threshold `k²+ν²`, in increasing order.
pub fn for_each_sph_cut<T: Real>(
    coeffs: &[((u64, u64), T)],
    ranks: (u32, u32),
    mut visit: impl FnMut(PartialSumCut, &DyadicGrid2D<T>),
) -> Result<()> {
    check_ranks(max_freqs(coeffs.iter().map(|c| c.0)), ranks)?;
    let mut sorted: Vec<_> = coeffs.to_vec();
    sorted.sort_by_key(|((k, nu), _)| (k * k + nu * nu, *k, *nu));
    let lower = sorted.first().map(|((k, nu), _)| k * k + nu * nu).unwrap_or(0);
    let ny = 1usize << ranks.1;
    let mut grid = DyadicGrid2D::zeros(ranks);
    let mut idx = 0;
    while idx < sorted.len() {
        let r2 = {
            let ((k, nu), _) = sorted[idx];
            k * k + nu * nu
        };
        while idx < sorted.len() && {
            let ((k, nu), _) = sorted[idx];
            k * k + nu * nu == r2
        } {
            let ((k, nu), c) = sorted[idx];
            let ys: Vec<T> = signs(nu, ranks.1);
            let values = grid.values_mut();
            for i in 0..1usize << ranks.0 {
                let a = if walsh_negative(k, i, ranks.0) { -c } else { c };
                let row = &mut values[i * ny..(i + 1) * ny];
                row.iter_mut().zip(&ys).for_each(|(o, s)| *o = *o + a * *s);
            }
            idx += 1;
        }
        visit(PartialSumCut::Sph { r2, lower }, &grid);
    }
    Ok(())
}

/// Visits `S_m = Σ_{k ≤ m} c_k W_k` at every nonzero frequency `m`.
pub fn for_each_partial_sum_1d<T: Real>(
    series: &WalshSeries1D<T>,
    rank: u32,
    mut visit: impl FnMut(u64, &DyadicGrid1D<T>),
) -> Result<()> {
    if series.resolving_rank() > rank {
        return Err(Error::Resolution { needed: series.resolving_rank(), have: rank });
    }
    let rev: Vec<u64> = (0..1usize << rank).map(|i| bit_reverse(i, rank) as u64).collect();
    let mut acc = DyadicGrid1D::zeros(rank);
    for (k, c) in series.iter() {
        for (v, r) in acc.values_mut().iter_mut().zip(&rev) {
            if (k & r).count_ones() & 1 == 1 {
                *v = *v - c;
            } else {
                *v = *v + c;
            }
        }
        visit(k, &acc);
    }
    Ok(())
}

/// Full synthesis of a 1-D polynomial.
pub fn synthesize_1d<T: Real>(series: &WalshSeries1D<T>, rank: u32) -> Result<DyadicGrid1D<T>> {
    let mut out = DyadicGrid1D::zeros(rank);
    for_each_partial_sum_1d(series, rank, |_, g| out = g.clone())?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::{fwht2, inverse_fwht2, walsh2};

    fn sample_series() -> WalshSeries2D<f64> {
        WalshSeries2D::from_coeffs(vec![
            ((1, 1), 0.5),
            ((3, 9), -1.25),
            ((3, 10), 0.75),
            ((4, 9), 2.0),
            ((4, 10), -0.5),
            ((7, 2), 0.125),
        ])
    }

    #[test]
    fn empty_series_sums_to_zero() {
        let s = WalshSeries2D::<f64>::new();
        let g = rect_partial_sum(&s, 10, 10, (2, 2)).unwrap();
        assert!(g.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_coefficient_is_a_tensor_walsh() {
        let s = WalshSeries2D::from_coeffs(vec![((1, 1), 1.0)]);
        let g = rect_partial_sum(&s, 1, 1, (2, 2)).unwrap();
        assert_eq!(g, walsh2::<f64>(1, 1, (2, 2)).unwrap());
        // R = √2 admits (1,1); R = 2 admits no further lattice point
        let a = sph_partial_sum(&s, 2f64.sqrt(), None, (2, 2)).unwrap();
        let b = sph_partial_sum(&s, 2.0, None, (2, 2)).unwrap();
        assert_eq!(a, g);
        assert_eq!(a, b);
        let empty = sph_partial_sum(&s, 2f64.sqrt(), Some(3.0), (2, 2)).unwrap();
        assert!(empty.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn full_sums_match_inverse_transform() {
        let s = sample_series();
        let ranks = (3, 4);
        let mut dense = vec![0.0; 1 << 7];
        for ((k, nu), c) in s.iter() {
            dense[((k as usize) << 4) + nu as usize] = c;
        }
        let oracle = inverse_fwht2(ranks, &dense).unwrap();
        let rect = rect_partial_sum(&s, u64::MAX, u64::MAX, ranks).unwrap();
        let sph = sph_partial_sum(&s, 2f64.sqrt() * 10.0, None, ranks).unwrap();
        for ((a, b), c) in rect.values().iter().zip(sph.values()).zip(oracle.values()) {
            assert!((a - c).abs() < 1e-10 && (b - c).abs() < 1e-10);
        }
        let back = fwht2(&rect);
        assert!((back[(4 << 4) + 9] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn insufficient_rank_is_a_resolution_error() {
        let s = sample_series();
        assert!(matches!(rect_partial_sum(&s, 100, 100, (2, 4)), Err(Error::Resolution { .. })));
    }

    #[test]
    fn cut_enumeration_on_a_small_block() {
        let block: Vec<_> = sample_series().iter().filter(|((k, _), _)| (3..=4).contains(k)).collect();
        let cuts = distinct_cuts(&block);
        let rect: Vec<_> = cuts.iter().filter(|c| matches!(c, PartialSumCut::Rect { .. })).collect();
        assert_eq!(rect.len(), 4);
        let radii: Vec<u64> = cuts
            .iter()
            .filter_map(|c| match c {
                PartialSumCut::Sph { r2, .. } => Some(*r2),
                _ => None,
            })
            .collect();
        assert!(radii.windows(2).all(|w| w[0] < w[1]));
        // brute force over every (n̄, m̄) in the block: at most 4 distinct sums
        let s = WalshSeries2D::from_coeffs(block.clone());
        let mut distinct: Vec<Vec<f64>> = Vec::new();
        for n in 3..=4 {
            for m in 9..=10 {
                let g = rect_partial_sum(&s, n, m, (3, 4)).unwrap();
                if !distinct.iter().any(|d| d == g.values()) {
                    distinct.push(g.values().to_vec());
                }
            }
        }
        assert!(distinct.len() <= 4);
        let one = distinct_cuts(&[((2u64, 5u64), 1.0f64)]);
        assert_eq!(one.len(), 2);
    }

    #[test]
    fn sweeps_agree_with_direct_sums() {
        let s = sample_series();
        let coeffs = s.coeff_vec();
        let ranks = (3, 4);
        let mut seen = 0;
        for_each_rect_cut(&coeffs, ranks, |cut, g| {
            let PartialSumCut::Rect { n, m } = cut else { unreachable!() };
            let direct = rect_partial_sum(&s, n, m, ranks).unwrap();
            for (a, b) in g.values().iter().zip(direct.values()) {
                assert!((a - b).abs() < 1e-12);
            }
            seen += 1;
        })
        .unwrap();
        assert_eq!(seen, 4 * 4);
        for_each_sph_cut(&coeffs, ranks, |cut, g| {
            let PartialSumCut::Sph { r2, .. } = cut else { unreachable!() };
            let direct = sph_partial_sum(&s, (r2 as f64).sqrt(), None, ranks).unwrap();
            for (a, b) in g.values().iter().zip(direct.values()) {
                assert!((a - b).abs() < 1e-12);
            }
        })
        .unwrap();
    }

    #[test]
    fn sums_are_constant_between_cuts() {
        let s = sample_series();
        let ranks = (3, 4);
        // between rect cuts (3, 9) and (4, 9): n̄ = 3 and an interior point
        let a = rect_partial_sum(&s, 3, 9, ranks).unwrap();
        let b = rect_partial_sum(&s, 3, 9, ranks).unwrap();
        assert_eq!(a, b);
        let c = rect_partial_sum(&s, 5, 9, ranks).unwrap();
        let d = rect_partial_sum(&s, 6, 9, ranks).unwrap();
        assert_eq!(c, d);
        let e = sph_partial_sum(&s, 10f64.sqrt(), None, ranks).unwrap();
        let f = sph_partial_sum(&s, 50f64.sqrt(), None, ranks).unwrap();
        assert_eq!(e, f);
    }

    #[test]
    fn one_dimensional_partial_sums() {
        let mut s = WalshSeries1D::<f64>::new();
        s.insert(2, 0.5);
        s.insert(5, -1.0);
        let mut last = 0;
        for_each_partial_sum_1d(&s, 3, |k, _| last = k).unwrap();
        assert_eq!(last, 5);
        let g = synthesize_1d(&s, 3).unwrap();
        let c = crate::dyadic::fwht(&g);
        assert!((c[2] - 0.5).abs() < 1e-15 && (c[5] + 1.0).abs() < 1e-15);
    }
}
