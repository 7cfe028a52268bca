//! One-dimensional polynomial equal to a step function off a small set.
//!
//! Working at rank `p` with `2^a ≥ N₀`, a function has no Walsh frequency
//! below `2^a` exactly when it has mean zero on every rank-`a` cell. The
//! builder keeps `f` on most of each such cell and puts a compensating
//! correction on a few exceptional rank-`p` cells, chosen greedily to
//! minimize energy. The correction values are then refined by projected
//! gradient descent on `Σ|c_k|^{2+ε}`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::certificate::{energy_floor, power_sum_certificate};
use super::{derive_seed, max_rank_for};
use crate::check::{Check, Report};
use crate::dyadic::walsh::resolving_rank;
use crate::dyadic::{fwht, inverse_fwht, DyadicGrid1D, DyadicSet1D, StepFunction1D};
use crate::series::{for_each_partial_sum_1d, worst_subset_margin_1d, WalshSeries1D};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Limits {
    /// Every frequency must be `< fmax`.
    pub fmax: u64,
    /// Re-randomized placements per (rank, band) before escalating.
    pub retries: u32,
    pub refine_iters: usize,
    pub seed: u64,
}

impl Default for Lemma1Limits {
    fn default() -> Self {
        Lemma1Limits { fmax: 1 << 14, retries: 2, refine_iters: 150, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma1Result {
    pub poly: WalshSeries1D<f64>,
    pub set: DyadicSet1D,
    pub n0: u64,
    /// Largest frequency with a nonzero coefficient (`N₀` for `P = 0`).
    pub n: u64,
    pub eps: f64,
    pub rank: u32,
    pub report: Report,
}

impl Lemma1Result {
    fn zero(n0: u64, eps: f64, report: Report) -> Self {
        Lemma1Result { poly: WalshSeries1D::new(), set: DyadicSet1D::full(0), n0, n: n0, eps, rank: 0, report }
    }
}

pub fn lemma1_build(f: &StepFunction1D, n0: u64, eps: f64, limits: &Lemma1Limits) -> Result<Lemma1Result> {
    if n0 == 0 {
        return Err(Error::InvalidParameter("N0 must be at least 1".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {eps} outside (0,1)")));
    }
    if f.is_zero() {
        let poly = WalshSeries1D::new();
        let report = lemma1_verify(f, n0, eps, &poly, &DyadicSet1D::full(0))?;
        return Ok(Lemma1Result::zero(n0, eps, report));
    }
    let a_min = if n0 <= 1 { 0 } else { resolving_rank(n0 - 1) };
    let p_min = (a_min + 1).max(f.max_rank());
    // the exceptional set may be finer than the frequency cap allows, as long
    // as every frequency actually used stays below it
    let p_max = max_rank_for(limits.fmax).max(f.max_rank()).min(24);
    if p_min > p_max {
        return Err(Error::FrequencyBudgetExceeded { needed: 1 << p_min, cap: limits.fmax });
    }
    let r = 2.0 + eps;
    let mut best: Option<(f64, String)> = None;
    for p in p_min..=p_max {
        let fv = f.rasterize::<f64>(p)?.into_values();
        for a in a_min..=(a_min + 1).min(p - 1) {
            for attempt in 0..=limits.retries {
                let seed = derive_seed(limits.seed, &[p as u64, a as u64, attempt as u64]);
                let Some((mut g, exceptional)) = place_corrections(&fv, a, p, eps, seed) else {
                    break;
                };
                refine(&mut g, &exceptional, a, p, r, limits.refine_iters);
                let coeffs = fwht(&DyadicGrid1D::from_values(g)?);
                let low = 1usize << a;
                let poly = WalshSeries1D::from_dense(low as u64, &coeffs[low..], 1e-14);
                if poly.max_freq().map_or(false, |k| k >= limits.fmax) {
                    continue;
                }
                let power = poly.power_norm(r);
                if power >= eps {
                    if best.as_ref().map_or(true, |(v, _)| power < *v) {
                        best = Some((power, format!("best power sum {power:.4e} at rank {p}, band 2^{a}")));
                    }
                    continue;
                }
                let set = DyadicSet1D::from_mask(exceptional.iter().map(|&x| !x).collect())?;
                let report = lemma1_verify(f, n0, eps, &poly, &set)?;
                if report.all_passed() {
                    let n = poly.max_freq().unwrap_or(n0);
                    return Ok(Lemma1Result { poly, set, n0, n, eps, rank: p, report });
                }
                let worst = report.failures().map(|c| c.name.clone()).collect::<Vec<_>>().join(", ");
                best = Some((power, format!("rank {p}, band 2^{a}: failed {worst}")));
            }
        }
    }
    let coarse = f.max_rank();
    let fg = f.rasterize::<f64>(coarse)?;
    let floor = energy_floor(fg.values(), (-(coarse as f64)).exp2(), eps);
    let frequencies = limits.fmax.saturating_sub(n0) as f64;
    let certificate = power_sum_certificate(floor, frequencies, r, eps);
    let reason = match &certificate {
        Some(c) => format!("condition (3) is infeasible below frequency {}: {c}", limits.fmax),
        None => best.map(|(_, why)| why).unwrap_or_else(|| "no admissible placement".into()),
    };
    Err(Error::ConstructionFailed { reason, certificate })
}

#[derive(PartialEq)]
struct Gain(f64, usize);

impl Eq for Gain {}

impl PartialOrd for Gain {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Gain {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(other.1.cmp(&self.1))
    }
}

/// Picks exceptional cells and constant corrections that make every
/// rank-`a` cell mean zero. `None` when even one cell per cell-with-mass
/// exceeds the measure budget.
fn place_corrections(fv: &[f64], a: u32, p: u32, eps: f64, seed: u64) -> Option<(Vec<f64>, Vec<bool>)> {
    let len = 1usize << (p - a);
    let blocks = 1usize << a;
    let budget = ((eps * (1u64 << p) as f64).ceil() as usize).saturating_sub(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut orders = Vec::with_capacity(blocks);
    let mut sums = Vec::with_capacity(blocks);
    let mut squares = Vec::with_capacity(blocks);
    let mut masses = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let cell = &fv[b * len..(b + 1) * len];
        let mass: f64 = cell.iter().sum();
        let mut order: Vec<usize> = (0..len).collect();
        order.shuffle(&mut rng);
        let key = |i: usize| if mass != 0.0 { cell[i] * mass.signum() } else { cell[i].abs() };
        order.sort_by(|&x, &y| key(y).total_cmp(&key(x)));
        let mut ps = vec![0.0; len + 1];
        let mut pq = vec![0.0; len + 1];
        for (k, &i) in order.iter().enumerate() {
            ps[k + 1] = ps[k] + cell[i];
            pq[k + 1] = pq[k] + cell[i] * cell[i];
        }
        orders.push(order);
        sums.push(ps);
        squares.push(pq);
        masses.push(mass);
    }
    // energy of block b with k exceptional cells, in units of the cell measure
    let energy = |b: usize, k: usize| -> f64 {
        let rest = masses[b] - sums[b][k];
        let rest_sq = squares[b][len] - squares[b][k];
        if k == 0 {
            if masses[b] != 0.0 {
                f64::INFINITY
            } else {
                rest_sq
            }
        } else {
            rest_sq + rest * rest / k as f64
        }
    };
    let mut taken: Vec<usize> = masses.iter().map(|&m| usize::from(m != 0.0)).collect();
    let mut used: usize = taken.iter().sum();
    if used > budget {
        return None;
    }
    let mut heap = BinaryHeap::new();
    for b in 0..blocks {
        if taken[b] < len {
            heap.push(Gain(energy(b, taken[b]) - energy(b, taken[b] + 1), b));
        }
    }
    while used < budget {
        let Some(Gain(gain, b)) = heap.pop() else { break };
        if gain <= 1e-15 {
            break;
        }
        taken[b] += 1;
        used += 1;
        if taken[b] < len {
            heap.push(Gain(energy(b, taken[b]) - energy(b, taken[b] + 1), b));
        }
    }
    let mut g = fv.to_vec();
    let mut exceptional = vec![false; fv.len()];
    for b in 0..blocks {
        let k = taken[b];
        if k == 0 {
            continue;
        }
        let value = -(masses[b] - sums[b][k]) / k as f64;
        for &i in &orders[b][..k] {
            g[b * len + i] = value;
            exceptional[b * len + i] = true;
        }
    }
    Some((g, exceptional))
}

fn power_sum(g: &[f64], r: f64) -> f64 {
    let coeffs = fwht(&DyadicGrid1D::from_values(g.to_vec()).expect("power-of-two length"));
    coeffs.iter().fold(0.0, |acc, c| acc + c.abs().powf(r))
}

/// Projected gradient descent on `Σ|ĝ_j|^r` over the exceptional values,
/// keeping every rank-`a` cell mean zero.
fn refine(g: &mut [f64], exceptional: &[bool], a: u32, p: u32, r: f64, iters: usize) {
    let len = 1usize << (p - a);
    let h = (-(p as f64)).exp2();
    let groups: Vec<Vec<usize>> = (0..1usize << a)
        .map(|b| (b * len..(b + 1) * len).filter(|&i| exceptional[i]).collect())
        .filter(|v: &Vec<usize>| v.len() > 1)
        .collect();
    if groups.is_empty() {
        return;
    }
    let mut phi = power_sum(g, r);
    let mut step = 1.0 / (r * h);
    for _ in 0..iters {
        let coeffs = fwht(&DyadicGrid1D::from_values(g.to_vec()).expect("power-of-two length"));
        let psi: Vec<f64> = coeffs.iter().map(|c| c.signum() * c.abs().powf(r - 1.0)).collect();
        let grad = inverse_fwht(&psi).expect("power-of-two length");
        let mut dir = vec![0.0; g.len()];
        let mut norm2 = 0.0;
        for group in &groups {
            let mean = group.iter().map(|&i| grad.values()[i]).sum::<f64>() / group.len() as f64;
            for &i in group {
                let d = (grad.values()[i] - mean) * r * h;
                dir[i] = d;
                norm2 += d * d;
            }
        }
        if norm2 < 1e-30 {
            break;
        }
        let mut accepted = false;
        while step > 1e-12 {
            let trial: Vec<f64> = g.iter().zip(&dir).map(|(v, d)| v - step * d).collect();
            let next = power_sum(&trial, r);
            if next <= phi - 1e-4 * step * norm2 {
                let improvement = (phi - next) / phi.max(1e-300);
                g.copy_from_slice(&trial);
                phi = next;
                step *= 2.0;
                accepted = improvement > 1e-10;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
}

/// Independent check of conditions (1)–(4) and the frequency support.
pub fn lemma1_verify(
    f: &StepFunction1D,
    n0: u64,
    eps: f64,
    poly: &WalshSeries1D<f64>,
    set: &DyadicSet1D,
) -> Result<Report> {
    let rank = poly.resolving_rank().max(set.rank()).max(f.max_rank());
    let fg = f.rasterize::<f64>(rank)?;
    let e = set.refine(rank)?;
    let n = poly.max_freq().unwrap_or(n0);
    let mut report = Report::new();
    report.push(Check::holds("support in [N0, N]", poly.min_freq().map_or(true, |k| k >= n0)));

    let mut deviation = 0.0f64;
    let mut partial_max = 0.0f64;
    let budget = fg.map(f64::abs);
    let mut full = DyadicGrid1D::zeros(rank);
    for_each_partial_sum_1d(poly, rank, |k, s| {
        if k < n {
            let m = worst_subset_margin_1d(s, &budget, &e).expect("common rank");
            partial_max = partial_max.max(m);
        } else {
            full = s.clone();
        }
    })?;
    for ((p, v), &inside) in full.values().iter().zip(fg.values()).zip(e.mask()) {
        if inside {
            deviation = deviation.max((p - v).abs());
        }
    }
    report.push(Check::le("(1) |P - f| on E", deviation, 0.0));
    report.push(Check::lt_exact("(2) |[0,1] \\ E| < eps", 1.0 - e.measure(), eps));
    report.push(Check::lt("(3) sum |c|^(2+eps) < eps", poly.power_norm(2.0 + eps), eps));
    report.push(Check::lt("(4) partial-sum excess", partial_max, eps));
    Ok(report)
}
