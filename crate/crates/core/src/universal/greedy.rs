//! Greedy subseries selection against a target, with partial-sum tracing.

use serde::{Deserialize, Serialize};

use super::build::Construction;
use super::weight::WeightFunction;
use crate::check::FLOAT_SLACK;
use crate::dyadic::{finest, DyadicGrid2D};
use crate::lemma::Mode;
use crate::series::{for_each_rect_cut, for_each_sph_cut, synthesize};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepStatus {
    Verified,
    Unverified,
}

impl std::fmt::Display for StepStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StepStatus::Verified => "verified",
            StepStatus::Unverified => "unverified",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub q: usize,
    pub n_q: usize,
    /// `‖(f − Σ_{s<q} P_{n_s}) − f_{n_q}‖_μ`, the selection criterion.
    pub select_err: f64,
    /// `‖f_{n_q} − P_{n_q}‖_μ` against `4^{-n_q}`.
    pub block_err: f64,
    pub err_mu: f64,
    pub bound_mu: f64,
    pub err_rect_max: f64,
    pub err_sph_max: f64,
    pub bound_ps: f64,
    pub status: StepStatus,
}

/// Why selection stopped early.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Unreached {
    pub step: usize,
    pub best_residual: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ApproxTrace {
    pub rows: Vec<TraceRow>,
    pub unreached: Option<Unreached>,
}

impl ApproxTrace {
    pub fn all_verified(&self) -> bool {
        self.unreached.is_none() && self.rows.iter().all(|r| r.status == StepStatus::Verified)
    }

    pub fn selected(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.n_q).collect()
    }

    pub fn ensure_complete(&self) -> Result<()> {
        match &self.unreached {
            None => Ok(()),
            Some(u) => Err(Error::TargetNotApproximable { step: u.step, best_residual: u.best_residual, bound: u.bound }),
        }
    }
}

fn four_pow_neg(n: usize) -> f64 {
    (-2.0 * n as f64).exp2()
}

/// Selects `n₁ > n₀+1, n₂ > n₁, …` by the smallest admissible index and
/// traces the weighted errors of the chosen subseries.
pub fn greedy_subseries(
    target: &DyadicGrid2D<f64>,
    construction: &Construction,
    weight: &WeightFunction,
    steps: usize,
) -> Result<ApproxTrace> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    let blocks = &construction.blocks;
    let mut ranks = finest(target.ranks(), weight.ranks());
    ranks = finest(ranks, construction.series.resolving_ranks());
    for b in blocks {
        ranks = finest(finest(ranks, b.f.max_ranks()), b.set.ranks());
    }
    let mu = weight.grid(ranks)?;
    let norm = |g: &DyadicGrid2D<f64>| g.weighted_l1(&mu);
    let mut residual = target.refine(ranks)?;
    let mut trace = ApproxTrace::default();
    let mut prev = weight.n0 + 1;
    for q in 1..=steps {
        let select_bound = if q == 1 { 0.25 } else { 2.0 * four_pow_neg(q) };
        let mut chosen = None;
        let mut best = f64::INFINITY;
        for n in prev + 1..=blocks.len() {
            let d = norm(&residual.sub(&blocks[n - 1].f.rasterize(ranks)?)?)?;
            best = best.min(d);
            if d < select_bound {
                chosen = Some((n, d));
                break;
            }
        }
        let Some((n, select_err)) = chosen else {
            trace.unreached = Some(Unreached { step: q, best_residual: best, bound: select_bound });
            break;
        };
        let block = &blocks[n - 1];
        let p = synthesize(&block.coeffs, ranks)?;
        let block_err = norm(&block.f.rasterize::<f64>(ranks)?.sub(&p)?)?;
        // partial sums with min(n̄, m̄) inside block n: the earlier blocks plus
        // a cut of this one; the empty cut is reachable unless the block
        // uses its first frequency on both axes
        let start = block.start;
        let rect_empty = !block.coeffs.iter().any(|((k, _), _)| *k == start)
            || !block.coeffs.iter().any(|((_, nu), _)| *nu == start);
        let sph_empty = block.coeffs.iter().all(|((k, nu), _)| k * k + nu * nu > 2 * start * start);
        let base = norm(&residual)?;
        let mut err_rect = if rect_empty { base } else { 0.0 };
        let mut err_sph = if sph_empty { base } else { 0.0 };
        let mut failure = None;
        for_each_rect_cut(&block.coeffs, ranks, |_, g| match residual.sub(g).and_then(|d| norm(&d)) {
            Ok(v) => err_rect = err_rect.max(v),
            Err(e) => failure = Some(e),
        })?;
        for_each_sph_cut(&block.coeffs, ranks, |_, g| match residual.sub(g).and_then(|d| norm(&d)) {
            Ok(v) => err_sph = err_sph.max(v),
            Err(e) => failure = Some(e),
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        residual = residual.sub(&p)?;
        let err_mu = norm(&residual)?;
        let bound_mu = 2.0 * four_pow_neg(q);
        let bound_ps = 21.0 * four_pow_neg(q);
        let ok = err_mu < bound_mu + FLOAT_SLACK
            && err_rect < bound_ps + FLOAT_SLACK
            && (construction.mode == Mode::Rect || err_sph < bound_ps + FLOAT_SLACK);
        trace.rows.push(TraceRow {
            q,
            n_q: n,
            select_err,
            block_err,
            err_mu,
            bound_mu,
            err_rect_max: err_rect,
            err_sph_max: err_sph,
            bound_ps,
            status: if ok { StepStatus::Verified } else { StepStatus::Unverified },
        });
        prev = n;
    }
    Ok(trace)
}
