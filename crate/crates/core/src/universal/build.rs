//! Block-by-block construction of the series.

use serde::{Deserialize, Serialize};

use super::catalog::Catalog;
use crate::check::{Check, Report};
use crate::dyadic::walsh::resolving_rank;
use crate::dyadic::{finest, DyadicSet2D, StepFunction2D};
use crate::lemma::{derive_seed, lemma3_build, Limits, Mode};
use crate::series::{coeff_power_norm, max_freqs, rect_and_sph_sup, rect_excess, rect_plus_sph_excess, PairLimits};
use crate::{Error, Result, Series2D};

/// What to do when a block cannot be built.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OnFailure {
    /// Stop and return the blocks built so far.
    #[default]
    Abort,
    /// Record `P_s = 0` with `E_s` the zero set of `f_s` and keep going; the
    /// block's report then shows which conditions fail.
    Fallback,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockRecord {
    pub s: usize,
    pub f: StepFunction2D,
    /// `N_{s-1}`.
    pub start: u64,
    /// `N_s`; the block owns `[start, end)²`.
    pub end: u64,
    pub coeffs: Vec<((u64, u64), f64)>,
    pub set: DyadicSet2D,
    pub h: f64,
    pub report: Report,
    /// Builder error when the block is a fallback.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Construction {
    pub mode: Mode,
    pub pairs: PairLimits,
    pub series: Series2D,
    pub blocks: Vec<BlockRecord>,
}

impl Construction {
    pub fn empty(mode: Mode, pairs: PairLimits) -> Self {
        Construction { mode, pairs, series: Series2D::new(), blocks: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.blocks.len()
    }

    /// `N_0, N_1, …, N_S`.
    pub fn boundaries(&self) -> &[u64] {
        self.series.blocks()
    }

    pub fn all_verified(&self) -> bool {
        self.blocks.iter().all(|b| b.failure.is_none() && b.report.all_passed())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("block {} failed after {completed} completed blocks: {source}", .completed + 1)]
pub struct BuildError {
    pub completed: usize,
    pub partial: Box<Construction>,
    #[source]
    pub source: Error,
}

/// `2^{-2(s+1)}`, the Lemma 3 tolerance for block `s`.
pub fn block_eps(s: usize) -> f64 {
    (-2.0 * (s as f64 + 1.0)).exp2()
}

pub fn build_universal(
    catalog: &Catalog,
    depth: usize,
    limits: &Limits,
    on_failure: OnFailure,
) -> std::result::Result<Construction, BuildError> {
    let mut out = Construction::empty(limits.mode, limits.pairs);
    if depth > catalog.len() {
        let source = Error::InvalidParameter(format!("depth {depth} exceeds catalog length {}", catalog.len()));
        return Err(BuildError { completed: 0, partial: Box::new(out), source });
    }
    for s in 1..=depth {
        match build_block(catalog, s, &out, limits, on_failure) {
            Ok(block) => {
                if let Err(source) = out.series.push_block(block.end, block.coeffs.iter().copied()) {
                    return Err(BuildError { completed: s - 1, partial: Box::new(out), source });
                }
                out.blocks.push(block);
            }
            Err(source) => return Err(BuildError { completed: s - 1, partial: Box::new(out), source }),
        }
    }
    Ok(out)
}

fn build_block(
    catalog: &Catalog,
    s: usize,
    built: &Construction,
    limits: &Limits,
    on_failure: OnFailure,
) -> Result<BlockRecord> {
    let f = catalog.for_block(s).expect("depth checked").clone();
    let start = *built.boundaries().last().unwrap();
    let sub = Limits { seed: derive_seed(limits.seed, &[s as u64]), ..*limits };
    let (coeffs, set, end, failure) = match lemma3_build(&f, block_eps(s), start, &sub) {
        Ok(r) => (r.coeffs, r.set, r.m + 1, None),
        Err(e @ (Error::ConstructionFailed { .. } | Error::FrequencyBudgetExceeded { .. }))
            if on_failure == OnFailure::Fallback =>
        {
            let zero_set = zero_set(&f)?;
            (Vec::new(), zero_set, start + 1, Some(e.to_string()))
        }
        Err(e) => return Err(e),
    };
    let report = verify_block(s, &f, start, end, &coeffs, &set, limits.mode, limits.pairs)?;
    let h = block_height(&f, &coeffs)?;
    Ok(BlockRecord { s, f, start, end, coeffs, set, h, report, failure })
}

fn zero_set(f: &StepFunction2D) -> Result<DyadicSet2D> {
    let ranks = f.max_ranks();
    let g = f.rasterize::<f64>(ranks)?;
    DyadicSet2D::from_mask(ranks, g.values().iter().map(|v| *v == 0.0).collect())
}

/// `h_s = ‖f_s‖_C + max_rect ‖S‖_C + max_sph ‖S‖_C + 1`.
pub fn block_height(f: &StepFunction2D, coeffs: &[((u64, u64), f64)]) -> Result<f64> {
    let (kmax, smax) = max_freqs(coeffs.iter().map(|c| c.0));
    let (rect, sph) = rect_and_sph_sup(coeffs, (resolving_rank(kmax), resolving_rank(smax)))?;
    Ok(f.sup_exact().to_f64() + rect + sph + 1.0)
}

/// Independent check of the block conditions, recomputed from raw data.
#[allow(clippy::too_many_arguments)]
pub fn verify_block(
    s: usize,
    f: &StepFunction2D,
    start: u64,
    end: u64,
    coeffs: &[((u64, u64), f64)],
    set: &DyadicSet2D,
    mode: Mode,
    pairs: PairLimits,
) -> Result<Report> {
    let eps = block_eps(s);
    let (kmax, smax) = max_freqs(coeffs.iter().map(|c| c.0));
    let ranks = finest(finest((resolving_rank(kmax), resolving_rank(smax)), f.max_ranks()), set.ranks());
    let e = set.refine(ranks)?;
    let fg = f.rasterize::<f64>(ranks)?;
    let range = start..end;
    let mut report = Report::new();
    report.push(Check::holds(
        "support in [N_{s-1}, N_s)^2",
        coeffs.iter().all(|((k, nu), _)| range.contains(k) && range.contains(nu)),
    ));
    let p = crate::series::synthesize(coeffs, ranks)?;
    let deviation = p
        .values()
        .iter()
        .zip(fg.values())
        .zip(e.mask())
        .filter(|(_, &inside)| inside)
        .fold(0.0f64, |m, ((a, b), _)| m.max((a - b).abs()));
    report.push(Check::le("(4.3) |P_s - f_s| on E_s", deviation, 0.0));
    report.push(Check::lt_exact("(4.4) |T \\ E_s|", 1.0 - e.measure(), eps));
    let decay = (-2.0 * s as f64).exp2();
    report.push(Check::lt("(4.5) sum |c|^(2+4^-s)", coeff_power_norm(coeffs, 2.0 + decay)?, decay));
    let budget = fg.map(|v| 2.0 * v.abs());
    match mode {
        Mode::Strict => {
            let q = rect_plus_sph_excess(coeffs, ranks, &budget, &e, pairs)?;
            report.push(Check::le("(4.6) rect + sph excess", q.excess, eps).with_note(format!("{:?}", q.mode)));
        }
        Mode::Rect => {
            report.push(Check::le("(4.6) rect excess", rect_excess(coeffs, ranks, &budget, &e)?, eps));
            report.push(Check::not_claimed("(4.6) sph part", "rectangular-only mode"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::{Dyadic, DyadicInterval, DyadicRect};

    fn thin(rank: u32, i: u64, value: i64) -> StepFunction2D {
        let r = DyadicRect::new(DyadicInterval::new(rank, i).unwrap(), DyadicInterval::UNIT);
        StepFunction2D::indicator(r, Dyadic::integer(value))
    }

    #[test]
    fn zero_block_is_vacuous() {
        let c = Catalog::from_entries(vec![StepFunction2D::zero()]);
        let out = build_universal(&c, 1, &Limits::default(), OnFailure::Abort).unwrap();
        assert_eq!(out.boundaries(), &[1, 2]);
        assert!(out.blocks[0].coeffs.is_empty());
        assert!(out.all_verified(), "{}", out.blocks[0].report);
        assert_eq!(out.blocks[0].h, 1.0);
    }

    #[test]
    fn two_blocks_on_disjoint_squares() {
        // a strip thin enough to sit inside the second block's exceptional set
        let c = Catalog::from_entries(vec![StepFunction2D::zero(), thin(13, 5, 1)]);
        let out = build_universal(&c, 2, &Limits::default(), OnFailure::Abort).unwrap();
        for b in &out.blocks {
            assert!(b.report.all_passed(), "block {}: {}", b.s, b.report);
            assert!(b.h >= 1.0);
        }
        assert!(out.series.is_block_diagonal());
        let n = out.boundaries();
        assert!(n.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn abort_and_fallback() {
        let c = Catalog::from_entries(vec![StepFunction2D::zero(), thin(0, 0, 1)]);
        let err = build_universal(&c, 2, &Limits::default(), OnFailure::Abort).unwrap_err();
        assert_eq!(err.completed, 1);
        assert_eq!(err.partial.depth(), 1);
        let out = build_universal(&c, 2, &Limits::default(), OnFailure::Fallback).unwrap();
        let b = &out.blocks[1];
        assert!(b.failure.is_some());
        assert!(b.coeffs.is_empty());
        let failed: Vec<_> = b.report.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, vec!["(4.4) |T \\ E_s|"]);
        assert!(!out.all_verified());
    }

    #[test]
    fn depth_beyond_catalog() {
        let c = Catalog::from_entries(vec![StepFunction2D::zero()]);
        assert!(build_universal(&c, 2, &Limits::default(), OnFailure::Abort).is_err());
    }
}
