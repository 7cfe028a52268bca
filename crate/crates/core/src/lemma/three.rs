//! A step function on the square as a sum of frequency-disjoint products.

use super::two::{lemma2_build, Lemma2Result};
use super::{derive_seed, Limits, Mode};
use crate::check::{Check, Report};
use crate::dyadic::walsh::resolving_rank;
use crate::dyadic::{finest, Dyadic, DyadicRect, DyadicSet2D, StepFunction2D};
use crate::series::{coeff_power_norm, max_freqs, rect_excess, rect_plus_sph_excess, synthesize, PairLimits};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma3Result {
    pub coeffs: Vec<((u64, u64), f64)>,
    pub set: DyadicSet2D,
    pub n: u64,
    pub m: u64,
    pub eps: f64,
    /// Pieces after pre-splitting, in construction order.
    pub pieces: Vec<(DyadicRect, Dyadic)>,
    pub parts: Vec<Lemma2Result>,
    pub report: Report,
}

/// Bisects the piece with the largest `|γ|·|Δ|` until every piece has
/// `|γ|·|Δ| < eps/32`. Values are unchanged, so the function is too.
pub fn presplit(f: &StepFunction2D, eps: f64, max_pieces: usize) -> Result<Vec<(DyadicRect, Dyadic)>> {
    let threshold = eps / 32.0;
    let mut pieces = f.pieces().to_vec();
    loop {
        let weight = |(r, v): &(DyadicRect, Dyadic)| (v.abs() * r.area()).to_f64();
        let Some((i, w)) = pieces
            .iter()
            .enumerate()
            .map(|(i, p)| (i, weight(p)))
            .fold(None, |best: Option<(usize, f64)>, (i, w)| match best {
                Some((_, bw)) if bw >= w => best,
                _ => Some((i, w)),
            })
        else {
            return Ok(pieces);
        };
        if w < threshold {
            return Ok(pieces);
        }
        if pieces.len() >= max_pieces {
            return Err(Error::ConstructionFailed {
                reason: format!("pre-splitting to |g||D| < {threshold:e} needs more than {max_pieces} pieces"),
                certificate: None,
            });
        }
        let (rect, value) = pieces[i];
        let (a, b) = rect.bisect();
        pieces.splice(i..=i, [(a, value), (b, value)]);
    }
}

pub fn lemma3_build(f: &StepFunction2D, eps: f64, n: u64, limits: &Limits) -> Result<Lemma3Result> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {eps} outside (0,1)")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let pieces = presplit(f, eps, limits.max_pieces)?;
    let count = pieces.len() as f64;
    let mut parts = Vec::with_capacity(pieces.len());
    let mut start = n;
    let mut set = DyadicSet2D::full((0, 0));
    let mut coeffs = Vec::new();
    for (nu, (rect, value)) in pieces.iter().enumerate() {
        let nu1 = nu as i32 + 1;
        let delta = (eps * 2f64.powi(-(nu1 + 4))).min(eps / (16.0 * count));
        let sub = Limits { seed: derive_seed(limits.seed, &[nu as u64]), ..*limits };
        let part = lemma2_build(*value, delta, start, *rect, &sub)?;
        set = set.intersect(&part.set);
        coeffs.extend(part.coeffs.iter().copied());
        start = part.m + 1;
        parts.push(part);
    }
    coeffs.sort_by_key(|(kv, _)| *kv);
    let m = parts.last().map_or(n, |p| p.m);
    let mut report = lemma3_verify(f, eps, n, limits.mode, &coeffs, &set, limits.pairs)?;
    let disjoint = parts.windows(2).all(|w| w[1].n > w[0].m)
        && parts.iter().all(|p| p.coeffs.iter().all(|((k, s), _)| (p.n..=p.m).contains(k) && (p.n..=p.m).contains(s)));
    report.push(Check::holds("chained squares disjoint", disjoint));
    Ok(Lemma3Result { coeffs, set, n, m, eps, pieces, parts, report })
}

/// Independent check of conditions (I)–(IV).
pub fn lemma3_verify(
    f: &StepFunction2D,
    eps: f64,
    n: u64,
    mode: Mode,
    coeffs: &[((u64, u64), f64)],
    set: &DyadicSet2D,
    pairs: PairLimits,
) -> Result<Report> {
    let (kmax, smax) = max_freqs(coeffs.iter().map(|c| c.0));
    let ranks = finest(finest((resolving_rank(kmax), resolving_rank(smax)), f.max_ranks()), set.ranks());
    let e = set.refine(ranks)?;
    let fg = f.rasterize::<f64>(ranks)?;
    let mut report = Report::new();
    report.push(Check::holds("support in [N, M]^2", coeffs.iter().all(|((k, s), _)| *k >= n && *s >= n)));
    let p = synthesize(coeffs, ranks)?;
    let deviation = p
        .values()
        .iter()
        .zip(fg.values())
        .zip(e.mask())
        .filter(|(_, &inside)| inside)
        .fold(0.0f64, |m, ((a, b), _)| m.max((a - b).abs()));
    report.push(Check::le("(I) |P - f| on E", deviation, 0.0));
    report.push(Check::lt_exact("(II) |T \\ E| < eps", 1.0 - e.measure(), eps));
    report.push(Check::lt("(III) sum |c|^(2+eps) < eps", coeff_power_norm(coeffs, 2.0 + eps)?, eps));
    let budget = fg.map(|v| 2.0 * v.abs());
    match mode {
        Mode::Strict => {
            let q = rect_plus_sph_excess(coeffs, ranks, &budget, &e, pairs)?;
            report.push(Check::le("(IV) rect + sph excess", q.excess, eps).with_note(format!("{:?}", q.mode)));
        }
        Mode::Rect => {
            report.push(Check::le("(IV) rect excess", rect_excess(coeffs, ranks, &budget, &e)?, eps));
            report.push(Check::not_claimed("(IV) sph part", "rectangular-only mode"));
        }
    }
    Ok(report)
}
