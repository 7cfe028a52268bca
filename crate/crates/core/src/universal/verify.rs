//! Recomputation of every stored condition from raw data, plus the weighted
//! tail estimates that the truncated weight has to earn numerically.

use super::build::{verify_block, BlockRecord, Construction};
use super::weight::WeightFunction;
use crate::check::{Check, Report};
use crate::dyadic::{finest, DyadicGrid2D, DyadicSet2D};
use crate::series::{coeff_power_norm, for_each_rect_cut, for_each_sph_cut, synthesize};
use crate::Result;

pub const TAIL_EXPONENTS: [f64; 3] = [2.1, 2.5, 3.0];

pub fn verify_construction(construction: &Construction, weight: Option<&WeightFunction>) -> Result<Report> {
    let mut report = Report::new();
    let blocks = &construction.blocks;
    let diagonal = construction.series.is_block_diagonal()
        && construction.boundaries().len() == blocks.len() + 1
        && blocks.iter().zip(construction.boundaries().windows(2)).all(|(b, w)| b.start == w[0] && b.end == w[1]);
    if !blocks.is_empty() {
        report.push(Check::holds("series blocks match records", diagonal));
    }
    for b in blocks {
        let fresh = verify_block(b.s, &b.f, b.start, b.end, &b.coeffs, &b.set, construction.mode, construction.pairs)?;
        report.extend_prefixed(&format!("block {}", b.s), &fresh);
        let h = super::build::block_height(&b.f, &b.coeffs)?;
        report.push(Check::le(format!("block {}/h_s recomputed", b.s), (h - b.h).abs(), 0.0));
    }
    if let Some(w) = weight {
        report.extend_prefixed("weight", &w.check()?);
        let mut ranks = finest(w.ranks(), construction.series.resolving_ranks());
        for b in blocks {
            ranks = finest(ranks, b.f.max_ranks());
        }
        let mu = w.grid(ranks)?;
        for s in w.n0..=blocks.len() {
            let omega = w.omega(s).expect("n0 <= s <= S");
            report.extend_prefixed(&format!("block {s}"), &tail_checks(&blocks[s - 1], omega, &mu)?);
        }
    }
    let coeffs = construction.series.coeff_vec();
    for q in TAIL_EXPONENTS {
        let v = coeff_power_norm(&coeffs, q)?;
        report.push(Check::holds(format!("(B) sum |c|^{q} finite"), v.is_finite()).with_note(format!("{v:.6e}")));
    }
    Ok(report)
}

/// (4.11)–(4.15) for one block against a weight grid `mu`.
pub fn tail_checks(block: &BlockRecord, omega: &DyadicSet2D, mu: &DyadicGrid2D<f64>) -> Result<Report> {
    let ranks = mu.ranks();
    let s = block.s;
    let decay = (-2.0 * s as f64).exp2();
    let off = omega.complement().refine(ranks)?;
    let mu_off = DyadicGrid2D::from_values(
        ranks,
        mu.values().iter().zip(off.mask()).map(|(v, o)| if *o { *v } else { 0.0 }).collect(),
    )?;
    let f = block.f.rasterize::<f64>(ranks)?;
    let f_mass = f.weighted_l1(mu)?;
    let (mut rect_off, mut rect_all, mut sph_off, mut sph_all) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut failure = None;
    let mut track = |g: &DyadicGrid2D<f64>, off_max: &mut f64, all_max: &mut f64| {
        match (g.weighted_l1(&mu_off), g.weighted_l1(mu)) {
            (Ok(a), Ok(b)) => {
                *off_max = off_max.max(a);
                *all_max = all_max.max(b);
            }
            (Err(e), _) | (_, Err(e)) => failure = Some(e),
        }
    };
    for_each_rect_cut(&block.coeffs, ranks, |_, g| track(g, &mut rect_off, &mut rect_all))?;
    for_each_sph_cut(&block.coeffs, ranks, |_, g| track(g, &mut sph_off, &mut sph_all))?;
    if let Some(e) = failure {
        return Err(e);
    }
    let p = synthesize(&block.coeffs, ranks)?;
    let mut report = Report::new();
    report.push(Check::lt("(4.11) rect off Omega_s", rect_off, decay / 3.0));
    report.push(Check::lt("(4.12) sph off Omega_s", sph_off, decay / 3.0));
    report.push(Check::lt("(4.13) |P_s - f_s|_mu", p.sub(&f)?.weighted_l1(mu)?, decay));
    report.push(Check::lt("(4.14) rect |S|_mu", rect_all, 2.0 * f_mass + decay));
    report.push(Check::lt("(4.15) sph |S|_mu", sph_all, 2.0 * f_mass + decay));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::{Dyadic, DyadicInterval, DyadicRect, StepFunction2D};
    use crate::lemma::Mode;
    use crate::series::PairLimits;

    #[test]
    fn empty_construction() {
        let c = Construction::empty(Mode::Strict, PairLimits::default());
        let r = verify_construction(&c, None).unwrap();
        assert!(r.all_passed());
        assert!(r.checks.iter().all(|c| c.name.starts_with("(B)")));
    }

    #[test]
    fn weighting_is_what_makes_the_block_error_small() {
        // f = 1 on the left column, P = 0, and that column lies off Ω_s
        let rect = DyadicRect::new(DyadicInterval::new(3, 0).unwrap(), DyadicInterval::UNIT);
        let f = StepFunction2D::indicator(rect, Dyadic::ONE);
        let omega = DyadicSet2D::from_mask((3, 0), (0..8).map(|i| i != 0).collect()).unwrap();
        let block = BlockRecord {
            s: 2,
            f,
            start: 2,
            end: 3,
            coeffs: Vec::new(),
            set: omega.clone(),
            h: 2.0,
            report: Report::new(),
            failure: None,
        };
        let weighted = DyadicGrid2D::from_values((3, 0), (0..8).map(|i| if i == 0 { 1e-3 } else { 1.0 }).collect()).unwrap();
        let r = tail_checks(&block, &omega, &weighted).unwrap();
        assert!(r.get("(4.13) |P_s - f_s|_mu").unwrap().passed(), "{r}");
        let flat = DyadicGrid2D::constant((3, 0), 1.0);
        let r = tail_checks(&block, &omega, &flat).unwrap();
        assert!(!r.get("(4.13) |P_s - f_s|_mu").unwrap().passed());
    }
}
