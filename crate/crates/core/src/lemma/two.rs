//! `γ·χ_Δ` on a square as a product of two one-dimensional polynomials.

use super::one::{lemma1_build, Lemma1Result};
use super::{derive_seed, max_rank_for, Limits, Mode};
use crate::check::{Check, Report};
use crate::dyadic::walsh::resolving_rank;
use crate::dyadic::{finest, Dyadic, DyadicRect, DyadicSet2D, StepFunction1D, StepFunction2D};
use crate::series::{coeff_power_norm, max_freqs, rect_and_sph_mass, synthesize};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma2Result {
    /// Nonzero `c_{k,s} = a_k·b_s`, sorted by `(k, s)`.
    pub coeffs: Vec<((u64, u64), f64)>,
    pub set: DyadicSet2D,
    pub n: u64,
    /// Largest `x` frequency of the first factor.
    pub n1: u64,
    /// First `y` frequency allowed for the second factor.
    pub m0: u64,
    pub m: u64,
    pub first: Lemma1Result,
    /// Absent when the first factor vanishes.
    pub second: Option<Lemma1Result>,
    pub report: Report,
}

/// Smallest admissible start of the second factor.
pub fn second_start(mode: Mode, n1: u64) -> u64 {
    match mode {
        Mode::Strict => 2 * (n1 * n1 + 1),
        Mode::Rect => n1 + 1,
    }
}

pub fn lemma2_build(gamma: Dyadic, delta: f64, n: u64, rect: DyadicRect, limits: &Limits) -> Result<Lemma2Result> {
    if gamma.is_zero() {
        return Err(Error::InvalidParameter("gamma must be nonzero".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta {delta} outside (0,1)")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    // the second factor needs a band [2^a, 2^(a+1)) above M₀ below fmax
    let top = 1u64 << max_rank_for(limits.fmax).saturating_sub(1);
    let mut n1_cap = 0;
    while second_start(limits.mode, n1_cap + 1) <= top {
        n1_cap += 1;
    }
    if n1_cap < n {
        return Err(Error::FrequencyBudgetExceeded { needed: second_start(limits.mode, n), cap: limits.fmax });
    }
    let f1 = StepFunction1D::indicator(rect.x, gamma);
    let first = lemma1_build(&f1, n, delta / 2.0, &limits.lemma1(n1_cap + 1, derive_seed(limits.seed, &[1])))
        .map_err(|e| widen_budget(e, limits.fmax))?;
    let (coeffs, second, n1, m0, m, set) = if first.poly.is_zero() {
        let set = first.set.product(&crate::dyadic::DyadicSet1D::full(0));
        (Vec::new(), None, n, n, n, set)
    } else {
        let n1 = first.n;
        let m0 = second_start(limits.mode, n1);
        if m0 >= limits.fmax {
            return Err(Error::FrequencyBudgetExceeded { needed: m0, cap: limits.fmax });
        }
        let f2 = StepFunction1D::indicator(rect.y, Dyadic::ONE);
        let second = lemma1_build(&f2, m0, delta / 2.0, &limits.lemma1(limits.fmax, derive_seed(limits.seed, &[2])))?;
        let coeffs: Vec<_> = first
            .poly
            .iter()
            .flat_map(|(k, a)| second.poly.iter().map(move |(s, b)| ((k, s), a * b)))
            .filter(|(_, c)| *c != 0.0)
            .collect();
        let set = first.set.product(&second.set);
        let m = second.n;
        (coeffs, Some(second), n1, m0, m, set)
    };
    let report = lemma2_verify(gamma, delta, n, rect, limits.mode, &coeffs, &set)?;
    Ok(Lemma2Result { coeffs, set, n, n1, m0, m, first, second, report })
}

fn widen_budget(e: Error, fmax: u64) -> Error {
    match e {
        Error::FrequencyBudgetExceeded { needed, .. } => Error::FrequencyBudgetExceeded { needed, cap: fmax },
        other => other,
    }
}

/// Independent check of conditions (1)–(4) and the support gap.
pub fn lemma2_verify(
    gamma: Dyadic,
    delta: f64,
    n: u64,
    rect: DyadicRect,
    mode: Mode,
    coeffs: &[((u64, u64), f64)],
    set: &DyadicSet2D,
) -> Result<Report> {
    let target = StepFunction2D::indicator(rect, gamma);
    let (kmax, smax) = max_freqs(coeffs.iter().map(|c| c.0));
    let ranks = finest(
        finest((resolving_rank(kmax), resolving_rank(smax)), target.max_ranks()),
        set.ranks(),
    );
    let mut report = Report::new();
    report.push(Check::holds("support in [N, M]^2", coeffs.iter().all(|((k, s), _)| *k >= n && *s >= n)));
    let smin = coeffs.iter().map(|((_, s), _)| *s).min();
    let gap_ok = smin.map_or(true, |s| s >= second_start(mode, kmax));
    report.push(Check::holds(
        match mode {
            Mode::Strict => "gap M0 = 2(N1^2+1)",
            Mode::Rect => "gap M0 = N1+1",
        },
        gap_ok,
    ));
    let e = set.refine(ranks)?;
    report.push(Check::lt_exact("(1) |T \\ E| < delta", 1.0 - e.measure(), delta));
    report.push(Check::lt("(2) sum |c|^(2+delta) < delta", coeff_power_norm(coeffs, 2.0 + delta)?, delta));
    let p = synthesize(coeffs, ranks)?;
    let f = target.rasterize::<f64>(ranks)?;
    let deviation = p
        .values()
        .iter()
        .zip(f.values())
        .zip(e.mask())
        .filter(|(_, &inside)| inside)
        .fold(0.0f64, |m, ((a, b), _)| m.max((a - b).abs()));
    report.push(Check::le("(3) |P - gamma chi| on E", deviation, 0.0));
    let budget = 16.0 * (gamma.abs() * rect.area()).to_f64();
    let (rect_mass, sph_mass) = rect_and_sph_mass(coeffs, ranks, &e)?;
    match mode {
        Mode::Strict => report.push(Check::le("(4) rect + sph <= 16|g||D|", rect_mass + sph_mass, budget)),
        Mode::Rect => {
            report.push(Check::le("(4) rect <= 16|g||D|", rect_mass, budget));
            report.push(Check::not_claimed("(4) sph part", "rectangular-only mode"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::DyadicInterval;
    use crate::series::synthesize_1d;

    fn square(rank: u32, i: u64, j: u64) -> DyadicRect {
        DyadicRect::new(DyadicInterval::new(rank, i).unwrap(), DyadicInterval::new(rank, j).unwrap())
    }

    #[test]
    fn gap_formula() {
        assert_eq!(second_start(Mode::Strict, 3), 20);
        assert_eq!(second_start(Mode::Rect, 3), 4);
    }

    #[test]
    fn near_unit_delta_quarter_square() {
        let r = lemma2_build(Dyadic::ONE, 0.9, 2, square(1, 0, 0), &Limits::default()).unwrap();
        assert!(r.report.all_passed(), "{}", r.report);
        if let Some(second) = &r.second {
            assert!(r.m0 == 2 * (r.n1 * r.n1 + 1));
            assert!(second.poly.min_freq().unwrap() >= r.m0);
            // P equals the tensor product of the two factors
            let ranks = (r.first.rank, second.rank);
            let p = synthesize(&r.coeffs, ranks).unwrap();
            let a = synthesize_1d(&r.first.poly, ranks.0).unwrap();
            let b = synthesize_1d(&second.poly, ranks.1).unwrap();
            let t = a.tensor(&b);
            for (x, y) in p.values().iter().zip(t.values()) {
                assert!((x - y).abs() < 1e-12);
            }
        }
        assert!(r.set.measure() > 1.0 - 0.9);
    }

    #[test]
    fn budget_error_when_gap_cannot_fit() {
        let limits = Limits { fmax: 64, ..Limits::default() };
        match lemma2_build(Dyadic::ONE, 0.5, 8, square(1, 0, 0), &limits) {
            Err(Error::FrequencyBudgetExceeded { cap, .. }) => assert_eq!(cap, 64),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn verifier_rejects_a_corrupted_product() {
        let r = lemma2_build(Dyadic::ONE, 0.9, 2, square(1, 0, 0), &Limits::default()).unwrap();
        let mut bad = r.coeffs.clone();
        if bad.is_empty() {
            bad.push(((2, 40), 0.75));
        } else {
            bad[0].1 += 0.5;
        }
        let report = lemma2_verify(Dyadic::ONE, 0.9, 2, square(1, 0, 0), Mode::Strict, &bad, &r.set).unwrap();
        assert!(!report.all_passed());
    }
}
