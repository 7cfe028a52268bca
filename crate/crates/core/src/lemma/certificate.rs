//! Lower bounds that prove a power-sum condition cannot be met.
//!
//! Any polynomial equal to `f` off a set of measure `< budget` has
//! `Σc² = ∫P² ≥ ∫f² − sup_{|X|<budget} ∫_X f²`, and with at most `K`
//! nonzero coefficients the power mean gives
//! `Σ|c|^r ≥ K^{1−r/2}·(Σc²)^{r/2}` for `r ≥ 2`.

use crate::Infeasibility;

/// `∫f² − (largest ∫_X f² over |X| ≤ budget)` for a function given by cell
/// values and a common cell measure.
pub fn energy_floor(values: &[f64], cell: f64, budget: f64) -> f64 {
    let mut sq: Vec<f64> = values.iter().map(|v| v * v).collect();
    sq.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = sq.iter().sum::<f64>() * cell;
    let mut left = budget;
    let mut removed = 0.0;
    for v in sq {
        if left <= 0.0 || v == 0.0 {
            break;
        }
        let take = left.min(cell);
        removed += v * take;
        left -= take;
    }
    (total - removed).max(0.0)
}

/// Certificate that `Σ|c|^exponent < bound` is impossible with at most
/// `frequencies` coefficients and energy at least `energy`.
pub fn power_sum_certificate(energy: f64, frequencies: f64, exponent: f64, bound: f64) -> Option<Infeasibility> {
    if energy <= 0.0 || frequencies <= 0.0 {
        return None;
    }
    let lower = frequencies.powf(1.0 - exponent / 2.0) * energy.powf(exponent / 2.0);
    (lower >= bound).then_some(Infeasibility {
        exponent,
        bound,
        lower_bound: lower,
        energy_floor: energy,
        frequencies,
    })
}
