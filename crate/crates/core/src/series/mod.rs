//! Sparse Walsh series, partial sums and subset-quantified margins.

mod margin;
mod store;
mod sums;

pub use margin::{
    integral_over, rect_and_sph_mass, rect_excess, worst_subset_margin_1d, rect_and_sph_sup, rect_plus_sph_excess, worst_subset_margin, PairLimits,
    QuantifiedSum, QuantifierMode,
};
pub use store::{coeff_power_norm, max_freqs, WalshSeries1D, WalshSeries2D};
pub use sums::{
    distinct_cuts, for_each_partial_sum_1d, for_each_rect_cut, for_each_sph_cut, radius_threshold,
    rect_partial_sum, sph_partial_sum, synthesize, synthesize_1d, PartialSumCut,
};
