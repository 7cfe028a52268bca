//! Finite, repeated enumeration of dyadic step functions.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::dyadic::{Dyadic, DyadicInterval, DyadicRect, StepFunction2D};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogParams {
    /// Largest stratum `t`; stratum `t` is constant on the `2^t × 2^t` partition.
    pub max_rank: u32,
    /// Values in stratum `t` are `j/2^t` with `|j| ≤ value_bound`.
    pub value_bound: i64,
    pub repeats: usize,
    /// Guard on the total length, repeats included.
    pub max_entries: usize,
}

impl Default for CatalogParams {
    fn default() -> Self {
        CatalogParams { max_rank: 1, value_bound: 1, repeats: 3, max_entries: 1 << 20 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub params: Option<CatalogParams>,
    pub entries: Vec<StepFunction2D>,
}

impl Catalog {
    /// A hand-made catalog, used as given.
    pub fn from_entries(entries: Vec<StepFunction2D>) -> Self {
        Catalog { params: None, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry for block `s` (1-based, as in the block numbering).
    pub fn for_block(&self, s: usize) -> Option<&StepFunction2D> {
        s.checked_sub(1).and_then(|i| self.entries.get(i))
    }
}

fn stratum_size(t: u32, v: i64) -> Option<usize> {
    let digits = usize::try_from(2 * v + 1).ok()?;
    let cells = 1u32.checked_shl(2 * t)?;
    digits.checked_pow(cells)
}

pub fn generate_catalog(params: CatalogParams) -> Result<Catalog> {
    if params.value_bound < 0 || params.repeats == 0 {
        return Err(Error::InvalidParameter("catalog needs value_bound >= 0 and repeats >= 1".into()));
    }
    let mut total = 0usize;
    for t in 0..=params.max_rank {
        total = stratum_size(t, params.value_bound)
            .and_then(|n| total.checked_add(n))
            .filter(|n| n.saturating_mul(params.repeats) <= params.max_entries)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "catalog with rank {} and value bound {} exceeds {} entries",
                    params.max_rank, params.value_bound, params.max_entries
                ))
            })?;
    }
    let top = params.max_rank;
    let side = 1usize << top;
    let mut seen: HashSet<Vec<Dyadic>> = HashSet::new();
    let mut distinct = vec![StepFunction2D::zero()];
    seen.insert(vec![Dyadic::ZERO; side * side]);
    for t in 0..=top {
        let n = 1usize << t;
        let cells = n * n;
        let v = params.value_bound;
        let mut digits = vec![-v; cells];
        loop {
            // key: values on the finest partition, row-major
            let shift = top - t;
            let key: Vec<Dyadic> = (0..side * side)
                .map(|c| {
                    let (i, j) = (c / side >> shift, c % side >> shift);
                    Dyadic::new(digits[i * n + j], t)
                })
                .collect();
            if seen.insert(key) {
                let pieces = digits
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d != 0)
                    .map(|(c, &d)| {
                        let rect = DyadicRect::new(
                            DyadicInterval::new(t, (c / n) as u64).expect("in range"),
                            DyadicInterval::new(t, (c % n) as u64).expect("in range"),
                        );
                        (rect, Dyadic::new(d, t))
                    })
                    .collect();
                distinct.push(StepFunction2D::new(pieces)?);
            }
            // odometer, last cell fastest
            let mut pos = cells;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                if digits[pos] < v {
                    digits[pos] += 1;
                    break;
                }
                digits[pos] = -v;
            }
            if digits.iter().all(|&d| d == -v) {
                break;
            }
        }
    }
    let entries = (0..params.repeats).flat_map(|_| distinct.iter().cloned()).collect();
    Ok(Catalog { params: Some(params), entries })
}
