//! Rademacher and Walsh-Paley functions on dyadic grids, and the fast
//! Walsh-Hadamard transform in Paley ordering.
//!
//! `r_k` at cell `i` of a rank-`p` grid is `-1` exactly when bit `p-1-k` of
//! `i` is set, so `W_n(i) = (-1)^popcount(n & rev_p(i))` with `rev_p` the
//! `p`-bit reversal.

use super::grid::{DyadicGrid1D, DyadicGrid2D};
use crate::{Error, Real, Result};

/// Reverses the low `bits` bits of `i`.
#[inline]
pub fn bit_reverse(i: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS - bits)
    }
}

/// `true` when `W_n` is negative on cell `i` of a rank-`rank` grid.
#[inline]
pub fn walsh_negative(n: u64, i: usize, rank: u32) -> bool {
    (n & bit_reverse(i, rank) as u64).count_ones() & 1 == 1
}

/// `W_n` on cell `i` as `±1`.
#[inline]
pub fn walsh_sign<T: Real>(n: u64, i: usize, rank: u32) -> T {
    if walsh_negative(n, i, rank) {
        -T::one()
    } else {
        T::one()
    }
}

/// Smallest rank at which frequency `n` is resolved (`2^rank > n`).
pub fn resolving_rank(n: u64) -> u32 {
    u64::BITS - n.leading_zeros()
}

fn check_resolution(n: u64, rank: u32) -> Result<()> {
    if rank >= 63 || n >> rank != 0 {
        return Err(Error::Resolution { needed: resolving_rank(n), have: rank });
    }
    Ok(())
}

/// Rademacher function `r_k(x) = r_0(2^k x)` on a grid with `rank > k`.
pub fn rademacher<T: Real>(k: u32, rank: u32) -> Result<DyadicGrid1D<T>> {
    if k >= rank {
        return Err(Error::Resolution { needed: k + 1, have: rank });
    }
    let bit = rank - 1 - k;
    let values = (0..1usize << rank)
        .map(|i| if (i >> bit) & 1 == 0 { T::one() } else { -T::one() })
        .collect();
    DyadicGrid1D::from_values(values)
}

/// Walsh-Paley function `W_n` on a grid with `2^rank > n`.
pub fn walsh<T: Real>(n: u64, rank: u32) -> Result<DyadicGrid1D<T>> {
    check_resolution(n, rank)?;
    let values = (0..1usize << rank).map(|i| walsh_sign(n, i, rank)).collect();
    DyadicGrid1D::from_values(values)
}

/// `W_n(x)·W_m(y)` on a rank-`ranks` grid.
pub fn walsh2<T: Real>(n: u64, m: u64, ranks: (u32, u32)) -> Result<DyadicGrid2D<T>> {
    Ok(walsh::<T>(n, ranks.0)?.tensor(&walsh(m, ranks.1)?))
}

/// Dirichlet packet `Σ_{j<2^m} W_j`, which equals `2^m` on `[0, 2^-m)` and
/// vanishes elsewhere.
pub fn dirichlet_packet<T: Real>(m: u32, rank: u32) -> Result<DyadicGrid1D<T>> {
    if m > rank {
        return Err(Error::Resolution { needed: m, have: rank });
    }
    let mut acc = DyadicGrid1D::zeros(rank);
    for j in 0..(1u64 << m) {
        let w = walsh::<T>(j, rank)?;
        for (a, b) in acc.values_mut().iter_mut().zip(w.values()) {
            *a = *a + *b;
        }
    }
    Ok(acc)
}

/// In-place unnormalized Hadamard butterfly (natural ordering).
pub fn hadamard_in_place<T: Real>(data: &mut [T]) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (data[i], data[i + h]);
                data[i] = a + b;
                data[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

fn bit_reverse_permute<T: Copy>(data: &mut [T]) {
    let bits = data.len().trailing_zeros();
    for i in 0..data.len() {
        let r = bit_reverse(i, bits);
        if r > i {
            data.swap(i, r);
        }
    }
}

/// Walsh-Paley coefficients `ĝ(j) = ∫ g·W_j`, `0 ≤ j < 2^rank`.
pub fn fwht<T: Real>(g: &DyadicGrid1D<T>) -> Vec<T> {
    let mut data = g.values().to_vec();
    bit_reverse_permute(&mut data);
    hadamard_in_place(&mut data);
    let scale = g.cell_measure();
    data.iter_mut().for_each(|v| *v = *v * scale);
    data
}

/// Synthesis `Σ_j c_j W_j` on the grid of rank `log2(c.len())`; inverse of
/// [`fwht`].
pub fn inverse_fwht<T: Real>(coeffs: &[T]) -> Result<DyadicGrid1D<T>> {
    if !coeffs.len().is_power_of_two() {
        return Err(Error::Shape(format!("{} coefficients is not a power of two", coeffs.len())));
    }
    let mut data = coeffs.to_vec();
    hadamard_in_place(&mut data);
    bit_reverse_permute(&mut data);
    DyadicGrid1D::from_values(data)
}

/// Applies `op` along every row (fixed x) and every column (fixed y).
fn along_axes<T: Real>(ranks: (u32, u32), data: &mut [T], op: impl Fn(&mut [T])) {
    let (nx, ny) = (1usize << ranks.0, 1usize << ranks.1);
    for row in data.chunks_mut(ny) {
        op(row);
    }
    let mut col = vec![T::zero(); nx];
    for j in 0..ny {
        for i in 0..nx {
            col[i] = data[i * ny + j];
        }
        op(&mut col);
        for i in 0..nx {
            data[i * ny + j] = col[i];
        }
    }
}

/// Double coefficients `ĝ(k, ν) = ∫∫ g·W_k(x)W_ν(y)` stored like the grid.
pub fn fwht2<T: Real>(g: &DyadicGrid2D<T>) -> Vec<T> {
    let mut data = g.values().to_vec();
    along_axes(g.ranks(), &mut data, |v| {
        bit_reverse_permute(v);
        hadamard_in_place(v);
    });
    let scale = g.cell_measure();
    data.iter_mut().for_each(|v| *v = *v * scale);
    data
}

/// Synthesis of a dense double coefficient array; inverse of [`fwht2`].
pub fn inverse_fwht2<T: Real>(ranks: (u32, u32), coeffs: &[T]) -> Result<DyadicGrid2D<T>> {
    let mut data = coeffs.to_vec();
    if data.len() != 1usize << (ranks.0 + ranks.1) {
        return Err(Error::Shape(format!("{} coefficients for ranks {:?}", data.len(), ranks)));
    }
    along_axes(ranks, &mut data, |v| {
        hadamard_in_place(v);
        bit_reverse_permute(v);
    });
    DyadicGrid2D::from_values(ranks, data)
}
