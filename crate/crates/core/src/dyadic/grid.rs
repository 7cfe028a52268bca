use crate::{Error, Real, Result};

/// Piecewise-constant function on `[0,1)` sampled on the `2^rank` dyadic
/// cells `[i/2^rank, (i+1)/2^rank)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicGrid1D<T> {
    rank: u32,
    values: Vec<T>,
}

impl<T: Real> DyadicGrid1D<T> {
    pub fn zeros(rank: u32) -> Self {
        Self::constant(rank, T::zero())
    }

    pub fn constant(rank: u32, value: T) -> Self {
        DyadicGrid1D { rank, values: vec![value; 1usize << rank] }
    }

    pub fn from_values(values: Vec<T>) -> Result<Self> {
        if !values.len().is_power_of_two() {
            return Err(Error::Shape(format!(
                "1-D grid length {} is not a power of two",
                values.len()
            )));
        }
        Ok(DyadicGrid1D { rank: values.len().trailing_zeros(), values })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn cell_measure(&self) -> T {
        T::exp2_neg(self.rank)
    }

    /// Lossless refinement to a finer rank.
    pub fn refine(&self, rank: u32) -> Result<Self> {
        if rank < self.rank {
            return Err(Error::RankMismatch(format!(
                "cannot refine rank {} down to {}",
                self.rank, rank
            )));
        }
        let rep = 1usize << (rank - self.rank);
        let values = self.values.iter().flat_map(|&v| std::iter::repeat(v).take(rep)).collect();
        Ok(DyadicGrid1D { rank, values })
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        DyadicGrid1D { rank: self.rank, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn integral(&self) -> T {
        self.values.iter().copied().sum::<T>() * self.cell_measure()
    }

    pub fn l1(&self) -> T {
        self.values.iter().map(|v| v.abs()).sum::<T>() * self.cell_measure()
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Tensor product `self(x)·other(y)`.
    pub fn tensor(&self, other: &DyadicGrid1D<T>) -> DyadicGrid2D<T> {
        let mut values = Vec::with_capacity(self.len() * other.len());
        for &a in &self.values {
            values.extend(other.values.iter().map(|&b| a * b));
        }
        DyadicGrid2D { ranks: (self.rank, other.rank), values }
    }
}

/// Piecewise-constant function on `[0,1)^2`. Cell `(i, j)` covers
/// `[i/2^p,(i+1)/2^p) × [j/2^q,(j+1)/2^q)` and is stored at `i·2^q + j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicGrid2D<T> {
    ranks: (u32, u32),
    values: Vec<T>,
}

impl<T: Real> DyadicGrid2D<T> {
    pub fn zeros(ranks: (u32, u32)) -> Self {
        Self::constant(ranks, T::zero())
    }

    pub fn constant(ranks: (u32, u32), value: T) -> Self {
        DyadicGrid2D { ranks, values: vec![value; 1usize << (ranks.0 + ranks.1)] }
    }

    pub fn from_values(ranks: (u32, u32), values: Vec<T>) -> Result<Self> {
        if values.len() != 1usize << (ranks.0 + ranks.1) {
            return Err(Error::Shape(format!(
                "2-D grid of ranks {:?} needs {} values, got {}",
                ranks,
                1usize << (ranks.0 + ranks.1),
                values.len()
            )));
        }
        Ok(DyadicGrid2D { ranks, values })
    }

    pub fn ranks(&self) -> (u32, u32) {
        self.ranks
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[(i << self.ranks.1) + j]
    }

    pub fn cell_measure(&self) -> T {
        T::exp2_neg(self.ranks.0 + self.ranks.1)
    }

    /// Lossless refinement to ranks at least as fine on both axes.
    pub fn refine(&self, ranks: (u32, u32)) -> Result<Self> {
        if ranks == self.ranks {
            return Ok(self.clone());
        }
        if ranks.0 < self.ranks.0 || ranks.1 < self.ranks.1 {
            return Err(Error::RankMismatch(format!(
                "cannot refine ranks {:?} to {:?}",
                self.ranks, ranks
            )));
        }
        let (sx, sy) = (ranks.0 - self.ranks.0, ranks.1 - self.ranks.1);
        let q = ranks.1;
        let mut values = Vec::with_capacity(1usize << (ranks.0 + ranks.1));
        for i in 0..(1usize << ranks.0) {
            let ci = i >> sx;
            for j in 0..(1usize << q) {
                values.push(self.get(ci, j >> sy));
            }
        }
        Ok(DyadicGrid2D { ranks, values })
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        DyadicGrid2D { ranks: self.ranks, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Cellwise combination after refining both operands to common ranks.
    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        let ranks = finest(self.ranks, other.ranks);
        let a = self.refine(ranks)?;
        let b = other.refine(ranks)?;
        let values = a.values.iter().zip(&b.values).map(|(&x, &y)| f(x, y)).collect();
        Ok(DyadicGrid2D { ranks, values })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn integral(&self) -> T {
        self.values.iter().copied().sum::<T>() * self.cell_measure()
    }

    pub fn l1(&self) -> T {
        self.values.iter().map(|v| v.abs()).sum::<T>() * self.cell_measure()
    }

    /// `||g||_C`: exact maximum of `|g|` for a piecewise-constant function.
    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// `∫∫ |g|·w` with both operands refined to the finest common ranks.
    pub fn weighted_l1(&self, weight: &DyadicGrid2D<T>) -> Result<T> {
        let ranks = finest(self.ranks, weight.ranks);
        let g = self.refine(ranks)?;
        let w = weight.refine(ranks)?;
        let total: T = g.values.iter().zip(&w.values).map(|(a, b)| a.abs() * *b).sum();
        Ok(total * g.cell_measure())
    }
}

/// Finest ranks among two operands, used before any cellwise combination.
pub fn finest(a: (u32, u32), b: (u32, u32)) -> (u32, u32) {
    (a.0.max(b.0), a.1.max(b.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_l1_of_constants() {
        let g = DyadicGrid2D::<f64>::constant((2, 1), 1.0);
        assert_eq!(g.weighted_l1(&DyadicGrid2D::constant((0, 0), 1.0)).unwrap(), 1.0);
        assert_eq!(g.weighted_l1(&DyadicGrid2D::constant((3, 3), 0.5)).unwrap(), 0.5);
    }

    #[test]
    fn refine_preserves_integral_and_layout() {
        let g = DyadicGrid2D::from_values((1, 1), vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let r = g.refine((2, 1)).unwrap();
        assert_eq!(r.values(), &[1.0, 2.0, 1.0, 2.0, 3.0, 4.0, 3.0, 4.0]);
        assert_eq!(r.integral(), g.integral());
        assert!(g.refine((0, 1)).is_err());
    }

    #[test]
    fn sup_norm_of_zero_and_mixed_signs() {
        assert_eq!(DyadicGrid2D::<f64>::zeros((2, 2)).sup_norm(), 0.0);
        let g = DyadicGrid2D::from_values((1, 0), vec![-3.0, 2.0]).unwrap();
        assert_eq!(g.sup_norm(), 3.0);
    }

    #[test]
    fn tensor_embeds_one_dimensional_grids() {
        let a = DyadicGrid1D::from_values(vec![1.0f32, -1.0]).unwrap();
        let b = DyadicGrid1D::from_values(vec![2.0f32, 0.0, 1.0, 1.0]).unwrap();
        let t = a.tensor(&b);
        assert_eq!(t.ranks(), (1, 2));
        assert_eq!(t.get(1, 0), -2.0);
        assert_eq!(t.integral(), a.integral() * b.integral());
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(DyadicGrid1D::from_values(vec![0.0f64; 3]).is_err());
        assert!(DyadicGrid2D::from_values((1, 1), vec![0.0f64; 3]).is_err());
    }
}
