//! Target functions: a list of dyadic pieces or a raw grid.
//!
//! Piece lines are `x_rank x_index y_rank y_index value` with `value` a
//! dyadic rational (`3/4`, `-1`, `0.375`). Grid files are CSV with `2^a`
//! rows (x cells) of `2^b` values (y cells). `#` starts a comment.

use std::path::Path;

use crate::dyadic::{finest, Dyadic, DyadicGrid2D, DyadicInterval, DyadicRect, StepFunction2D};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    Pieces(StepFunction2D),
    Grid(DyadicGrid2D<f64>),
}

impl Target {
    pub fn ranks(&self) -> (u32, u32) {
        match self {
            Target::Pieces(f) => f.max_ranks(),
            Target::Grid(g) => g.ranks(),
        }
    }

    /// Values on a grid at least as fine as the target's own ranks.
    pub fn to_grid(&self, ranks: (u32, u32)) -> Result<DyadicGrid2D<f64>> {
        let ranks = finest(ranks, self.ranks());
        match self {
            Target::Pieces(f) => f.rasterize(ranks),
            Target::Grid(g) => g.refine(ranks),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        parse_target(&text, &path.display().to_string())
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn parse_target(text: &str, origin: &str) -> Result<Target> {
    let first = content_lines(text).next();
    match first {
        None => Ok(Target::Pieces(StepFunction2D::zero())),
        Some((_, l)) if l.contains(',') => parse_grid(text, origin).map(Target::Grid),
        Some(_) => parse_pieces(text, origin).map(Target::Pieces),
    }
}

fn parse_pieces(text: &str, origin: &str) -> Result<StepFunction2D> {
    let mut pieces = Vec::new();
    for (line, l) in content_lines(text) {
        let err = |message: String| Error::Parse { location: format!("{origin}:{line}"), message };
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(err(format!("expected 5 fields, found {}", fields.len())));
        }
        let int = |s: &str| s.parse::<u64>().map_err(|_| err(format!("not a nonnegative integer: {s}")));
        let rank = |s: &str| s.parse::<u32>().map_err(|_| err(format!("not a rank: {s}")));
        let x = DyadicInterval::new(rank(fields[0])?, int(fields[1])?).map_err(|e| err(e.to_string()))?;
        let y = DyadicInterval::new(rank(fields[2])?, int(fields[3])?).map_err(|e| err(e.to_string()))?;
        let v: Dyadic = fields[4].parse().map_err(|e: crate::dyadic::ParseDyadicError| err(e.to_string()))?;
        pieces.push((DyadicRect::new(x, y), v));
    }
    StepFunction2D::new(pieces).map_err(|e| Error::Parse { location: origin.to_string(), message: e.to_string() })
}

fn parse_grid(text: &str, origin: &str) -> Result<DyadicGrid2D<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, l) in content_lines(text) {
        let row = l
            .split(',')
            .map(|s| {
                s.trim().parse::<f64>().map_err(|_| Error::Parse {
                    location: format!("{origin}:{line}"),
                    message: format!("not a number: {}", s.trim()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let shape_err = |message: String| Error::Parse { location: origin.to_string(), message };
    let nx = rows.len();
    let ny = rows[0].len();
    if !nx.is_power_of_two() || !ny.is_power_of_two() || rows.iter().any(|r| r.len() != ny) {
        return Err(shape_err(format!("grid must be 2^a rows of 2^b values, found {nx} rows")));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(shape_err("grid values must be finite".into()));
    }
    let ranks = (nx.trailing_zeros(), ny.trailing_zeros());
    DyadicGrid2D::from_values(ranks, rows.into_iter().flatten().collect())
}
