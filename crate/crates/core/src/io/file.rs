//! Versioned JSON series file.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::check::Report;
use crate::dyadic::{DyadicSet2D, RleMask, StepFunction2D};
use crate::lemma::Limits;
use crate::universal::{BlockRecord, CatalogParams, Construction, OnFailure, WeightFunction, WeightLevel};
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

/// Everything that determines a build. Paths are deliberately absent so
/// that the same configuration reproduces the same bytes anywhere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub depth: usize,
    /// Weight parameter; no weight is built when absent.
    pub epsilon: Option<f64>,
    pub limits: Limits,
    pub catalog: CatalogParams,
    pub on_failure: OnFailure,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            depth: 2,
            epsilon: None,
            limits: Limits::default(),
            catalog: CatalogParams::default(),
            on_failure: OnFailure::Fallback,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(e) = self.epsilon {
            if !(e > 0.0 && e < 1.0) {
                return Err(Error::InvalidParameter(format!("epsilon {e} outside (0,1)")));
            }
        }
        if self.limits.fmax < 2 {
            return Err(Error::InvalidParameter("fmax must be at least 2".into()));
        }
        if self.catalog.repeats == 0 {
            return Err(Error::InvalidParameter("catalog repeats must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockEntry {
    pub s: usize,
    pub f: StepFunction2D,
    pub start: u64,
    pub end: u64,
    /// `(k, ν, c)` sorted by `(k, ν)`.
    pub coeffs: Vec<(u64, u64, f64)>,
    pub set: RleMask,
    pub h: f64,
    pub report: Report,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub eps: f64,
    pub n0: usize,
    pub heights: Vec<f64>,
    pub levels: Vec<WeightLevel>,
    /// `Ω_{n₀}, …, Ω_S`.
    pub omegas: Vec<RleMask>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesFile {
    pub version: u32,
    pub config: RunConfig,
    /// `N_0, …, N_S`.
    pub boundaries: Vec<u64>,
    pub blocks: Vec<BlockEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightEntry>,
}

impl SeriesFile {
    pub fn new(config: RunConfig, construction: &Construction, weight: Option<&WeightFunction>) -> Self {
        let blocks = construction
            .blocks
            .iter()
            .map(|b| {
                let mut coeffs: Vec<_> = b.coeffs.iter().map(|&((k, nu), c)| (k, nu, c)).collect();
                coeffs.sort_by_key(|&(k, nu, _)| (k, nu));
                BlockEntry {
                    s: b.s,
                    f: b.f.clone(),
                    start: b.start,
                    end: b.end,
                    coeffs,
                    set: b.set.to_rle(),
                    h: b.h,
                    report: b.report.clone(),
                    failure: b.failure.clone(),
                }
            })
            .collect();
        let weight = weight.map(|w| WeightEntry {
            eps: w.eps,
            n0: w.n0,
            heights: w.heights.clone(),
            levels: w.levels.clone(),
            omegas: w.omegas.iter().map(DyadicSet2D::to_rle).collect(),
        });
        SeriesFile {
            version: FORMAT_VERSION,
            config,
            boundaries: construction.boundaries().to_vec(),
            blocks,
            weight,
        }
    }

    /// Rebuilds the in-memory objects, checking structural consistency.
    pub fn to_construction(&self) -> Result<(Construction, Option<WeightFunction>)> {
        let parse = |location: String, message: String| Error::Parse { location, message };
        if self.version != FORMAT_VERSION {
            return Err(parse("version".into(), format!("unsupported format version {}", self.version)));
        }
        let limits = self.config.limits;
        let mut out = Construction::empty(limits.mode, limits.pairs);
        for (i, b) in self.blocks.iter().enumerate() {
            let at = |field: &str| format!("blocks[{i}].{field}");
            if b.s != i + 1 {
                return Err(parse(at("s"), format!("expected block {}, found {}", i + 1, b.s)));
            }
            if !b.coeffs.windows(2).all(|w| (w[0].0, w[0].1) < (w[1].0, w[1].1)) {
                return Err(parse(at("coeffs"), "coefficients not strictly sorted by (k, nu)".into()));
            }
            let coeffs: Vec<((u64, u64), f64)> = b.coeffs.iter().map(|&(k, nu, c)| ((k, nu), c)).collect();
            let set = DyadicSet2D::from_rle(&b.set).map_err(|e| parse(at("set"), e.to_string()))?;
            let f = StepFunction2D::new(b.f.pieces().to_vec()).map_err(|e| parse(at("f"), e.to_string()))?;
            if *out.boundaries().last().unwrap() != b.start {
                return Err(parse(at("start"), format!("block starts at {} after {:?}", b.start, out.boundaries())));
            }
            out.series
                .push_block(b.end, coeffs.iter().copied())
                .map_err(|e| parse(at("coeffs"), e.to_string()))?;
            out.blocks.push(BlockRecord {
                s: b.s,
                f,
                start: b.start,
                end: b.end,
                coeffs,
                set,
                h: b.h,
                report: b.report.clone(),
                failure: b.failure.clone(),
            });
        }
        if out.boundaries() != self.boundaries.as_slice() {
            return Err(parse("boundaries".into(), "do not match the blocks".into()));
        }
        let weight = match &self.weight {
            None => None,
            Some(w) => {
                let omegas = w
                    .omegas
                    .iter()
                    .enumerate()
                    .map(|(i, r)| DyadicSet2D::from_rle(r).map_err(|e| parse(format!("weight.omegas[{i}]"), e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                if omegas.is_empty() || w.heights.len() != self.blocks.len() || omegas.len() != w.levels.len() + 1 {
                    return Err(parse("weight".into(), "level counts do not match the depth".into()));
                }
                Some(WeightFunction {
                    eps: w.eps,
                    n0: w.n0,
                    heights: w.heights.clone(),
                    omegas,
                    levels: w.levels.clone(),
                })
            }
        };
        Ok((out, weight))
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("{origin}:{}:{}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json()?.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_json(&text, &path.display().to_string())
    }
}

/// Writes next to the destination, then renames over it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::InvalidParameter(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    drop(f);
    fs::rename(&tmp, path)?;
    Ok(())
}

