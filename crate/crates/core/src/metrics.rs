//! Distance-derived quantities over a trained map.
//!
//! `d(y, C)` is the distance from `y` to the nearest best-matching unit of
//! category `C`; `d_max(C)` is the largest distance of an exemplar of `C`
//! from its own best-matching unit. Relative distance divides the former
//! by the latter and the generalization degree is `exp(-rd)`.
//!
//! When `d_max = 0` the relative distance is `0` for a zero numerator and
//! `+inf` otherwise, so the generalization degree of such a category is
//! `1` on its units and `0` everywhere else.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::som::{SomMap, Stimulus, Unit};

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Map-level summary of one learned category.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryStats {
    pub name: String,
    /// Weight vectors of the exemplars' BMUs, deduplicated by exact equality.
    pub bmu_vectors: Vec<Vec<f64>>,
    /// Grid positions of those BMUs, parallel to `bmu_vectors`.
    #[serde(default)]
    pub bmu_units: Vec<Unit>,
    pub d_max: f64,
    pub exemplars: usize,
}

impl CategoryStats {
    /// Stats from explicit BMU vectors, for building models without a map.
    pub fn from_vectors(name: impl Into<String>, bmu_vectors: Vec<Vec<f64>>, d_max: f64) -> Self {
        let mut dedup: Vec<Vec<f64>> = Vec::with_capacity(bmu_vectors.len());
        for v in bmu_vectors {
            if !dedup.contains(&v) {
                dedup.push(v);
            }
        }
        CategoryStats {
            name: name.into(),
            bmu_vectors: dedup,
            bmu_units: Vec::new(),
            d_max,
            exemplars: 0,
        }
    }

    /// Number of distinct best-matching units.
    pub fn b(&self) -> usize {
        self.bmu_vectors.len()
    }
}

/// One entry per category present among the labeled stimuli, keyed by name.
pub fn category_stats(
    map: &SomMap,
    stimuli: &[Stimulus],
) -> Result<BTreeMap<String, CategoryStats>> {
    let mut out: BTreeMap<String, CategoryStats> = BTreeMap::new();
    for s in stimuli {
        let name = s
            .category
            .as_deref()
            .ok_or_else(|| Error::Data(format!("stimulus `{}` has no category", s.id)))?;
        let unit = map.find_bmu(&s.vector)?;
        let w = map.weight(unit);
        let dist = euclidean(&s.vector, w);
        let entry = out
            .entry(name.to_string())
            .or_insert_with(|| CategoryStats {
                name: name.to_string(),
                bmu_vectors: Vec::new(),
                bmu_units: Vec::new(),
                d_max: 0.0,
                exemplars: 0,
            });
        if !entry.bmu_vectors.iter().any(|v| v.as_slice() == w) {
            entry.bmu_vectors.push(w.to_vec());
            entry.bmu_units.push(unit);
        }
        entry.d_max = entry.d_max.max(dist);
        entry.exemplars += 1;
    }
    Ok(out)
}

/// `min ||y - v||` over the category's BMU vectors.
pub fn dist_to_category(y: &[f64], stats: &CategoryStats) -> Result<f64> {
    if stats.bmu_vectors.is_empty() {
        return Err(Error::UndefinedCategory(stats.name.clone()));
    }
    if let Some(v) = stats.bmu_vectors.iter().find(|v| v.len() != y.len()) {
        return Err(Error::Dimension {
            expected: v.len(),
            got: y.len(),
        });
    }
    Ok(nearest(y, stats))
}

pub(crate) fn nearest(y: &[f64], stats: &CategoryStats) -> f64 {
    stats
        .bmu_vectors
        .iter()
        .map(|v| euclidean(y, v))
        .fold(f64::INFINITY, f64::min)
}

/// Relative distance for a precomputed numerator.
pub fn relative(numerator: f64, d_max: f64) -> f64 {
    if d_max > 0.0 {
        numerator / d_max
    } else if numerator == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

pub fn relative_distance(y: &[f64], stats: &CategoryStats) -> Result<f64> {
    Ok(relative(dist_to_category(y, stats)?, stats.d_max))
}

/// `exp(-rd)`, which is exactly `0` for `rd = +inf`.
pub fn degree(rd: f64) -> f64 {
    (-rd).exp()
}

pub fn generalization_degree(y: &[f64], stats: &CategoryStats) -> Result<f64> {
    Ok(degree(relative_distance(y, stats)?))
}

/// Largest distance of any BMU of `src` from category `dst`.
pub fn bmu_set_distance(src: &CategoryStats, dst: &CategoryStats) -> Result<f64> {
    if src.bmu_vectors.is_empty() {
        return Err(Error::UndefinedCategory(src.name.clone()));
    }
    src.bmu_vectors
        .iter()
        .map(|v| dist_to_category(v, dst))
        .try_fold(0.0f64, |acc, d| Ok(acc.max(d?)))
}

/// Plausibility of `T(src) <= dst`: `exp(-bmu_set_distance / d_max(dst))`.
pub fn plausibility(src: &CategoryStats, dst: &CategoryStats) -> Result<f64> {
    Ok(degree(relative(bmu_set_distance(src, dst)?, dst.d_max)))
}
