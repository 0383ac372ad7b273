//! Kohonen self-organising maps.
//!
//! Training is fully deterministic: weights are initialised from a
//! ChaCha8 stream seeded with `SomConfig::seed` (via `seed_from_u64`), and
//! stimuli are presented in dataset order every epoch unless `shuffle` is
//! set, in which case a second ChaCha8 stream (stream id 1, same seed)
//! permutes each epoch.
//!
//! Update rule for step `t` out of `T` total steps:
//!
//! ```text
//! alpha(t) = lr0 * exp(-t * lr_decay / T)
//! sigma(t) = sigma0 * exp(-t * sigma_decay / T)
//! h(u,b,t) = exp(-|grid(u) - grid(b)|^2 / (2 sigma(t)^2))
//! w_u     <- w_u + alpha(t) * h(u,b,t) * (x - w_u)
//! ```

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::euclidean;

/// A labeled (or, for probes, unlabeled) input vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stimulus {
    pub id: String,
    pub category: Option<String>,
    pub vector: Vec<f64>,
}

impl Stimulus {
    pub fn new(id: impl Into<String>, category: impl Into<String>, vector: Vec<f64>) -> Self {
        Stimulus {
            id: id.into(),
            category: Some(category.into()),
            vector,
        }
    }

    pub fn probe(id: impl Into<String>, vector: Vec<f64>) -> Self {
        Stimulus {
            id: id.into(),
            category: None,
            vector,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SomConfig {
    pub rows: usize,
    pub cols: usize,
    pub dim: usize,
    pub epochs: usize,
    pub lr0: f64,
    pub lr_decay: f64,
    pub sigma0: f64,
    pub sigma_decay: f64,
    pub seed: u64,
    pub init_margin: f64,
    #[serde(default)]
    pub shuffle: bool,
}

impl SomConfig {
    /// Reasonable defaults for a `rows x cols` map over `dim`-dimensional input.
    pub fn new(rows: usize, cols: usize, dim: usize) -> Self {
        SomConfig {
            rows,
            cols,
            dim,
            epochs: 10,
            lr0: 0.5,
            lr_decay: 3.0,
            sigma0: (rows.max(cols) as f64 / 2.0).max(1.0),
            sigma_decay: 3.0,
            seed: 0,
            init_margin: 0.5,
            shuffle: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Config("grid must have at least one unit".into()));
        }
        if self.dim == 0 {
            return Err(Error::Config("input dimension must be positive".into()));
        }
        if !(self.lr0 > 0.0 && self.lr0 <= 1.0) {
            return Err(Error::Config(format!(
                "lr0 must lie in (0,1], got {}",
                self.lr0
            )));
        }
        if !(self.lr_decay > 0.0 && self.lr_decay.is_finite()) {
            return Err(Error::Config(format!(
                "lr_decay must be positive, got {}",
                self.lr_decay
            )));
        }
        if !(self.sigma0 > 0.0 && self.sigma0.is_finite()) {
            return Err(Error::Config(format!(
                "sigma0 must be positive, got {}",
                self.sigma0
            )));
        }
        if !(self.sigma_decay > 0.0 && self.sigma_decay.is_finite()) {
            return Err(Error::Config(format!(
                "sigma_decay must be positive, got {}",
                self.sigma_decay
            )));
        }
        if !(self.init_margin >= 0.0 && self.init_margin.is_finite()) {
            return Err(Error::Config(format!(
                "init_margin must be nonnegative, got {}",
                self.init_margin
            )));
        }
        Ok(())
    }

    pub fn units(&self) -> usize {
        self.rows * self.cols
    }
}

/// Per-dimension bounds of the input data.
#[derive(Debug, Clone, PartialEq)]
pub struct DataRange {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl DataRange {
    pub fn new(min: Vec<f64>, max: Vec<f64>) -> Result<Self> {
        if min.len() != max.len() {
            return Err(Error::Dimension {
                expected: min.len(),
                got: max.len(),
            });
        }
        if let Some(d) = (0..min.len()).find(|&d| {
            matches!(
                min[d].partial_cmp(&max[d]),
                None | Some(std::cmp::Ordering::Greater)
            )
        }) {
            return Err(Error::Config(format!(
                "range min exceeds max in dimension {d}"
            )));
        }
        Ok(DataRange { min, max })
    }

    /// Uniform `[lo, hi]` in each of `dim` dimensions.
    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        DataRange::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn of_stimuli(stimuli: &[Stimulus]) -> Result<Self> {
        let first = stimuli.first().ok_or(Error::EmptyDataset)?;
        let dim = first.vector.len();
        let mut min = first.vector.clone();
        let mut max = first.vector.clone();
        for s in stimuli {
            if s.vector.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: s.vector.len(),
                });
            }
            for (d, &v) in s.vector.iter().enumerate() {
                min[d] = min[d].min(v);
                max[d] = max[d].max(v);
            }
        }
        DataRange::new(min, max)
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }
}

/// Grid coordinate of a map unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Unit {
    pub row: usize,
    pub col: usize,
}

impl std::fmt::Display for Unit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Reported to the training observer after every step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepEvent<'a> {
    /// Zero-based index of the step just performed.
    pub step: usize,
    pub stimulus_id: &'a str,
    pub bmu: Unit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SomMap {
    config: SomConfig,
    /// Row-major, `rows * cols` vectors of length `dim`.
    weights: Vec<Vec<f64>>,
    trained_steps: u64,
}

impl SomMap {
    /// Initialises every weight component outside the data range, within
    /// `init_margin * span` of it (span = 1 for a zero-width dimension).
    pub fn init(config: SomConfig, range: &DataRange) -> Result<Self> {
        config.validate()?;
        if range.dim() != config.dim {
            return Err(Error::Dimension {
                expected: config.dim,
                got: range.dim(),
            });
        }
        let widths: Vec<f64> = (0..config.dim)
            .map(|d| {
                let span = range.max[d] - range.min[d];
                let span = if span > 0.0 { span } else { 1.0 };
                config.init_margin * span
            })
            .collect();
        if let Some(d) = widths.iter().position(|&w| w.is_nan() || w <= 0.0) {
            return Err(Error::Config(format!(
                "init_margin {} leaves no room outside the data range in dimension {d}",
                config.init_margin
            )));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut weights = Vec::with_capacity(config.units());
        for _ in 0..config.units() {
            let mut w = Vec::with_capacity(config.dim);
            #[allow(clippy::needless_range_loop)]
            for d in 0..config.dim {
                let (lo, hi, width) = (range.min[d], range.max[d], widths[d]);
                let v = loop {
                    let below: bool = rng.gen();
                    let u: f64 = rng.gen();
                    let v = if below {
                        lo - width + width * u
                    } else {
                        hi + width * (1.0 - u)
                    };
                    // Rounding can land exactly on the boundary.
                    if (below && v < lo && v >= lo - width) || (!below && v > hi && v <= hi + width)
                    {
                        break v;
                    }
                };
                w.push(v);
            }
            weights.push(w);
        }
        Ok(SomMap {
            config,
            weights,
            trained_steps: 0,
        })
    }

    /// Builds a map from explicit row-major weights.
    pub fn from_weights(
        config: SomConfig,
        weights: Vec<Vec<f64>>,
        trained_steps: u64,
    ) -> Result<Self> {
        config.validate()?;
        if weights.len() != config.units() {
            return Err(Error::Config(format!(
                "expected {} weight vectors for a {}x{} grid, got {}",
                config.units(),
                config.rows,
                config.cols,
                weights.len()
            )));
        }
        for (i, w) in weights.iter().enumerate() {
            if w.len() != config.dim {
                return Err(Error::Dimension {
                    expected: config.dim,
                    got: w.len(),
                });
            }
            if w.iter().any(|v| !v.is_finite()) {
                return Err(Error::Config(format!("weight vector {i} is not finite")));
            }
        }
        Ok(SomMap {
            config,
            weights,
            trained_steps,
        })
    }

    pub fn config(&self) -> &SomConfig {
        &self.config
    }

    pub fn trained_steps(&self) -> u64 {
        self.trained_steps
    }

    pub fn dim(&self) -> usize {
        self.config.dim
    }

    pub fn weight(&self, unit: Unit) -> &[f64] {
        &self.weights[self.index(unit)]
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn index(&self, unit: Unit) -> usize {
        unit.row * self.config.cols + unit.col
    }

    pub fn unit(&self, index: usize) -> Unit {
        Unit {
            row: index / self.config.cols,
            col: index % self.config.cols,
        }
    }

    fn check_dim(&self, vector: &[f64]) -> Result<()> {
        if vector.len() != self.config.dim {
            return Err(Error::Dimension {
                expected: self.config.dim,
                got: vector.len(),
            });
        }
        Ok(())
    }

    /// Closest unit by Euclidean distance; ties go to the smallest
    /// row-major index.
    pub fn find_bmu(&self, vector: &[f64]) -> Result<Unit> {
        self.check_dim(vector)?;
        let mut best = 0;
        let mut best_dist = f64::INFINITY;
        for (i, w) in self.weights.iter().enumerate() {
            let d = euclidean(vector, w);
            if d < best_dist {
                best = i;
                best_dist = d;
            }
        }
        Ok(self.unit(best))
    }

    /// One update for stimulus `vector` at step `t` of a `total_steps`
    /// schedule. Returns the BMU.
    pub fn train_step(&mut self, vector: &[f64], t: usize, total_steps: usize) -> Result<Unit> {
        let bmu = self.find_bmu(vector)?;
        let total = total_steps.max(1) as f64;
        let t = t as f64;
        let alpha = self.config.lr0 * (-t * self.config.lr_decay / total).exp();
        let sigma = self.config.sigma0 * (-t * self.config.sigma_decay / total).exp();
        let two_sigma_sq = 2.0 * sigma * sigma;
        for i in 0..self.weights.len() {
            let u = self.unit(i);
            let dr = u.row as f64 - bmu.row as f64;
            let dc = u.col as f64 - bmu.col as f64;
            let g2 = dr * dr + dc * dc;
            let h = if g2 == 0.0 {
                1.0
            } else if two_sigma_sq > 0.0 {
                (-g2 / two_sigma_sq).exp()
            } else {
                0.0
            };
            let rate = alpha * h;
            if rate == 0.0 {
                continue;
            }
            for (w, &x) in self.weights[i].iter_mut().zip(vector) {
                *w += rate * (x - *w);
            }
        }
        self.trained_steps += 1;
        Ok(bmu)
    }

    /// Trains for `config.epochs` epochs over `stimuli`.
    pub fn train(&mut self, stimuli: &[Stimulus]) -> Result<()> {
        self.train_with(stimuli, |_, _| {})
    }

    /// As [`SomMap::train`], calling `observer` after every step with the
    /// step event and the map state after the update.
    pub fn train_with<F>(&mut self, stimuli: &[Stimulus], mut observer: F) -> Result<()>
    where
        F: FnMut(&StepEvent<'_>, &SomMap),
    {
        if stimuli.is_empty() {
            return Err(Error::EmptyDataset);
        }
        for s in stimuli {
            self.check_dim(&s.vector)?;
            if s.category.is_none() {
                return Err(Error::Data(format!(
                    "training stimulus `{}` has no category",
                    s.id
                )));
            }
        }
        let order = presentation_order(&self.config, stimuli.len());
        let total = order.len();
        for (t, &i) in order.iter().enumerate() {
            let s = &stimuli[i];
            let bmu = self.train_step(&s.vector, t, total)?;
            let event = StepEvent {
                step: t,
                stimulus_id: &s.id,
                bmu,
            };
            observer(&event, self);
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let file = MapFile {
            config: self.config.clone(),
            weights: self
                .weights
                .chunks(self.config.cols)
                .map(|r| r.to_vec())
                .collect(),
            trained_steps: self.trained_steps,
        };
        let mut s = serde_json::to_string_pretty(&file).expect("map serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MapFile = serde_json::from_str(text).map_err(|e| Error::MapFormat {
            offset: byte_offset(text, e.line(), e.column()),
            message: e.to_string(),
        })?;
        let config = file.config;
        if file.weights.len() != config.rows || file.weights.iter().any(|r| r.len() != config.cols)
        {
            return Err(Error::Config(format!(
                "weights do not form the declared {}x{} grid",
                config.rows, config.cols
            )));
        }
        let weights = file.weights.into_iter().flatten().collect();
        SomMap::from_weights(config, weights, file.trained_steps)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        SomMap::from_json(&fs::read_to_string(path)?)
    }
}

/// Stimulus indices in presentation order across all epochs.
pub fn presentation_order(config: &SomConfig, n: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(config.epochs * n);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(1);
    let mut epoch: Vec<usize> = (0..n).collect();
    for _ in 0..config.epochs {
        if config.shuffle {
            epoch.shuffle(&mut rng);
        }
        order.extend_from_slice(&epoch);
    }
    order
}

/// Initialises a map over the stimuli's range and trains it.
pub fn train_map(config: SomConfig, stimuli: &[Stimulus]) -> Result<SomMap> {
    let range = DataRange::of_stimuli(stimuli)?;
    let mut map = SomMap::init(config, &range)?;
    map.train(stimuli)?;
    Ok(map)
}

#[derive(Serialize, Deserialize)]
struct MapFile {
    config: SomConfig,
    weights: Vec<Vec<Vec<f64>>>,
    trained_steps: u64,
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let line_start: usize = text
        .split_inclusive('\n')
        .take(line - 1)
        .map(str::len)
        .sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}
