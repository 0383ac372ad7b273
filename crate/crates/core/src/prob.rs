//! Probabilities of fuzzy concepts over a discrete distribution on the
//! domain: `P(C) = sum_d C^I(d) p(d)`, with the conditional
//! `P(C | D) = P(D and C) / P(D)`.

use crate::error::{Error, Result};
use crate::fuzzy::FuzzyModel;
use crate::lang::Concept;

/// Tolerance on the total mass of an accepted distribution.
pub const MASS_TOLERANCE: f64 = 1e-12;
/// Totals within this distance of 1 are renormalized instead of rejected.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct ProbModel {
    fuzzy: FuzzyModel,
    mass: Vec<f64>,
    uniform: bool,
}

impl ProbModel {
    /// Uniform distribution over the domain.
    pub fn uniform(fuzzy: FuzzyModel) -> Result<Self> {
        guard(&fuzzy)?;
        let n = fuzzy.domain().len();
        if n == 0 {
            return Err(Error::EmptyDomain);
        }
        Ok(ProbModel {
            mass: vec![1.0 / n as f64; n],
            fuzzy,
            uniform: true,
        })
    }

    /// Per-element masses; elements not listed get mass 0. Returns whether
    /// the masses had to be renormalized.
    pub fn with_masses(fuzzy: FuzzyModel, masses: &[(String, f64)]) -> Result<(Self, bool)> {
        guard(&fuzzy)?;
        let mut mass = vec![0.0; fuzzy.domain().len()];
        let mut seen = vec![false; mass.len()];
        for (id, m) in masses {
            let i = fuzzy.domain().position(id)?;
            if seen[i] {
                return Err(Error::Distribution(format!("element `{id}` listed twice")));
            }
            if !m.is_finite() || *m < 0.0 {
                return Err(Error::Distribution(format!(
                    "mass of `{id}` must be a nonnegative number"
                )));
            }
            seen[i] = true;
            mass[i] = *m;
        }
        let total: f64 = mass.iter().sum();
        let renormalized = (total - 1.0).abs() > MASS_TOLERANCE;
        if (total - 1.0).abs() > RENORMALIZE_TOLERANCE {
            return Err(Error::Distribution(format!(
                "masses sum to {total}, expected 1"
            )));
        }
        if renormalized {
            mass.iter_mut().for_each(|m| *m /= total);
        }
        let uniform = mass.windows(2).all(|w| w[0] == w[1]);
        Ok((
            ProbModel {
                fuzzy,
                mass,
                uniform,
            },
            renormalized,
        ))
    }

    pub fn fuzzy(&self) -> &FuzzyModel {
        &self.fuzzy
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn mass(&self, x: &str) -> Result<f64> {
        Ok(self.mass[self.fuzzy.domain().position(x)?])
    }

    fn weighted(&self, membership: &[f64]) -> f64 {
        if self.uniform {
            // One division keeps P(top) exactly 1.
            return membership.iter().sum::<f64>() / membership.len() as f64;
        }
        membership.iter().zip(&self.mass).map(|(m, p)| m * p).sum()
    }

    /// `P(C)`.
    pub fn prob(&self, c: &Concept) -> Result<f64> {
        Ok(self.weighted(&self.fuzzy.membership_vector(c)?))
    }

    /// `P(C | D)`.
    pub fn cond_prob(&self, c: &Concept, given: &Concept) -> Result<f64> {
        let g = self.fuzzy.membership_vector(given)?;
        if self.weighted(&g) == 0.0 {
            return Err(Error::UndefinedConditional(format!("P({given}) = 0")));
        }
        self.cond_prob_membership(c, &g)
    }

    /// `P(C | D)` for a conditioning event given as a membership function
    /// over the domain, such as a crisp singleton.
    pub fn cond_prob_membership(&self, c: &Concept, given: &[f64]) -> Result<f64> {
        if given.len() != self.mass.len() {
            return Err(Error::Dimension {
                expected: self.mass.len(),
                got: given.len(),
            });
        }
        let denom = self.weighted(given);
        if denom == 0.0 {
            return Err(Error::UndefinedConditional(
                "conditioning event has probability 0".into(),
            ));
        }
        let f = self.fuzzy.family();
        let m = self.fuzzy.membership_vector(c)?;
        let joint: Vec<f64> = given.iter().zip(&m).map(|(g, c)| f.tnorm(*g, *c)).collect();
        Ok(self.weighted(&joint) / denom)
    }

    /// Crisp membership function of `{x}`.
    pub fn singleton(&self, x: &str) -> Result<Vec<f64>> {
        let i = self.fuzzy.domain().position(x)?;
        let mut v = vec![0.0; self.mass.len()];
        v[i] = 1.0;
        Ok(v)
    }

    /// `P(C | x) = C^I(x)`.
    pub fn prob_given_element(&self, c: &Concept, x: &str) -> Result<f64> {
        if self.mass(x)? == 0.0 {
            return Err(Error::UndefinedConditional(format!("p({x}) = 0")));
        }
        self.fuzzy.membership(c, x)
    }

    /// `M(C) = sum_x C^I(x)`.
    pub fn concept_size(&self, c: &Concept) -> Result<f64> {
        Ok(self.fuzzy.membership_vector(c)?.iter().sum())
    }

    /// `P(x | C)`: `C^I(x) / M(C)` under a uniform distribution, otherwise
    /// `P({x} and C) / P(C)`.
    pub fn likelihood(&self, x: &str, c: &Concept) -> Result<f64> {
        if self.uniform {
            let size = self.concept_size(c)?;
            if size == 0.0 {
                return Err(Error::UndefinedConditional(format!("M({c}) = 0")));
            }
            return Ok(self.fuzzy.membership(c, x)? / size);
        }
        let p = self.prob(c)?;
        if p == 0.0 {
            return Err(Error::UndefinedConditional(format!("P({c}) = 0")));
        }
        let f = self.fuzzy.family();
        let s = self.singleton(x)?;
        let m = self.fuzzy.membership_vector(c)?;
        let joint: Vec<f64> = s.iter().zip(&m).map(|(a, b)| f.tnorm(*a, *b)).collect();
        Ok(self.weighted(&joint) / p)
    }
}

fn guard(fuzzy: &FuzzyModel) -> Result<()> {
    let f = fuzzy.family();
    if f.is_probability_compatible() {
        Ok(())
    } else {
        Err(Error::IncompatibleFamily(f.name()))
    }
}
