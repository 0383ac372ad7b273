//! Fuzzy interpretation of a trained map.
//!
//! An atom `C` has membership `C^I(x) = exp(-rd(x, C))`; compound concepts
//! combine atom degrees with the t-norm, s-norm and negation of a chosen
//! connective family, and `(C <= D)^I` is the minimum over the domain of
//! `C^I(x) |> D^I(x)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cwm::CwmModel;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::lang::{Axiom, Cmp, Concept};
use crate::metrics::{self, CategoryStats};
use crate::som::{SomMap, Stimulus};

/// Slack applied to non-strict threshold comparisons.
pub const EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    #[default]
    Zadeh,
    Goedel,
    Lukasiewicz,
    Product,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Zadeh,
        Family::Goedel,
        Family::Lukasiewicz,
        Family::Product,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Zadeh => "zadeh",
            Family::Goedel => "goedel",
            Family::Lukasiewicz => "lukasiewicz",
            Family::Product => "product",
        }
    }

    pub fn tnorm(self, a: f64, b: f64) -> f64 {
        match self {
            Family::Zadeh | Family::Goedel => a.min(b),
            Family::Lukasiewicz => (a - (1.0 - b)).max(0.0),
            Family::Product => a * b,
        }
    }

    pub fn snorm(self, a: f64, b: f64) -> f64 {
        match self {
            Family::Zadeh | Family::Goedel => a.max(b),
            Family::Lukasiewicz => (a + b).min(1.0),
            Family::Product => a + b - a * b,
        }
    }

    pub fn implication(self, a: f64, b: f64) -> f64 {
        match self {
            Family::Zadeh => (1.0 - a).max(b),
            Family::Goedel => {
                if a <= b {
                    1.0
                } else {
                    b
                }
            }
            Family::Lukasiewicz => (1.0 - a + b).min(1.0),
            Family::Product => {
                if a == 0.0 {
                    1.0
                } else {
                    (b / a).min(1.0)
                }
            }
        }
    }

    pub fn negation(self, a: f64) -> f64 {
        match self {
            Family::Zadeh | Family::Lukasiewicz => 1.0 - a,
            Family::Goedel | Family::Product => {
                if a == 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Families under which weighted-sum probabilities of fuzzy events are
    /// additive.
    pub fn is_probability_compatible(self) -> bool {
        matches!(self, Family::Zadeh | Family::Lukasiewicz)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown logic `{s}` (expected zadeh, goedel, lukasiewicz or product)"
                ))
            })
    }
}

/// Result of evaluating a fuzzy axiom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyCheck {
    pub holds: bool,
    pub degree: f64,
    /// Element attaining the inclusion degree; `None` for assertions.
    pub witness: Option<String>,
}

/// Compares an achieved degree with a threshold.
pub fn compare(degree: f64, cmp: Cmp, n: f64) -> bool {
    match cmp {
        Cmp::Ge => degree >= n - EPSILON,
        Cmp::Le => degree <= n + EPSILON,
        Cmp::Gt => degree > n,
        Cmp::Lt => degree < n,
    }
}

#[derive(Debug, Clone)]
pub struct FuzzyModel {
    domain: Domain,
    categories: Vec<CategoryStats>,
    cat_index: HashMap<String, usize>,
    family: Family,
    /// Row-major `|domain| x k` atom memberships.
    atoms: Option<Vec<f64>>,
}

impl FuzzyModel {
    pub fn new(
        domain: Domain,
        categories: impl IntoIterator<Item = CategoryStats>,
        family: Family,
    ) -> Result<Self> {
        let mut categories: Vec<CategoryStats> = categories.into_iter().collect();
        categories.sort_by(|a, b| a.name.cmp(&b.name));
        let mut cat_index = HashMap::with_capacity(categories.len());
        for (i, c) in categories.iter().enumerate() {
            if c.bmu_vectors.is_empty() {
                return Err(Error::UndefinedCategory(c.name.clone()));
            }
            if cat_index.insert(c.name.clone(), i).is_some() {
                return Err(Error::Data(format!("duplicate category `{}`", c.name)));
            }
        }
        let mut model = FuzzyModel {
            domain,
            categories,
            cat_index,
            family,
            atoms: None,
        };
        model.set_cache(true);
        Ok(model)
    }

    /// Same domain and categories as `build_cwm` would use.
    pub fn build(
        map: &SomMap,
        stimuli: &[Stimulus],
        probes: &[Stimulus],
        family: Family,
    ) -> Result<Self> {
        let stats = metrics::category_stats(map, stimuli)?;
        let domain = Domain::from_map(map, stimuli, stimuli, probes)?;
        FuzzyModel::new(domain, stats.into_values(), family)
    }

    pub fn from_cwm(model: &CwmModel, family: Family) -> Result<Self> {
        FuzzyModel::new(model.domain().clone(), model.categories().to_vec(), family)
    }

    /// Enables or drops the atom membership table. Results are identical
    /// either way.
    pub fn set_cache(&mut self, enabled: bool) {
        self.atoms = enabled.then(|| {
            let mut table = Vec::with_capacity(self.domain.len() * self.categories.len());
            for x in 0..self.domain.len() {
                for c in 0..self.categories.len() {
                    table.push(self.atom_degree(x, c));
                }
            }
            table
        });
    }

    pub fn with_family(mut self, family: Family) -> Self {
        self.family = family;
        self
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn categories(&self) -> &[CategoryStats] {
        &self.categories
    }

    fn category(&self, name: &str) -> Result<usize> {
        self.cat_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownCategory(name.to_string()))
    }

    fn atom_degree(&self, x: usize, c: usize) -> f64 {
        let stats = &self.categories[c];
        let d = metrics::nearest(&self.domain.get(x).vector, stats);
        metrics::degree(metrics::relative(d, stats.d_max))
    }

    fn atom(&self, x: usize, c: usize) -> f64 {
        match &self.atoms {
            Some(t) => t[x * self.categories.len() + c],
            None => self.atom_degree(x, c),
        }
    }

    fn eval(&self, c: &Concept, x: usize) -> Result<f64> {
        let f = self.family;
        Ok(match c {
            Concept::Top => 1.0,
            Concept::Bot => 0.0,
            Concept::Atom(name) => self.atom(x, self.category(name)?),
            Concept::Not(inner) => f.negation(self.eval(inner, x)?),
            Concept::And(a, b) => f.tnorm(self.eval(a, x)?, self.eval(b, x)?),
            Concept::Or(a, b) => f.snorm(self.eval(a, x)?, self.eval(b, x)?),
        })
    }

    /// `C^I(x)`.
    pub fn membership(&self, c: &Concept, x: &str) -> Result<f64> {
        self.eval(c, self.domain.position(x)?)
    }

    pub fn membership_at(&self, c: &Concept, x: usize) -> Result<f64> {
        self.eval(c, x)
    }

    /// `C^I` over the whole domain, in domain order.
    pub fn membership_vector(&self, c: &Concept) -> Result<Vec<f64>> {
        (0..self.domain.len()).map(|x| self.eval(c, x)).collect()
    }

    /// `(lhs <= rhs)^I` and the element attaining it.
    pub fn inclusion_degree(&self, lhs: &Concept, rhs: &Concept) -> Result<(f64, String)> {
        let l = self.membership_vector(lhs)?;
        let r = self.membership_vector(rhs)?;
        let (mut best, mut at) = (f64::INFINITY, None);
        for (x, (a, b)) in l.iter().zip(&r).enumerate() {
            let v = self.family.implication(*a, *b);
            if v < best {
                best = v;
                at = Some(x);
            }
        }
        let at = at.ok_or(Error::EmptyDomain)?;
        Ok((best, self.domain.get(at).id.clone()))
    }

    pub fn check_fuzzy_axiom(&self, axiom: &Axiom) -> Result<FuzzyCheck> {
        match axiom {
            Axiom::FuzzyInclusion { lhs, rhs, cmp, n } => {
                let (degree, witness) = self.inclusion_degree(lhs, rhs)?;
                Ok(FuzzyCheck {
                    holds: compare(degree, *cmp, n.value()),
                    degree,
                    witness: Some(witness),
                })
            }
            Axiom::FuzzyAssertion {
                concept,
                individual,
                cmp,
                n,
            } => {
                let degree = self.membership(concept, individual)?;
                Ok(FuzzyCheck {
                    holds: compare(degree, *cmp, n.value()),
                    degree,
                    witness: None,
                })
            }
            other => Err(Error::Config(format!("`{other}` is not a fuzzy axiom"))),
        }
    }
}
