//! The finite domain of possible stimuli shared by all three semantics.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::som::{SomMap, Stimulus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ElementKind {
    InputStimulus,
    BmuElement,
    Probe,
}

impl ElementKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ElementKind::InputStimulus => "input",
            ElementKind::BmuElement => "bmu",
            ElementKind::Probe => "probe",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainElement {
    pub id: String,
    pub vector: Vec<f64>,
    pub kind: ElementKind,
}

/// Ordered, id-indexed list of domain elements.
#[derive(Debug, Clone, Default)]
pub struct Domain {
    elements: Vec<DomainElement>,
    index: HashMap<String, usize>,
}

impl Domain {
    pub fn new(elements: Vec<DomainElement>) -> Result<Self> {
        let mut index = HashMap::with_capacity(elements.len());
        let dim = elements.first().map(|e| e.vector.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.id.clone(), i).is_some() {
                return Err(Error::Data(format!(
                    "duplicate domain element id `{}`",
                    e.id
                )));
            }
            if Some(e.vector.len()) != dim {
                return Err(Error::Dimension {
                    expected: dim.unwrap_or(0),
                    got: e.vector.len(),
                });
            }
            if e.vector.iter().any(|v| !v.is_finite()) {
                return Err(Error::Data(format!(
                    "element `{}` has a non-finite component",
                    e.id
                )));
            }
        }
        Ok(Domain { elements, index })
    }

    /// Input stimuli, then one element per distinct BMU vector of
    /// `for_bmus` (in first-seen order), then probes.
    pub fn from_map(
        map: &SomMap,
        stimuli: &[Stimulus],
        for_bmus: &[Stimulus],
        probes: &[Stimulus],
    ) -> Result<Self> {
        let mut elements = Vec::with_capacity(stimuli.len() * 2 + probes.len());
        for s in stimuli {
            elements.push(DomainElement {
                id: s.id.clone(),
                vector: s.vector.clone(),
                kind: ElementKind::InputStimulus,
            });
        }
        let mut seen: Vec<&[f64]> = Vec::new();
        for s in for_bmus {
            let unit = map.find_bmu(&s.vector)?;
            let w = map.weight(unit);
            if !seen.contains(&w) {
                seen.push(w);
                elements.push(DomainElement {
                    id: bmu_id(unit.row, unit.col),
                    vector: w.to_vec(),
                    kind: ElementKind::BmuElement,
                });
            }
        }
        for p in probes {
            if p.vector.len() != map.dim() {
                return Err(Error::Dimension {
                    expected: map.dim(),
                    got: p.vector.len(),
                });
            }
            elements.push(DomainElement {
                id: p.id.clone(),
                vector: p.vector.clone(),
                kind: ElementKind::Probe,
            });
        }
        Domain::new(elements)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[DomainElement] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &DomainElement {
        &self.elements[i]
    }

    pub fn position(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.elements.iter().map(|e| e.id.as_str())
    }
}

/// Identifier of the domain element standing for map unit `(row, col)`.
pub fn bmu_id(row: usize, col: usize) -> String {
    format!("bmu@{row}_{col}")
}
