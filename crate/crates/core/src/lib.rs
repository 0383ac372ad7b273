//! Concept-level reasoning over self-organising maps.
//!
//! A map trained on labeled stimuli is read three ways: as a preferential
//! interpretation with one preference per learned category, as a fuzzy
//! interpretation whose memberships are generalization degrees, and as a
//! probability space of fuzzy events. Inclusions between categories can be
//! checked against the map and extracted as a weighted knowledge base.

pub mod cwm;
pub mod domain;
pub mod error;
pub mod fuzzy;
pub mod io;
pub mod lang;
pub mod metrics;
pub mod prob;
pub mod som;
pub mod trace;

pub use cwm::{CheckResult, CwmModel, CwmOptions, KbEntry, Method};
pub use domain::{Domain, DomainElement, ElementKind};
pub use error::{Error, Result};
pub use fuzzy::{Family, FuzzyCheck, FuzzyModel};
pub use lang::{parse_axiom, parse_concept, parse_query, Axiom, Cmp, Concept, Degree, Query};
pub use metrics::CategoryStats;
pub use prob::ProbModel;
pub use som::{train_map, DataRange, SomConfig, SomMap, Stimulus, Unit};
pub use trace::{run_trace, TraceSnapshot};
