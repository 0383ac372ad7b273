//! Training viewed as a sequence of models: snapshots of the category-level
//! knowledge base satisfied by the map as exemplars are presented.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde_json::json;

use crate::cwm::{CwmModel, CwmOptions};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::lang::{Axiom, Concept};
use crate::metrics;
use crate::som::{presentation_order, DataRange, SomConfig, SomMap, Stimulus};

#[derive(Debug, Clone, PartialEq)]
pub struct TraceSnapshot {
    /// Training steps performed before the snapshot.
    pub step: usize,
    pub satisfied: BTreeSet<Axiom>,
    pub added: BTreeSet<Axiom>,
    pub removed: BTreeSet<Axiom>,
}

/// Trains a fresh map on `stimuli`, taking a snapshot before training,
/// after every `every_k` steps, and after the last step.
///
/// A snapshot holds the strict and defeasible inclusions between the
/// categories presented so far (as `extract_kb` at threshold 0 on a model
/// whose category statistics come only from those exemplars), plus
/// `C <= bot` for every category with no exemplar presented yet.
pub fn run_trace(
    config: &SomConfig,
    stimuli: &[Stimulus],
    every_k: usize,
) -> Result<Vec<TraceSnapshot>> {
    if every_k == 0 {
        return Err(Error::Config("snapshot interval must be at least 1".into()));
    }
    if stimuli.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut names = BTreeSet::new();
    let mut index = HashMap::new();
    for (i, s) in stimuli.iter().enumerate() {
        let cat = s
            .category
            .as_deref()
            .ok_or_else(|| Error::Data(format!("training stimulus `{}` has no category", s.id)))?;
        names.insert(cat.to_string());
        if index.insert(s.id.as_str(), i).is_some() {
            return Err(Error::Data(format!("duplicate stimulus id `{}`", s.id)));
        }
    }

    let mut map = SomMap::init(config.clone(), &DataRange::of_stimuli(stimuli)?)?;
    let order = presentation_order(config, stimuli.len());
    let total = order.len();
    let mut presented = vec![false; stimuli.len()];
    let mut snapshots = vec![snapshot(&map, stimuli, &presented, &names, 0, None)?];
    for (t, &i) in order.iter().enumerate() {
        map.train_step(&stimuli[i].vector, t, total)?;
        presented[i] = true;
        let step = t + 1;
        if step % every_k == 0 || step == total {
            let prev = snapshots.last().map(|s| &s.satisfied);
            let snap = snapshot(&map, stimuli, &presented, &names, step, prev)?;
            snapshots.push(snap);
        }
    }
    Ok(snapshots)
}

fn snapshot(
    map: &SomMap,
    stimuli: &[Stimulus],
    presented: &[bool],
    names: &BTreeSet<String>,
    step: usize,
    previous: Option<&BTreeSet<Axiom>>,
) -> Result<TraceSnapshot> {
    let seen: Vec<Stimulus> = stimuli
        .iter()
        .zip(presented)
        .filter(|(_, &p)| p)
        .map(|(s, _)| s.clone())
        .collect();
    let stats = metrics::category_stats(map, &seen)?;
    let mut satisfied: BTreeSet<Axiom> = names
        .iter()
        .filter(|n| !stats.contains_key(*n))
        .map(|n| Axiom::Strict(Concept::atom(n.as_str()), Concept::Bot))
        .collect();
    let domain = Domain::from_map(map, stimuli, &seen, &[])?;
    let options = CwmOptions {
        infer_specificity: false,
        ..CwmOptions::default()
    };
    let model = CwmModel::from_parts(domain, stats.into_values(), &[], &options)?;
    satisfied.extend(model.extract_kb(0.0)?.into_iter().map(|e| e.axiom));

    let empty = BTreeSet::new();
    let prev = previous.unwrap_or(&empty);
    Ok(TraceSnapshot {
        step,
        added: satisfied.difference(prev).cloned().collect(),
        removed: prev.difference(&satisfied).cloned().collect(),
        satisfied,
    })
}

/// Text report: a `step N` line per snapshot followed by `+ axiom` and
/// `- axiom` lines for its changes.
pub fn format_text(snapshots: &[TraceSnapshot]) -> String {
    let mut out = String::new();
    for s in snapshots {
        out.push_str(&format!("step {}\n", s.step));
        for a in &s.added {
            out.push_str(&format!("+ {a}\n"));
        }
        for a in &s.removed {
            out.push_str(&format!("- {a}\n"));
        }
    }
    out
}

pub fn format_json(snapshots: &[TraceSnapshot]) -> String {
    let strings = |set: &BTreeSet<Axiom>| set.iter().map(|a| a.to_string()).collect::<Vec<_>>();
    let value: Vec<_> = snapshots
        .iter()
        .map(|s| {
            json!({
                "step": s.step,
                "satisfied": strings(&s.satisfied),
                "added": strings(&s.added),
                "removed": strings(&s.removed),
            })
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&value).expect("trace serializes");
    text.push('\n');
    text
}

/// Number of snapshots in which each axiom holds, for summaries.
pub fn persistence(snapshots: &[TraceSnapshot]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for s in snapshots {
        for a in &s.satisfied {
            *out.entry(a.to_string()).or_insert(0) += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::som::train_map;

    fn data() -> Vec<Stimulus> {
        vec![
            Stimulus::new("a1", "A", vec![0.0, 0.1]),
            Stimulus::new("a2", "A", vec![0.2, 0.0]),
            Stimulus::new("b1", "B", vec![1.0, 0.9]),
            Stimulus::new("b2", "B", vec![0.9, 1.1]),
        ]
    }

    fn config() -> SomConfig {
        let mut c = SomConfig::new(3, 3, 2);
        c.epochs = 3;
        c.seed = 7;
        c
    }

    #[test]
    fn interval_beyond_total_gives_two_snapshots() {
        let t = run_trace(&config(), &data(), 1_000).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].step, 0);
        assert_eq!(t[1].step, 12);
    }

    #[test]
    fn snapshot_steps() {
        let t = run_trace(&config(), &data(), 5).unwrap();
        let steps: Vec<usize> = t.iter().map(|s| s.step).collect();
        assert_eq!(steps, [0, 5, 10, 12]);
        assert!(run_trace(&config(), &data(), 0).is_err());
    }

    #[test]
    fn initial_state_and_first_exemplar() {
        let t = run_trace(&config(), &data(), 1).unwrap();
        let bot_a = Axiom::Strict(Concept::atom("A"), Concept::Bot);
        let bot_b = Axiom::Strict(Concept::atom("B"), Concept::Bot);
        assert_eq!(
            t[0].satisfied,
            [bot_a.clone(), bot_b.clone()].into_iter().collect()
        );
        // a1 comes first: after one step A is no longer empty, B still is.
        assert!(t[1].removed.contains(&bot_a));
        assert!(t[1].satisfied.contains(&bot_b));
        // b1 is the third stimulus presented.
        assert!(t[3].removed.contains(&bot_b));
    }

    #[test]
    fn diffs_are_consistent() {
        let t = run_trace(&config(), &data(), 2).unwrap();
        let mut state = BTreeSet::new();
        for s in &t {
            assert!(s.added.is_disjoint(&s.removed));
            state = state.union(&s.added).cloned().collect();
            state = state.difference(&s.removed).cloned().collect();
            assert_eq!(state, s.satisfied);
        }
    }

    #[test]
    fn final_snapshot_matches_trained_model() {
        let t = run_trace(&config(), &data(), 4).unwrap();
        let map = train_map(config(), &data()).unwrap();
        let model = CwmModel::build(&map, &data(), &[], &[]).unwrap();
        let kb: BTreeSet<Axiom> = model
            .extract_kb(0.0)
            .unwrap()
            .into_iter()
            .map(|e| e.axiom)
            .collect();
        assert_eq!(t.last().unwrap().satisfied, kb);
    }

    #[test]
    fn deterministic_and_reported() {
        let a = run_trace(&config(), &data(), 3).unwrap();
        let b = run_trace(&config(), &data(), 3).unwrap();
        assert_eq!(a, b);
        let text = format_text(&a);
        assert!(text.starts_with("step 0\n+ A <= bot\n+ B <= bot\n"));
        assert!(text.contains("- A <= bot\n"));
        let json: serde_json::Value = serde_json::from_str(&format_json(&a)).unwrap();
        assert_eq!(json.as_array().unwrap().len(), a.len());
        assert_eq!(persistence(&a)["A <= bot"], 1);
    }
}
