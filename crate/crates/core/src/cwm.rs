//! Concept-wise multipreference model of a trained map.
//!
//! Every learned category `C` induces a preference `x <_C y` iff
//! `d(x,C) < d(y,C)`, and the extension `C^I = { y | d(y,C) <= d_max(C) }`.
//! The global preference combines the per-category ones:
//!
//! ```text
//! x < y  iff  (i)  x <_Ci y for some Ci
//!             (ii) for every Cj: x <=_Cj y, or x <_Ch y for some Ch more specific than Cj
//! ```
//!
//! `T(C)` denotes the `<`-minimal elements of `C^I`. Checking a general
//! typicality inclusion costs `O(n^2 * k)` comparisons; inclusions between
//! learned categories are decided from category statistics alone in
//! `O(b^2)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::domain::{Domain, DomainElement};
use crate::error::{Error, Result};
use crate::lang::{Axiom, Concept};
use crate::metrics::{self, CategoryStats};
use crate::som::{SomMap, Stimulus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    General,
    FastExact,
    FastSufficient,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::General => "general",
            Method::FastExact => "fast-exact",
            Method::FastSufficient => "fast-sufficient",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub holds: bool,
    pub method: Method,
    /// Smallest violating element id; only for failed general checks.
    pub counterexample: Option<String>,
    pub plausibility: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct CwmOptions {
    /// Precompute the element-by-category distance table when
    /// `|domain| * k` does not exceed this.
    pub cache_budget: usize,
    /// Add subsumption-based specificity inferred from the model.
    pub infer_specificity: bool,
}

impl Default for CwmOptions {
    fn default() -> Self {
        CwmOptions {
            cache_budget: 4_000_000,
            infer_specificity: true,
        }
    }
}

/// One extracted inclusion, with its plausibility when defeasible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KbEntry {
    pub axiom: Axiom,
    pub plausibility: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct CwmModel {
    domain: Domain,
    categories: Vec<CategoryStats>,
    cat_index: HashMap<String, usize>,
    specificity: BTreeSet<(String, String)>,
    /// `more_specific[j]` lists every `h` with `h > j`.
    more_specific: Vec<Vec<usize>>,
    /// Row-major `|domain| x k`.
    distances: Option<Vec<f64>>,
}

impl CwmModel {
    /// Builds the model from a trained map: the domain holds the stimuli,
    /// one element per distinct BMU vector, and the probes.
    pub fn build(
        map: &SomMap,
        stimuli: &[Stimulus],
        probes: &[Stimulus],
        overrides: &[(String, String)],
    ) -> Result<Self> {
        Self::build_with(map, stimuli, probes, overrides, &CwmOptions::default())
    }

    pub fn build_with(
        map: &SomMap,
        stimuli: &[Stimulus],
        probes: &[Stimulus],
        overrides: &[(String, String)],
        options: &CwmOptions,
    ) -> Result<Self> {
        let stats = metrics::category_stats(map, stimuli)?;
        let domain = Domain::from_map(map, stimuli, stimuli, probes)?;
        Self::from_parts(domain, stats.into_values(), overrides, options)
    }

    /// Assembles a model from a domain and category statistics. The domain
    /// should contain an element for every BMU vector of every category.
    pub fn from_parts(
        domain: Domain,
        categories: impl IntoIterator<Item = CategoryStats>,
        overrides: &[(String, String)],
        options: &CwmOptions,
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
            if let (Some(e), Some(v)) = (domain.elements().first(), c.bmu_vectors.first()) {
                if e.vector.len() != v.len() {
                    return Err(Error::Dimension {
                        expected: e.vector.len(),
                        got: v.len(),
                    });
                }
            }
        }
        let k = categories.len();
        let distances = (domain.len() * k <= options.cache_budget).then(|| {
            domain
                .elements()
                .iter()
                .flat_map(|e| categories.iter().map(|c| metrics::nearest(&e.vector, c)))
                .collect()
        });
        let mut model = CwmModel {
            domain,
            categories,
            cat_index,
            specificity: BTreeSet::new(),
            more_specific: vec![Vec::new(); k],
            distances,
        };

        let mut pairs: Vec<(usize, usize)> = Vec::new();
        if options.infer_specificity {
            for (h, j) in model.infer_specificity_indices() {
                pairs.push((h, j));
            }
        }
        for (h, j) in overrides {
            pairs.push((model.category(h)?, model.category(j)?));
        }
        model.set_specificity(&pairs)?;
        Ok(model)
    }

    fn set_specificity(&mut self, pairs: &[(usize, usize)]) -> Result<()> {
        let k = self.categories.len();
        let mut direct = vec![vec![false; k]; k];
        for &(h, j) in pairs {
            direct[h][j] = true;
        }
        let mut closure = direct.clone();
        for m in 0..k {
            for a in 0..k {
                if closure[a][m] {
                    let via = closure[m].clone();
                    for (dst, on) in closure[a].iter_mut().zip(via) {
                        *dst |= on;
                    }
                }
            }
        }
        if let Some(start) = (0..k).find(|&i| closure[i][i]) {
            let cycle = find_cycle(&direct, start)
                .into_iter()
                .map(|i| self.categories[i].name.clone())
                .collect();
            return Err(Error::SpecificityCycle(cycle));
        }
        self.specificity.clear();
        self.more_specific = vec![Vec::new(); k];
        for (h, row) in closure.iter().enumerate() {
            for (j, &on) in row.iter().enumerate() {
                if on {
                    self.specificity.insert((
                        self.categories[h].name.clone(),
                        self.categories[j].name.clone(),
                    ));
                    self.more_specific[j].push(h);
                }
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn categories(&self) -> &[CategoryStats] {
        &self.categories
    }

    pub fn category_names(&self) -> impl Iterator<Item = &str> {
        self.categories.iter().map(|c| c.name.as_str())
    }

    pub fn stats(&self, name: &str) -> Result<&CategoryStats> {
        Ok(&self.categories[self.category(name)?])
    }

    /// Pairs `(more specific, less specific)`, transitively closed.
    pub fn specificity(&self) -> &BTreeSet<(String, String)> {
        &self.specificity
    }

    pub fn has_distance_cache(&self) -> bool {
        self.distances.is_some()
    }

    pub fn category(&self, name: &str) -> Result<usize> {
        self.cat_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownCategory(name.to_string()))
    }

    /// `d(element, category)` by index.
    pub fn distance(&self, element: usize, category: usize) -> f64 {
        match &self.distances {
            Some(table) => table[element * self.categories.len() + category],
            None => metrics::nearest(&self.domain.get(element).vector, &self.categories[category]),
        }
    }

    pub fn ids(&self, elements: &[usize]) -> Vec<&str> {
        elements
            .iter()
            .map(|&i| self.domain.get(i).id.as_str())
            .collect()
    }

    fn in_category(&self, element: usize, category: usize) -> bool {
        self.distance(element, category) <= self.categories[category].d_max
    }

    /// Membership mask of `c` over the domain.
    pub fn mask(&self, c: &Concept) -> Result<Vec<bool>> {
        let n = self.domain.len();
        Ok(match c {
            Concept::Top => vec![true; n],
            Concept::Bot => vec![false; n],
            Concept::Atom(name) => {
                let cat = self.category(name)?;
                (0..n).map(|x| self.in_category(x, cat)).collect()
            }
            Concept::Not(inner) => self.mask(inner)?.into_iter().map(|b| !b).collect(),
            Concept::And(a, b) => {
                let (a, b) = (self.mask(a)?, self.mask(b)?);
                a.iter().zip(&b).map(|(x, y)| *x && *y).collect()
            }
            Concept::Or(a, b) => {
                let (a, b) = (self.mask(a)?, self.mask(b)?);
                a.iter().zip(&b).map(|(x, y)| *x || *y).collect()
            }
        })
    }

    /// Indices of `C^I`, ascending.
    pub fn extension(&self, c: &Concept) -> Result<Vec<usize>> {
        Ok(indices(&self.mask(c)?))
    }

    fn pref_less_idx(&self, category: usize, x: usize, y: usize) -> bool {
        self.distance(x, category) < self.distance(y, category)
    }

    pub fn pref_less(&self, category: &str, x: &str, y: &str) -> Result<bool> {
        let c = self.category(category)?;
        Ok(self.pref_less_idx(c, self.domain.position(x)?, self.domain.position(y)?))
    }

    pub fn pref_equiv(&self, category: &str, x: &str, y: &str) -> Result<bool> {
        let c = self.category(category)?;
        let (x, y) = (self.domain.position(x)?, self.domain.position(y)?);
        Ok(self.distance(x, c) == self.distance(y, c))
    }

    /// `x < y` under the global preference, by index.
    pub fn global_less_idx(&self, x: usize, y: usize) -> bool {
        let less = |c: usize| self.distance(x, c) < self.distance(y, c);
        let mut some_less = false;
        for j in 0..self.categories.len() {
            match self.distance(x, j).total_cmp(&self.distance(y, j)) {
                Ordering::Less => some_less = true,
                Ordering::Greater if !self.more_specific[j].iter().any(|&h| less(h)) => {
                    return false
                }
                _ => {}
            }
        }
        some_less
    }

    pub fn global_less(&self, x: &str, y: &str) -> Result<bool> {
        Ok(self.global_less_idx(self.domain.position(x)?, self.domain.position(y)?))
    }

    /// `<`-minimal elements of `C^I`.
    pub fn typ_extension(&self, c: &Concept) -> Result<Vec<usize>> {
        let members = self.extension(c)?;
        Ok(members
            .iter()
            .copied()
            .filter(|&y| {
                !members
                    .iter()
                    .any(|&z| z != y && self.global_less_idx(z, y))
            })
            .collect())
    }

    /// `<_C`-minimal elements of `C^I` for a learned category, found by
    /// scanning the extension.
    pub fn typ_extension_wrt(&self, category: &str) -> Result<Vec<usize>> {
        let cat = self.category(category)?;
        let members: Vec<usize> = (0..self.domain.len())
            .filter(|&x| self.in_category(x, cat))
            .collect();
        let best = members
            .iter()
            .map(|&x| self.distance(x, cat))
            .fold(f64::INFINITY, f64::min);
        Ok(members
            .into_iter()
            .filter(|&x| self.distance(x, cat) == best)
            .collect())
    }

    fn inclusion_result(&self, lhs: &[usize], rhs: &[bool]) -> CheckResult {
        let counterexample = lhs
            .iter()
            .filter(|&&x| !rhs[x])
            .map(|&x| self.domain.get(x).id.as_str())
            .min()
            .map(str::to_string);
        CheckResult {
            holds: counterexample.is_none(),
            method: Method::General,
            counterexample,
            plausibility: None,
        }
    }

    /// `lhs^I ⊆ rhs^I` by enumerating the domain.
    pub fn check_strict_general(&self, lhs: &Concept, rhs: &Concept) -> Result<CheckResult> {
        let l = self.extension(lhs)?;
        let r = self.mask(rhs)?;
        Ok(self.inclusion_result(&l, &r))
    }

    /// `T(lhs)^I ⊆ rhs^I` by enumerating the domain. A learned category
    /// on the left is typified by its own preference; any other concept by
    /// the global one.
    pub fn check_typ_general(&self, lhs: &Concept, rhs: &Concept) -> Result<CheckResult> {
        let typical = match lhs {
            Concept::Atom(name) => self.typ_extension_wrt(name)?,
            _ => self.typ_extension(lhs)?,
        };
        let r = self.mask(rhs)?;
        Ok(self.inclusion_result(&typical, &r))
    }

    /// `T(ci) <= cj` from category statistics:
    /// holds iff `d(BMU_ci, cj) <= d_max(cj)`.
    pub fn check_typ_fast(&self, ci: &str, cj: &str) -> Result<CheckResult> {
        let (src, dst) = (self.stats(ci)?, self.stats(cj)?);
        let spread = metrics::bmu_set_distance(src, dst)?;
        Ok(CheckResult {
            holds: spread <= dst.d_max,
            method: Method::FastExact,
            counterexample: None,
            plausibility: Some(metrics::degree(metrics::relative(spread, dst.d_max))),
        })
    }

    /// `ci <= cj` when `d(BMU_ci, cj) + d_max(ci) <= d_max(cj)`. Sufficient
    /// but not necessary: a `false` here is inconclusive.
    pub fn check_strict_fast(&self, ci: &str, cj: &str) -> Result<CheckResult> {
        let (src, dst) = (self.stats(ci)?, self.stats(cj)?);
        let spread = metrics::bmu_set_distance(src, dst)?;
        Ok(CheckResult {
            holds: spread + src.d_max <= dst.d_max,
            method: Method::FastSufficient,
            counterexample: None,
            plausibility: None,
        })
    }

    fn infer_specificity_indices(&self) -> Vec<(usize, usize)> {
        let k = self.categories.len();
        let masks: Vec<Vec<bool>> = (0..k)
            .map(|c| {
                (0..self.domain.len())
                    .map(|x| self.in_category(x, c))
                    .collect()
            })
            .collect();
        let subset = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(x, y)| !*x || *y);
        let mut out = Vec::new();
        for h in 0..k {
            for j in 0..k {
                if h != j && subset(&masks[h], &masks[j]) && !subset(&masks[j], &masks[h]) {
                    out.push((h, j));
                }
            }
        }
        out
    }

    /// `(Ch, Cj)` for every strict extension inclusion `Ch^I ⊊ Cj^I`.
    pub fn infer_specificity(&self) -> BTreeSet<(String, String)> {
        self.infer_specificity_indices()
            .into_iter()
            .map(|(h, j)| {
                (
                    self.categories[h].name.clone(),
                    self.categories[j].name.clone(),
                )
            })
            .collect()
    }

    /// Category-level strict and defeasible inclusions satisfied by the
    /// model, ordered by `(ci, cj)`. Defeasible ones are kept when their
    /// plausibility is at least `threshold`.
    pub fn extract_kb(&self, threshold: f64) -> Result<Vec<KbEntry>> {
        let mut out = Vec::new();
        for ci in self.category_names() {
            for cj in self.category_names() {
                if ci == cj {
                    continue;
                }
                let (a, b) = (Concept::atom(ci), Concept::atom(cj));
                if self.check_strict_general(&a, &b)?.holds {
                    out.push(KbEntry {
                        axiom: Axiom::Strict(a.clone(), b.clone()),
                        plausibility: None,
                    });
                }
                let typ = self.check_typ_fast(ci, cj)?;
                let p = typ.plausibility.unwrap_or(0.0);
                if typ.holds && p >= threshold {
                    out.push(KbEntry {
                        axiom: Axiom::Defeasible(a, b),
                        plausibility: Some(p),
                    });
                }
            }
        }
        Ok(out)
    }

    /// Vectors of all domain elements, for callers building other
    /// interpretations over the same domain.
    pub fn elements(&self) -> &[DomainElement] {
        self.domain.elements()
    }
}

fn indices(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect()
}

/// A path `start -> ... -> start` in the direct-edge graph.
fn find_cycle(direct: &[Vec<bool>], start: usize) -> Vec<usize> {
    fn dfs(
        direct: &[Vec<bool>],
        node: usize,
        start: usize,
        path: &mut Vec<usize>,
        seen: &mut [bool],
    ) -> bool {
        for next in 0..direct.len() {
            if !direct[node][next] {
                continue;
            }
            if next == start {
                return true;
            }
            if !seen[next] {
                seen[next] = true;
                path.push(next);
                if dfs(direct, next, start, path, seen) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    let mut path = vec![start];
    let mut seen = vec![false; direct.len()];
    seen[start] = true;
    dfs(direct, start, start, &mut path, &mut seen);
    path.push(start);
    path
}

/// Text form of an extracted knowledge base, one inclusion per line.
pub fn format_kb(entries: &[KbEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        match e.plausibility {
            Some(p) => out.push_str(&format!("{} @ plausibility={}\n", e.axiom, p)),
            None => out.push_str(&format!("{}\n", e.axiom)),
        }
    }
    out
}

/// Reads the format written by [`format_kb`].
pub fn parse_kb(text: &str) -> Result<Vec<KbEntry>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let file_err = |message: String| Error::FileFormat {
            path: "<kb>".into(),
            line: i + 1,
            message,
        };
        let (stmt, plausibility) = match body.split_once('@') {
            Some((stmt, tail)) => {
                let value = tail
                    .trim()
                    .strip_prefix("plausibility=")
                    .ok_or_else(|| file_err("expected `@ plausibility=<decimal>`".into()))?;
                let p: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| file_err(format!("invalid plausibility `{value}`")))?;
                (stmt, Some(p))
            }
            None => (body, None),
        };
        let axiom = crate::lang::parse_axiom(stmt).map_err(|e| file_err(e.to_string()))?;
        out.push(KbEntry {
            axiom,
            plausibility,
        });
    }
    Ok(out)
}

/// Per-category table used by reports: `(name, d_max, b)`.
pub fn category_summary(model: &CwmModel) -> BTreeMap<String, (f64, usize)> {
    model
        .categories()
        .iter()
        .map(|c| (c.name.clone(), (c.d_max, c.b())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::ElementKind;

    fn elem(id: &str, v: &[f64], kind: ElementKind) -> DomainElement {
        DomainElement {
            id: id.into(),
            vector: v.to_vec(),
            kind,
        }
    }

    fn cat(name: &str, bmus: &[&[f64]], d_max: f64) -> CategoryStats {
        CategoryStats::from_vectors(name, bmus.iter().map(|v| v.to_vec()).collect(), d_max)
    }

    fn no_infer() -> CwmOptions {
        CwmOptions {
            infer_specificity: false,
            ..CwmOptions::default()
        }
    }

    /// 1-D line: A's unit at 0 (d_max 1), B's unit at 4 (d_max 1).
    fn line_model() -> CwmModel {
        let domain = Domain::new(vec![
            elem("a1", &[0.5], ElementKind::InputStimulus),
            elem("a2", &[-1.0], ElementKind::InputStimulus),
            elem("b1", &[4.5], ElementKind::InputStimulus),
            elem("bmu@0_0", &[0.0], ElementKind::BmuElement),
            elem("bmu@0_1", &[4.0], ElementKind::BmuElement),
            elem("p", &[2.0], ElementKind::Probe),
        ])
        .unwrap();
        CwmModel::from_parts(
            domain,
            vec![cat("A", &[&[0.0]], 1.0), cat("B", &[&[4.0]], 1.0)],
            &[],
            &CwmOptions::default(),
        )
        .unwrap()
    }

    fn ids(m: &CwmModel, v: &[usize]) -> Vec<String> {
        m.ids(v).into_iter().map(String::from).collect()
    }

    #[test]
    fn build_counts_domain() {
        use crate::som::{SomConfig, SomMap};
        let config = SomConfig::new(1, 3, 1);
        let map = SomMap::from_weights(config, vec![vec![0.0], vec![5.0], vec![10.0]], 10).unwrap();
        let data = vec![
            Stimulus::new("x1", "A", vec![0.1]),
            Stimulus::new("x2", "A", vec![0.2]),
            Stimulus::new("x3", "B", vec![5.1]),
            Stimulus::new("x4", "B", vec![9.0]),
            Stimulus::new("x5", "B", vec![9.9]),
        ];
        let m = CwmModel::build(&map, &data, &[], &[]).unwrap();
        assert_eq!(m.domain().len(), 8);
        let probes = vec![Stimulus::probe("p", vec![3.0])];
        let m = CwmModel::build(&map, &data, &probes, &[]).unwrap();
        assert_eq!(m.domain().len(), 9);
        assert_eq!(m.domain().get(8).kind, ElementKind::Probe);
    }

    #[test]
    fn specificity_overrides_close_transitively() {
        let domain = Domain::new(vec![elem("x", &[0.0], ElementKind::InputStimulus)]).unwrap();
        let cats = vec![
            cat("Penguin", &[&[0.0]], 1.0),
            cat("Bird", &[&[0.0]], 1.0),
            cat("Animal", &[&[0.0]], 1.0),
        ];
        let overrides = vec![
            ("Penguin".to_string(), "Bird".to_string()),
            ("Bird".to_string(), "Animal".to_string()),
        ];
        let m =
            CwmModel::from_parts(domain.clone(), cats.clone(), &overrides, &no_infer()).unwrap();
        assert!(m
            .specificity()
            .contains(&("Penguin".into(), "Animal".into())));
        assert_eq!(m.specificity().len(), 3);

        let cyclic = vec![
            ("Bird".to_string(), "Animal".to_string()),
            ("Animal".to_string(), "Bird".to_string()),
        ];
        match CwmModel::from_parts(domain.clone(), cats.clone(), &cyclic, &no_infer()) {
            Err(Error::SpecificityCycle(c)) => {
                assert_eq!(c.first(), c.last());
                assert!(c.contains(&"Bird".to_string()) && c.contains(&"Animal".to_string()));
            }
            other => panic!("expected cycle, got {other:?}"),
        }
        let unknown = vec![("Fish".to_string(), "Bird".to_string())];
        assert!(matches!(
            CwmModel::from_parts(domain, cats, &unknown, &no_infer()),
            Err(Error::UnknownCategory(_))
        ));
    }

    #[test]
    fn extensions() {
        let m = line_model();
        assert_eq!(m.extension(&Concept::Top).unwrap().len(), 6);
        let a = Concept::atom("A");
        assert!(m
            .extension(&Concept::and(a.clone(), Concept::not(a.clone())))
            .unwrap()
            .is_empty());
        assert_eq!(ids(&m, &m.extension(&a).unwrap()), ["a1", "a2", "bmu@0_0"]);
        assert_eq!(
            ids(&m, &m.extension(&Concept::atom("B")).unwrap()),
            ["b1", "bmu@0_1"]
        );
        assert_eq!(
            ids(
                &m,
                &m.extension(&Concept::not(Concept::or(a, Concept::atom("B"))))
                    .unwrap()
            ),
            ["p"]
        );
        assert!(matches!(
            m.extension(&Concept::atom("Z")),
            Err(Error::UnknownCategory(_))
        ));
    }

    #[test]
    fn preferences() {
        let m = line_model();
        assert!(m.pref_less("A", "bmu@0_0", "a1").unwrap());
        assert!(!m.pref_less("A", "a1", "a1").unwrap());
        assert!(m.pref_equiv("A", "a1", "a1").unwrap());
        assert!(m.pref_less("B", "p", "a1").unwrap());
        assert!(matches!(
            m.pref_less("A", "a1", "zz"),
            Err(Error::UnknownElement(_))
        ));
        assert!(matches!(
            m.pref_less("Q", "a1", "a1"),
            Err(Error::UnknownCategory(_))
        ));
    }

    #[test]
    fn equal_distances_are_equivalent_not_less() {
        let domain = Domain::new(vec![
            elem("x", &[1.0], ElementKind::Probe),
            elem("y", &[-1.0], ElementKind::Probe),
            elem("u", &[0.0], ElementKind::BmuElement),
        ])
        .unwrap();
        let m =
            CwmModel::from_parts(domain, vec![cat("C", &[&[0.0]], 1.0)], &[], &no_infer()).unwrap();
        assert!(!m.pref_less("C", "x", "y").unwrap());
        assert!(!m.pref_less("C", "y", "x").unwrap());
        assert!(m.pref_equiv("C", "x", "y").unwrap());
    }

    /// x <_Penguin y and y <_Bird x.
    fn conflict_model(overrides: &[(String, String)]) -> CwmModel {
        let domain = Domain::new(vec![
            elem("x", &[0.0, 1.0], ElementKind::Probe),
            elem("y", &[1.0, 0.0], ElementKind::Probe),
        ])
        .unwrap();
        let cats = vec![
            cat("Penguin", &[&[0.0, 2.0]], 1.0),
            cat("Bird", &[&[2.0, 0.0]], 1.0),
        ];
        CwmModel::from_parts(domain, cats, overrides, &no_infer()).unwrap()
    }

    #[test]
    fn specific_preference_overrides_general_one() {
        let m = conflict_model(&[("Penguin".into(), "Bird".into())]);
        assert!(m.pref_less("Penguin", "x", "y").unwrap());
        assert!(m.pref_less("Bird", "y", "x").unwrap());
        assert!(m.global_less("x", "y").unwrap());
        assert!(!m.global_less("y", "x").unwrap());
    }

    #[test]
    fn unrelated_conflict_leaves_elements_incomparable() {
        let m = conflict_model(&[]);
        assert!(!m.global_less("x", "y").unwrap());
        assert!(!m.global_less("y", "x").unwrap());
        let both = m.typ_extension(&Concept::Top).unwrap();
        assert_eq!(both.len(), 2);
    }

    #[test]
    fn fully_equivalent_elements_are_not_globally_ordered() {
        let m = line_model();
        assert!(!m.global_less("a1", "a1").unwrap());
    }

    #[test]
    fn typicality_on_atoms() {
        let m = line_model();
        let a = Concept::atom("A");
        let t = m.typ_extension(&a).unwrap();
        assert!(t.iter().all(|x| m.extension(&a).unwrap().contains(x)));
        assert_eq!(ids(&m, &m.typ_extension_wrt("A").unwrap()), ["bmu@0_0"]);
        assert!(m.typ_extension(&Concept::Bot).unwrap().is_empty());

        // With a single category the global and per-category minima agree.
        let domain = Domain::new(vec![
            elem("x", &[0.3], ElementKind::InputStimulus),
            elem("twin", &[0.0], ElementKind::InputStimulus),
            elem("u", &[0.0], ElementKind::BmuElement),
        ])
        .unwrap();
        let single =
            CwmModel::from_parts(domain, vec![cat("C", &[&[0.0]], 0.3)], &[], &no_infer()).unwrap();
        let c = Concept::atom("C");
        assert_eq!(
            ids(&single, &single.typ_extension(&c).unwrap()),
            ["twin", "u"]
        );
        assert_eq!(
            single.typ_extension(&c).unwrap(),
            single.typ_extension_wrt("C").unwrap()
        );
    }

    #[test]
    fn general_checks() {
        let m = line_model();
        let (a, b) = (Concept::atom("A"), Concept::atom("B"));
        assert!(m.check_strict_general(&a, &Concept::Top).unwrap().holds);
        assert!(m.check_typ_general(&a, &a).unwrap().holds);
        let r = m.check_strict_general(&a, &b).unwrap();
        assert!(!r.holds);
        assert_eq!(r.method, Method::General);
        assert_eq!(r.counterexample.as_deref(), Some("a1"));
        let r = m
            .check_typ_general(&Concept::or(a.clone(), b.clone()), &a)
            .unwrap();
        assert!(!r.holds);
        assert_eq!(r.counterexample.as_deref(), Some("bmu@0_1"));
    }

    #[test]
    fn fast_typicality() {
        let m = line_model();
        let r = m.check_typ_fast("A", "A").unwrap();
        assert!(r.holds);
        assert_eq!(r.plausibility, Some(1.0));
        assert_eq!(r.method, Method::FastExact);
        let r = m.check_typ_fast("A", "B").unwrap();
        assert!(!r.holds);
        // d(BMU_A, B) = 4, d_max(B) = 1.
        assert!((r.plausibility.unwrap() - (-4.0f64).exp()).abs() < 1e-15);
        assert!(matches!(
            m.check_typ_fast("A", "Q"),
            Err(Error::UnknownCategory(_))
        ));
    }

    #[test]
    fn fast_typicality_far_category() {
        let domain = Domain::new(vec![
            elem("u", &[0.0], ElementKind::BmuElement),
            elem("v", &[5.0], ElementKind::BmuElement),
        ])
        .unwrap();
        let m = CwmModel::from_parts(
            domain,
            vec![cat("Ci", &[&[0.0]], 1.0), cat("Cj", &[&[5.0]], 1.0)],
            &[],
            &no_infer(),
        )
        .unwrap();
        let r = m.check_typ_fast("Ci", "Cj").unwrap();
        assert!(!r.holds);
        assert!((r.plausibility.unwrap() - (-5.0f64).exp()).abs() < 1e-15);
        assert_eq!(
            r.holds,
            m.check_typ_general(&Concept::atom("Ci"), &Concept::atom("Cj"))
                .unwrap()
                .holds
        );
    }

    #[test]
    fn fast_strict_reflexive_and_incomplete() {
        let m = line_model();
        assert!(m.check_strict_fast("A", "A").unwrap().holds);

        // 0.5 + 1.0 > 1.4, but no element of this sparse domain escapes Super.
        let domain = Domain::new(vec![
            elem("s", &[0.0], ElementKind::BmuElement),
            elem("t", &[0.5], ElementKind::BmuElement),
            elem("x", &[0.3], ElementKind::InputStimulus),
        ])
        .unwrap();
        let m = CwmModel::from_parts(
            domain,
            vec![cat("Sub", &[&[0.0]], 1.0), cat("Super", &[&[0.5]], 1.4)],
            &[],
            &no_infer(),
        )
        .unwrap();
        assert!(!m.check_strict_fast("Sub", "Super").unwrap().holds);
        assert!(
            m.check_strict_general(&Concept::atom("Sub"), &Concept::atom("Super"))
                .unwrap()
                .holds
        );
    }

    #[test]
    fn specificity_inference() {
        let m = line_model();
        assert!(m.infer_specificity().is_empty());

        let domain = Domain::new(vec![
            elem("s", &[0.0], ElementKind::BmuElement),
            elem("t", &[0.5], ElementKind::BmuElement),
            elem("x", &[1.2], ElementKind::InputStimulus),
        ])
        .unwrap();
        let cats = vec![
            cat("Sub", &[&[0.0]], 0.6),
            cat("Super", &[&[0.5]], 1.0),
            cat("Same", &[&[0.5]], 1.0),
        ];
        let m = CwmModel::from_parts(domain, cats, &[], &CwmOptions::default()).unwrap();
        let inferred = m.infer_specificity();
        assert!(inferred.contains(&("Sub".into(), "Super".into())));
        assert!(!inferred.contains(&("Super".into(), "Sub".into())));
        // Super and Same share their extension.
        assert!(!inferred.contains(&("Super".into(), "Same".into())));
        assert!(!inferred.contains(&("Same".into(), "Super".into())));
        assert_eq!(m.specificity(), &inferred);
    }

    #[test]
    fn kb_extraction() {
        let m = line_model();
        assert!(m.extract_kb(0.0).unwrap().is_empty());

        let domain = Domain::new(vec![
            elem("s", &[0.0], ElementKind::BmuElement),
            elem("t", &[0.5], ElementKind::BmuElement),
        ])
        .unwrap();
        let cats = vec![cat("Sub", &[&[0.0]], 0.2), cat("Super", &[&[0.5]], 1.0)];
        let m = CwmModel::from_parts(domain.clone(), cats.clone(), &[], &CwmOptions::default())
            .unwrap();
        let kb = m.extract_kb(0.0).unwrap();
        let text = format_kb(&kb);
        assert_eq!(
            text,
            format!(
                "Sub <= Super\nT(Sub) <= Super @ plausibility={}\n",
                (-0.5f64).exp()
            )
        );
        assert_eq!(parse_kb(&text).unwrap(), kb);
        let strict_only = m.extract_kb(0.9).unwrap();
        assert_eq!(strict_only.len(), 1);
        assert!(strict_only[0].plausibility.is_none());

        let single =
            CwmModel::from_parts(domain, vec![cats[0].clone()], &[], &CwmOptions::default())
                .unwrap();
        assert!(single.extract_kb(0.0).unwrap().is_empty());
    }

    #[test]
    fn kb_parse_errors() {
        assert!(parse_kb("A <= B @ weight=1").is_err());
        assert!(parse_kb("A <= B @ plausibility=x").is_err());
        assert!(parse_kb("A <=").is_err());
        assert!(parse_kb("# only comments\n\n").unwrap().is_empty());
    }

    #[test]
    fn on_demand_distances_match_cache() {
        let m = line_model();
        let domain = m.domain().clone();
        let uncached = CwmModel::from_parts(
            domain,
            m.categories().to_vec(),
            &[],
            &CwmOptions {
                cache_budget: 0,
                ..CwmOptions::default()
            },
        )
        .unwrap();
        assert!(m.has_distance_cache() && !uncached.has_distance_cache());
        for x in 0..m.domain().len() {
            for c in 0..2 {
                assert_eq!(m.distance(x, c), uncached.distance(x, c));
            }
        }
    }
}
