//! Seeded random maps, models and concepts shared by integration tests.

#![allow(dead_code)]

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use somsem::cwm::CwmModel;
use somsem::lang::{Axiom, Cmp, Concept, Degree, Query};
use somsem::metrics::{self, euclidean};
use somsem::som::{train_map, SomConfig, SomMap, Stimulus};
use somsem::Error;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub struct Shape {
    pub categories: RangeInclusive<usize>,
    pub exemplars: RangeInclusive<usize>,
    pub dims: RangeInclusive<usize>,
    pub side: RangeInclusive<usize>,
    /// Chance that a category is placed inside an earlier one.
    pub nested: f64,
    /// Add random specificity pairs on top of the inferred ones.
    pub overrides: bool,
}

impl Shape {
    pub fn standard() -> Self {
        Shape {
            categories: 2..=4,
            exemplars: 5..=20,
            dims: 2..=5,
            side: 4..=8,
            nested: 0.35,
            overrides: false,
        }
    }

    /// Small enough that the domain stays within 30 elements.
    pub fn small() -> Self {
        Shape {
            categories: 2..=3,
            exemplars: 2..=4,
            dims: 2..=3,
            side: 4..=5,
            nested: 0.35,
            overrides: true,
        }
    }
}

pub struct Instance {
    pub seed: u64,
    /// Generation attempts discarded for exact distance ties.
    pub rejected: usize,
    pub config: SomConfig,
    pub stimuli: Vec<Stimulus>,
    pub map: SomMap,
    pub model: CwmModel,
    pub names: Vec<String>,
    pub overrides: Vec<(String, String)>,
}

fn draw(rng: &mut ChaCha8Rng, shape: &Shape) -> (SomConfig, Vec<Stimulus>, Vec<String>) {
    let k = rng.gen_range(shape.categories.clone());
    let dim = rng.gen_range(shape.dims.clone());
    let rows = rng.gen_range(shape.side.clone());
    let cols = rng.gen_range(shape.side.clone());
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let mut centers: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut stimuli = Vec::new();
    let mut names = Vec::new();
    for c in 0..k {
        let (center, spread) = if c > 0 && rng.gen_bool(shape.nested) {
            let (parent, ps) = centers.choose(rng).expect("nonempty").clone();
            let center: Vec<f64> = parent
                .iter()
                .map(|p| p + ps * 0.5 * normal.sample(rng))
                .collect();
            (center, ps * rng.gen_range(0.2..0.6))
        } else {
            (
                (0..dim).map(|_| rng.gen::<f64>()).collect(),
                rng.gen_range(0.03..0.2),
            )
        };
        let name = format!("C{c}");
        for e in 0..rng.gen_range(shape.exemplars.clone()) {
            let v = center
                .iter()
                .map(|m: &f64| m + spread * normal.sample(rng))
                .collect();
            stimuli.push(Stimulus::new(format!("{name}_{e}"), name.clone(), v));
        }
        centers.push((center, spread));
        names.push(name);
    }
    let mut config = SomConfig::new(rows, cols, dim);
    config.epochs = rng.gen_range(5..=12);
    config.seed = rng.gen();
    config.shuffle = rng.gen_bool(0.5);
    (config, stimuli, names)
}

/// Exact coincidences that would make the model's order depend on
/// floating-point equality: repeated vectors, two elements at the same
/// nonzero distance from a category, or a BMU set lying exactly on
/// another category's boundary.
pub fn has_ties(model: &CwmModel) -> bool {
    let elems = model.domain().elements();
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            if elems[i].vector == elems[j].vector {
                return true;
            }
        }
    }
    for c in 0..model.categories().len() {
        let mut ds: Vec<f64> = (0..elems.len())
            .map(|x| model.distance(x, c))
            .filter(|d| *d > 0.0)
            .collect();
        ds.sort_by(f64::total_cmp);
        if ds.windows(2).any(|w| w[0] == w[1]) {
            return true;
        }
    }
    for a in model.categories() {
        for b in model.categories() {
            if a.name != b.name && metrics::bmu_set_distance(a, b).unwrap() == b.d_max {
                return true;
            }
        }
    }
    false
}

pub fn generate(seed: u64, shape: &Shape) -> Instance {
    let mut rng = rng(seed);
    let mut rejected = 0;
    loop {
        let (config, stimuli, names) = draw(&mut rng, shape);
        let map = train_map(config.clone(), &stimuli).expect("trains");
        let mut overrides = Vec::new();
        if shape.overrides {
            for h in 0..names.len() {
                for j in h + 1..names.len() {
                    if rng.gen_bool(0.5) {
                        overrides.push((names[h].clone(), names[j].clone()));
                    }
                }
            }
        }
        let model = match CwmModel::build(&map, &stimuli, &[], &overrides) {
            Ok(m) => m,
            // Overrides contradicting inferred specificity.
            Err(Error::SpecificityCycle(_)) => {
                overrides.clear();
                CwmModel::build(&map, &stimuli, &[], &[]).expect("builds")
            }
            Err(e) => panic!("seed {seed}: {e}"),
        };
        if has_ties(&model) {
            rejected += 1;
            continue;
        }
        return Instance {
            seed,
            rejected,
            config,
            stimuli,
            map,
            model,
            names,
            overrides,
        };
    }
}

pub fn instances(count: usize, base_seed: u64, shape: &Shape) -> Vec<Instance> {
    (0..count as u64)
        .map(|i| generate(base_seed + i, shape))
        .collect()
}

pub fn random_concept(rng: &mut ChaCha8Rng, names: &[String], depth: usize) -> Concept {
    if depth <= 1 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => Concept::Top,
            1 => Concept::Bot,
            _ => Concept::atom(names.choose(rng).expect("names").as_str()),
        };
    }
    match rng.gen_range(0..3) {
        0 => Concept::not(random_concept(rng, names, depth - 1)),
        1 => Concept::and(
            random_concept(rng, names, depth - 1),
            random_concept(rng, names, depth - 1),
        ),
        _ => Concept::or(
            random_concept(rng, names, depth - 1),
            random_concept(rng, names, depth - 1),
        ),
    }
}

/// Identifiers including the ones that double as statement keywords.
pub fn random_name(rng: &mut ChaCha8Rng) -> String {
    const SPECIAL: [&str; 6] = ["T", "P", "deg", "mem", "plaus", "elem"];
    if rng.gen_bool(0.2) {
        return SPECIAL.choose(rng).expect("nonempty").to_string();
    }
    const FIRST: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz_";
    const REST: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz_0123456789";
    loop {
        let mut s = String::new();
        s.push(*FIRST.choose(rng).expect("nonempty") as char);
        for _ in 0..rng.gen_range(0..6) {
            s.push(*REST.choose(rng).expect("nonempty") as char);
        }
        if !["and", "or", "not", "top", "bot"].contains(&s.as_str()) {
            return s;
        }
    }
}

pub fn random_element_id(rng: &mut ChaCha8Rng) -> String {
    const CHARS: &[u8] = b"abcXYZ019_@.:-+";
    if rng.gen_bool(0.3) {
        return random_name(rng);
    }
    (0..rng.gen_range(1..8))
        .map(|_| *CHARS.choose(rng).expect("nonempty") as char)
        .collect()
}

fn random_cmp(rng: &mut ChaCha8Rng) -> Cmp {
    *[Cmp::Ge, Cmp::Le, Cmp::Gt, Cmp::Lt]
        .choose(rng)
        .expect("nonempty")
}

fn random_degree(rng: &mut ChaCha8Rng) -> Degree {
    let n = match rng.gen_range(0..4) {
        0 => 0.0,
        1 => 1.0,
        2 => (rng.gen_range(0..=100) as f64) / 100.0,
        _ => rng.gen::<f64>(),
    };
    Degree::new(n).expect("in [0,1]")
}

fn free_concept(rng: &mut ChaCha8Rng) -> Concept {
    let names: Vec<String> = (0..4).map(|_| random_name(rng)).collect();
    let depth = rng.gen_range(1..=5);
    random_concept(rng, &names, depth)
}

pub fn random_axiom(rng: &mut ChaCha8Rng) -> Axiom {
    match rng.gen_range(0..4) {
        0 => Axiom::Strict(free_concept(rng), free_concept(rng)),
        1 => Axiom::Defeasible(free_concept(rng), free_concept(rng)),
        2 => Axiom::FuzzyInclusion {
            lhs: free_concept(rng),
            rhs: free_concept(rng),
            cmp: random_cmp(rng),
            n: random_degree(rng),
        },
        _ => Axiom::FuzzyAssertion {
            concept: free_concept(rng),
            individual: random_element_id(rng),
            cmp: random_cmp(rng),
            n: random_degree(rng),
        },
    }
}

pub fn random_query(rng: &mut ChaCha8Rng) -> Query {
    match rng.gen_range(0..8) {
        0 => Query::CheckAxiom(random_axiom(rng)),
        1 => Query::Prob(free_concept(rng)),
        2 => Query::CondProb {
            concept: free_concept(rng),
            given: free_concept(rng),
        },
        3 => Query::ProbGivenElement {
            concept: free_concept(rng),
            element: random_element_id(rng),
        },
        4 => Query::Likelihood {
            element: random_element_id(rng),
            concept: free_concept(rng),
        },
        5 => Query::InclusionDegree(free_concept(rng), free_concept(rng)),
        6 => Query::Membership {
            concept: free_concept(rng),
            element: random_element_id(rng),
        },
        _ => Query::Plausibility {
            src: random_name(rng),
            dst: random_name(rng),
        },
    }
}

/// `min_{<_C}(C^I)` computed from raw vectors: the members of the
/// extension at minimal distance from the category's BMU vectors.
pub fn oracle_category_minima(inst: &Instance, category: &str) -> Vec<String> {
    let stats = &inst.model.stats(category).unwrap();
    let dist = |v: &[f64]| {
        stats
            .bmu_vectors
            .iter()
            .map(|b| euclidean(v, b))
            .fold(f64::INFINITY, f64::min)
    };
    let members: Vec<_> = inst
        .model
        .domain()
        .elements()
        .iter()
        .filter(|e| dist(&e.vector) <= stats.d_max)
        .collect();
    let best = members
        .iter()
        .map(|e| dist(&e.vector))
        .fold(f64::INFINITY, f64::min);
    members
        .into_iter()
        .filter(|e| dist(&e.vector) == best)
        .map(|e| e.id.clone())
        .collect()
}

/// Membership of every domain element in category `name`, from raw vectors.
pub fn oracle_extension(inst: &Instance, name: &str) -> Vec<bool> {
    let stats = inst.model.stats(name).unwrap();
    inst.model
        .domain()
        .elements()
        .iter()
        .map(|e| {
            let d = stats
                .bmu_vectors
                .iter()
                .map(|b| euclidean(&e.vector, b))
                .fold(f64::INFINITY, f64::min);
            d <= stats.d_max
        })
        .collect()
}
