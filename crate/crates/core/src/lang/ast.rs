use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Boolean concept over learned category names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Concept {
    Top,
    Bot,
    Atom(String),
    Not(Box<Concept>),
    And(Box<Concept>, Box<Concept>),
    Or(Box<Concept>, Box<Concept>),
}

impl Concept {
    pub fn atom(name: impl Into<String>) -> Self {
        Concept::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Self {
        Concept::Not(Box::new(c))
    }

    pub fn and(a: Concept, b: Concept) -> Self {
        Concept::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Concept, b: Concept) -> Self {
        Concept::Or(Box::new(a), Box::new(b))
    }

    pub fn depth(&self) -> usize {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => 1,
            Concept::Not(c) => 1 + c.depth(),
            Concept::And(a, b) | Concept::Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => 1,
            Concept::Not(c) => 1 + c.size(),
            Concept::And(a, b) | Concept::Or(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Atom names in first-occurrence order.
    pub fn atoms(&self) -> Vec<&str> {
        fn walk<'a>(c: &'a Concept, out: &mut Vec<&'a str>) {
            match c {
                Concept::Top | Concept::Bot => {}
                Concept::Atom(n) => {
                    if !out.contains(&n.as_str()) {
                        out.push(n);
                    }
                }
                Concept::Not(c) => walk(c, out),
                Concept::And(a, b) | Concept::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Concept::Atom(n) => Some(n),
            _ => None,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Concept::Or(..) => 1,
            Concept::And(..) => 2,
            Concept::Not(_) => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Left operands need parens only when they bind looser; right
        // operands also at equal precedence (both operators are left-assoc).
        fn child(f: &mut fmt::Formatter<'_>, c: &Concept, min: u8) -> fmt::Result {
            if c.precedence() < min {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        match self {
            Concept::Top => f.write_str("top"),
            Concept::Bot => f.write_str("bot"),
            Concept::Atom(n) => f.write_str(n),
            Concept::Not(c) => {
                f.write_str("not ")?;
                child(f, c, 3)
            }
            Concept::And(a, b) => {
                child(f, a, 2)?;
                f.write_str(" and ")?;
                child(f, b, 3)
            }
            Concept::Or(a, b) => {
                child(f, a, 1)?;
                f.write_str(" or ")?;
                child(f, b, 2)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Cmp {
    Ge,
    Le,
    Gt,
    Lt,
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Ge => ">=",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Lt => "<",
        }
    }
}

impl fmt::Display for Cmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A threshold in `[0,1]`, totally ordered so axioms can live in sets.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Degree(f64);

impl Degree {
    /// `None` unless `n` lies in `[0,1]`.
    pub fn new(n: f64) -> Option<Self> {
        (0.0..=1.0).contains(&n).then_some(Degree(n))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl PartialEq for Degree {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == Ordering::Equal
    }
}

impl Eq for Degree {}

impl PartialOrd for Degree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Degree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl std::hash::Hash for Degree {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    /// `lhs <= rhs`
    Strict(Concept, Concept),
    /// `T(lhs) <= rhs`
    Defeasible(Concept, Concept),
    /// `lhs <= rhs cmp n`
    FuzzyInclusion {
        lhs: Concept,
        rhs: Concept,
        cmp: Cmp,
        n: Degree,
    },
    /// `concept(individual) cmp n`
    FuzzyAssertion {
        concept: Concept,
        individual: String,
        cmp: Cmp,
        n: Degree,
    },
}

impl Axiom {
    pub fn is_fuzzy(&self) -> bool {
        matches!(
            self,
            Axiom::FuzzyInclusion { .. } | Axiom::FuzzyAssertion { .. }
        )
    }
}

fn write_individual(f: &mut fmt::Formatter<'_>, id: &str) -> fmt::Result {
    if is_ident(id) && !is_keyword(id) {
        f.write_str(id)
    } else {
        write!(f, "elem:{id}")
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Strict(l, r) => write!(f, "{l} <= {r}"),
            Axiom::Defeasible(l, r) => write!(f, "T({l}) <= {r}"),
            Axiom::FuzzyInclusion { lhs, rhs, cmp, n } => write!(f, "{lhs} <= {rhs} {cmp} {n}"),
            Axiom::FuzzyAssertion {
                concept,
                individual,
                cmp,
                n,
            } => {
                let shadowed =
                    matches!(concept.as_atom(), Some("T" | "P" | "deg" | "mem" | "plaus"));
                if concept.precedence() >= 4 && !shadowed {
                    write!(f, "{concept}(")?;
                } else {
                    write!(f, "({concept})(")?;
                }
                write_individual(f, individual)?;
                write!(f, ") {cmp} {n}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Query {
    CheckAxiom(Axiom),
    /// `P(C)`
    Prob(Concept),
    /// `P(C | D)`
    CondProb {
        concept: Concept,
        given: Concept,
    },
    /// `P(C | elem:ID)`
    ProbGivenElement {
        concept: Concept,
        element: String,
    },
    /// `P(elem:ID | C)`
    Likelihood {
        element: String,
        concept: Concept,
    },
    /// `deg(C <= D)`
    InclusionDegree(Concept, Concept),
    /// `mem(C, elem:ID)`
    Membership {
        concept: Concept,
        element: String,
    },
    /// `plaus(Ci, Cj)`
    Plausibility {
        src: String,
        dst: String,
    },
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::CheckAxiom(a) => write!(f, "{a}"),
            Query::Prob(c) => write!(f, "P({c})"),
            Query::CondProb { concept, given } => write!(f, "P({concept} | {given})"),
            Query::ProbGivenElement { concept, element } => {
                write!(f, "P({concept} | elem:{element})")
            }
            Query::Likelihood { element, concept } => write!(f, "P(elem:{element} | {concept})"),
            Query::InclusionDegree(l, r) => write!(f, "deg({l} <= {r})"),
            Query::Membership { concept, element } => write!(f, "mem({concept}, elem:{element})"),
            Query::Plausibility { src, dst } => write!(f, "plaus({src}, {dst})"),
        }
    }
}

pub(crate) const KEYWORDS: [&str; 5] = ["and", "or", "not", "top", "bot"];

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// `[A-Za-z_][A-Za-z0-9_]*`
pub fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
