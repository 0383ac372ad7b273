//! Routes each query to the semantics that can answer it.

use serde_json::{json, Value};
use somsem::cwm::{CheckResult, CwmModel, Method};
use somsem::fuzzy::FuzzyModel;
use somsem::lang::{parse_query_file, Axiom, Cmp, Concept, Degree, Query};
use somsem::metrics;
use somsem::prob::ProbModel;
use somsem::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    /// Strict inclusions against the preferential model.
    Pref,
    /// Strict inclusions as fuzzy inclusions of degree 1.
    Fuzzy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Category-level conditions, falling back to enumeration when they
    /// do not decide the query.
    Auto,
    /// Category-level conditions only.
    Fast,
    /// Enumeration only.
    Exact,
}

pub struct Engines<'a> {
    pub cwm: &'a CwmModel,
    pub fuzzy: &'a FuzzyModel,
    /// `None` when the connective family has no probability semantics.
    pub prob: Option<&'a ProbModel>,
    pub mode: Mode,
    pub strategy: Strategy,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Verdict(Option<bool>),
    Value(f64),
    Error(String),
}

#[derive(Debug, Clone)]
pub struct Line {
    pub line: usize,
    pub query: String,
    pub outcome: Outcome,
    pub method: String,
    pub detail: Vec<(&'static str, String)>,
    pub parse_error: bool,
}

impl Line {
    pub fn text(&self) -> String {
        let result = match &self.outcome {
            Outcome::Verdict(Some(true)) => "holds".to_string(),
            Outcome::Verdict(Some(false)) => "fails".to_string(),
            Outcome::Verdict(None) => "unknown".to_string(),
            Outcome::Value(v) => v.to_string(),
            Outcome::Error(_) => "error".to_string(),
        };
        let mut detail: Vec<String> = self
            .detail
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        if let Outcome::Error(e) = &self.outcome {
            detail.push(e.clone());
        }
        format!(
            "{}\t{}\t{}\t{}",
            self.query,
            result,
            self.method,
            detail.join(" ")
        )
    }

    pub fn json(&self) -> Value {
        let mut obj = json!({
            "line": self.line,
            "query": self.query,
            "method": self.method,
        });
        match &self.outcome {
            Outcome::Verdict(v) => obj["holds"] = json!(v),
            Outcome::Value(v) => obj["value"] = json!(v),
            Outcome::Error(e) => obj["error"] = json!(e),
        }
        for (k, v) in &self.detail {
            obj[*k] = v
                .parse::<f64>()
                .map(|f| json!(f))
                .unwrap_or_else(|_| json!(v));
        }
        obj
    }
}

#[derive(Debug, Default)]
pub struct Summary {
    pub total: usize,
    pub holds: usize,
    pub fails: usize,
    pub unknown: usize,
    pub values: usize,
    pub errors: usize,
    pub parse_errors: usize,
}

impl Summary {
    pub fn of(lines: &[Line]) -> Self {
        let mut s = Summary {
            total: lines.len(),
            ..Summary::default()
        };
        for l in lines {
            match l.outcome {
                Outcome::Verdict(Some(true)) => s.holds += 1,
                Outcome::Verdict(Some(false)) => s.fails += 1,
                Outcome::Verdict(None) => s.unknown += 1,
                Outcome::Value(_) => s.values += 1,
                Outcome::Error(_) if l.parse_error => s.parse_errors += 1,
                Outcome::Error(_) => s.errors += 1,
            }
        }
        s
    }

    pub fn text(&self) -> String {
        format!(
            "{} queries: {} hold, {} fail, {} unknown, {} values, {} errors, {} parse errors",
            self.total,
            self.holds,
            self.fails,
            self.unknown,
            self.values,
            self.errors,
            self.parse_errors
        )
    }

    pub fn json(&self) -> Value {
        json!({
            "total": self.total,
            "holds": self.holds,
            "fails": self.fails,
            "unknown": self.unknown,
            "values": self.values,
            "errors": self.errors,
            "parse_errors": self.parse_errors,
        })
    }
}

pub fn run(engines: &Engines<'_>, text: &str) -> Vec<Line> {
    parse_query_file(text)
        .into_iter()
        .map(|(line, body, parsed)| match parsed {
            Ok(q) => {
                let mut out = Line {
                    line,
                    query: q.to_string(),
                    outcome: Outcome::Verdict(None),
                    method: String::new(),
                    detail: Vec::new(),
                    parse_error: false,
                };
                if let Err(e) = answer(engines, &q, &mut out) {
                    out.outcome = Outcome::Error(e.to_string());
                    if out.method.is_empty() {
                        out.method = "-".into();
                    }
                }
                out
            }
            Err(e) => Line {
                line,
                query: body,
                outcome: Outcome::Error(e.to_string()),
                method: "parse".into(),
                detail: Vec::new(),
                parse_error: true,
            },
        })
        .collect()
}

fn record(out: &mut Line, r: &CheckResult, method: &str) {
    out.outcome = Outcome::Verdict(Some(r.holds));
    out.method = method.to_string();
    if let Some(c) = &r.counterexample {
        out.detail.push(("counterexample", c.clone()));
    }
    if let Some(p) = r.plausibility {
        out.detail.push(("plausibility", p.to_string()));
    }
}

fn category_pair<'c>(l: &'c Concept, r: &'c Concept) -> Option<(&'c str, &'c str)> {
    Some((l.as_atom()?, r.as_atom()?))
}

fn answer(e: &Engines<'_>, q: &Query, out: &mut Line) -> somsem::Result<()> {
    match q {
        Query::CheckAxiom(Axiom::Strict(l, r)) if e.mode == Mode::Fuzzy => {
            let ax = Axiom::FuzzyInclusion {
                lhs: l.clone(),
                rhs: r.clone(),
                cmp: Cmp::Ge,
                n: Degree::new(1.0).expect("1 is a degree"),
            };
            fuzzy_axiom(e, &ax, out)
        }
        Query::CheckAxiom(Axiom::Strict(l, r)) => strict(e, l, r, out),
        Query::CheckAxiom(Axiom::Defeasible(l, r)) => typicality(e, l, r, out),
        Query::CheckAxiom(ax) => fuzzy_axiom(e, ax, out),
        Query::InclusionDegree(l, r) => {
            let (v, w) = e.fuzzy.inclusion_degree(l, r)?;
            out.outcome = Outcome::Value(v);
            out.method = format!("fuzzy:{}", e.fuzzy.family());
            out.detail.push(("witness", w));
            Ok(())
        }
        Query::Membership { concept, element } => {
            out.outcome = Outcome::Value(e.fuzzy.membership(concept, element)?);
            out.method = format!("fuzzy:{}", e.fuzzy.family());
            Ok(())
        }
        Query::Plausibility { src, dst } => {
            let (a, b) = (e.cwm.stats(src)?, e.cwm.stats(dst)?);
            out.outcome = Outcome::Value(metrics::plausibility(a, b)?);
            out.method = "metrics".into();
            Ok(())
        }
        Query::Prob(_)
        | Query::CondProb { .. }
        | Query::ProbGivenElement { .. }
        | Query::Likelihood { .. } => {
            let p = e
                .prob
                .ok_or(Error::IncompatibleFamily(e.fuzzy.family().name()))?;
            out.method = format!("prob:{}", e.fuzzy.family());
            out.outcome = Outcome::Value(match q {
                Query::Prob(c) => p.prob(c)?,
                Query::CondProb { concept, given } => p.cond_prob(concept, given)?,
                Query::ProbGivenElement { concept, element } => {
                    p.prob_given_element(concept, element)?
                }
                Query::Likelihood { element, concept } => p.likelihood(element, concept)?,
                _ => unreachable!(),
            });
            Ok(())
        }
    }
}

fn strict(e: &Engines<'_>, l: &Concept, r: &Concept, out: &mut Line) -> somsem::Result<()> {
    match (category_pair(l, r), e.strategy) {
        (Some((a, b)), Strategy::Auto | Strategy::Fast) => {
            let fast = e.cwm.check_strict_fast(a, b)?;
            if fast.holds {
                record(out, &fast, Method::FastSufficient.as_str());
            } else if e.strategy == Strategy::Fast {
                out.outcome = Outcome::Verdict(None);
                out.method = "fast-sufficient (inconclusive)".into();
            } else {
                let general = e.cwm.check_strict_general(l, r)?;
                record(out, &general, "general (fast inconclusive)");
            }
        }
        (None, Strategy::Fast) => {
            let general = e.cwm.check_strict_general(l, r)?;
            record(
                out,
                &general,
                "general (no fast path for compound concepts)",
            );
        }
        _ => {
            let general = e.cwm.check_strict_general(l, r)?;
            record(out, &general, Method::General.as_str());
        }
    }
    Ok(())
}

fn typicality(e: &Engines<'_>, l: &Concept, r: &Concept, out: &mut Line) -> somsem::Result<()> {
    match (category_pair(l, r), e.strategy) {
        (Some((a, b)), Strategy::Auto | Strategy::Fast) => {
            let fast = e.cwm.check_typ_fast(a, b)?;
            record(out, &fast, Method::FastExact.as_str());
        }
        (None, Strategy::Fast) => {
            let general = e.cwm.check_typ_general(l, r)?;
            record(
                out,
                &general,
                "general (no fast path for compound concepts)",
            );
        }
        _ => {
            let general = e.cwm.check_typ_general(l, r)?;
            record(out, &general, Method::General.as_str());
        }
    }
    Ok(())
}

fn fuzzy_axiom(e: &Engines<'_>, ax: &Axiom, out: &mut Line) -> somsem::Result<()> {
    let r = e.fuzzy.check_fuzzy_axiom(ax)?;
    out.outcome = Outcome::Verdict(Some(r.holds));
    out.method = format!("fuzzy:{}", e.fuzzy.family());
    out.detail.push(("degree", r.degree.to_string()));
    if let Some(w) = r.witness {
        out.detail.push(("witness", w));
    }
    Ok(())
}
