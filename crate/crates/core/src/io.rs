//! Input file formats.
//!
//! * stimuli: CSV with header `id,category,f1,...,fm`
//! * probes: CSV with header `id,f1,...,fm` (a `category` column is ignored)
//! * specificity overrides: lines `Ch > Cj`, `#` starts a comment
//! * distribution: CSV `id,mass`, header optional

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fuzzy::FuzzyModel;
use crate::som::Stimulus;

fn format_err(path: &str, line: usize, message: impl Into<String>) -> Error {
    Error::FileFormat {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn records(text: &str, path: &str) -> Result<Vec<(usize, Vec<String>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            format_err(path, line, e.to_string())
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.iter().all(str::is_empty) {
            continue;
        }
        out.push((line, rec.iter().map(str::to_string).collect()));
    }
    Ok(out)
}

fn features(path: &str, line: usize, fields: &[String]) -> Result<Vec<f64>> {
    fields
        .iter()
        .map(|f| {
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format_err(path, line, format!("`{f}` is not a finite number")))
        })
        .collect()
}

fn parse_rows(text: &str, path: &str, labeled: bool) -> Result<Vec<Stimulus>> {
    let rows = records(text, path)?;
    let Some(((hline, header), body)) = rows.split_first() else {
        return Err(Error::EmptyDataset);
    };
    if header.first().map(String::as_str) != Some("id") {
        return Err(format_err(
            path,
            *hline,
            "missing required column `id` (first header field)",
        ));
    }
    let has_category = header.get(1).map(String::as_str) == Some("category");
    if labeled && !has_category {
        return Err(format_err(
            path,
            *hline,
            "missing required column `category` (second header field)",
        ));
    }
    let skip = if has_category { 2 } else { 1 };
    let dim = header.len() - skip;
    if dim == 0 {
        return Err(format_err(path, *hline, "no feature columns"));
    }
    let mut out = Vec::with_capacity(body.len());
    for (line, rec) in body {
        if rec.len() != header.len() {
            return Err(format_err(
                path,
                *line,
                format!("expected {} fields, found {}", header.len(), rec.len()),
            ));
        }
        let id = rec[0].clone();
        if id.is_empty() {
            return Err(format_err(path, *line, "empty id"));
        }
        if out.iter().any(|s: &Stimulus| s.id == id) {
            return Err(format_err(path, *line, format!("duplicate id `{id}`")));
        }
        let vector = features(path, *line, &rec[skip..])?;
        if labeled {
            if rec[1].is_empty() {
                return Err(format_err(path, *line, "empty category"));
            }
            out.push(Stimulus::new(id, rec[1].clone(), vector));
        } else {
            out.push(Stimulus::probe(id, vector));
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(out)
}

pub fn parse_stimuli(text: &str, path: &str) -> Result<Vec<Stimulus>> {
    parse_rows(text, path, true)
}

pub fn read_stimuli(path: impl AsRef<Path>) -> Result<Vec<Stimulus>> {
    let path = path.as_ref();
    parse_stimuli(&read(path)?, &path.display().to_string())
}

pub fn parse_probes(text: &str, path: &str) -> Result<Vec<Stimulus>> {
    parse_rows(text, path, false)
}

pub fn read_probes(path: impl AsRef<Path>) -> Result<Vec<Stimulus>> {
    let path = path.as_ref();
    parse_probes(&read(path)?, &path.display().to_string())
}

/// `(more specific, less specific)` pairs.
pub fn parse_specificity(text: &str, path: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let parsed = body.split_once('>').and_then(|(h, j)| {
            let (h, j) = (h.trim(), j.trim());
            (crate::lang::is_ident(h) && crate::lang::is_ident(j))
                .then(|| (h.to_string(), j.to_string()))
        });
        match parsed {
            Some((h, j)) if h == j => {
                return Err(format_err(
                    path,
                    i + 1,
                    format!("`{h}` cannot be more specific than itself"),
                ))
            }
            Some(pair) => out.push(pair),
            None => {
                return Err(format_err(
                    path,
                    i + 1,
                    format!("expected `Ch > Cj`, found `{body}`"),
                ))
            }
        }
    }
    Ok(out)
}

pub fn read_specificity(path: impl AsRef<Path>) -> Result<Vec<(String, String)>> {
    let path = path.as_ref();
    parse_specificity(&read(path)?, &path.display().to_string())
}

pub fn parse_distribution(text: &str, path: &str) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    for (n, (line, rec)) in records(text, path)?.into_iter().enumerate() {
        if n == 0 && rec.first().map(String::as_str) == Some("id") {
            continue;
        }
        if rec.len() != 2 {
            return Err(format_err(
                path,
                line,
                format!("expected `id,mass`, found {} fields", rec.len()),
            ));
        }
        let mass = rec[1]
            .parse::<f64>()
            .map_err(|_| format_err(path, line, format!("`{}` is not a number", rec[1])))?;
        out.push((rec[0].clone(), mass));
    }
    Ok(out)
}

pub fn read_distribution(path: impl AsRef<Path>) -> Result<Vec<(String, f64)>> {
    let path = path.as_ref();
    parse_distribution(&read(path)?, &path.display().to_string())
}

/// Atom memberships of every domain element, one row per element:
/// `id,kind,<category>...`.
pub fn membership_csv(model: &FuzzyModel) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id".to_string(), "kind".to_string()];
    header.extend(model.categories().iter().map(|c| c.name.clone()));
    let write_err = |e: csv::Error| Error::Data(e.to_string());
    w.write_record(&header).map_err(write_err)?;
    let atoms: Vec<_> = model
        .categories()
        .iter()
        .map(|c| crate::lang::Concept::atom(c.name.as_str()))
        .collect();
    for (i, e) in model.domain().elements().iter().enumerate() {
        let mut row = vec![e.id.clone(), e.kind.as_str().to_string()];
        for a in &atoms {
            row.push(model.membership_at(a, i)?.to_string());
        }
        w.write_record(&row).map_err(write_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Data(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
