//! Serializable reports. Everything is in canonical order so that output is
//! deterministic and diffable.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use flagqk::algebra::{LaurentPoly, TermKey};
use flagqk::qkbig::QKElement;
use flagqk::{Error, FlagVariety, Novikov, Result, TSeries};

use crate::classes::basis_label;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceInfo {
    #[serde(rename = "type")]
    pub cartan_type: String,
    pub delta_p: Vec<usize>,
    pub dimension: usize,
    pub points: usize,
}

impl SpaceInfo {
    pub fn of(space: &FlagVariety) -> Self {
        SpaceInfo {
            cartan_type: space.group().cartan_type().to_string(),
            delta_p: space.delta_p().indices().iter().map(|i| i + 1).collect(),
            dimension: space.dimension(),
            points: space.num_points(),
        }
    }
}

/// One term `coeff · Q^q t^t`. `alpha` names the line degree of `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub q: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<usize>,
    pub t: BTreeMap<String, u32>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisTerm {
    pub basis: String,
    pub series: Vec<SeriesTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisInfo {
    pub basis: String,
    pub word: String,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineInfo {
    pub alpha: usize,
    pub delta_p_prime: Vec<usize>,
    pub m0: SpaceInfo,
    pub m1: SpaceInfo,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Description {
    pub basis: Vec<BasisInfo>,
    pub line_degrees: Vec<LineInfo>,
    pub other_degrees: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(default)]
    pub equivariant: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<Description>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Vec<SeriesTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Vec<BasisTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<Check>>,
}

impl Report {
    pub fn new(command: &str, space: Option<&FlagVariety>) -> Self {
        Report {
            command: command.into(),
            space: space.map(SpaceInfo::of),
            order: None,
            equivariant: false,
            description: None,
            value: None,
            series: None,
            result: None,
            checks: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("report: {e}")))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(s) = &self.space {
            let _ = writeln!(
                out,
                "space: {}/P{{{}}}  dim {}  {} fixed points",
                s.cartan_type,
                join(&s.delta_p),
                s.dimension,
                s.points
            );
        }
        if let Some(n) = self.order {
            let mode = if self.equivariant {
                "equivariant"
            } else {
                "non-equivariant"
            };
            let _ = writeln!(out, "order: N = {n} ({mode})");
        }
        if let Some(d) = &self.description {
            let _ = writeln!(out, "basis:");
            for b in &d.basis {
                let _ = writeln!(
                    out,
                    "  O{:<10} word {:<16} length {}",
                    wrap(&b.basis),
                    b.word,
                    b.length
                );
            }
            for l in &d.line_degrees {
                let _ = writeln!(
                    out,
                    "line degree α{}: Δ_P' = {{{}}}, M0 = {}/P{{{}}} (dim {}), M1 = {}/P{{{}}} (dim {})",
                    l.alpha,
                    join(&l.delta_p_prime),
                    l.m0.cartan_type,
                    join(&l.m0.delta_p),
                    l.m0.dimension,
                    l.m1.cartan_type,
                    join(&l.m1.delta_p),
                    l.m1.dimension
                );
            }
            for a in &d.other_degrees {
                let _ = writeln!(out, "degree α{a}: not a line degree");
            }
        }
        if let Some(v) = &self.value {
            let _ = writeln!(out, "{v}");
        }
        if let Some(s) = &self.series {
            let _ = writeln!(out, "{}", render_terms(s));
        }
        if let Some(r) = &self.result {
            for b in r {
                let _ = writeln!(out, "O{}: {}", wrap(&b.basis), render_terms(&b.series));
            }
            if r.is_empty() {
                let _ = writeln!(out, "0");
            }
        }
        if let Some(checks) = &self.checks {
            for c in checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "{status}  {}/{}: {}", c.suite, c.name, c.detail);
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            let _ = writeln!(out, "{} checks, {failed} failed", checks.len());
        }
        out
    }
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn wrap(label: &str) -> String {
    if label.starts_with('[') {
        label.to_string()
    } else {
        format!("[{label}]")
    }
}

fn render_terms(terms: &[SeriesTerm]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|term| {
            let mut mono = Vec::new();
            if term.q == 1 {
                mono.push(match term.alpha {
                    Some(a) => format!("Q{a}"),
                    None => "Q".into(),
                });
            }
            for (label, e) in &term.t {
                let name = format!("t{}", wrap(label));
                mono.push(if *e == 1 { name } else { format!("{name}^{e}") });
            }
            if mono.is_empty() {
                format!("({})", term.coeff)
            } else {
                format!("({})*{}", term.coeff, mono.join("*"))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn render_coeff(c: &LaurentPoly, equivariant: bool) -> String {
    if equivariant {
        c.render("y")
    } else {
        flagqk::algebra::laurent::render_rational(&c.specialize_characters())
    }
}

/// Serializes a series whose `t`-variables are indexed by basis positions `1..`.
pub fn series_terms(s: &TSeries, space: &FlagVariety, equivariant: bool) -> Vec<SeriesTerm> {
    let labels: Vec<String> = (1..space.num_points())
        .map(|k| basis_label(space, k))
        .collect();
    s.terms()
        .filter_map(|(key, c)| {
            let coeff = render_coeff(c, equivariant);
            if coeff == "0" {
                return None;
            }
            let (q, alpha) = match key.novikov {
                Novikov::One => (0, None),
                Novikov::Q(a) => (1, Some(a + 1)),
            };
            let t = key
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| (labels[k].clone(), e))
                .collect();
            Some(SeriesTerm { q, alpha, t, coeff })
        })
        .collect()
}

pub fn element_terms(x: &QKElement, equivariant: bool) -> Vec<BasisTerm> {
    let space = x.space();
    x.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| BasisTerm {
            basis: basis_label(space, k),
            series: series_terms(c, space, equivariant),
        })
        .filter(|b| !b.series.is_empty())
        .collect()
}

/// Inverse of [`series_terms`].
pub fn parse_series(terms: &[SeriesTerm], space: &FlagVariety, order: u32) -> Result<TSeries> {
    let labels: Vec<String> = (1..space.num_points())
        .map(|k| basis_label(space, k))
        .collect();
    let nvars = labels.len();
    let rank = space.rank();
    let mut out = TSeries::zero(nvars, rank, order);
    for term in terms {
        let mut exps = vec![0u32; nvars];
        for (label, &e) in &term.t {
            let k = labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::Parse(format!("unknown t-variable {label}")))?;
            exps[k] = e;
        }
        let novikov = match (term.q, term.alpha) {
            (0, None) => Novikov::One,
            (1, Some(a)) if a >= 1 && a <= rank => Novikov::Q(a - 1),
            _ => return Err(Error::Parse("bad Novikov part".into())),
        };
        let c = LaurentPoly::parse(&term.coeff, rank, "y")?;
        out.add_term(TermKey::new(novikov, exps), c);
    }
    Ok(out)
}
