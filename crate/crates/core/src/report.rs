//! The analysis document shared by the command-line tool and the browser demo.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::complex::Field;
use crate::criteria::{cm_verdict, generator_bounds, CmOptions, Route};
use crate::error::{Error, Result};
use crate::graph::ClassMembership;
use crate::invariants::{invariant_report, InvariantReport};
use crate::pairing::{find_star_labeling, PairedLabeling};
use crate::text::parse;
use crate::verdict::{Outcome, Verdict};

pub const SCHEMA_ID: &str = "edgecm/analysis-v1";

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LabelingField {
    Found {
        /// `declared` when taken from a `pairs` directive, `search` otherwise.
        source: &'static str,
        n: usize,
        pairs: Vec<(String, String)>,
    },
    Error {
        message: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct CmSection {
    /// The verdict of route (a); all decided routes agree with it.
    pub value: Outcome,
    pub field: Field,
    pub routes: BTreeMap<Route, Verdict>,
    /// Pair order (1-based, new position to old index) satisfying `(**)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relabeling: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisDocument {
    pub schema: &'static str,
    pub input_digest: String,
    pub class: ClassMembership,
    pub in_class: bool,
    pub labeling: LabelingField,
    pub unmixed: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cm: Option<CmSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantReport>,
    pub warnings: Vec<String>,
}

impl AnalysisDocument {
    /// True when some requested route could not decide.
    pub fn has_inconclusive(&self) -> bool {
        self.unmixed.value == Outcome::Inconclusive
            || self
                .cm
                .as_ref()
                .is_some_and(|c| c.routes.values().any(|v| v.value == Outcome::Inconclusive))
    }

    /// Short human-readable summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = &self.class;
        s.push_str(&format!(
            "class: {} ({} vertices, height {}{})\n",
            if self.in_class {
                "in class"
            } else {
                "outside class"
            },
            c.vertex_count,
            c.height,
            if c.has_isolated {
                ", isolated vertices"
            } else {
                ""
            }
        ));
        match &self.labeling {
            LabelingField::Found { pairs, source, .. } => {
                let p: Vec<String> = pairs.iter().map(|(x, y)| format!("{x}-{y}")).collect();
                s.push_str(&format!("labeling ({source}): {}\n", p.join(" ")));
            }
            LabelingField::Error { message } => {
                s.push_str(&format!("labeling: none ({message})\n"))
            }
        }
        s.push_str(&format!("unmixed: {}\n", summarize(&self.unmixed)));
        if let Some(cm) = &self.cm {
            s.push_str(&format!("cohen-macaulay: {}\n", outcome_word(cm.value)));
            for (r, v) in &cm.routes {
                s.push_str(&format!("  route {r}: {}\n", summarize(v)));
            }
            if let Some(p) = &cm.relabeling {
                s.push_str(&format!("  upper-triangular order: {p:?}\n"));
            }
        }
        if let Some(inv) = &self.invariants {
            s.push_str(&format!(
                "type {}, level {}, gorenstein {}\n",
                inv.cm_type, inv.level, inv.gorenstein
            ));
        }
        for w in &self.warnings {
            s.push_str(&format!("warning: {w}\n"));
        }
        s
    }
}

fn outcome_word(o: Outcome) -> &'static str {
    match o {
        Outcome::True => "yes",
        Outcome::False => "no",
        Outcome::Inconclusive => "inconclusive",
    }
}

fn summarize(v: &Verdict) -> String {
    let cert = serde_json::to_value(&v.certificate).unwrap_or_default();
    let kind = cert.get("kind").and_then(|k| k.as_str()).unwrap_or("none");
    if kind == "none" {
        outcome_word(v.value).to_string()
    } else {
        format!("{} [{kind}] {}", outcome_word(v.value), compact(&cert))
    }
}

fn compact(cert: &serde_json::Value) -> String {
    let mut v = cert.clone();
    if let Some(m) = v.as_object_mut() {
        m.remove("kind");
    }
    let s = v.to_string();
    if s.len() > 160 {
        format!(
            "{}...",
            &s[..s
                .char_indices()
                .take_while(|(i, _)| *i < 157)
                .last()
                .map_or(0, |(i, c)| i + c.len_utf8())]
        )
    } else {
        s
    }
}

pub fn digest(src: &str) -> String {
    let h = Sha256::digest(src.as_bytes());
    let hex: String = h.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// The labeling used for analysis: the declared `pairs` when they satisfy
/// `(*)`, otherwise the first one found by search.
pub fn choose_labeling(
    src_pairs: Option<usize>,
    g: &crate::graph::Graph,
) -> (Result<PairedLabeling>, &'static str) {
    if let Some(n) = src_pairs {
        if 2 * n == g.vertex_count() {
            let pairs = (1..=n).map(|i| (format!("x{i}"), format!("y{i}")));
            if let Ok(pl) = PairedLabeling::new(g.clone(), pairs) {
                return (Ok(pl), "declared");
            }
        }
    }
    (find_star_labeling(g), "search")
}

/// Full analysis of a graph file. Errors are input errors or route
/// disagreements; undecided routes are reported in the document.
pub fn analyze(src: &str, routes: &[Route], opts: &CmOptions) -> Result<AnalysisDocument> {
    let file = parse(src)?;
    let g = &file.graph;
    let class = g.classify();
    let mut warnings = Vec::new();
    let unmixed_brute = g.is_unmixed_bruteforce();

    let (labeling, source) = choose_labeling(file.pairs, g);
    if file.pairs.is_some() && source == "search" {
        warnings.push("declared pairs do not satisfy (*); searched for a labeling instead".into());
    }
    let mut doc = AnalysisDocument {
        schema: SCHEMA_ID,
        input_digest: digest(src),
        class,
        in_class: class.in_class,
        labeling: LabelingField::Error {
            message: String::new(),
        },
        unmixed: unmixed_brute.clone(),
        cm: None,
        bounds: None,
        invariants: None,
        warnings,
    };
    if !class.in_class {
        doc.labeling = LabelingField::Error {
            message: Error::NotInClass {
                vertex_count: class.vertex_count,
                height: class.height,
                has_isolated: class.has_isolated,
            }
            .to_string(),
        };
        doc.warnings
            .push("graph is outside the class; only cover sizes were checked".into());
        return Ok(doc);
    }
    let pl = match labeling {
        Ok(pl) => pl,
        Err(e) => {
            doc.labeling = LabelingField::Error {
                message: e.to_string(),
            };
            doc.warnings.push(
                "no labeling satisfying (*); unmixedness reported from cover sizes only".into(),
            );
            return Ok(doc);
        }
    };
    doc.labeling = LabelingField::Found {
        source,
        n: pl.n(),
        pairs: pl.pairs(),
    };
    doc.unmixed = crate::criteria::unmixed_verdict(g)?;
    doc.bounds = Some(generator_bounds(&pl));
    if !doc.unmixed.is_true() {
        return Ok(doc);
    }
    let report = cm_verdict(&pl, routes, opts)?;
    let relabeling = if report.value == Outcome::True {
        let (_, perm) = pl.relabel_for_double_star()?;
        Some(perm.into_iter().map(|i| i + 1).collect())
    } else {
        None
    };
    doc.cm = Some(CmSection {
        value: report.value,
        field: opts.field,
        routes: report.routes,
        relabeling,
    });
    if report.value == Outcome::True {
        doc.invariants = Some(invariant_report(&pl)?);
    }
    Ok(doc)
}
