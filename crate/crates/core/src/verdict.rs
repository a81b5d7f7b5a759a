//! Verdicts and the certificates that back them.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::complex::HomologyProfile;

/// Three-valued outcome. Serializes as `true`, `false` or `"inconclusive"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    True,
    False,
    Inconclusive,
}

impl Outcome {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Outcome::True
        } else {
            Outcome::False
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Outcome::True => Some(true),
            Outcome::False => Some(false),
            Outcome::Inconclusive => None,
        }
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.as_bool() {
            Some(b) => s.serialize_bool(b),
            None => s.serialize_str("inconclusive"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub value: Outcome,
    pub route: String,
    pub certificate: Certificate,
}

impl Verdict {
    pub fn decided(route: impl Into<String>, value: bool, certificate: Certificate) -> Self {
        Verdict {
            value: Outcome::from_bool(value),
            route: route.into(),
            certificate,
        }
    }

    pub fn inconclusive(route: impl Into<String>, certificate: Certificate) -> Self {
        Verdict {
            value: Outcome::Inconclusive,
            route: route.into(),
            certificate,
        }
    }

    pub fn is_true(&self) -> bool {
        self.value == Outcome::True
    }

    pub fn is_false(&self) -> bool {
        self.value == Outcome::False
    }
}

pub type Edge = (String, String);

/// Route-specific evidence. Vertex sets are name lists in vertex order;
/// pair indices are 1-based.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    None,
    /// Size → number of minimal covers (or facets) of that size, with two
    /// sets of different sizes when they exist.
    CoverSizes {
        sizes: BTreeMap<usize, usize>,
        witness: Option<(Vec<String>, Vec<String>)>,
    },
    /// A violated implication of the structural unmixedness test.
    /// `present` edges are in the graph, `missing` (if any) is not.
    StructuralViolation {
        condition: String,
        present: Vec<Edge>,
        missing: Option<Edge>,
    },
    /// The alternating cycle `x_{i1} y_{i1} x_{i2} ... y_{ir} x_{i1}`.
    Cycle {
        indices: Vec<usize>,
        vertices: Vec<String>,
    },
    /// Facets joined consecutively along codimension-one faces.
    FacetChain {
        chain: Vec<Vec<String>>,
    },
    FacetComponents {
        components: Vec<Vec<Vec<String>>>,
    },
    Shelling {
        order: Vec<Vec<String>>,
    },
    NoShelling {
        facets: usize,
    },
    /// A perfect matching other than the labeling's matching edges, and the
    /// cycle read off from its permutation.
    SecondMatching {
        matching: Vec<Edge>,
        cycle: Vec<usize>,
    },
    /// A subset `T` for which `O_T(G)` has minimal covers of different sizes.
    MixedTransform {
        subset: Vec<usize>,
        covers: (Vec<String>, Vec<String>),
    },
    /// All `2^n` subsets (or `checked` sampled ones) gave unmixed graphs.
    TransformsChecked {
        checked: usize,
        exhaustive: bool,
    },
    Homology(HomologyProfile),
    Capacity {
        what: String,
        limit: usize,
        actual: usize,
    },
    /// A minimal cover that does not pick exactly one vertex from a pair.
    CoverShape {
        cover: Vec<String>,
        pair: usize,
    },
    Bounds {
        edges: usize,
        unmixed_bound: usize,
        cm_bound: usize,
        unmixed_slack: Option<i64>,
        cm_slack: Option<i64>,
    },
    Vertex {
        name: String,
    },
    Degrees {
        min_degree: usize,
    },
    Note {
        text: String,
    },
}
