//! Unmixedness, Cohen-Macaulayness and related invariants for edge ideals
//! of graphs whose height is half the number of vertices.

pub mod census;
pub mod complex;
pub mod criteria;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod invariants;
pub mod pairing;
pub mod report;
pub mod text;
pub mod transform;
pub mod verdict;

pub use complex::{Field, SimplicialComplex};
pub use criteria::{cm_verdict, is_cohen_macaulay, CmOptions, CmReport, Route};
pub use error::{Error, Result};
pub use graph::{ClassMembership, Graph};
pub use pairing::{find_star_labeling, PairedLabeling};
pub use transform::{b_graft, BGraftSpec, Block};
pub use verdict::{Certificate, Outcome, Verdict};
