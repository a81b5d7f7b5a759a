//! Cohen-Macaulay type, socle generators, level and Gorenstein verdicts,
//! read off from `O_[n](G)` restricted to `X`.

use serde::Serialize;

use crate::criteria::is_cohen_macaulay;
use crate::error::{Error, Result};
use crate::pairing::PairedLabeling;
use crate::transform::restricted_o_full;
use crate::verdict::{Certificate, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub cm_type: usize,
    pub socle_monomials: Vec<Vec<String>>,
    pub level: bool,
    pub gorenstein: bool,
    pub complete_intersection: bool,
}

fn require_cm(pl: &PairedLabeling) -> Result<()> {
    if is_cohen_macaulay(pl)? {
        Ok(())
    } else {
        Err(Error::NotCohenMacaulay)
    }
}

/// Maximal independent sets of `O_[n](G)|_X`; each is the support of a
/// socle monomial.
pub fn socle_generators(pl: &PairedLabeling) -> Result<Vec<Vec<String>>> {
    require_cm(pl)?;
    Ok(restricted_o_full(pl).maximal_independent_sets())
}

/// Number of minimal vertex covers of `O_[n](G)|_X`.
pub fn cm_type(pl: &PairedLabeling) -> Result<usize> {
    require_cm(pl)?;
    let h = restricted_o_full(pl);
    let t = h.minimal_cover_masks().len();
    debug_assert_eq!(t, h.maximal_independent_masks().len());
    Ok(t)
}

pub fn is_level(pl: &PairedLabeling) -> Result<Verdict> {
    require_cm(pl)?;
    let mut v = restricted_o_full(pl).is_unmixed_bruteforce();
    v.route = "level".into();
    Ok(v)
}

/// Gorenstein exactly when the only edges are the matching edges.
pub fn is_gorenstein(pl: &PairedLabeling) -> Result<Verdict> {
    require_cm(pl)?;
    let g = pl.graph();
    let only_matching = g.edge_count() == pl.n();
    let certificate = if only_matching {
        Certificate::None
    } else {
        let extra = g
            .edge_names()
            .into_iter()
            .find(|e| {
                !pl.pairs()
                    .iter()
                    .any(|p| (p.0 == e.0 && p.1 == e.1) || (p.0 == e.1 && p.1 == e.0))
            })
            .expect("more edges than pairs");
        Certificate::Note {
            text: format!("extra edge {} {}", extra.0, extra.1),
        }
    };
    Ok(Verdict::decided("gorenstein", only_matching, certificate))
}

pub fn invariant_report(pl: &PairedLabeling) -> Result<InvariantReport> {
    let socle_monomials = socle_generators(pl)?;
    let cm_type = cm_type(pl)?;
    if cm_type != socle_monomials.len() {
        return Err(Error::RouteDisagreement(format!(
            "type {cm_type} but {} socle generators",
            socle_monomials.len()
        )));
    }
    let level = is_level(pl)?.is_true();
    let gorenstein = is_gorenstein(pl)?.is_true();
    if gorenstein != (cm_type == 1) {
        return Err(Error::RouteDisagreement(format!(
            "type {cm_type} but edge set gorenstein = {gorenstein}"
        )));
    }
    Ok(InvariantReport {
        cm_type,
        socle_monomials,
        level,
        gorenstein,
        complete_intersection: gorenstein,
    })
}
