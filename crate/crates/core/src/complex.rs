//! Simplicial complexes given by their facets: the independence complex of
//! a graph, purity, strong connectedness, shellability, and reduced
//! simplicial homology over a prime field or the rationals.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bits, mask_lex_cmp, Graph, Mask};
use crate::verdict::{Certificate, Verdict};

/// Default bound on the number of facets for the shelling search.
pub const DEFAULT_MAX_SHELLING_FACETS: usize = 20;
/// Default bound on the number of faces for homology computations.
pub const DEFAULT_MAX_FACES: usize = 4096;

/// Coefficient field for homology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Prime(u64),
    Rationals,
}

impl Default for Field {
    fn default() -> Self {
        Field::Prime(2)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F_{p}"),
            Field::Rationals => f.write_str("Q"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts a prime (`2`, `3`, ...) or `Q`/`0` for the rationals.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" | "Q" | "0" | "rationals" => Ok(Field::Rationals),
            _ => {
                let p: u64 = s
                    .parse()
                    .map_err(|_| Error::Input(format!("field must be a prime or Q, got `{s}`")))?;
                let is_prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
                if !is_prime || p >= 1 << 31 {
                    return Err(Error::Input(format!("{p} is not a supported prime")));
                }
                Ok(Field::Prime(p))
            }
        }
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Reduced homology of the link of one face.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyProfile {
    pub face: Vec<String>,
    pub link_dim: isize,
    /// Ranks in dimensions `-1 ..= link_dim`.
    pub reduced_betti: Vec<usize>,
    pub field: Field,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    facets: Vec<Mask>,
}

impl SimplicialComplex {
    /// Builds a complex from facets given as masks over `vertices`.
    /// Non-maximal sets are dropped and the rest sorted.
    pub fn from_masks(vertices: Vec<String>, facets: impl IntoIterator<Item = Mask>) -> Self {
        let mut fs: Vec<Mask> = facets
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let all = fs.clone();
        fs.retain(|&f| !all.iter().any(|&g| g != f && f & g == f));
        fs.sort_by(|&a, &b| mask_lex_cmp(a, b));
        SimplicialComplex {
            vertices,
            facets: fs,
        }
    }

    pub fn from_facets<S: AsRef<str>>(facets: &[Vec<S>]) -> Result<Self> {
        let names: Vec<&str> = facets.iter().flatten().map(|s| s.as_ref()).collect();
        let g = Graph::edgeless(names)?;
        let masks = facets
            .iter()
            .map(|f| g.mask_of(f))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_masks(g.names().to_vec(), masks))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn facet_masks(&self) -> &[Mask] {
        &self.facets
    }

    pub fn names_of(&self, mask: Mask) -> Vec<String> {
        bits(mask).map(|i| self.vertices[i].clone()).collect()
    }

    pub fn facets(&self) -> Vec<Vec<String>> {
        self.facets.iter().map(|&f| self.names_of(f)).collect()
    }

    /// `max #F - 1`; `-1` for `{∅}`.
    pub fn dim(&self) -> isize {
        self.facets
            .iter()
            .map(|f| f.count_ones() as isize)
            .max()
            .unwrap_or(0)
            - 1
    }

    /// One facet per line, vertex names separated by spaces.
    pub fn to_text(&self) -> String {
        self.facets().iter().map(|f| f.join(" ") + "\n").collect()
    }

    pub fn is_pure(&self) -> Verdict {
        let mut sizes = std::collections::BTreeMap::new();
        for f in &self.facets {
            *sizes.entry(f.count_ones() as usize).or_insert(0) += 1;
        }
        let first = self.facets.first().copied();
        let witness = first.and_then(|a| {
            self.facets
                .iter()
                .find(|b| b.count_ones() != a.count_ones())
                .map(|&b| (self.names_of(a), self.names_of(b)))
        });
        Verdict::decided(
            "facet-sizes",
            witness.is_none(),
            Certificate::CoverSizes { sizes, witness },
        )
    }

    fn require_pure(&self) -> Result<usize> {
        let size = self.facets.first().map_or(0, |f| f.count_ones());
        if self.facets.iter().any(|f| f.count_ones() != size) {
            return Err(Error::NotPure);
        }
        Ok(size as usize)
    }

    /// Connectivity of the graph on facets joined along codimension-one faces.
    pub fn is_strongly_connected(&self) -> Result<Verdict> {
        let size = self.require_pure()? as u32;
        let m = self.facets.len();
        let adjacent =
            |a: usize, b: usize| (self.facets[a] & self.facets[b]).count_ones() + 1 == size;
        let mut component = vec![usize::MAX; m];
        let mut parent = vec![usize::MAX; m];
        let mut count = 0;
        for s in 0..m {
            if component[s] != usize::MAX {
                continue;
            }
            component[s] = count;
            let mut queue = VecDeque::from([s]);
            while let Some(a) = queue.pop_front() {
                for b in 0..m {
                    if component[b] == usize::MAX && adjacent(a, b) {
                        component[b] = count;
                        parent[b] = a;
                        queue.push_back(b);
                    }
                }
            }
            count += 1;
        }
        if count <= 1 {
            let mut chain = Vec::new();
            if m > 0 {
                let mut at = m - 1;
                loop {
                    chain.push(self.names_of(self.facets[at]));
                    if at == 0 {
                        break;
                    }
                    at = parent[at];
                }
            }
            chain.reverse();
            Ok(Verdict::decided(
                "facet-chain",
                true,
                Certificate::FacetChain { chain },
            ))
        } else {
            let components = (0..count)
                .map(|c| {
                    (0..m)
                        .filter(|&f| component[f] == c)
                        .map(|f| self.names_of(self.facets[f]))
                        .collect()
                })
                .collect();
            Ok(Verdict::decided(
                "facet-chain",
                false,
                Certificate::FacetComponents { components },
            ))
        }
    }

    /// Searches for a shelling order of a pure complex.
    ///
    /// `Ok(None)` means the search was exhaustive and no shelling exists.
    pub fn find_shelling(&self, max_facets: usize) -> Result<Option<Vec<Mask>>> {
        self.require_pure()?;
        let m = self.facets.len();
        if m > max_facets || m > 32 {
            return Err(Error::Capacity {
                what: "facets for the shelling search",
                limit: max_facets.min(32),
                actual: m,
            });
        }
        if m == 0 {
            return Ok(Some(Vec::new()));
        }
        let mut failed = HashSet::new();
        let mut order = Vec::with_capacity(m);
        for first in 0..m {
            order.push(first);
            if self.extend_shelling(1 << first, &mut order, &mut failed) {
                return Ok(Some(order.iter().map(|&i| self.facets[i]).collect()));
            }
            order.pop();
        }
        Ok(None)
    }

    fn extend_shelling(
        &self,
        used: u32,
        order: &mut Vec<usize>,
        failed: &mut HashSet<u32>,
    ) -> bool {
        let m = self.facets.len();
        if order.len() == m {
            return true;
        }
        if failed.contains(&used) {
            return false;
        }
        for next in 0..m {
            if used >> next & 1 == 1 || !self.may_follow(next, used) {
                continue;
            }
            order.push(next);
            if self.extend_shelling(used | 1 << next, order, failed) {
                return true;
            }
            order.pop();
        }
        failed.insert(used);
        false
    }

    /// For every earlier facet `F_j` there is `v ∈ F \ F_j` such that
    /// `F \ F_k = {v}` for some earlier `F_k`.
    fn may_follow(&self, next: usize, used: u32) -> bool {
        let f = self.facets[next];
        let attach: Mask = bits(used as u64)
            .map(|k| f & !self.facets[k])
            .filter(|d| d.count_ones() == 1)
            .fold(0, |a, d| a | d);
        bits(used as u64).all(|j| f & !self.facets[j] & attach != 0)
    }

    /// Checks a facet order: each facet meets the union of the earlier ones
    /// in a pure complex of codimension one.
    pub fn is_shelling_order(&self, order: &[Mask]) -> bool {
        let mut sorted: Vec<Mask> = order.to_vec();
        sorted.sort_by(|&a, &b| mask_lex_cmp(a, b));
        if sorted != self.facets {
            return false;
        }
        for (i, &f) in order.iter().enumerate().skip(1) {
            let target = f.count_ones() - 1;
            let meets: Vec<Mask> = order[..i].iter().map(|&g| g & f).collect();
            let maximal = meets
                .iter()
                .filter(|&&a| !meets.iter().any(|&b| b != a && a & b == a));
            if maximal.clone().any(|a| a.count_ones() != target) {
                return false;
            }
        }
        true
    }

    /// Every face, sorted by size then lexicographically, or a capacity error.
    pub fn faces(&self, max_faces: usize) -> Result<Vec<Mask>> {
        let mut seen: HashSet<Mask> = HashSet::new();
        for &f in &self.facets {
            // walk all submasks of f
            let mut s = f;
            loop {
                seen.insert(s);
                if seen.len() > max_faces {
                    return Err(Error::Capacity {
                        what: "faces",
                        limit: max_faces,
                        actual: seen.len(),
                    });
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & f;
            }
        }
        let mut out: Vec<Mask> = seen.into_iter().collect();
        out.sort_by(|&a, &b| {
            a.count_ones()
                .cmp(&b.count_ones())
                .then_with(|| mask_lex_cmp(a, b))
        });
        Ok(out)
    }

    /// `lk(F) = { G : G ∩ F = ∅, G ∪ F ∈ Δ }`, on the same vertex list.
    pub fn link(&self, face: Mask) -> SimplicialComplex {
        SimplicialComplex::from_masks(
            self.vertices.clone(),
            self.facets
                .iter()
                .filter(|&&f| f & face == face)
                .map(|&f| f & !face),
        )
    }

    /// Reduced Betti numbers in dimensions `-1 ..= dim`.
    pub fn reduced_homology_ranks(&self, field: Field, max_faces: usize) -> Result<Vec<usize>> {
        let faces = self.faces(max_faces)?;
        let top = (self.dim() + 1) as usize;
        let mut by_size: Vec<Vec<Mask>> = vec![Vec::new(); top + 1];
        for f in faces {
            by_size[f.count_ones() as usize].push(f);
        }
        // rank of the boundary map from faces of size k to size k - 1
        let ranks: Vec<usize> = (0..=top + 1)
            .map(|k| {
                if k == 0 || k > top {
                    0
                } else {
                    boundary_rank(&by_size[k], &by_size[k - 1], field)
                }
            })
            .collect();
        Ok((0..=top)
            .map(|k| by_size[k].len() - ranks[k] - ranks[k + 1])
            .collect())
    }

    /// Reisner's criterion: every link has vanishing reduced homology below
    /// its dimension. The first offending face (in face order) is reported.
    pub fn reisner_cm(&self, field: Field, max_faces: usize) -> Result<Verdict> {
        let faces = self.faces(max_faces)?;
        let profiles: Vec<Result<Option<HomologyProfile>>> = faces
            .par_iter()
            .map(|&face| {
                let link = self.link(face);
                let betti = link.reduced_homology_ranks(field, max_faces)?;
                let link_dim = link.dim();
                let bad = betti[..betti.len() - 1].iter().any(|&b| b != 0);
                Ok(bad.then(|| HomologyProfile {
                    face: self.names_of(face),
                    link_dim,
                    reduced_betti: betti,
                    field,
                }))
            })
            .collect();
        for p in profiles {
            if let Some(profile) = p? {
                return Ok(Verdict::decided(
                    "reisner",
                    false,
                    Certificate::Homology(profile),
                ));
            }
        }
        let link_dim = self.dim();
        let reduced_betti = self.reduced_homology_ranks(field, max_faces)?;
        Ok(Verdict::decided(
            "reisner",
            true,
            Certificate::Homology(HomologyProfile {
                face: Vec::new(),
                link_dim,
                reduced_betti,
                field,
            }),
        ))
    }
}

/// `Δ(G)`: the independent sets of `g`, given by its maximal ones.
pub fn complementary_complex(g: &Graph) -> SimplicialComplex {
    SimplicialComplex::from_masks(g.names().to_vec(), g.maximal_independent_masks())
}

/// Matrix of the boundary map (rows: codomain faces, columns: domain faces)
/// as small signed integers.
fn boundary_matrix(domain: &[Mask], codomain: &[Mask]) -> Vec<Vec<i64>> {
    let index: std::collections::HashMap<Mask, usize> =
        codomain.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut m = vec![vec![0i64; domain.len()]; codomain.len()];
    for (c, &f) in domain.iter().enumerate() {
        for (pos, v) in bits(f).enumerate() {
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            m[index[&(f & !(1 << v))]][c] = sign;
        }
    }
    m
}

fn boundary_rank(domain: &[Mask], codomain: &[Mask], field: Field) -> usize {
    if domain.is_empty() || codomain.is_empty() {
        return 0;
    }
    let m = boundary_matrix(domain, codomain);
    match field {
        Field::Prime(p) => rank_mod_p(m, p),
        Field::Rationals => rank_rational(m),
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Rank over `F_p` by row reduction with Fermat inverses.
pub fn rank_mod_p(m: Vec<Vec<i64>>, p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = m
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| v.rem_euclid(p as i64) as u64)
                .collect()
        })
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][c], p - 2, p);
        for v in a[rank].iter_mut() {
            *v = *v * inv % p;
        }
        let pivot_row = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let factor = row[c];
                for (v, &q) in row[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                    *v = (*v + p - factor * q % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over `Q` by exact row reduction on big rationals.
pub fn rank_rational(m: Vec<Vec<i64>>) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| BigRational::from_integer(BigInt::from(v)))
                .collect()
        })
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = BigRational::one() / a[rank][c].clone();
        for v in a[rank].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let factor = row[c].clone();
                for k in c..cols {
                    row[k] = &row[k] - &factor * &pivot_row[k];
                }
            }
        }
        rank += 1;
    }
    rank
}
