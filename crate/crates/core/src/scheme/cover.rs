//! Edge covers of lattice windows by parity cubes, and composition of the
//! sub-schemes running on them into one scheme for the whole window.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashSet};

use itertools::Itertools;
use num_integer::Integer;

use super::{build_cube_scheme, build_edge_scheme, LinearScheme};
use crate::error::{Error, Result};
use crate::field::{Field, Matrix};
use crate::graphs::{hypercube, lattice_window, Graph};
use crate::rational::Rational;

/// The scheme run on one member of a cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SubScheme {
    Edge,
    Cube(usize),
}

impl SubScheme {
    pub fn dim(&self) -> usize {
        match self {
            SubScheme::Edge => 1,
            SubScheme::Cube(d) => *d,
        }
    }

    fn for_dim(d: usize) -> SubScheme {
        if d == 1 {
            SubScheme::Edge
        } else {
            SubScheme::Cube(d)
        }
    }

    pub fn build(&self, field: Field) -> Result<LinearScheme> {
        match self {
            SubScheme::Edge => Ok(build_edge_scheme(field)),
            SubScheme::Cube(d) => build_cube_scheme(*d, Some(field)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverPart {
    pub kind: SubScheme,
    /// `vertices[i]` is the target vertex playing local vertex `i` of the
    /// sub-scheme's cube.
    pub vertices: Vec<usize>,
    pub covered: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct EdgeCover {
    pub graph: Graph,
    pub parts: Vec<CoverPart>,
}

impl EdgeCover {
    /// How many parts cover each edge of the target graph.
    pub fn multiplicities(&self) -> BTreeMap<(usize, usize), usize> {
        let mut m: BTreeMap<_, _> = self.graph.edges().iter().map(|&e| (e, 0)).collect();
        for p in &self.parts {
            for e in &p.covered {
                *m.entry(*e).or_default() += 1;
            }
        }
        m
    }

    pub fn uncovered(&self) -> Vec<(usize, usize)> {
        self.multiplicities()
            .into_iter()
            .filter_map(|(e, c)| (c == 0).then_some(e))
            .collect()
    }

    /// Largest sub-scheme dimension used.
    pub fn max_dim(&self) -> usize {
        self.parts.iter().map(|p| p.kind.dim()).max().unwrap_or(1)
    }
}

/// Covers the window `L^d_k` (`k` even) with unit cubes anchored at points
/// whose coordinates are all even or all odd. Every such cube lying inside
/// the window is used; the boundary edges they miss are then covered facet
/// by facet with the same construction one dimension lower, recursing down
/// to single edges.
pub fn build_lattice_cover(d: usize, k: usize) -> Result<EdgeCover> {
    if k % 2 == 1 {
        return Err(Error::InvalidSize {
            value: k,
            reason: "the parity-cube cover needs an even window size",
        });
    }
    let graph = lattice_window(d, k)?;
    let mut state = CoverState {
        graph: &graph,
        k,
        d,
        covered: vec![false; graph.edges().len()],
        parts: Vec::new(),
        visited: HashSet::new(),
    };
    let mut fixed = vec![None; d];
    state.cover_region(&mut fixed, true);
    let parts = state.parts;
    Ok(EdgeCover { graph, parts })
}

struct CoverState<'g> {
    graph: &'g Graph,
    k: usize,
    d: usize,
    covered: Vec<bool>,
    parts: Vec<CoverPart>,
    visited: HashSet<Vec<Option<usize>>>,
}

impl CoverState<'_> {
    fn index_of(&self, coords: &[usize]) -> usize {
        coords.iter().fold(0, |acc, &c| acc * self.k + c)
    }

    fn edge_index(&self, e: (usize, usize)) -> usize {
        self.graph
            .edges()
            .binary_search(&e)
            .expect("cube edge is a window edge")
    }

    /// Covers the region where the axes in `fixed` are pinned.
    fn cover_region(&mut self, fixed: &mut Vec<Option<usize>>, top: bool) {
        if !self.visited.insert(fixed.clone()) {
            return;
        }
        let free: Vec<usize> = (0..self.d).filter(|&j| fixed[j].is_none()).collect();
        let dim = free.len();
        if dim == 0 {
            return;
        }
        let cube = hypercube(dim).expect("dimension within cap");
        for parity in 0..2 {
            let values: Vec<usize> = (parity..=self.k - 2).step_by(2).collect();
            if values.is_empty() {
                continue;
            }
            let anchors = (0..dim).map(|_| values.iter().copied()).multi_cartesian_product();
            for choice in anchors {
                let mut anchor: Vec<usize> = fixed.iter().map(|c| c.unwrap_or(0)).collect();
                for (&axis, &value) in free.iter().zip(&choice) {
                    anchor[axis] = value;
                }
                let vertices: Vec<usize> = (0..cube.n())
                    .map(|local| {
                        let mut c = anchor.clone();
                        for (i, &axis) in free.iter().enumerate() {
                            c[axis] += local >> (dim - 1 - i) & 1;
                        }
                        self.index_of(&c)
                    })
                    .collect();
                let edges: Vec<(usize, usize)> = cube
                    .edges()
                    .iter()
                    .map(|&(a, b)| (vertices[a].min(vertices[b]), vertices[a].max(vertices[b])))
                    .collect();
                let idx: Vec<usize> = edges.iter().map(|&e| self.edge_index(e)).collect();
                if top || idx.iter().any(|&i| !self.covered[i]) {
                    for &i in &idx {
                        self.covered[i] = true;
                    }
                    let mut covered = edges;
                    covered.sort_unstable();
                    self.parts.push(CoverPart {
                        kind: SubScheme::for_dim(dim),
                        vertices,
                        covered,
                    });
                }
            }
        }
        for &axis in &free {
            for side in [0, self.k - 1] {
                fixed[axis] = Some(side);
                self.cover_region(fixed, false);
                fixed[axis] = None;
            }
        }
    }
}

/// Runs an independent copy of each part's sub-scheme for one common secret.
///
/// Sub-schemes with different secret lengths are reconciled through a common
/// secret of length `L = lcm` of their lengths; a sub-scheme with secret
/// length `l` runs `L / l` times on disjoint slices of the secret. The seed is
/// the shared secret block followed by fresh randomness for every copy, and a
/// vertex's rows are the concatenation of its rows in every copy it takes
/// part in.
pub fn combine_schemes(cover: &EdgeCover, field: Field) -> Result<LinearScheme> {
    if let Some((u, v)) = cover.uncovered().first().copied() {
        return Err(Error::IncompleteCover(u, v));
    }
    let mut subs: BTreeMap<SubScheme, LinearScheme> = BTreeMap::new();
    for p in &cover.parts {
        if let Entry::Vacant(slot) = subs.entry(p.kind) {
            let s = p.kind.build(field)?;
            if !s.secret_is_prefix() {
                return Err(Error::MalformedScheme(format!(
                    "{:?} does not keep its secret in the leading seed coordinates",
                    p.kind
                )));
            }
            slot.insert(s);
        }
        if p.vertices.len() != subs[&p.kind].graph().n() {
            return Err(Error::MalformedScheme(format!(
                "{:?} part maps {} vertices",
                p.kind,
                p.vertices.len()
            )));
        }
    }
    let secret_len = subs.values().fold(1usize, |acc, s| acc.lcm(&s.secret_len()));
    let randomness: usize = cover
        .parts
        .iter()
        .map(|p| {
            let s = &subs[&p.kind];
            (secret_len / s.secret_len()) * (s.seed_dim() - s.secret_len())
        })
        .sum();
    let seed_dim = secret_len + randomness;

    let n = cover.graph.n();
    let mut shares: Vec<Matrix> = (0..n).map(|_| Matrix::zeros(field, 0, seed_dim)).collect();
    let mut offset = secret_len;
    for p in &cover.parts {
        let sub = &subs[&p.kind];
        let l = sub.secret_len();
        let r = sub.seed_dim() - l;
        for copy in 0..secret_len / l {
            for (local, &global) in p.vertices.iter().enumerate() {
                for row in sub.share_rows(local).row_iter() {
                    let mut out = vec![0u32; seed_dim];
                    out[copy * l..(copy + 1) * l].copy_from_slice(&row[..l]);
                    out[offset..offset + r].copy_from_slice(&row[l..]);
                    shares[global].push_row(&out);
                }
            }
            offset += r;
        }
    }
    let mut secret = Matrix::zeros(field, secret_len, seed_dim);
    for i in 0..secret_len {
        secret.set(i, i, 1);
    }
    LinearScheme::new(cover.graph.clone(), field, secret, shares)
}

/// `d k^d - (k^d - (k-2)^d) / 2`: the share total of the boundary-adjusted
/// window scheme when surface vertices save half a unit each.
pub fn lattice_share_formula(d: usize, k: usize) -> Rational {
    let kd = (k as i64).pow(d as u32);
    let inner = (k as i64 - 2).pow(d as u32);
    Rational::from_integer(d as i64 * kd) - Rational::new(kd - inner, 2)
}
