//! Graph families used by the schemes and bounds: hypercubes, finite lattice
//! windows and paths, together with the structural queries the rest of the
//! crate needs (chessboard splits, 2-faces, independence, automorphisms).
//!
//! Vertex coordinates are stored most-significant axis first. Cube vertex `i`
//! has the binary expansion of `i` as its label, and lattice vertex `i` is the
//! base-`k` expansion of `i`, so `lattice_window(d, 2)` and `hypercube(d)`
//! agree vertex by vertex.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest cube dimension accepted by [`hypercube`].
pub const MAX_CUBE_DIM: usize = 16;
/// Largest dimension for which [`cube_automorphisms`] will enumerate.
pub const MAX_AUTOMORPHISM_DIM: usize = 6;
/// Largest window accepted by [`lattice_window`].
pub const MAX_WINDOW_VERTICES: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Cube { d: usize },
    Lattice { d: usize, k: usize },
    Path { m: usize },
    Custom,
}

/// A set of vertex indices. Serializes as a sorted list.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", from = "Vec<usize>")]
pub struct VertexSet {
    words: Vec<u64>,
}

impl From<Vec<usize>> for VertexSet {
    fn from(v: Vec<usize>) -> Self {
        v.into_iter().collect()
    }
}

impl From<VertexSet> for Vec<usize> {
    fn from(s: VertexSet) -> Self {
        s.iter().collect()
    }
}

impl VertexSet {
    pub fn new() -> Self {
        VertexSet::default()
    }

    /// The set whose members are the one bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        let mut s = VertexSet { words: vec![mask] };
        s.trim();
        s
    }

    /// The bitmask of this set, if every member is below 64.
    pub fn to_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, v: usize) {
        let (w, b) = (v / 64, v % 64);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << b;
    }

    pub fn remove(&mut self, v: usize) {
        let (w, b) = (v / 64, v % 64);
        if w < self.words.len() {
            self.words[w] &= !(1 << b);
            self.trim();
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        let (w, b) = (v / 64, v % 64);
        self.words.get(w).is_some_and(|x| x >> b & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn max(&self) -> Option<usize> {
        self.words
            .last()
            .map(|w| (self.words.len() - 1) * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let n = self.words.len().max(other.words.len());
        let words = (0..n)
            .map(|i| self.words.get(i).unwrap_or(&0) | other.words.get(i).unwrap_or(&0))
            .collect();
        VertexSet { words }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = VertexSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        };
        s.trim();
        s
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    family: Family,
    coords: Vec<Vec<i64>>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    adj_masks: Option<Vec<u64>>,
}

impl Graph {
    /// Builds a graph from coordinate labels and an edge list. Edges are
    /// normalized to `(low, high)` and sorted.
    pub fn new(family: Family, coords: Vec<Vec<i64>>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = coords.len();
        let mut norm = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidSubset(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidSubset(format!("self-loop at vertex {u}")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset(format!("duplicate edge {:?}", w[0])));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let adj_masks = (n <= 64).then(|| adj.iter().map(|a| a.iter().fold(0u64, |m, &v| m | 1 << v)).collect());
        Ok(Graph {
            family,
            coords,
            edges: norm,
            adj,
            adj_masks,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn coords(&self, v: usize) -> &[i64] {
        &self.coords[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Neighbourhood bitmasks, available when the graph has at most 64
    /// vertices.
    pub fn adjacency_masks(&self) -> Option<&[u64]> {
        self.adj_masks.as_deref()
    }

    /// Full vertex set as a bitmask (graphs with at most 64 vertices).
    pub fn full_mask(&self) -> Option<u64> {
        match self.n() {
            64 => Some(u64::MAX),
            n if n < 64 => Some((1u64 << n) - 1),
            _ => None,
        }
    }

    /// Human-readable vertex label: a bit string for cubes, a coordinate
    /// tuple otherwise.
    pub fn label(&self, v: usize) -> String {
        match self.family {
            Family::Cube { .. } => self.coords[v].iter().map(|c| c.to_string()).collect(),
            _ => format!("({})", self.coords[v].iter().join(",")),
        }
    }

    /// Resolves a vertex given either by index or by its label (bit string or
    /// comma separated coordinates).
    pub fn find_vertex(&self, token: &str) -> Option<usize> {
        let token = token.trim();
        let stripped = token.trim_start_matches('(').trim_end_matches(')');
        if let Family::Cube { d } = self.family {
            if token.len() == d && token.chars().all(|c| c == '0' || c == '1') {
                return usize::from_str_radix(token, 2).ok().filter(|&v| v < self.n());
            }
        }
        if stripped.contains(',') {
            let coords: Vec<i64> = stripped
                .split(',')
                .map(|c| c.trim().parse().ok())
                .collect::<Option<_>>()?;
            return self.coords.iter().position(|c| *c == coords);
        }
        token.parse().ok().filter(|&v| v < self.n())
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter()
            .all(|v| v < self.n() && self.adj[v].iter().all(|&w| !s.contains(w)))
    }

    /// Bitmask version of [`Graph::is_independent`]; requires `n <= 64`.
    pub fn is_independent_mask(&self, mask: u64) -> bool {
        let adj = self.adj_masks.as_ref().expect("bitmask queries need n <= 64");
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            if adj[v] & mask != 0 {
                return false;
            }
            rest &= rest - 1;
        }
        true
    }

    /// The subgraph spanned by `s`. Vertex `i` of the result is the `i`-th
    /// smallest member of `s`.
    pub fn spanned_subgraph(&self, s: &VertexSet) -> Result<Graph> {
        if s.is_empty() {
            return Err(Error::InvalidSubset("spanned subgraph of the empty set".into()));
        }
        if s.max().is_some_and(|m| m >= self.n()) {
            return Err(Error::InvalidSubset(
                "subset contains vertices outside the graph".into(),
            ));
        }
        let members: Vec<usize> = s.iter().collect();
        let index_of = |v: usize| members.binary_search(&v).ok();
        let coords = members.iter().map(|&v| self.coords[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|&(u, v)| Some((index_of(u)?, index_of(v)?)));
        let family = if s.len() == self.n() {
            self.family
        } else {
            Family::Custom
        };
        Graph::new(family, coords, edges)
    }
}

fn check_dim(d: usize, min: usize, cap: usize) -> Result<()> {
    if d < min {
        return Err(Error::InvalidDimension {
            value: d,
            reason: "dimension below the minimum for this construction",
        });
    }
    if d > cap {
        return Err(Error::InvalidDimension {
            value: d,
            reason: "dimension above the implementation cap",
        });
    }
    Ok(())
}

/// The `d`-dimensional cube: `2^d` vertices, adjacent iff their labels differ
/// in exactly one bit.
pub fn hypercube(d: usize) -> Result<Graph> {
    check_dim(d, 1, MAX_CUBE_DIM)?;
    let n = 1usize << d;
    let coords = (0..n)
        .map(|i| (0..d).map(|j| (i >> (d - 1 - j) & 1) as i64).collect())
        .collect();
    let edges = (0..n).flat_map(|i| (0..d).map(move |b| (i, i ^ (1 << b))).filter(|&(u, v)| u < v));
    Graph::new(Family::Cube { d }, coords, edges)
}

/// The window of the `d`-dimensional lattice with `k` points per axis
/// (coordinates `0..k`).
pub fn lattice_window(d: usize, k: usize) -> Result<Graph> {
    check_dim(d, 1, usize::MAX)?;
    if k < 2 {
        return Err(Error::InvalidSize {
            value: k,
            reason: "a lattice window needs at least 2 points per axis",
        });
    }
    let n = (k as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if n > MAX_WINDOW_VERTICES as u128 {
        return Err(Error::TooLarge {
            what: "lattice window",
            size: n,
            cap: MAX_WINDOW_VERTICES as u128,
        });
    }
    let n = n as usize;
    let coords: Vec<Vec<i64>> = (0..n)
        .map(|mut i| {
            let mut c = vec![0i64; d];
            for j in (0..d).rev() {
                c[j] = (i % k) as i64;
                i /= k;
            }
            c
        })
        .collect();
    let mut edges = Vec::new();
    for (i, c) in coords.iter().enumerate() {
        let mut stride = 1;
        for j in (0..d).rev() {
            if (c[j] as usize) + 1 < k {
                edges.push((i, i + stride));
            }
            stride *= k;
        }
    }
    Graph::new(Family::Lattice { d, k }, coords, edges)
}

/// The path on `m` vertices.
pub fn path(m: usize) -> Result<Graph> {
    if m < 1 {
        return Err(Error::InvalidSize {
            value: m,
            reason: "a path needs at least one vertex",
        });
    }
    let coords = (0..m as i64).map(|i| vec![i]).collect();
    Graph::new(Family::Path { m }, coords, (1..m).map(|i| (i - 1, i)))
}

/// Bipartition of a graph into two independent sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChessboardSplit {
    pub a: VertexSet,
    pub b: VertexSet,
}

/// Splits the vertices by coordinate-sum parity (`a` = even). Custom graphs
/// are 2-coloured by breadth-first search, each component starting from its
/// smallest vertex on the `a` side.
pub fn chessboard_split(g: &Graph) -> Result<ChessboardSplit> {
    let mut a = VertexSet::new();
    let mut b = VertexSet::new();
    match g.family {
        Family::Custom => {
            let mut side: Vec<Option<bool>> = vec![None; g.n()];
            for root in 0..g.n() {
                if side[root].is_some() {
                    continue;
                }
                side[root] = Some(false);
                let mut queue = std::collections::VecDeque::from([root]);
                while let Some(u) = queue.pop_front() {
                    let su = side[u].unwrap();
                    for &w in g.neighbors(u) {
                        match side[w] {
                            None => {
                                side[w] = Some(!su);
                                queue.push_back(w);
                            }
                            Some(sw) if sw == su => return Err(Error::NotBipartite),
                            Some(_) => {}
                        }
                    }
                }
            }
            for (v, s) in side.into_iter().enumerate() {
                if s == Some(false) {
                    a.insert(v);
                } else {
                    b.insert(v);
                }
            }
        }
        _ => {
            for v in 0..g.n() {
                if g.coords[v].iter().sum::<i64>().rem_euclid(2) == 0 {
                    a.insert(v);
                } else {
                    b.insert(v);
                }
            }
        }
    }
    Ok(ChessboardSplit { a, b })
}

/// A 4-cycle `v1 v2 v3 v4` of the cube, stored with `v1` the smallest index
/// and `v2 < v4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoFace {
    pub vertices: [usize; 4],
}

impl TwoFace {
    pub fn edges(&self) -> [(usize, usize); 4] {
        let v = self.vertices;
        let e = |a: usize, b: usize| (a.min(b), a.max(b));
        [e(v[0], v[1]), e(v[1], v[2]), e(v[2], v[3]), e(v[3], v[0])]
    }
}

/// All `2^(d-2) * C(d, 2)` 2-faces of the `d`-cube, ordered by their smallest
/// vertex and then by the pair of spanning directions.
pub fn two_faces(d: usize) -> Result<Vec<TwoFace>> {
    check_dim(d, 2, MAX_CUBE_DIM)?;
    let mut faces = Vec::new();
    for x in 0..1usize << d {
        for (i, j) in (0..d).tuple_combinations() {
            let (bi, bj) = (1usize << i, 1usize << j);
            if x & (bi | bj) == 0 {
                faces.push(TwoFace {
                    vertices: [x, x | bi, x | bi | bj, x | bj],
                });
            }
        }
    }
    Ok(faces)
}

/// Number of 2-faces of the `d`-cube.
pub fn two_face_count(d: usize) -> usize {
    if d < 2 {
        0
    } else {
        (1 << (d - 2)) * d * (d - 1) / 2
    }
}

/// A cube automorphism: permute the coordinate axes, then XOR-translate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeAutomorphism {
    /// Bit `i` of a vertex moves to bit `axis_perm[i]`.
    pub axis_perm: Vec<usize>,
    pub translate: usize,
}

impl CubeAutomorphism {
    pub fn apply(&self, v: usize) -> usize {
        let moved = self
            .axis_perm
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &t)| acc | (v >> i & 1) << t);
        moved ^ self.translate
    }

    /// The vertex permutation as an image table.
    pub fn permutation(&self) -> Vec<usize> {
        (0..1usize << self.axis_perm.len()).map(|v| self.apply(v)).collect()
    }
}

/// All `2^d * d!` automorphisms of the `d`-cube, lazily.
pub fn cube_automorphisms(d: usize) -> Result<impl Iterator<Item = CubeAutomorphism>> {
    check_dim(d, 1, MAX_AUTOMORPHISM_DIM).map_err(|_| Error::TooLarge {
        what: "automorphism enumeration dimension",
        size: d as u128,
        cap: MAX_AUTOMORPHISM_DIM as u128,
    })?;
    Ok((0..d).permutations(d).flat_map(move |perm| {
        (0..1usize << d).map(move |t| CubeAutomorphism {
            axis_perm: perm.clone(),
            translate: t,
        })
    }))
}

/// Serialized form of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub vertices: Vec<Vec<i64>>,
    pub edges: Vec<(usize, usize)>,
}

impl From<&Graph> for GraphDoc {
    fn from(g: &Graph) -> Self {
        let (family, d, k) = match g.family {
            Family::Cube { d } => ("cube", Some(d), None),
            Family::Lattice { d, k } => ("lattice", Some(d), Some(k)),
            Family::Path { m } => ("path", None, Some(m)),
            Family::Custom => ("custom", None, None),
        };
        GraphDoc {
            family: family.into(),
            d,
            k,
            vertices: g.coords.clone(),
            edges: g.edges.clone(),
        }
    }
}

impl TryFrom<GraphDoc> for Graph {
    type Error = Error;

    fn try_from(doc: GraphDoc) -> Result<Graph> {
        let missing = |what: &str| Error::Parse(format!("graph document missing `{what}`"));
        let family = match doc.family.as_str() {
            "cube" => Family::Cube {
                d: doc.d.ok_or_else(|| missing("d"))?,
            },
            "lattice" => Family::Lattice {
                d: doc.d.ok_or_else(|| missing("d"))?,
                k: doc.k.ok_or_else(|| missing("k"))?,
            },
            "path" => Family::Path {
                m: doc.k.ok_or_else(|| missing("k"))?,
            },
            "custom" => Family::Custom,
            other => return Err(Error::Parse(format!("unknown graph family {other:?}"))),
        };
        let g = Graph::new(family, doc.vertices, doc.edges)?;
        let expected = match family {
            Family::Cube { d } => Some(hypercube(d)?),
            Family::Lattice { d, k } => Some(lattice_window(d, k)?),
            Family::Path { m } => Some(path(m)?),
            Family::Custom => None,
        };
        if let Some(expected) = expected {
            if expected != g {
                return Err(Error::Parse(format!(
                    "graph document does not match family {}",
                    doc.family
                )));
            }
        }
        Ok(g)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GraphDoc::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = GraphDoc::deserialize(deserializer)?;
        Graph::try_from(doc).map_err(serde::de::Error::custom)
    }
}
