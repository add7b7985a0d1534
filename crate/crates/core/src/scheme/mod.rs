//! Linear perfect secret-sharing schemes.
//!
//! A [`LinearScheme`] draws a uniform seed vector over GF(p); the secret and
//! every share are fixed linear images of it. The builders here produce the
//! one-edge one-time pad, the 2-face scheme on the `d`-cube, and
//! lattice-window schemes assembled from an edge cover
//! ([`build_lattice_cover`], [`combine_schemes`]).

mod cover;

pub use cover::{build_lattice_cover, combine_schemes, lattice_share_formula, CoverPart, EdgeCover, SubScheme};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{general_position_vectors, Echelon, Field, Matrix};
use crate::graphs::{hypercube, two_face_count, two_faces, Graph, GraphDoc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearScheme {
    field: Field,
    seed_dim: usize,
    secret_rows: Matrix,
    /// Share rows, indexed by vertex.
    shares: Vec<Matrix>,
    graph: Graph,
}

impl LinearScheme {
    pub fn new(graph: Graph, field: Field, secret_rows: Matrix, shares: Vec<Matrix>) -> Result<Self> {
        let seed_dim = secret_rows.cols();
        if shares.len() != graph.n() {
            return Err(Error::MalformedScheme(format!(
                "{} share matrices for a graph with {} vertices",
                shares.len(),
                graph.n()
            )));
        }
        if secret_rows.rows() == 0 {
            return Err(Error::MalformedScheme(
                "the secret needs at least one coordinate".into(),
            ));
        }
        if secret_rows.rank() != secret_rows.rows() {
            return Err(Error::MalformedScheme("secret rows are linearly dependent".into()));
        }
        for (v, m) in shares.iter().enumerate() {
            if m.cols() != seed_dim || m.field() != field {
                return Err(Error::MalformedScheme(format!(
                    "share rows of vertex {v} do not match the seed"
                )));
            }
        }
        if secret_rows.field() != field {
            return Err(Error::MalformedScheme("secret rows over a different field".into()));
        }
        Ok(LinearScheme {
            field,
            seed_dim,
            secret_rows,
            shares,
            graph,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn seed_dim(&self) -> usize {
        self.seed_dim
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn secret_rows(&self) -> &Matrix {
        &self.secret_rows
    }

    pub fn secret_len(&self) -> usize {
        self.secret_rows.rows()
    }

    pub fn share_rows(&self, v: usize) -> &Matrix {
        &self.shares[v]
    }

    /// Share rows of every vertex of `vertices` stacked, optionally followed
    /// by the secret rows.
    pub fn stacked_rows(&self, vertices: impl IntoIterator<Item = usize>, include_secret: bool) -> Matrix {
        let parts = vertices.into_iter().map(|v| &self.shares[v]);
        let secret = include_secret.then_some(&self.secret_rows);
        Matrix::vstack(self.field, self.seed_dim, parts.chain(secret))
    }

    /// Whether the secret occupies the leading seed coordinates, i.e. the
    /// secret rows are `[I | 0]`.
    pub fn secret_is_prefix(&self) -> bool {
        let l = self.secret_len();
        (0..l).all(|r| (0..self.seed_dim).all(|c| self.secret_rows.get(r, c) == u32::from(r == c)))
    }

    /// Total number of share coordinates handed out.
    pub fn total_share_rows(&self) -> usize {
        self.shares.iter().map(Matrix::rows).sum()
    }

    /// Content hash identifying this scheme.
    pub fn id(&self) -> String {
        let bytes = serde_json::to_vec(&SchemeDoc::from(self)).expect("scheme serializes");
        hex::encode(Sha256::digest(bytes))
    }

    /// Samples a seed consistent with `secret` and hands out the shares.
    ///
    /// Every seed coordinate is drawn uniformly; the coordinates at the pivot
    /// columns of the secret rows are then solved for so that the seed maps
    /// onto `secret`.
    pub fn deal(&self, secret: &[u32], rng_seed: u64) -> Result<ShareBundle> {
        let l = self.secret_len();
        if secret.len() != l {
            return Err(Error::SecretLength {
                expected: l,
                got: secret.len(),
            });
        }
        let f = self.field;
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut seed: Vec<u32> = (0..self.seed_dim).map(|_| rng.gen_range(0..f.p())).collect();

        let pivots = pivot_columns(&self.secret_rows);
        for &c in &pivots {
            seed[c] = 0;
        }
        let partial = self.secret_rows.mul_vec(&seed);
        let target: Vec<u32> = secret
            .iter()
            .zip(&partial)
            .map(|(&s, &p)| f.sub(f.reduce(s as u64), p))
            .collect();
        let mut square = Matrix::zeros(f, l, l);
        for r in 0..l {
            for (j, &c) in pivots.iter().enumerate() {
                square.set(r, j, self.secret_rows.get(r, c));
            }
        }
        let solved = square
            .solve(&target)
            .expect("pivot columns of a full-rank matrix are invertible");
        for (j, &c) in pivots.iter().enumerate() {
            seed[c] = solved[j];
        }
        debug_assert_eq!(
            self.secret_rows.mul_vec(&seed),
            secret.iter().map(|&s| f.reduce(s as u64)).collect::<Vec<_>>()
        );

        let shares = self
            .shares
            .iter()
            .enumerate()
            .map(|(v, m)| PartyShare {
                vertex: v,
                values: m.mul_vec(&seed),
            })
            .collect();
        Ok(ShareBundle {
            scheme: self.id(),
            secret: self.secret_rows.mul_vec(&seed),
            shares,
        })
    }

    /// Recovers the secret from the shares of the two endpoints of an edge.
    pub fn reconstruct(&self, u: usize, v: usize, share_u: &[u32], share_v: &[u32]) -> Result<Vec<u32>> {
        if !self.graph.has_edge(u, v) {
            return Err(Error::UnqualifiedPair(u, v));
        }
        for (w, s) in [(u, share_u), (v, share_v)] {
            if s.len() != self.shares[w].rows() {
                return Err(Error::CorruptShare(format!(
                    "vertex {w} share has {} values, expected {}",
                    s.len(),
                    self.shares[w].rows()
                )));
            }
            if let Some(x) = s.iter().find(|&&x| x >= self.field.p()) {
                return Err(Error::CorruptShare(format!("value {x} is not a field element")));
            }
        }
        let rows = self.stacked_rows([u, v], false);
        let mut ech = Echelon::new(self.field, self.seed_dim);
        for r in rows.row_iter() {
            ech.insert(r);
        }
        if !self.secret_rows.row_iter().all(|r| ech.spans(r)) {
            return Err(Error::UnqualifiedPair(u, v));
        }
        let y: Vec<u32> = share_u.iter().chain(share_v).copied().collect();
        let x = rows
            .solve(&y)
            .ok_or_else(|| Error::CorruptShare("shares are inconsistent with the scheme".into()))?;
        Ok(self.secret_rows.mul_vec(&x))
    }

    /// [`LinearScheme::reconstruct`] reading both shares out of a bundle.
    pub fn reconstruct_bundle(&self, bundle: &ShareBundle, u: usize, v: usize) -> Result<Vec<u32>> {
        if bundle.scheme != self.id() {
            return Err(Error::CorruptShare("bundle was dealt by a different scheme".into()));
        }
        let find = |w: usize| {
            bundle
                .shares
                .iter()
                .find(|s| s.vertex == w)
                .map(|s| s.values.as_slice())
                .ok_or_else(|| Error::CorruptShare(format!("bundle has no share for vertex {w}")))
        };
        if !self.graph.has_edge(u, v) {
            return Err(Error::UnqualifiedPair(u, v));
        }
        self.reconstruct(u, v, find(u)?, find(v)?)
    }
}

/// The first set of columns, scanning left to right, that is independent in
/// the column space of `m`.
fn pivot_columns(m: &Matrix) -> Vec<usize> {
    let t = m.transpose();
    let mut ech = Echelon::new(m.field(), m.rows());
    (0..t.rows()).filter(|&c| ech.insert(t.row(c))).collect()
}

/// The one-time pad on a single edge: seed `(s, r)`, vertex 0 holds `r`,
/// vertex 1 holds `r + s`.
pub fn build_edge_scheme(field: Field) -> LinearScheme {
    let graph = hypercube(1).expect("1-cube");
    let secret = Matrix::from_rows(field, 2, &[vec![1, 0]]).unwrap();
    let shares = vec![
        Matrix::from_rows(field, 2, &[vec![0, 1]]).unwrap(),
        Matrix::from_rows(field, 2, &[vec![1, 1]]).unwrap(),
    ];
    LinearScheme::new(graph, field, secret, shares).expect("edge scheme is well formed")
}

/// Smallest prime field that supports the `d`-cube scheme.
pub fn default_cube_field(d: usize) -> Result<Field> {
    Field::smallest_at_least(two_face_count(d).max(2) as u64)
}

/// The 2-face scheme on the `d`-cube.
///
/// The secret is `s` in `F^(d-1)`. Face `i` gets a public vector `x_i` from a
/// family in general position and fresh randomness `r_i`; two opposite
/// corners of the face receive `r_i`, the other two receive `r_i + <s, x_i>`.
/// Each vertex lies on `C(d, 2)` faces, so the ratio is `C(d,2)/(d-1) = d/2`.
pub fn build_cube_scheme(d: usize, field: Option<Field>) -> Result<LinearScheme> {
    if d < 2 {
        return Err(Error::InvalidDimension {
            value: d,
            reason: "the 2-face construction needs d >= 2",
        });
    }
    let faces = two_faces(d)?;
    let m = faces.len();
    let field = match field {
        Some(f) => f,
        None => default_cube_field(d)?,
    };
    let xs = general_position_vectors(m, d - 1, field)?;
    let graph = hypercube(d)?;
    let secret_len = d - 1;
    let seed_dim = secret_len + m;

    let mut secret = Matrix::zeros(field, secret_len, seed_dim);
    for i in 0..secret_len {
        secret.set(i, i, 1);
    }
    let mut shares: Vec<Matrix> = (0..graph.n()).map(|_| Matrix::zeros(field, 0, seed_dim)).collect();
    for (i, face) in faces.iter().enumerate() {
        let mut pad = vec![0u32; seed_dim];
        pad[secret_len + i] = 1;
        let mut masked = pad.clone();
        masked[..secret_len].copy_from_slice(&xs[i]);
        let [v1, v2, v3, v4] = face.vertices;
        shares[v1].push_row(&pad);
        shares[v3].push_row(&pad);
        shares[v2].push_row(&masked);
        shares[v4].push_row(&masked);
    }
    LinearScheme::new(graph, field, secret, shares)
}

/// One party's share values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyShare {
    pub vertex: usize,
    pub values: Vec<u32>,
}

/// The output of one dealing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareBundle {
    /// [`LinearScheme::id`] of the dealing scheme.
    pub scheme: String,
    pub secret: Vec<u32>,
    pub shares: Vec<PartyShare>,
}

#[derive(Serialize, Deserialize)]
struct PartyDoc {
    vertex: usize,
    rows: Vec<Vec<u64>>,
}

/// Serialized form of a [`LinearScheme`].
#[derive(Serialize, Deserialize)]
struct SchemeDoc {
    field: u64,
    seed_dim: usize,
    secret_rows: Vec<Vec<u64>>,
    parties: Vec<PartyDoc>,
    graph: GraphDoc,
}

impl From<&LinearScheme> for SchemeDoc {
    fn from(s: &LinearScheme) -> Self {
        SchemeDoc {
            field: s.field.p() as u64,
            seed_dim: s.seed_dim,
            secret_rows: s.secret_rows.to_rows(),
            parties: s
                .shares
                .iter()
                .enumerate()
                .map(|(vertex, m)| PartyDoc {
                    vertex,
                    rows: m.to_rows(),
                })
                .collect(),
            graph: GraphDoc::from(&s.graph),
        }
    }
}

impl TryFrom<SchemeDoc> for LinearScheme {
    type Error = Error;

    fn try_from(doc: SchemeDoc) -> Result<Self> {
        let field = Field::new(doc.field)?;
        let graph = Graph::try_from(doc.graph)?;
        let check_entries = |rows: &[Vec<u64>]| {
            rows.iter()
                .flatten()
                .find(|&&x| x >= field.p() as u64)
                .map_or(Ok(()), |x| {
                    Err(Error::Parse(format!(
                        "matrix entry {x} is not reduced mod {}",
                        field.p()
                    )))
                })
        };
        check_entries(&doc.secret_rows)?;
        let secret = Matrix::from_rows(field, doc.seed_dim, &doc.secret_rows)?;
        let mut shares = vec![None; graph.n()];
        for party in doc.parties {
            check_entries(&party.rows)?;
            let slot = shares
                .get_mut(party.vertex)
                .ok_or_else(|| Error::Parse(format!("party vertex {} out of range", party.vertex)))?;
            if slot.is_some() {
                return Err(Error::Parse(format!("duplicate party {}", party.vertex)));
            }
            *slot = Some(Matrix::from_rows(field, doc.seed_dim, &party.rows)?);
        }
        let shares = shares
            .into_iter()
            .enumerate()
            .map(|(v, m)| m.ok_or_else(|| Error::Parse(format!("missing party {v}"))))
            .collect::<Result<Vec<_>>>()?;
        LinearScheme::new(graph, field, secret, shares)
    }
}

impl Serialize for LinearScheme {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SchemeDoc::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearScheme {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = SchemeDoc::deserialize(deserializer)?;
        LinearScheme::try_from(doc).map_err(serde::de::Error::custom)
    }
}
