use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Echelon;
use crate::graphs::{Graph, VertexSet};
use crate::scheme::LinearScheme;

/// Results of checking a scheme's access structure.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectReport {
    /// Edges whose shares do not determine the secret.
    pub qualified_failures: Vec<(usize, usize)>,
    /// Maximal independent sets whose shares leak information.
    pub independence_failures: Vec<VertexSet>,
    pub edges_checked: usize,
    pub independent_sets_checked: usize,
}

impl PerfectReport {
    pub fn is_perfect(&self) -> bool {
        self.qualified_failures.is_empty() && self.independence_failures.is_empty()
    }
}

/// Calls `visit` once per maximal independent set of `g` (as a bitmask).
/// Needs at most 64 vertices.
pub fn for_each_maximal_independent_set(g: &Graph, mut visit: impl FnMut(u64)) -> Result<()> {
    let (Some(adj), Some(full)) = (g.adjacency_masks(), g.full_mask()) else {
        return Err(Error::TooLarge {
            what: "graph for independent set enumeration",
            size: g.n() as u128,
            cap: 64,
        });
    };
    // Maximal cliques of the complement graph.
    let non_adj: Vec<u64> = adj.iter().enumerate().map(|(v, a)| full & !a & !(1u64 << v)).collect();
    bron_kerbosch(&non_adj, 0, full, 0, &mut visit);
    Ok(())
}

fn bron_kerbosch(nbr: &[u64], r: u64, mut p: u64, mut x: u64, visit: &mut impl FnMut(u64)) {
    if p == 0 {
        if x == 0 {
            visit(r);
        }
        return;
    }
    let pivot = bits(p | x).max_by_key(|&u| (p & nbr[u]).count_ones()).unwrap_or(0);
    for v in bits(p & !nbr[pivot]) {
        let bit = 1u64 << v;
        bron_kerbosch(nbr, r | bit, p & nbr[v], x & nbr[v], visit);
        p &= !bit;
        x |= bit;
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            v
        })
    })
}

fn basis_of(s: &LinearScheme, vertices: impl Iterator<Item = usize>) -> Echelon {
    let mut ech = Echelon::new(s.field(), s.seed_dim());
    for v in vertices {
        for row in s.share_rows(v).row_iter() {
            ech.insert(row);
        }
    }
    ech
}

/// Checks that every edge recovers the secret and that every independent
/// set learns nothing about it.
///
/// Independent sets are closed under subsets and zero leakage is inherited by
/// subsets, so only maximal independent sets are examined.
pub fn check_perfect(s: &LinearScheme) -> Result<PerfectReport> {
    let g = s.graph();
    let mut sets = Vec::new();
    for_each_maximal_independent_set(g, |m| sets.push(m))?;

    let qualified_failures: Vec<(usize, usize)> = g
        .edges()
        .par_iter()
        .filter(|&&(u, v)| {
            let ech = basis_of(s, [u, v].into_iter());
            !s.secret_rows().row_iter().all(|row| ech.spans(row))
        })
        .copied()
        .collect();

    let ell = s.secret_len();
    let independence_failures: Vec<VertexSet> = sets
        .par_iter()
        .filter(|&&mask| {
            let mut ech = basis_of(s, bits(mask));
            let gained = s.secret_rows().row_iter().filter(|row| ech.insert(row)).count();
            gained != ell
        })
        .map(|&mask| VertexSet::from_mask(mask))
        .collect();

    Ok(PerfectReport {
        qualified_failures,
        independence_failures,
        edges_checked: g.edges().len(),
        independent_sets_checked: sets.len(),
    })
}
