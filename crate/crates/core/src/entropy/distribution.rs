use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graphs::VertexSet;
use crate::scheme::LinearScheme;

/// Largest seed space [`distribution_entropy`] will enumerate.
pub const MAX_SEED_SPACE: u128 = 100_000_000;

/// Shannon entropy, in bits, of the shares of `subset` (plus the secret if
/// asked), computed by enumerating every seed and counting the tuples that
/// occur. Independent of any rank computation.
pub fn distribution_entropy(s: &LinearScheme, subset: &VertexSet, include_secret: bool) -> Result<f64> {
    if subset.max().is_some_and(|m| m >= s.graph().n()) {
        return Err(Error::InvalidSubset(format!("{subset:?} is not a vertex subset")));
    }
    let p = s.field().p();
    let dim = s.seed_dim();
    let space = (p as u128).checked_pow(dim as u32).filter(|&x| x <= MAX_SEED_SPACE);
    let Some(space) = space else {
        return Err(Error::TooLarge {
            what: "seed space",
            size: (p as u128).saturating_pow(dim as u32),
            cap: MAX_SEED_SPACE,
        });
    };

    let mut rows: Vec<&[u32]> = subset.iter().flat_map(|v| s.share_rows(v).row_iter()).collect();
    if include_secret {
        rows.extend(s.secret_rows().row_iter());
    }

    let key_space = (p as u128).checked_pow(rows.len() as u32);
    let n = space as u64;
    let counts = match key_space {
        Some(k) if k <= u64::MAX as u128 => run_counts(tuples(&rows, p, dim, n, |y| pack(y, p) as u64)),
        Some(_) => run_counts(tuples(&rows, p, dim, n, |y| pack(y, p))),
        None => run_counts(tuples(&rows, p, dim, n, |y| y.to_vec())),
    };

    // Group equal counts so the sum has few terms.
    let mut by_count: BTreeMap<u64, u64> = BTreeMap::new();
    for c in counts {
        *by_count.entry(c).or_default() += 1;
    }
    let total = n as f64;
    Ok(by_count
        .into_iter()
        .map(|(c, m)| {
            let q = c as f64 / total;
            m as f64 * q * (total / c as f64).log2()
        })
        .sum())
}

fn pack(y: &[u32], p: u32) -> u128 {
    y.iter().fold(0u128, |acc, &x| acc * p as u128 + x as u128)
}

/// Walks the seed space as a base-`p` odometer. Each step adds one to the
/// lowest `t + 1` digits mod `p`, so the image moves by a precomputed
/// prefix sum of columns.
fn tuples<K: Send>(rows: &[&[u32]], p: u32, dim: usize, n: u64, key: impl Fn(&[u32]) -> K) -> Vec<K> {
    let m = rows.len();
    let add = |a: u32, b: u32| ((a as u64 + b as u64) % p as u64) as u32;
    let mut prefix = vec![vec![0u32; m]; dim];
    for t in 0..dim {
        for i in 0..m {
            let prev = if t == 0 { 0 } else { prefix[t - 1][i] };
            prefix[t][i] = add(prev, rows[i][t]);
        }
    }
    let mut digits = vec![0u32; dim];
    let mut y = vec![0u32; m];
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        out.push(key(&y));
        let mut t = 0;
        while t < dim {
            digits[t] += 1;
            if digits[t] < p {
                break;
            }
            digits[t] = 0;
            t += 1;
        }
        if t < dim {
            for (yi, d) in y.iter_mut().zip(&prefix[t]) {
                *yi = add(*yi, *d);
            }
        }
    }
    out
}

fn run_counts<K: Ord + Send>(mut keys: Vec<K>) -> Vec<u64> {
    keys.par_sort_unstable();
    let mut counts = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        let j = i + keys[i..].partition_point(|k| *k == keys[i]);
        counts.push((j - i) as u64);
        i = j;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::rank_entropy;
    use crate::field::Field;
    use crate::scheme::{build_cube_scheme, build_edge_scheme};

    #[test]
    fn edge_scheme_entropies() {
        let f = Field::new(5).unwrap();
        let s = build_edge_scheme(f);
        let log5 = 5f64.log2();
        let h = |m: u64, sec: bool| distribution_entropy(&s, &VertexSet::from_mask(m), sec).unwrap();
        assert!(h(0, false).abs() < 1e-12);
        assert!((h(0, true) - log5).abs() < 1e-12);
        assert!((h(0b01, false) - log5).abs() < 1e-12);
        assert!((h(0b11, false) - 2.0 * log5).abs() < 1e-12);
        assert!((h(0b11, true) - 2.0 * log5).abs() < 1e-12);
    }

    #[test]
    fn matches_rank_on_c2() {
        let s = build_cube_scheme(2, Some(Field::new(3).unwrap())).unwrap();
        let ell = s.secret_len() as f64;
        for mask in 0..16u64 {
            for sec in [false, true] {
                let set = VertexSet::from_mask(mask);
                let rank = rank_entropy(&s, &set, sec).unwrap().to_f64() * ell;
                let h = distribution_entropy(&s, &set, sec).unwrap();
                assert!((h - rank * 3f64.log2()).abs() < 1e-9, "mask {mask:b}");
            }
        }
    }

    #[test]
    fn counts_runs() {
        assert_eq!(run_counts(vec![3, 1, 3, 2, 3]), vec![1, 1, 3]);
    }

    #[test]
    fn seed_space_cap() {
        let s = build_cube_scheme(5, None).unwrap();
        assert!(distribution_entropy(&s, &VertexSet::from_mask(1), false)
            .unwrap_err()
            .is_capacity());
    }
}
