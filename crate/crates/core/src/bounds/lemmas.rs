use std::fmt::{self, Write as _};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::entropy::PolymatroidFn;
use crate::error::{Error, Result};
use crate::graphs::{chessboard_split, hypercube, lattice_window, path, Family, Graph, VertexSet};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaId {
    /// Cube inequality `Σ f(v) >= [A_d, B_d] + (d-1)2^(d-1)`.
    Lemma1,
    /// One level of the six-set induction step.
    Lemma2,
    /// Even path inequality.
    Path,
    /// Lattice window inequality.
    Dk,
}

/// One evaluated inequality `lhs >= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub instance: String,
    pub lhs: Rational,
    pub rhs: Rational,
    pub slack: Rational,
}

impl Entry {
    fn new(instance: impl Into<String>, lhs: Rational, rhs: Rational) -> Entry {
        let slack = &lhs - &rhs;
        Entry {
            instance: instance.into(),
            lhs,
            rhs,
            slack,
        }
    }
}

/// Evaluated lemma instances for one function. The first entry is the lemma
/// itself; the rest are the consequences and sub-instances the proof uses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub lemma: LemmaId,
    pub d: Option<usize>,
    pub k: Option<usize>,
    pub entries: Vec<Entry>,
}

impl Certificate {
    pub fn is_valid(&self) -> bool {
        self.entries.iter().all(|e| !e.slack.is_negative())
    }

    pub fn main(&self) -> &Entry {
        &self.entries[0]
    }

    pub fn min_slack(&self) -> Option<&Rational> {
        self.entries.iter().map(|e| &e.slack).min()
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut params = Vec::new();
        if let Some(d) = self.d {
            params.push(format!("d={d}"));
        }
        if let Some(k) = self.k {
            params.push(format!("k={k}"));
        }
        writeln!(
            f,
            "certificate {:?} {} valid={}",
            self.lemma,
            params.join(" "),
            self.is_valid()
        )?;
        for e in &self.entries {
            writeln!(f, "  {}: lhs={} rhs={} slack={}", e.instance, e.lhs, e.rhs, e.slack)?;
        }
        Ok(())
    }
}

fn mask_of(f: &PolymatroidFn, set: &VertexSet) -> Result<u32> {
    match set.to_mask() {
        Some(m) if m >> f.n() == 0 => Ok(m as u32),
        _ => Err(Error::InvalidSubset(format!("{set:?} is not a subset of 0..{}", f.n()))),
    }
}

fn bits(m: u32) -> impl Iterator<Item = u32> {
    (0..32).filter(move |i| m >> i & 1 == 1)
}

fn bracket_masks(f: &PolymatroidFn, a: u32, b: u32) -> Rational {
    let plus: Rational = bits(b).map(|v| f.value(a | 1 << v)).sum();
    let minus: Rational = bits(a).map(|v| f.value(a & !(1 << v))).sum();
    plus - minus
}

/// `[A, B] = Σ_{b∈B} f(A ∪ b) - Σ_{a∈A} f(A \ a)` for disjoint `A`, `B` of
/// equal size.
pub fn bracket(f: &PolymatroidFn, a: &VertexSet, b: &VertexSet) -> Result<Rational> {
    let (am, bm) = (mask_of(f, a)?, mask_of(f, b)?);
    if am.count_ones() != bm.count_ones() {
        return Err(Error::SizeMismatch(format!(
            "bracket sides have {} and {} vertices",
            a.len(),
            b.len()
        )));
    }
    if am & bm != 0 {
        return Err(Error::InvalidSubset("bracket sides overlap".into()));
    }
    Ok(bracket_masks(f, am, bm))
}

fn pow(base: usize, e: usize) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * Rational::from(base))
}

fn split_masks(g: &Graph) -> Result<(u32, u32)> {
    let s = chessboard_split(g)?;
    let m = |set: &VertexSet| {
        set.to_mask()
            .map(|m| m as u32)
            .ok_or_else(|| Error::InvalidSubset("split too large".into()))
    };
    Ok((m(&s.a)?, m(&s.b)?))
}

fn expect_n(f: &PolymatroidFn, n: usize, what: &str) -> Result<()> {
    if f.n() != n {
        return Err(Error::SizeMismatch(format!(
            "{what} has {n} vertices but f is defined on {}",
            f.n()
        )));
    }
    Ok(())
}

/// `Σ f(v) >= [A, B] + c` for the chessboard split of `g`.
fn split_entry(f: &PolymatroidFn, g: &Graph, constant: Rational, instance: String) -> Result<Entry> {
    let (a, b) = split_masks(g)?;
    Ok(Entry::new(
        instance,
        f.singleton_sum(),
        bracket_masks(f, a, b) + constant,
    ))
}

fn bracket_entry(f: &PolymatroidFn, g: &Graph) -> Result<Entry> {
    let (a, b) = split_masks(g)?;
    let half = Rational::from(a.count_ones() as usize);
    Ok(Entry::new(
        "[A,B] >= |A| by strong monotonicity",
        bracket_masks(f, a, b),
        half,
    ))
}

fn cube_constant(d: usize) -> Rational {
    Rational::from(d - 1) * pow(2, d - 1)
}

/// Checks the cube inequality for `f` on `C^d`, together with the same
/// inequality on every lower-dimensional face and the resulting bound
/// `Σ f(v) >= d·2^(d-1)`.
pub fn check_lemma1(f: &PolymatroidFn, d: usize) -> Result<Certificate> {
    let g = hypercube(d)?;
    if d == 0 {
        return Err(Error::InvalidDimension {
            value: d,
            reason: "the cube inequality needs d >= 1",
        });
    }
    expect_n(f, g.n(), "C^d")?;
    let mut entries = vec![
        split_entry(
            f,
            &g,
            cube_constant(d),
            format!("C^{d}: sum f(v) >= [A,B] + (d-1)2^(d-1)"),
        )?,
        bracket_entry(f, &g)?,
        Entry::new(
            format!("C^{d}: sum f(v) >= d 2^(d-1)"),
            f.singleton_sum(),
            Rational::from(d) * pow(2, d - 1),
        ),
    ];
    for j in 1..d {
        let face = hypercube(j)?;
        for free in (0..d).combinations(j) {
            let free_mask: usize = free.iter().map(|b| 1 << b).sum();
            let fixed = (0..1usize << d).filter(|x| x & free_mask == 0);
            for base in fixed {
                let vertices: Vec<usize> = (0..1usize << d).filter(|v| v & !free_mask == base).collect();
                let local = f.restrict(&vertices)?;
                let label = g.label(base);
                entries.push(split_entry(
                    &local,
                    &face,
                    cube_constant(j),
                    format!("face axes {free:?} at {label}"),
                )?);
            }
        }
    }
    Ok(Certificate {
        lemma: LemmaId::Lemma1,
        d: Some(d),
        k: None,
        entries,
    })
}

/// The six parts of the induction step, as global vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Parts {
    pub a: Vec<usize>,
    pub a_star: Vec<usize>,
    pub b: Vec<usize>,
    pub b_star: Vec<usize>,
    pub a_prime: Vec<usize>,
    pub b_prime: Vec<usize>,
}

impl Lemma2Parts {
    fn masks(&self, n: usize) -> Result<[u32; 6]> {
        let named = [
            ("A", &self.a),
            ("A*", &self.a_star),
            ("B", &self.b),
            ("B*", &self.b_star),
            ("A'", &self.a_prime),
            ("B'", &self.b_prime),
        ];
        let mut out = [0u32; 6];
        let mut seen = 0u32;
        for (i, (name, vs)) in named.into_iter().enumerate() {
            for &v in vs {
                if v >= n {
                    return Err(Error::Hypothesis(format!(
                        "{name} contains vertex {v} outside the graph"
                    )));
                }
                if seen >> v & 1 == 1 {
                    return Err(Error::Hypothesis(format!(
                        "the six parts are not disjoint (vertex {v} repeats in {name})"
                    )));
                }
                seen |= 1 << v;
                out[i] |= 1 << v;
            }
        }
        Ok(out)
    }
}

fn neighbors_in(g: &Graph, v: usize, set: u32) -> usize {
    g.neighbors(v).iter().filter(|&&w| set >> w & 1 == 1).count()
}

fn perfect_matching(g: &Graph, x: u32, y: u32) -> bool {
    x.count_ones() == y.count_ones()
        && bits(x).all(|v| neighbors_in(g, v as usize, y) == 1)
        && bits(y).all(|v| neighbors_in(g, v as usize, x) == 1)
}

fn check_lemma2_hypotheses(g: &Graph, m: &[u32; 6]) -> Result<usize> {
    let [a, a_star, b, b_star, a_p, b_p] = *m;
    let fail = |what: &str| Err(Error::Hypothesis(what.to_string()));
    let k = a.count_ones();
    if [b, a_p, b_p].iter().any(|x| x.count_ones() != k) {
        return fail("|A| = |B| = |A'| = |B'| fails");
    }
    if a_star.count_ones() != b_star.count_ones() {
        return fail("|A*| = |B*| fails");
    }
    if !g.is_independent_mask((a | a_star | a_p) as u64) {
        return fail("A ∪ A* ∪ A' is not independent");
    }
    if !g.is_independent_mask((b | b_star | b_p) as u64) {
        return fail("B ∪ B* ∪ B' is not independent");
    }
    if !perfect_matching(g, a, b_p) {
        return fail("edges between A and B' are not a perfect matching");
    }
    if !perfect_matching(g, a_p, b) {
        return fail("edges between A' and B are not a perfect matching");
    }
    let all = m.iter().fold(0, |acc, x| acc | x);
    let within =
        |x: u32, y: u32, u: usize, v: usize| x >> u & 1 == 1 && y >> v & 1 == 1 || x >> v & 1 == 1 && y >> u & 1 == 1;
    for &(u, v) in g.edges() {
        if all >> u & 1 == 0 || all >> v & 1 == 0 {
            continue;
        }
        let allowed = within(a, b_p, u, v)
            || within(a_p, b, u, v)
            || within(a | a_star, b | b_star, u, v)
            || within(a_p, b_p, u, v);
        if !allowed {
            return Err(Error::Hypothesis(format!(
                "edge {u}-{v} joins parts the hypotheses keep apart"
            )));
        }
    }
    if bits(b).any(|v| neighbors_in(g, v as usize, a | a_star) == 0) {
        return fail("some b in B has no neighbor in A ∪ A*");
    }
    if bits(b_p).any(|v| neighbors_in(g, v as usize, a_p) == 0) {
        return fail("some b' in B' has no neighbor in A'");
    }
    Ok(k as usize)
}

/// Checks `[AA*, BB*] + [A', B'] >= 2k + [A'AA*, B'BB*]` after verifying the
/// hypotheses on the subgraph of `g` spanned by the six parts.
pub fn check_lemma2(f: &PolymatroidFn, g: &Graph, parts: &Lemma2Parts) -> Result<Certificate> {
    expect_n(f, g.n(), "graph")?;
    let m = parts.masks(g.n())?;
    let k = check_lemma2_hypotheses(g, &m)?;
    let [a, a_star, b, b_star, a_p, b_p] = m;
    let lhs = bracket_masks(f, a | a_star, b | b_star) + bracket_masks(f, a_p, b_p);
    let rhs = Rational::from(2 * k) + bracket_masks(f, a_p | a | a_star, b_p | b | b_star);
    Ok(Certificate {
        lemma: LemmaId::Lemma2,
        d: None,
        k: Some(k),
        entries: vec![Entry::new(
            format!("[AA*,BB*] + [A',B'] >= 2k + [A'AA*,B'BB*], k={k}"),
            lhs,
            rhs,
        )],
    })
}

/// Splits a cube or lattice window into levels along its first coordinate and
/// returns the parts for adding level `level` on top of the levels below it.
pub fn lemma2_level_parts(g: &Graph, level: usize) -> Result<Lemma2Parts> {
    let (d, k) = match g.family() {
        Family::Cube { d } => (d, 2),
        Family::Lattice { d, k } => (d, k),
        _ => return Err(Error::Hypothesis("level parts need a cube or lattice window".into())),
    };
    if d < 2 {
        return Err(Error::Hypothesis("levels need dimension at least 2".into()));
    }
    if level == 0 || level >= k {
        return Err(Error::InvalidSize {
            value: level,
            reason: "level must be between 1 and k - 1",
        });
    }
    let mut p = Lemma2Parts::default();
    for v in 0..g.n() {
        let c = g.coords(v);
        let even = c.iter().sum::<i64>() % 2 == 0;
        let h = c[0] as usize;
        let slot = if h == level {
            if even {
                &mut p.a_prime
            } else {
                &mut p.b_prime
            }
        } else if h + 1 == level {
            if even {
                &mut p.a
            } else {
                &mut p.b
            }
        } else if h < level {
            if even {
                &mut p.a_star
            } else {
                &mut p.b_star
            }
        } else {
            continue;
        };
        slot.push(v);
    }
    Ok(p)
}

fn path_constant(k: usize) -> Rational {
    Rational::from(k as i64 / 2 - 1)
}

/// Checks `Σ f(v) >= [A, B] + k/2 - 1` on the path with `k` vertices, and the
/// same on every even suffix the induction passes through.
pub fn check_lemma_path(f: &PolymatroidFn, k: usize) -> Result<Certificate> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidSize {
            value: k,
            reason: "the path inequality needs an even number of vertices",
        });
    }
    expect_n(f, k, "path")?;
    let g = path(k)?;
    let mut entries = vec![
        split_entry(f, &g, path_constant(k), format!("P{k}: sum f(v) >= [A,B] + k/2 - 1"))?,
        bracket_entry(f, &g)?,
        Entry::new(
            format!("P{k}: sum f(v) >= k - 1"),
            f.singleton_sum(),
            Rational::from(k - 1),
        ),
    ];
    for j in (2..k).step_by(2) {
        let local = f.restrict(&(k - j..k).collect::<Vec<_>>())?;
        entries.push(split_entry(
            &local,
            &path(j)?,
            path_constant(j),
            format!("suffix of {j} vertices"),
        )?);
    }
    Ok(Certificate {
        lemma: LemmaId::Path,
        d: Some(1),
        k: Some(k),
        entries,
    })
}

/// `d(k^d - k^(d-1)) - k^d/2`.
pub fn lemma_dk_constant(d: usize, k: usize) -> Rational {
    let kd = pow(k, d);
    Rational::from(d) * (&kd - &pow(k, d - 1)) - kd * Rational::new(1, 2)
}

fn check_even_window(d: usize, k: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidDimension {
            value: d,
            reason: "lattice windows need d >= 1",
        });
    }
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidSize {
            value: k,
            reason: "the lattice bound needs an even k >= 2",
        });
    }
    Ok(())
}

/// Checks `Σ f(v) >= [A, B] + d(k^d - k^(d-1)) - k^d/2` on `L^d_k`, the
/// bracket bound, the resulting `Σ f(v) >= d(k^d - k^(d-1))`, and for
/// `d >= 2` every level step of the induction.
pub fn check_lemma_dk(f: &PolymatroidFn, d: usize, k: usize) -> Result<Certificate> {
    check_even_window(d, k)?;
    let g = lattice_window(d, k)?;
    expect_n(f, g.n(), "L^d_k")?;
    let kd = pow(k, d);
    let mut entries = vec![
        split_entry(
            f,
            &g,
            lemma_dk_constant(d, k),
            format!("L^{d}_{k}: sum f(v) >= [A,B] + d(k^d - k^(d-1)) - k^d/2"),
        )?,
        bracket_entry(f, &g)?,
        Entry::new(
            format!("L^{d}_{k}: sum f(v) >= d(k^d - k^(d-1))"),
            f.singleton_sum(),
            Rational::from(d) * (&kd - &pow(k, d - 1)),
        ),
    ];
    if d >= 2 {
        for level in 1..k {
            let cert = check_lemma2(f, &g, &lemma2_level_parts(&g, level)?)?;
            let e = cert.main();
            entries.push(Entry::new(format!("level step {level}"), e.lhs.clone(), e.rhs.clone()));
        }
    }
    Ok(Certificate {
        lemma: LemmaId::Dk,
        d: Some(d),
        k: Some(k),
        entries,
    })
}

/// The average-ratio lower bound `d(1 - 1/k)` for `L^d_k` with the steps
/// that produce it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBound {
    pub d: usize,
    pub k: usize,
    pub vertices: Rational,
    pub lemma_constant: Rational,
    pub bracket_min: Rational,
    pub sum_min: Rational,
    pub bound: Rational,
}

impl fmt::Display for LatticeBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (d, k) = (self.d, self.k);
        let mut s = String::new();
        let _ = writeln!(s, "L^{d}_{k}: sum f(v) >= [A,B] + {}", self.lemma_constant);
        let _ = writeln!(s, "  [A,B] >= k^d/2 = {}", self.bracket_min);
        let _ = writeln!(s, "  sum f(v) >= {}", self.sum_min);
        let _ = write!(s, "  average >= {} / {} = {}", self.sum_min, self.vertices, self.bound);
        f.write_str(&s)
    }
}

pub fn lattice_lower_bound(d: usize, k: usize) -> Result<LatticeBound> {
    check_even_window(d, k)?;
    let constant = lemma_dk_constant(d, k);
    // c_1 = k/2 - 1, c_{j+1} = k c_j + (k-1) k^j
    let mut c = path_constant(k);
    for j in 1..d {
        c = Rational::from(k) * c + Rational::from(k - 1) * pow(k, j);
    }
    if c != constant {
        return Err(Error::Solver(format!(
            "lattice constant {constant} disagrees with its recurrence {c}"
        )));
    }
    let vertices = pow(k, d);
    let bracket_min = &vertices * &Rational::new(1, 2);
    let sum_min = &constant + &bracket_min;
    let bound = &sum_min / &vertices;
    Ok(LatticeBound {
        d,
        k,
        vertices,
        lemma_constant: constant,
        bracket_min,
        sum_min,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{scheme_polymatroid, Source};
    use crate::scheme::build_cube_scheme;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn cube_fn(d: usize) -> PolymatroidFn {
        scheme_polymatroid(&build_cube_scheme(d, None).unwrap()).unwrap()
    }

    #[test]
    fn bracket_basics() {
        let f = cube_fn(2);
        let e = VertexSet::new();
        assert_eq!(bracket(&f, &e, &e).unwrap(), Rational::zero());
        let g = PolymatroidFn::from_fn(2, Source::Synthetic, |m| Rational::from(m as i64 * 3)).unwrap();
        assert_eq!(
            bracket(&g, &VertexSet::from_mask(1), &VertexSet::from_mask(2)).unwrap(),
            Rational::from(9)
        );
        assert!(bracket(&f, &VertexSet::from_mask(1), &VertexSet::from_mask(6)).is_err());
        assert!(bracket(&f, &VertexSet::from_mask(3), &VertexSet::from_mask(6)).is_err());
    }

    #[test]
    fn chessboard_bracket_on_schemes() {
        for d in 2..=3 {
            let f = cube_fn(d);
            let s = chessboard_split(&hypercube(d).unwrap()).unwrap();
            assert!(bracket(&f, &s.a, &s.b).unwrap() >= Rational::from(1i64 << (d - 1)));
        }
    }

    #[test]
    fn lemma1_on_schemes() {
        for d in 1..=3 {
            let f = if d == 1 {
                scheme_polymatroid(&crate::scheme::build_edge_scheme(crate::field::Field::new(2).unwrap())).unwrap()
            } else {
                cube_fn(d)
            };
            let c = check_lemma1(&f, d).unwrap();
            assert!(c.is_valid(), "{c}");
        }
        assert_eq!(check_lemma1(&cube_fn(3), 3).unwrap().entries.len(), 3 + 12 + 6);
        assert!(check_lemma1(&cube_fn(2), 3).is_err());
    }

    #[test]
    fn d1_reduces_to_submodularity() {
        let f = PolymatroidFn::new(2, vec![r(0, 1), r(1, 1), r(1, 1), r(3, 1)], Source::Synthetic).unwrap();
        let c = check_lemma1(&f, 1).unwrap();
        assert_eq!((c.main().lhs.clone(), c.main().rhs.clone()), (r(2, 1), r(3, 1)));
        assert!(!c.is_valid());
    }

    #[test]
    fn lemma2_steps() {
        for d in 2..=3 {
            let g = hypercube(d).unwrap();
            let parts = lemma2_level_parts(&g, 1).unwrap();
            assert_eq!(parts.a.len(), 1 << (d - 2));
            let c = check_lemma2(&cube_fn(d), &g, &parts).unwrap();
            assert!(c.is_valid(), "{c}");
        }
        let g = hypercube(2).unwrap();
        let mut parts = lemma2_level_parts(&g, 1).unwrap();
        parts.b_prime.clear();
        let err = check_lemma2(&cube_fn(2), &g, &parts).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
    }

    #[test]
    fn lemma2_hypothesis_messages() {
        let g = hypercube(2).unwrap();
        let f = cube_fn(2);
        let good = lemma2_level_parts(&g, 1).unwrap();
        let mut swapped = good.clone();
        std::mem::swap(&mut swapped.a, &mut swapped.b);
        let msg = check_lemma2(&f, &g, &swapped).unwrap_err().to_string();
        assert!(msg.contains("independent"), "{msg}");
        let mut dup = good.clone();
        dup.a_star = dup.a.clone();
        assert!(check_lemma2(&f, &g, &dup).unwrap_err().to_string().contains("disjoint"));
    }

    #[test]
    fn constants() {
        assert_eq!(lemma_dk_constant(1, 4), r(1, 1));
        assert_eq!(lemma_dk_constant(1, 6), r(2, 1));
        assert_eq!(lemma_dk_constant(2, 2), r(2, 1));
        for d in 1..=6 {
            assert_eq!(lemma_dk_constant(d, 2), cube_constant(d));
        }
        assert_eq!(lattice_lower_bound(2, 2).unwrap().bound, r(1, 1));
        assert_eq!(lattice_lower_bound(3, 2).unwrap().bound, r(3, 2));
        assert_eq!(lattice_lower_bound(2, 4).unwrap().bound, r(3, 2));
        assert_eq!(lattice_lower_bound(5, 10).unwrap().bound, r(9, 2));
        assert!(lattice_lower_bound(2, 3).is_err());
        assert!(lattice_lower_bound(0, 2).is_err());
    }

    #[test]
    fn path_and_dk_on_schemes() {
        let f = cube_fn(2);
        assert!(check_lemma_dk(&f, 2, 2).unwrap().is_valid());
        let edge = PolymatroidFn::new(2, vec![r(0, 1), r(1, 1), r(1, 1), r(2, 1)], Source::Synthetic).unwrap();
        let c = check_lemma_path(&edge, 2).unwrap();
        assert!(c.is_valid());
        assert_eq!(c.main().slack, Rational::zero());
        assert!(check_lemma_path(&edge, 3).is_err());
        assert!(check_lemma_dk(&edge, 1, 3).is_err());
    }
}
