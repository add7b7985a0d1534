use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PolymatroidFn;
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::rational::Rational;

/// Ground sets up to this size are checked in general form exhaustively.
pub const EXHAUSTIVE_AXIOM_VERTICES: usize = 10;
/// Largest ground set [`verify_axioms`] accepts.
pub const MAX_AXIOM_VERTICES: usize = 16;
/// Random general instances drawn per axiom above the exhaustive size.
pub const SAMPLED_INSTANCES: usize = 10_000;
/// Violations beyond this many are counted but not recorded.
pub const MAX_RECORDED_VIOLATIONS: usize = 1_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    /// `f(∅) = 0` and `f ≥ 0`.
    A,
    /// Monotone.
    B,
    /// Submodular.
    C,
    /// Adding a vertex that breaks independence costs a full secret.
    D,
    /// Strengthened submodularity across an independent intersection.
    E,
}

/// One failed inequality `lhs >= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    /// The sets involved, as vertex bitmasks, in the order the axiom names them.
    pub sets: Vec<u32>,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<String> = self.sets.iter().map(|m| format!("{m:#b}")).collect();
        write!(
            f,
            "({:?}) on [{}]: {} < {}",
            self.axiom,
            sets.join(", "),
            self.lhs,
            self.rhs
        )
    }
}

struct Checker<'a> {
    f: &'a PolymatroidFn,
    indep: Vec<bool>,
    one: Rational,
    found: Vec<Violation>,
}

impl Checker<'_> {
    fn v(&self, m: u32) -> &Rational {
        self.f.value(m)
    }

    fn expect(&mut self, axiom: Axiom, sets: &[u32], lhs: Rational, rhs: Rational) {
        if lhs < rhs && self.found.len() < MAX_RECORDED_VIOLATIONS {
            self.found.push(Violation {
                axiom,
                sets: sets.to_vec(),
                lhs,
                rhs,
            });
        }
    }

    fn a(&mut self) {
        let empty = self.v(0).clone();
        if !empty.is_zero() {
            self.expect(Axiom::A, &[0], Rational::zero(), empty.abs());
        }
        for m in 1..self.indep.len() as u32 {
            let x = self.v(m).clone();
            self.expect(Axiom::A, &[m], x, Rational::zero());
        }
    }

    fn b(&mut self, a: u32, b: u32) {
        self.expect(Axiom::B, &[a, b], self.v(b).clone(), self.v(a).clone());
    }

    fn c(&mut self, a: u32, b: u32) {
        let lhs = self.v(a) + self.v(b);
        let rhs = self.v(a & b) + self.v(a | b);
        self.expect(Axiom::C, &[a, b], lhs, rhs);
    }

    /// Only applies when `a ⊆ b`, `a` independent and `b` not.
    fn d(&mut self, a: u32, b: u32) {
        if a & !b == 0 && self.indep[a as usize] && !self.indep[b as usize] {
            let rhs = self.v(a) + &self.one;
            self.expect(Axiom::D, &[a, b], self.v(b).clone(), rhs);
        }
    }

    /// Only applies when neither set is independent but their intersection is.
    fn e(&mut self, a: u32, b: u32) {
        if !self.indep[a as usize] && !self.indep[b as usize] && self.indep[(a & b) as usize] {
            let lhs = self.v(a) + self.v(b);
            let rhs = &(&self.one + self.v(a & b)) + self.v(a | b);
            self.expect(Axiom::E, &[a, b], lhs, rhs);
        }
    }
}

fn submasks(b: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(b);
    std::iter::from_fn(move || {
        let a = next?;
        next = (a != 0).then(|| (a - 1) & b);
        Some(a)
    })
}

/// Checks axioms (a)-(e) for `f` relative to graph `g`.
///
/// Up to [`EXHAUSTIVE_AXIOM_VERTICES`] vertices every instance of every axiom
/// is checked. Above that, every elemental instance is checked (these imply
/// the general forms of (b), (c) and (d), and of (e) given (c)), followed by
/// [`SAMPLED_INSTANCES`] random general instances per axiom from a fixed seed.
pub fn verify_axioms(f: &PolymatroidFn, g: &Graph) -> Result<Vec<Violation>> {
    let n = f.n();
    if n != g.n() {
        return Err(Error::SizeMismatch(format!(
            "function on {n} vertices, graph on {}",
            g.n()
        )));
    }
    if n > MAX_AXIOM_VERTICES {
        return Err(Error::TooLarge {
            what: "ground set for axiom verification",
            size: n as u128,
            cap: MAX_AXIOM_VERTICES as u128,
        });
    }
    let size = 1u32 << n;
    let indep = (0..size).map(|m| g.is_independent_mask(m as u64)).collect();
    let mut ck = Checker {
        f,
        indep,
        one: Rational::one(),
        found: Vec::new(),
    };
    ck.a();

    if n <= EXHAUSTIVE_AXIOM_VERTICES {
        for b in 0..size {
            for a in submasks(b) {
                ck.b(a, b);
                ck.d(a, b);
            }
        }
        for a in 0..size {
            for b in a..size {
                ck.c(a, b);
                ck.e(a, b);
            }
        }
        return Ok(ck.found);
    }

    for a in 0..size {
        let outside: Vec<u32> = (0..n as u32).filter(|i| a >> i & 1 == 0).collect();
        for (j, &v) in outside.iter().enumerate() {
            let av = a | 1 << v;
            ck.b(a, av);
            ck.d(a, av);
            for &w in &outside[j + 1..] {
                let aw = a | 1 << w;
                ck.c(av, aw);
                ck.e(av, aw);
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..SAMPLED_INSTANCES {
        let b = rng.gen_range(0..size);
        let a = rng.gen_range(0..size) & b;
        ck.b(a, b);
        let (x, y) = (rng.gen_range(0..size), rng.gen_range(0..size));
        ck.c(x, y);
    }
    for _ in 0..SAMPLED_INSTANCES {
        // Grow an independent set greedily, then extend it past independence.
        let mut a = 0u32;
        for v in 0..n {
            if rng.gen_bool(0.5) && ck.indep[(a | 1 << v) as usize] {
                a |= 1 << v;
            }
        }
        let b = a | rng.gen_range(0..size);
        ck.d(a, b);
        let c = a | rng.gen_range(0..size);
        ck.e(b, c);
    }
    Ok(ck.found)
}
