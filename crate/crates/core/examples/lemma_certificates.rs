//! Evaluate the induction inequalities on a scheme and on an LP witness, and
//! print the lattice lower-bound chain.

use hypershare::bounds::{check_lemma1, check_lemma2, lattice_lower_bound, lemma2_level_parts, lp_bound, Objective};
use hypershare::entropy::scheme_polymatroid;
use hypershare::graphs::hypercube;
use hypershare::scheme::build_cube_scheme;

fn main() -> hypershare::Result<()> {
    let f = scheme_polymatroid(&build_cube_scheme(3, None)?)?;
    let cert = check_lemma1(&f, 3)?;
    println!("{cert}");

    let g = hypercube(2)?;
    let witness = lp_bound(&g, Objective::Average)?.solution.witness;
    println!("{}", check_lemma1(&witness, 2)?);

    let c3 = hypercube(3)?;
    let parts = lemma2_level_parts(&c3, 1)?;
    println!("{}", check_lemma2(&f, &c3, &parts)?);

    for (d, k) in [(1, 4), (2, 4), (3, 6), (5, 10)] {
        println!("{}\n", lattice_lower_bound(d, k)?);
    }
    Ok(())
}
