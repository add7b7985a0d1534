//! Check set functions against the polymatroid axioms with the secret.

use hypershare::entropy::{scheme_polymatroid, verify_axioms, PolymatroidFn, Source};
use hypershare::graphs::lattice_window;
use hypershare::scheme::{build_lattice_cover, combine_schemes, default_cube_field};
use hypershare::Rational;

fn main() -> hypershare::Result<()> {
    let cover = build_lattice_cover(2, 4)?;
    let s = combine_schemes(&cover, default_cube_field(cover.max_dim())?)?;
    let f = scheme_polymatroid(&s)?;
    println!("L^2_4 composite: {} violations", verify_axioms(&f, s.graph())?.len());

    // Half the cardinality: a polymatroid, but edges do not carry the secret.
    let g = lattice_window(1, 4)?;
    let half = PolymatroidFn::from_fn(4, Source::Synthetic, |m| Rational::new(m.count_ones() as i64, 2))?;
    for v in verify_axioms(&half, &g)?.iter().take(3) {
        println!("  {v}");
    }
    Ok(())
}
