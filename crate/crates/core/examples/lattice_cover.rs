//! Cover a lattice window with parity cubes and run the composite scheme.

use hypershare::entropy::{check_perfect, ratio_report};
use hypershare::scheme::{build_lattice_cover, combine_schemes, default_cube_field, lattice_share_formula, SubScheme};

fn main() -> hypershare::Result<()> {
    let (d, k) = (2, 6);
    let cover = build_lattice_cover(d, k)?;
    let cubes = cover.parts.iter().filter(|p| p.kind != SubScheme::Edge).count();
    println!(
        "L^{d}_{k}: {} parts ({cubes} cubes), uncovered edges: {}",
        cover.parts.len(),
        cover.uncovered().len()
    );

    let s = combine_schemes(&cover, default_cube_field(cover.max_dim())?)?;
    println!("perfect: {}", check_perfect(&s)?.is_perfect());

    let ratios = ratio_report(&s);
    let g = s.graph();
    for y in (0..k).rev() {
        let row: Vec<String> = (0..k)
            .map(|x| {
                let v = g.find_vertex(&format!("{x},{y}")).expect("window vertex");
                ratios.per_vertex[v].to_string()
            })
            .collect();
        println!("  {}", row.join(" "));
    }
    println!(
        "total share size {} (closed form {})",
        ratios.total(),
        lattice_share_formula(d, k)
    );
    Ok(())
}
