//! Solve the entropy LP for the path on four vertices and for C^3.

use hypershare::bounds::{build_entropy_lp, lp_bound, Objective, RowKind};
use hypershare::graphs::{hypercube, path};

fn main() -> hypershare::Result<()> {
    let p4 = path(4)?;
    let lp = build_entropy_lp(&p4, Objective::Worst)?;
    for kind in [
        RowKind::Monotone,
        RowKind::Submodular,
        RowKind::StrongMonotone,
        RowKind::StrongSubmodular,
        RowKind::Epigraph,
    ] {
        println!("{kind:?}: {} rows", lp.count(kind));
    }
    print!("{}", lp.to_lp_text());

    let b = lp_bound(&p4, Objective::Worst)?;
    println!("P4 worst-case ratio >= {}", b.optimum);
    let w = &b.solution.witness;
    let singles: Vec<String> = (0..4).map(|v| w.value(1 << v).to_string()).collect();
    println!("witness on single vertices: {}", singles.join(" "));

    let c3 = lp_bound(&hypercube(3)?, Objective::Average)?;
    println!(
        "C^3 average ratio >= {} ({} rows, {} pivots)",
        c3.optimum, c3.rows, c3.solution.pivots
    );
    Ok(())
}
