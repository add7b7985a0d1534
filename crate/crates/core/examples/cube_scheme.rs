//! Build the 2-face scheme on the 4-cube and check it.
//!
//! ```bash
//! cargo run --release --example cube_scheme
//! ```

use hypershare::entropy::{check_perfect, ratio_report};
use hypershare::scheme::build_cube_scheme;

fn main() -> hypershare::Result<()> {
    let d = 4;
    let s = build_cube_scheme(d, None)?;
    println!(
        "C^{d} over GF({}): secret of {} field elements, {} seed elements",
        s.field().p(),
        s.secret_len(),
        s.seed_dim()
    );

    let report = check_perfect(&s)?;
    println!(
        "perfect: {} ({} edges recover, {} maximal independent sets learn nothing)",
        report.is_perfect(),
        report.edges_checked,
        report.independent_sets_checked
    );

    let ratios = ratio_report(&s);
    println!("average ratio {}, worst ratio {}", ratios.average, ratios.worst);
    for (ratio, count) in ratios.histogram() {
        println!("  {count} vertices hold {ratio} field elements per secret element");
    }
    Ok(())
}
