//! Compare rank-based entropies with brute-force distribution entropies.

use hypershare::entropy::{distribution_entropy, rank_entropy};
use hypershare::field::Field;
use hypershare::graphs::VertexSet;
use hypershare::scheme::build_cube_scheme;

fn main() -> hypershare::Result<()> {
    let s = build_cube_scheme(2, Some(Field::new(5)?))?;
    let bits = s.secret_len() as f64 * 5f64.log2();
    println!("{:<11} {:>7} {:>12} {:>12}", "subset", "rank", "rank bits", "empirical");
    for mask in 0..16u64 {
        let set = VertexSet::from_mask(mask);
        let rank = rank_entropy(&s, &set, false)?;
        let h = distribution_entropy(&s, &set, false)?;
        let labels: Vec<String> = set.iter().map(|v| s.graph().label(v)).collect();
        let name = if labels.is_empty() {
            "-".to_string()
        } else {
            labels.join(",")
        };
        println!("{name:<11} {rank:>7} {:>12.6} {h:>12.6}", rank.to_f64() * bits);
    }
    Ok(())
}
