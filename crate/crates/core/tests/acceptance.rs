//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hypershare::bounds::{
    check_lemma1, check_lemma2, check_lemma_dk, check_lemma_path, lattice_lower_bound, lemma2_level_parts, lp_bound,
    Certificate, LpBound, Objective,
};
use hypershare::entropy::{
    check_perfect, distribution_entropy, rank_entropy, ratio_report, scheme_polymatroid, verify_axioms, PolymatroidFn,
};
use hypershare::field::Field;
use hypershare::graphs::{hypercube, lattice_window, path, VertexSet};
use hypershare::scheme::{
    build_cube_scheme, build_edge_scheme, build_lattice_cover, combine_schemes, default_cube_field,
    lattice_share_formula,
};
use hypershare::{Rational, Result};

const CUBE_BUDGET: Duration = Duration::from_secs(10);
const LP_BUDGET: Duration = Duration::from_secs(600);
const ORACLE_BUDGET: Duration = Duration::from_secs(300);
const ORACLE_TOLERANCE: f64 = 1e-9;

type Verdict = Result<(bool, String)>;

struct Lps {
    c2_avg: LpBound,
    c2_worst: LpBound,
    c3_avg: LpBound,
    c3_worst: LpBound,
    p4_worst: LpBound,
    c3_time: Duration,
}

fn half(n: i64) -> Rational {
    Rational::new(n, 2)
}

fn criterion1() -> Verdict {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for d in 2..=5 {
        let s = build_cube_scheme(d, None)?;
        let perfect = check_perfect(&s)?.is_perfect();
        let exact = ratio_report(&s).per_vertex.iter().all(|x| *x == half(d as i64));
        ok &= perfect && exact;
        notes.push(format!("C^{d} perfect={perfect} ratio=d/2:{exact}"));
    }
    let t = start.elapsed();
    ok &= t < CUBE_BUDGET;
    Ok((ok, format!("{} in {t:.2?}", notes.join(", "))))
}

fn criterion2(lp: &Lps) -> Verdict {
    let ok = lp.c2_avg.optimum == Rational::one() && lp.c3_avg.optimum == half(3) && lp.c3_time < LP_BUDGET;
    Ok((
        ok,
        format!(
            "C^2 {} C^3 {} (C^3 solved in {:.2?})",
            lp.c2_avg.optimum, lp.c3_avg.optimum, lp.c3_time
        ),
    ))
}

fn criterion3(lp: &Lps) -> Verdict {
    let ok = lp.c2_worst.optimum == lp.c2_avg.optimum && lp.c3_worst.optimum == lp.c3_avg.optimum;
    Ok((
        ok,
        format!(
            "C^2 worst {} average {}, C^3 worst {} average {}",
            lp.c2_worst.optimum, lp.c2_avg.optimum, lp.c3_worst.optimum, lp.c3_avg.optimum
        ),
    ))
}

fn criterion4(lp: &Lps) -> Verdict {
    Ok((
        lp.p4_worst.optimum == half(3),
        format!("P4 worst {}", lp.p4_worst.optimum),
    ))
}

fn criterion5() -> Verdict {
    let start = Instant::now();
    let mut worst = 0f64;
    let mut count = 0;
    let mut compare = |s: &hypershare::scheme::LinearScheme, mask: u64, secret: bool| -> Result<()> {
        let set = VertexSet::from_mask(mask);
        let bits = s.secret_len() as f64 * (s.field().p() as f64).log2();
        let exact = rank_entropy(s, &set, secret)?.to_f64() * bits;
        worst = worst.max((distribution_entropy(s, &set, secret)? - exact).abs());
        count += 1;
        Ok(())
    };
    let c2 = build_cube_scheme(2, Some(Field::new(3)?))?;
    for mask in 0..16 {
        compare(&c2, mask, false)?;
        compare(&c2, mask, true)?;
    }
    let c3 = build_cube_scheme(3, Some(Field::new(7)?))?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..50 {
        let mask = rng.gen_range(0..256);
        let secret = rng.gen_bool(0.5);
        compare(&c3, mask, secret)?;
    }
    let t = start.elapsed();
    Ok((
        worst < ORACLE_TOLERANCE && t < ORACLE_BUDGET,
        format!("{count} subsets, max |diff| {worst:.1e} bits, {t:.2?}"),
    ))
}

fn criterion6() -> Verdict {
    let cover = build_lattice_cover(2, 4)?;
    let lattice = combine_schemes(&cover, default_cube_field(cover.max_dim())?)?;
    let cases = [
        ("C^2", scheme_polymatroid(&build_cube_scheme(2, None)?)?, hypercube(2)?),
        ("C^3", scheme_polymatroid(&build_cube_scheme(3, None)?)?, hypercube(3)?),
        ("L^2_4", scheme_polymatroid(&lattice)?, lattice_window(2, 4)?),
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, f, g) in &cases {
        let v = verify_axioms(f, g)?;
        ok &= v.is_empty();
        notes.push(format!("{name}: {} violations", v.len()));
    }
    Ok((ok, notes.join(", ")))
}

fn criterion7(lp: &Lps) -> Verdict {
    let c2 = scheme_polymatroid(&build_cube_scheme(2, None)?)?;
    let c3 = scheme_polymatroid(&build_cube_scheme(3, None)?)?;
    let edge = scheme_polymatroid(&build_edge_scheme(Field::new(2)?))?;
    let p4 = scheme_polymatroid(&combine_schemes(&build_lattice_cover(1, 4)?, Field::new(2)?)?)?;
    let c3_graph = hypercube(3)?;
    let parts = lemma2_level_parts(&c3_graph, 1)?;

    let mut certs: Vec<(String, Certificate)> = Vec::new();
    let mut push = |name: &str, c: Result<Certificate>| -> Result<()> {
        certs.push((name.to_string(), c?));
        Ok(())
    };
    let cubes2: [(&str, &PolymatroidFn); 3] = [
        ("C^2 scheme", &c2),
        ("C^2 avg witness", &lp.c2_avg.solution.witness),
        ("C^2 worst witness", &lp.c2_worst.solution.witness),
    ];
    for (name, f) in cubes2 {
        push(&format!("cube(2) {name}"), check_lemma1(f, 2))?;
        push(&format!("dk(2,2) {name}"), check_lemma_dk(f, 2, 2))?;
        push(
            &format!("path(2) {name} edge"),
            check_lemma_path(&f.restrict(&[0, 1])?, 2),
        )?;
    }
    let cubes3: [(&str, &PolymatroidFn); 3] = [
        ("C^3 scheme", &c3),
        ("C^3 avg witness", &lp.c3_avg.solution.witness),
        ("C^3 worst witness", &lp.c3_worst.solution.witness),
    ];
    for (name, f) in cubes3 {
        push(&format!("cube(3) {name}"), check_lemma1(f, 3))?;
        push(
            &format!("level step C^2->C^3 {name}"),
            check_lemma2(f, &c3_graph, &parts),
        )?;
    }
    push("path(2) edge scheme", check_lemma_path(&edge, 2))?;
    let paths: [(&str, &PolymatroidFn); 2] = [("P4 scheme", &p4), ("P4 worst witness", &lp.p4_worst.solution.witness)];
    for (name, f) in paths {
        push(&format!("path(4) {name}"), check_lemma_path(f, 4))?;
        push(&format!("dk(1,4) {name}"), check_lemma_dk(f, 1, 4))?;
        push(
            &format!("path(2) {name} end"),
            check_lemma_path(&f.restrict(&[0, 1])?, 2),
        )?;
    }
    let bad: Vec<&str> = certs
        .iter()
        .filter(|(_, c)| !c.is_valid())
        .map(|(n, _)| n.as_str())
        .collect();
    let detail = if bad.is_empty() {
        format!("{} certificates valid", certs.len())
    } else {
        format!("invalid: {}", bad.join("; "))
    };
    Ok((bad.is_empty(), detail))
}

fn criterion8() -> Verdict {
    let (d, k) = (2, 4);
    let cover = build_lattice_cover(d, k)?;
    let g = &cover.graph;
    let mult = cover.multiplicities();
    let interior = |v: usize| g.coords(v).iter().all(|&c| c >= 1 && c <= k as i64 - 2);
    let all_covered = g.edges().len() == 24 && cover.uncovered().is_empty();
    let interior_once = mult
        .iter()
        .filter(|((u, v), _)| interior(*u) && interior(*v))
        .all(|(_, &c)| c == 1);

    let s = combine_schemes(&cover, default_cube_field(cover.max_dim())?)?;
    let perfect = check_perfect(&s)?.is_perfect();
    let ratios = ratio_report(&s);
    let interior_two = (0..g.n())
        .filter(|&v| interior(v))
        .all(|v| ratios.per_vertex[v] == Rational::from(2));
    let bound = lattice_lower_bound(d, k)?.bound;
    let total = ratios.total();
    let formula = lattice_share_formula(d, k);
    let ok = all_covered && interior_once && perfect && interior_two && bound == half(3);
    Ok((
        ok,
        format!(
            "24 edges covered={all_covered}, interior once={interior_once}, perfect={perfect}, interior ratio 2={interior_two}, bound {bound}, total share size {total} vs formula {formula} (deviation {})",
            &total - &formula
        ),
    ))
}

fn criterion9(lp: &Lps) -> Verdict {
    let c3 = hypercube(3)?;
    let set: VertexSet = ["000", "001", "011", "111"]
        .iter()
        .map(|l| c3.find_vertex(l).expect("label"))
        .collect::<Vec<_>>()
        .into();
    let p4 = c3.spanned_subgraph(&set)?;
    let avg = lp_bound(&p4, Objective::Average)?.optimum;
    let worst = lp_bound(&p4, Objective::Worst)?.optimum;
    let ok = avg <= lp.c3_avg.optimum && worst <= lp.c3_worst.optimum;
    Ok((
        ok,
        format!(
            "average {avg} <= {}, worst {worst} <= {}",
            lp.c3_avg.optimum, lp.c3_worst.optimum
        ),
    ))
}

fn solve_lps() -> Result<Lps> {
    let c2 = hypercube(2)?;
    let c3 = hypercube(3)?;
    let start = Instant::now();
    let c3_avg = lp_bound(&c3, Objective::Average)?;
    let c3_time = start.elapsed();
    Ok(Lps {
        c2_avg: lp_bound(&c2, Objective::Average)?,
        c2_worst: lp_bound(&c2, Objective::Worst)?,
        c3_avg,
        c3_worst: lp_bound(&c3, Objective::Worst)?,
        p4_worst: lp_bound(&path(4)?, Objective::Worst)?,
        c3_time,
    })
}

fn main() -> ExitCode {
    let lps = match solve_lps() {
        Ok(l) => Some(l),
        Err(e) => {
            println!("LP setup failed: {e}");
            None
        }
    };
    let lp_dependent = |f: fn(&Lps) -> Verdict| -> Verdict {
        match &lps {
            Some(l) => f(l),
            None => Ok((false, "LPs unavailable".into())),
        }
    };
    let results: Vec<(u8, &str, Verdict)> = vec![
        (1, "cube upper bound", criterion1()),
        (2, "cube lower bound via LP", lp_dependent(criterion2)),
        (3, "worst equals average on cubes", lp_dependent(criterion3)),
        (4, "path benchmark", lp_dependent(criterion4)),
        (5, "entropy oracle equivalence", criterion5()),
        (6, "axiom suite", criterion6()),
        (7, "lemma certificates", lp_dependent(criterion7)),
        (8, "lattice window", criterion8()),
        (9, "spanned subgraph monotonicity", lp_dependent(criterion9)),
    ];
    let mut failed = 0;
    for (n, name, verdict) in results {
        let (pass, detail) = verdict.unwrap_or_else(|e| (false, format!("error: {e}")));
        failed += usize::from(!pass);
        println!(
            "{} criterion {n} ({name}): {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
