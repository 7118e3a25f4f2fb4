//! Classify all reflexive polygons, report the maximal ancestors, and
//! cross-check the result against the brute-force search over small
//! coordinate boxes.

use reflat::classify::{brute_force_reflexive_2d, classify_reflexive, maximal_polytopes};
use reflat::weights::format_weight_line;

fn main() -> reflat::Result<()> {
    let run = classify_reflexive(2)?;
    println!(
        "reflexive polygons: {} ({} self-dual, {} dual pairs)",
        run.class_count(),
        run.self_dual_count(),
        run.pair_count()
    );

    let ancestors = maximal_polytopes(2)?;
    let maximal = run.maximal_ancestors();
    println!("maximal ancestors:");
    for a in &ancestors {
        let tag = if maximal.contains(&&a.key) { "maximal" } else { "subpolytope" };
        println!(
            "  {:<22} {} lattice points ({tag})",
            format_weight_line(&a.source),
            a.polytope.lattice_points().len()
        );
    }

    let oracle = brute_force_reflexive_2d(3);
    let classified: std::collections::HashSet<_> = run.keys().cloned().collect();
    println!(
        "brute force over [-3,3]^2 finds {} classes; sets match: {}",
        oracle.len(),
        oracle == classified
    );
    Ok(())
}
