//! Enumerate the relations of IP simplices in three dimensions, show which
//! of them fail to be IP weights, and build a Newton polytope with a
//! sublattice quotient.

use reflat::weights::{
    enumerate_ip_simplex_relations, format_weight_line, newton_polytope_quotient,
    parse_weight_line, simplex_for_relation, WeightInput, WeightMatrix,
};

fn main() -> reflat::Result<()> {
    let relations = enumerate_ip_simplex_relations(3)?;
    let non_ip: Vec<_> = relations.iter().filter(|r| !r.ip_weight).collect();
    println!(
        "{} relations of 3d IP simplices, {} of them not IP weights:",
        relations.len(),
        non_ip.len()
    );
    for r in &non_ip {
        let line = format_weight_line(&WeightInput {
            matrix: WeightMatrix::from_system(&r.ws),
            quotient: None,
        });
        let simplex = simplex_for_relation(&r.ws);
        println!(
            "  {:<14} simplex with {} lattice points",
            line,
            simplex.lattice_points().len()
        );
    }

    let quotient = parse_weight_line("4 1 1 1 1 /Z2: 0 1 0 1")?;
    let full = newton_polytope_quotient(&quotient.matrix, None)?;
    let reduced = newton_polytope_quotient(&quotient.matrix, quotient.quotient.as_ref())?;
    println!(
        "degree-4 simplex: {} points on the full lattice, {} on the index-2 sublattice; \
         both reflexive: {}",
        full.lattice_points().len(),
        reduced.lattice_points().len(),
        full.is_reflexive() && reduced.is_reflexive()
    );
    Ok(())
}
