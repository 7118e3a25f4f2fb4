//! The lattice-point closure of polar duality: a reflexive polytope is
//! fixed by it, a non-reflexive IP simplex may either shrink to its
//! closure or lose the interior point entirely.

use reflat::ipc::ipc_report;
use reflat::polytope::format_polytope;
use reflat::weights::{simplex_for_relation, WeightSystem};

fn main() -> reflat::Result<()> {
    for weights in [vec![1, 1, 2], vec![1, 5, 6, 8]] {
        let ws = WeightSystem::new(weights.clone())?;
        let simplex = simplex_for_relation(&ws);
        let report = ipc_report(&simplex)?;
        println!(
            "relation {weights:?}: ip_confined={} ipc_closed={}",
            report.ip_confined, report.ipc_closed
        );
        if let Some(closure) = &report.closure {
            println!(
                "  simplex has {} lattice points, closure {}:",
                simplex.lattice_points().len(),
                closure.lattice_points().len()
            );
            print!("{}", format_polytope(closure));
        } else {
            println!("  dual hull loses the origin from its interior; no closure");
        }
    }
    Ok(())
}
