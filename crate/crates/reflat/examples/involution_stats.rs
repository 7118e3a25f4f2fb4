//! Involution combinatorics: a classification with dual links is an
//! involution, so the expected number of self-dual classes among N is
//! N·Z_{N-1}/Z_N ≈ √N.

use reflat::stats::{expected_self_duals, involution_counts, ExpectationMode};

fn main() {
    let (z, dist) = involution_counts(16);
    println!("Z_16 = {z} involutions; fixed-point distribution:");
    for (s, n) in &dist {
        println!("  S={s:>2}: {n}");
    }
    for n in [1u64, 16, 4319, 473_800_776] {
        let exact = expected_self_duals(n, ExpectationMode::Exact);
        let asym = expected_self_duals(n, ExpectationMode::Asymptotic);
        println!("N={n:>10}  <S> exact={exact:.4}  asymptotic={asym:.4}");
    }
}
