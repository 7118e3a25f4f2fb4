//! Capture-recapture estimation of a population from a partial sample:
//! draw p records from the classified polygon database and estimate its
//! total size from the recaptured dual pairs (p²/2m) and the self-duals
//! ((p/s)²).

use reflat::classify::classify_reflexive;
use reflat::stats::{format_estimate, sample_and_estimate, SampleMode};

fn main() -> reflat::Result<()> {
    let db = classify_reflexive(2)?.database()?;
    println!("database: {} records, {} self-dual", db.len(), db.self_dual_count());
    for seed in 0..4 {
        let r = sample_and_estimate(&db, 12, seed, SampleMode::Uniform)?;
        let fmt = |v: Option<f64>| v.map_or_else(|| "-".into(), format_estimate);
        println!(
            "seed={seed}: p={} m={} s={} pp/2m={} pp/ss={}",
            r.p,
            r.m,
            r.s,
            fmt(r.est_pairs),
            fmt(r.est_self)
        );
    }
    let biased = sample_and_estimate(&db, 12, 0, SampleMode::OrderedByPoints)?;
    println!(
        "smallest-first sample: m={} s={} (the bias of a run in progress)",
        biased.m, biased.s
    );
    Ok(())
}
