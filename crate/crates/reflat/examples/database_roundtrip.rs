//! Persist a classification, read it back, and merge two partial
//! databases built from disjoint ancestor subsets.

use reflat::classify::{enumerate_subpolytopes, maximal_polytopes, ClassRun};
use reflat::db::ClassDatabase;

fn main() -> reflat::Result<()> {
    let ancestors = maximal_polytopes(2)?;
    let (left, right) = ancestors.split_at(2);

    let mut partial = Vec::new();
    for half in [left, right] {
        let mut run = ClassRun::new(2);
        for a in half {
            run = enumerate_subpolytopes(a, run)?;
        }
        partial.push(run.database()?);
    }

    let dir = std::env::temp_dir();
    let pa = dir.join("reflat_part_a.rpdb");
    let pb = dir.join("reflat_part_b.rpdb");
    partial[0].write_file(&pa)?;
    partial[1].write_file(&pb)?;

    let a = ClassDatabase::read_file(&pa)?;
    let b = ClassDatabase::read_file(&pb)?;
    println!("partial runs: {} and {} records", a.len(), b.len());
    let merged = a.merge(&b)?;
    println!(
        "merged: {} records, {} self-dual (complete set: 16 with 4 self-dual)",
        merged.len(),
        merged.self_dual_count()
    );
    std::fs::remove_file(&pa)?;
    std::fs::remove_file(&pb)?;
    Ok(())
}
