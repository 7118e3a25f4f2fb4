//! Full classification of the 4319 reflexive classes in three dimensions
//! (several minutes of CPU time). Pass a path to also write the database:
//!
//! ```text
//! cargo run --release --example classify_3d -- 3d.rpdb
//! ```

use std::time::Instant;

use reflat::classify::classify_reflexive_with_progress;

fn main() -> reflat::Result<()> {
    let t0 = Instant::now();
    let run = classify_reflexive_with_progress(
        3,
        Some(&|p, m, s| eprintln!("p={p} m={m} s={s}")),
    )?;
    println!(
        "classes={} pairs={} selfdual={} maximal_ancestors={} elapsed={:.1?}",
        run.class_count(),
        run.pair_count(),
        run.self_dual_count(),
        run.maximal_ancestors().len(),
        t0.elapsed()
    );
    if let Some(path) = std::env::args().nth(1) {
        let db = run.database()?;
        db.write_file(path.as_ref())?;
        println!("wrote {} records to {path}", db.len());
    }
    Ok(())
}
