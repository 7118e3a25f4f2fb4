//! Counts of face classes by reflexive dimension: row k lists, for each
//! face dimension d, the affine classes of d-faces of reflexive k-polytopes
//! not already occurring for smaller k. Pass `3` to include the
//! three-dimensional row (several minutes).

use reflat::classify::classify_by_reflexive_dimension;

fn main() -> reflat::Result<()> {
    let max_rd: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(2);
    let table = classify_by_reflexive_dimension(max_rd)?;
    for (k, row) in table.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|n| n.to_string()).collect();
        println!("rd={}: {}", k + 1, cells.join(" "));
    }
    Ok(())
}
