//! Masur-Veech volume of Q(1^K, -1^(K+4)) as a sum over decorated trees,
//! with every tree's contribution listed.
//!
//! Run with `cargo run --release --example tree_volume -- 3`.

use pillowcase::tree::{contributions, expected_volume, subtotals, volume};

fn main() -> pillowcase::Result<()> {
    let k: u32 = std::env::args()
        .nth(1)
        .map(|a| a.parse().expect("K is a positive integer"))
        .unwrap_or(2);

    let rows = contributions(k)?;
    println!("{} decorated trees for K = {k}", rows.len());
    for c in &rows {
        let layers: Vec<String> = c.layers.iter().map(|s| s.to_string()).collect();
        println!(
            "  {:<40} layers {:<28} |Aut| = {}  c = {:<8} {}",
            c.tree.nested(),
            layers.join(" "),
            c.aut_order,
            c.multinomial_factor.to_string(),
            c.value
        );
    }
    for (cylinders, sub) in subtotals(&rows)? {
        println!("  {cylinders} cylinder(s): {sub}");
    }
    let total = volume(k)?;
    println!("volume      {total}  ~ {:.6}", total.approx());
    println!("pi^(2K+2)/2^(K-1) = {}", expected_volume(k));
    Ok(())
}
