//! Counts connected pillowcase covers of `Q(1, -1^5)` with the character
//! oracle and compares their growth with the volume `π^4`.
//!
//! Run with `cargo run --release --example cover_growth -- 10 20 30`.

use std::time::Instant;

use pillowcase::covers::{growth_ratios, CharacterTable};

fn main() -> pillowcase::Result<()> {
    let degrees: Vec<u32> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("degrees are positive integers"))
        .collect();
    let degrees = if degrees.is_empty() {
        vec![10, 20, 30]
    } else {
        degrees
    };

    let table = CharacterTable::in_memory();
    let start = Instant::now();
    for (n, sq, r) in growth_ratios(1, &degrees, &table)? {
        println!("N = {n:>3}  Sq_N = {sq}  r_N = 8 Sq_N / (pi^4 N^4) = {r:.6}");
    }
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
