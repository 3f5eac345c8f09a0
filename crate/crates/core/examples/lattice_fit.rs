//! Counts half-integer metrics on ribbon graphs exactly and recovers the
//! top-degree part of the count as a polynomial in the face widths.
//!
//! Run with `cargo run --release --example lattice_fit -- 1 3`.

use pillowcase::local::{f_closed, LayerSignature};
use pillowcase::ribbon::{leading_part_fit, total_lattice_count};

fn main() -> pillowcase::Result<()> {
    let args: Vec<u32> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("m and n are nonnegative integers"))
        .collect();
    let (m, n) = match args.as_slice() {
        [m, n] => (*m, *n),
        _ => (1, 3),
    };
    let sig = LayerSignature::new(m, n)?;
    let faces = sig.faces();

    println!("weighted lattice counts for {sig} along the diagonal:");
    for t in 1..=8u64 {
        let widths = vec![t; faces];
        println!(
            "  widths {widths:?} -> {}",
            total_lattice_count(sig, &widths)?
        );
    }

    let fit = leading_part_fit(sig, 8)?;
    let closed = f_closed(sig);
    println!("leading part {fit}");
    println!("F{sig}      {closed}");
    println!("equal: {}", fit == closed);
    Ok(())
}
