//! Exact zeta values at even integers, and the asymptotics of
//! `sum_{h w <= N} w^(b+1)` that turns lattice counts into volumes.
//!
//! Run with `cargo run --release --example zeta_asymptotics`.

use pillowcase::arith::bernoulli;
use pillowcase::tree::zeta_asymptotic_ratio;
use pillowcase::zeta_even;

fn main() -> pillowcase::Result<()> {
    for s in (2..=12).step_by(2) {
        let z = zeta_even(s)?;
        println!(
            "zeta({s:>2}) = {z:<24} ~ {:.12}   B_{s} = {}",
            z.approx(),
            bernoulli(s as u32)
        );
    }
    for b in [0, 2, 4] {
        for n in [1_000u64, 100_000, 1_000_000] {
            println!(
                "b = {b}  N = {n:>9}  sum / asymptotic = {:.6}",
                zeta_asymptotic_ratio(b, n)?
            );
        }
    }
    Ok(())
}
