//! Local polynomials `F_{m,n}`: the closed form, the pole-adding
//! recurrence, and the Kontsevich base case, printed side by side.
//!
//! Run with `cargo run --example local_polynomials -- 8` (bound on m+n).

use pillowcase::local::{f_closed, f_kontsevich_base, f_recurrence, LayerSignature};

fn main() -> pillowcase::Result<()> {
    let bound: u32 = std::env::args()
        .nth(1)
        .map(|a| a.parse().expect("bound is a nonnegative integer"))
        .unwrap_or(6);

    for sig in LayerSignature::all_up_to(bound) {
        let closed = f_closed(sig);
        let recurrence = f_recurrence(sig);
        let agree = if closed == recurrence { "=" } else { "!=" };
        println!(
            "F{sig:<7} faces={}  {closed}   [recurrence {agree}]",
            sig.faces()
        );
        if sig.n() == 0 {
            let base = f_kontsevich_base(sig.m())?;
            println!("{:>9} kontsevich base {base}", "");
        }
    }

    // JSON form used by the command line and golden tests.
    let f22 = f_closed(LayerSignature::new(2, 2)?);
    println!("{}", serde_json::to_string(&f22.to_json_terms())?);
    Ok(())
}
