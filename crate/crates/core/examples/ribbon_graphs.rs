//! Enumerates connected genus-0 ribbon graphs with trivalent zeros and
//! univalent poles, and compares the sum of their Laplace transforms with
//! the transform of the local polynomial.
//!
//! Run with `cargo run --example ribbon_graphs -- 2 2`.

use pillowcase::local::{f_closed, LayerSignature};
use pillowcase::ribbon::{enumerate_graphs, hat_f, verify_pole_recurrence, LabelMode};

fn main() -> pillowcase::Result<()> {
    let args: Vec<u32> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("m and n are nonnegative integers"))
        .collect();
    let (m, n) = match args.as_slice() {
        [m, n] => (*m, *n),
        _ => (2, 2),
    };
    let sig = LayerSignature::new(m, n)?;

    let graphs = enumerate_graphs(sig, LabelMode::FacesOnly);
    println!(
        "{} graphs with signature {sig} and labelled faces",
        graphs.len()
    );
    for (i, g) in graphs.iter().enumerate() {
        let boundaries: Vec<String> = g.face_cycles().iter().map(|c| format!("{c:?}")).collect();
        println!("  #{i}: faces {}", boundaries.join(" "));
        println!("       transform {}", g.laplace_transform());
    }
    let full = enumerate_graphs(sig, LabelMode::Full).len();
    println!("{full} graphs once vertices are labelled too");

    let hat = hat_f(sig);
    let closed = f_closed(sig).laplace();
    println!("sum over graphs      {hat}");
    println!("transform of F{sig}  {closed}");
    println!("equal: {}", hat.equals(&closed));
    println!(
        "pole recurrence {sig} -> ({},{}): {}",
        m + 1,
        n + 1,
        verify_pole_recurrence(sig)?
    );
    Ok(())
}
