//! Renders the per-tree volume table as LaTeX through the command-line
//! front end, the same text `pillow render volume K latex-table` prints.
//!
//! Run with `cargo run --example volume_table -- 2`.

use std::io;

fn main() {
    let k = std::env::args().nth(1).unwrap_or_else(|| "2".into());
    let args = ["pillow", "--no-meta", "render", "volume", &k, "latex-table"];
    let code = pillowcase::cli::run(args, &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
