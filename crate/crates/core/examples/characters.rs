//! Symmetric-group characters by the Murnaghan-Nakayama rule, their
//! persistent cache, and the character count of one pillowcase cover
//! profile checked against brute force.
//!
//! Run with `cargo run --example characters -- 4`.

use pillowcase::covers::{frobenius_count, naive_enumerate, CharacterTable, Partition};

fn main() -> pillowcase::Result<()> {
    let n: u32 = std::env::args()
        .nth(1)
        .map(|a| a.parse().expect("n is a positive integer"))
        .unwrap_or(4);

    let dir = std::env::temp_dir().join("pillowcase-characters-example");
    std::fs::create_dir_all(&dir)?;
    let table = CharacterTable::open(&dir);
    println!("cache {:?}: {:?}", table.path(), table.status());

    let classes = Partition::all(n);
    print!("{:>10}", "");
    for c in &classes {
        print!("{:>10}", c.to_string());
    }
    println!();
    for irrep in &classes {
        print!("{:>10}", irrep.to_string());
        for class in &classes {
            print!("{:>10}", table.character(irrep, class)?);
        }
        println!();
    }
    table.persist()?;
    println!("{} values stored", table.stored_len());

    let profile: [Partition; 4] = [
        "3".parse()?,
        "2,1".parse()?,
        "2,1".parse()?,
        "1,1,1".parse()?,
    ];
    println!(
        "covers with corners 3 | 2,1 | 2,1 | 1,1,1: characters {}, enumeration {}",
        frobenius_count(&profile, &table)?,
        naive_enumerate(&profile)?
    );
    Ok(())
}
