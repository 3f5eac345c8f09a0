//! Independent oracle: pillowcase covers counted through symmetric group
//! characters, checked against brute-force enumeration at small degree.

pub mod characters;
pub mod counting;
pub mod naive;
pub mod partition;

pub use characters::{CacheStatus, CharacterTable};
pub use counting::{
    connected_counts, frobenius_count, growth_ratio, growth_ratios, labelled_cover_count, sq_count,
    Bigraded, CoverTable, PILLOWCASE_TRANSLATIONS,
};
pub use naive::{naive_counts, naive_enumerate, naive_table, NaiveCount, NaiveTable};
pub use partition::Partition;
