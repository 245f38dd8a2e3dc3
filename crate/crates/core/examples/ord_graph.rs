//! Original and modified Ord coordinates of the bundled Slavic table.

use qvord::pipeline::{slavic_tables, summarize};

fn main() -> qvord::Result<()> {
    println!("lang   K       N        I       S      I_m     S_m");
    for l in summarize(&slavic_tables())? {
        println!(
            "{:<5} {:>2} {:>7} {:>8.4} {:>7.4} {:>8.5} {:>7.5}",
            l.language, l.categories, l.total, l.ord.i, l.ord.s, l.modified.i_m, l.modified.s_m
        );
    }
    Ok(())
}
