//! Indices of qualitative variation for a few hand-made tables.

use qvord::freqdata::CategoryTable;
use qvord::indices::modified_coords;

fn main() -> qvord::Result<()> {
    let tables = [
        ("uniform", vec![10, 10, 10, 10]),
        ("skewed", vec![70, 20, 8, 2]),
        ("with an unused category", vec![50, 30, 20, 0]),
    ];
    for (name, counts) in tables {
        let point = modified_coords(&CategoryTable::from_counts(&counts)?)?;
        let ix = point.indices;
        println!(
            "{name:<24} VA={:.4} SDA={:.4} RE={:.4} RR={:.4}  I_m={:.4} S_m={:.4}",
            ix.va, ix.sda, ix.re, ix.rr_norm, point.i_m, point.s_m
        );
    }
    Ok(())
}
