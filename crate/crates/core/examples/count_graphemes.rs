//! Counting graphemes with a digraph-aware alphabet.

use qvord::freqdata::{count_graphemes, load_alphabet};
use qvord::indices::modified_coords;

const ALPHABET: &str =
    "# Czech-like inventory with the digraph ch\na\nb\nc\nch\nd\ne\nh\ni\nk\nl\no\nr\nt\nu\ny\n";

fn main() -> qvord::Result<()> {
    let alphabet = load_alphabet(ALPHABET, true)?;
    let text = "Chytrý kluk chytil rybu do chaloupky.";
    let table = count_graphemes(text, &alphabet)?;
    for (label, count) in table.iter() {
        if count > 0 {
            print!("{label}:{count} ");
        }
    }
    println!();
    let point = modified_coords(&table)?;
    println!(
        "K={} N={} I_m={:.4} S_m={:.4}",
        table.num_categories(),
        table.total(),
        point.i_m,
        point.s_m
    );
    Ok(())
}
