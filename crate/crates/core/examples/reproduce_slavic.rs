//! Clusters the bundled Slavic languages every way and writes the plots.
//!
//! `cargo run --example reproduce_slavic -- out/`

use std::path::PathBuf;

use qvord::cluster::{DEFAULT_RESTARTS, DEFAULT_SEED};
use qvord::pipeline::{reproduce, write_reproduction};

fn main() -> qvord::Result<()> {
    let repro = reproduce(DEFAULT_SEED, DEFAULT_RESTARTS)?;
    print!("{}", repro.summary());
    if let Some(dir) = std::env::args().nth(1) {
        write_reproduction(&repro, &PathBuf::from(&dir))?;
        println!("wrote {dir}/reproduce.json, modified.svg, original.svg");
    }
    Ok(())
}
