//! Writes a synthetic melt-pool dataset as CSV.
//!
//! ```text
//! cargo run --example synthetic_csv -- data.csv [seed] [separation]
//! ```

use anyhow::{Context, Result};
use slrf::csv_io::write_dataset;
use slrf::synthetic::{generate, BlobSpec};

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().context("usage: synthetic_csv <out.csv> [seed] [separation]")?;
    let seed = args.next().map_or(Ok(7), |s| s.parse()).context("seed")?;
    let mut spec = BlobSpec::default();
    if let Some(s) = args.next() {
        spec.separation = s.parse().context("separation")?;
    }
    let data = generate(&spec, seed)?;
    let file = std::fs::File::create(&path).with_context(|| format!("creating {path}"))?;
    write_dataset(file, &data)?;
    println!("wrote {} samples to {path}", data.len());
    Ok(())
}
