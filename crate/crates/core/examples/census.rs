//! Counts the tables on `n` elements with no associating triple.
//!
//! `cargo run --release --example census -- 3`
//! `cargo run --release --example census -- 4 --long`

use antiassoc::verify::census::{census, census_unpruned, CensusOptions};

fn main() -> antiassoc::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().and_then(|a| a.parse().ok()).unwrap_or(3);
    let long_run = args.iter().any(|a| a == "--long");
    let workers = std::thread::available_parallelism().map(|w| w.get()).unwrap_or(1);
    let report = census(n, &CensusOptions { workers, long_run, progress: long_run, ..CensusOptions::default() })?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    if n <= 3 {
        let full = census_unpruned(n)?;
        println!("unpruned recount: {} antiassociative of {} tables", full.antiassociative, full.nodes);
    }
    Ok(())
}
