//! Times catalog construction for every covered order up to a limit (default 2000)
//! and prints the slowest orders.
//!
//! `cargo run --release -p rho-lab-core --example catalog_timing -- 1000`

use std::time::Instant;

use rho_lab_core::catalog::is_curated;
use rho_lab_core::{nt, Builder, CatalogStore};

fn main() {
    let limit: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2000);
    let mut times = Vec::new();
    let start = Instant::now();
    for n in (1..=limit).filter(|&n| nt::is_squarefree(n) || is_curated(n)) {
        let mut store = CatalogStore::new(Builder::default());
        let t = Instant::now();
        let c = store.catalog(n).unwrap();
        times.push((t.elapsed().as_secs_f64(), n, c.entries.len()));
    }
    times.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    for (t, n, k) in times.iter().take(15) {
        println!("{n:>6} {k:>4} groups {t:.3}s");
    }
    println!("total {:.1}s", start.elapsed().as_secs_f64());
}
