//! Doubling benchmark of rank_of, the same harness as `kmn bench`.
//!
//!     cargo run --release --example bench -- 100000 1600000

use kmn_sandpile::cli::{bench, parse_size};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (lo, hi): (usize, usize) = match &args[..] {
        [lo, hi] => (lo.parse().expect("size"), hi.parse().expect("size")),
        _ => (100_000, 1_600_000),
    };
    let mut sizes = Vec::new();
    let mut s = lo;
    while s <= hi {
        sizes.push(parse_size(&s.to_string()).unwrap_or_else(|_| panic!("bad size {s}")));
        s *= 2;
    }
    let report = bench(&sizes, 7, 5).unwrap_or_else(|_| panic!("benchmark failed"));
    for row in &report.rows {
        let ratio = row.ratio.map(|r| format!("{r:.2}")).unwrap_or_default();
        println!("m+n = {:>9}  median {:>9.5}s  {ratio}", row.m + row.n, row.median_seconds);
    }
    println!("largest ratio {:.2}", report.max_ratio);
}
