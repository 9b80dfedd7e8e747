//! Rank of a configuration on K_{7,5}, with the per-row summands and a witness.
//!
//!     cargo run --example rank -- '<0,0,0,3,3,3;21|0,0,0,3,3>'

use kmn_sandpile::rank::{park_sort, rank_formula_terms, rank_greedy, rank_of, rank_scan};
use kmn_sandpile::Configuration;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "<0,0,0,3,3,3;21|0,0,0,3,3>".into());
    let u: Configuration = text.parse()?;

    let parking = park_sort(&u)?;
    let terms = rank_formula_terms(&parking)?;
    println!("input           {u}");
    println!("parking sorted  {parking}");
    println!("sink + 1 = {} * n + {}", terms.q, terms.r);
    println!("summands        {:?}", terms.summands);
    println!("rank            {}", rank_of(&u)?);

    let (greedy, proof) = rank_greedy(&u)?;
    println!("greedy rank     {greedy}, witness f = {}", proof.f);
    println!("grid walk rank  {}", rank_scan(&u)?);
    Ok(())
}
