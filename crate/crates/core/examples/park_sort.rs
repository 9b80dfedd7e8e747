//! From an arbitrary configuration to its parking sorted representative.

use kmn_sandpile::rank::{park, park_sort, park_sort_fast_trace, r_vector};
use kmn_sandpile::Configuration;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let unsorted: Configuration = "<2,0,2,2,0,0;*|4,4,0,0,4>".parse()?;
    println!("sort {unsorted} = {}", unsorted.sort_config()?);

    let u: Configuration = "<0,1,2,3,3,3;*|2,4,4,6,6>".parse()?;
    let trace = park_sort_fast_trace(&u)?;
    println!("\nr-vector of {u}: {}", r_vector(&u)?);
    println!("h = {}, r_h = {}, k = {}", trace.h, trace.r_h, trace.k);
    println!("before rotation {}", trace.unrotated);
    println!("parking sorted  {}", trace.result);

    let messy: Configuration = "<17,-4,9;-30|3,11>".parse()?;
    println!("\nstabilized      {}", messy.stabilize_equiv()?);
    println!("park            {}", park(&messy)?);
    println!("park_sort       {}", park_sort(&messy)?);
    Ok(())
}
