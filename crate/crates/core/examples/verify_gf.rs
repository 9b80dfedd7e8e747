//! Enumerated generating function of all K_{m,n}(x,y) against the closed form,
//! plus the two boundary sums.
//!
//!     cargo run --release --example verify_gf -- 5 5 8

use kmn_sandpile::genfunc::{boundary_series_closed, boundary_series_direct, compare_series, verify_gf_theorem};
use kmn_sandpile::series::Caps;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u32> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (wmax, hmax, xy) = match args[..] {
        [w, h, xy] => (w, h, xy),
        _ => (4, 4, 6),
    };
    let caps = Caps::new(xy, xy, wmax, hmax);

    let (dp, dm) = boundary_series_direct(caps)?;
    let (cp, cm) = boundary_series_closed(caps)?;
    println!("positive boundary sum: {:?}", compare_series(&dp, &cp)?);
    println!("negative boundary sum: {:?}", compare_series(&dm, &cm)?);
    println!("generating function:   {:?}", verify_gf_theorem(caps)?);
    Ok(())
}
