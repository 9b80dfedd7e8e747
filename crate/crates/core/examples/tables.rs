//! The (degree, rank) and (xpara, ypara) tables of K_{m,n} as CSV grids.
//!
//!     cargo run --example tables -- 5 3

use kmn_sandpile::genfunc::{enumerate_parking_sorted, k_tilde_csv, k_tilde_table, k_xy_csv, k_xy_table};
use kmn_sandpile::GraphShape;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (m, n) = match args[..] {
        [m, n] => (m, n),
        _ => (5, 3),
    };
    let shape = GraphShape::new(m, n)?;
    println!("{} parking sorted configurations on K_{{{m},{n}}}\n", enumerate_parking_sorted(shape)?.len());
    let genus = ((m - 1) * (n - 1)) as i64;
    print!("{}", k_tilde_csv(&k_tilde_table(shape, -3, 2 * genus + 5)?));
    println!();
    print!("{}", k_xy_csv(&k_xy_table(shape, 10, 10)?));
    Ok(())
}
