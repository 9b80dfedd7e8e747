//! The operators phi, psi and psi_0, and the grid shifts T_a, T_b.

use kmn_sandpile::rank::{decompose_compact, is_parking_sorted, phi, psi, psi0, r_vector, t_a, t_b};
use kmn_sandpile::Configuration;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut u: Configuration = "<0,0,0,2,2,2;*|1,1,5,5,5>".parse()?;
    println!("phi chain:");
    println!("  {u}");
    while !is_parking_sorted(&u)? {
        u = phi(&u)?;
        println!("  {u}  r = {}", r_vector(&u)?);
    }
    println!("back up with psi: {}", psi(&u)?);

    let once = psi0(&u)?;
    println!("\npsi_0   {once}\npsi_0^2 {}", psi0(&once)?);

    let full = u.with_sink(Some(4));
    let moved = t_b(&t_a(&full)?)?;
    println!("\nT_b T_a {full} = {moved}");
    let shift = decompose_compact(&moved)?;
    println!("decomposed as T_a^{} T_b^{} of its parking form", shift.k_a, shift.k_b);
    Ok(())
}
