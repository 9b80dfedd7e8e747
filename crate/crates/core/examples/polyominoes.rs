//! Parallelogram polyominoes: transfer-matrix counts, the q-series quotient and
//! the decomposition identity.

use kmn_sandpile::genfunc::{p_via_l, polyomino_identity, polyomino_series, PolyominoWeights};
use kmn_sandpile::series::{Caps, Var};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let caps = Caps::new(10, 0, 5, 5);
    let p = polyomino_series(PolyominoWeights::plain(Var::X), caps);
    println!("P(q;w,h) up to q^10, w^5, h^5:");
    for line in p.dump_with(["q", "y", "w", "h"]).lines().take(12) {
        println!("  {line}");
    }
    println!("  ...");
    println!("equals qwh L(qw,qh)/L(w,h): {}", p == p_via_l(caps)?);
    let id = polyomino_identity(caps)?;
    println!("P = (qh + P(q;w,qh))(w + P): {} ({} coefficients)", id.passed, id.compared);
    Ok(())
}
