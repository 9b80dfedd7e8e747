//! Cylindric diagram of a parking sorted configuration and its boundary sinks.
//!
//!     cargo run --example cylindric -- svg > diagram.svg

use kmn_sandpile::cylindric::{boundary_sets, rank_via_cylindric, xpara, ypara};
use kmn_sandpile::render::{cylindric_diagram, diagram_of, render_svg, render_text};
use kmn_sandpile::Configuration;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u: Configuration = "<0,0,0,3,3,3;21|0,0,0,3,3>".parse()?;
    let spec = cylindric_diagram(&u)?;
    if std::env::args().nth(1).as_deref() == Some("svg") {
        print!("{}", render_svg(&spec));
        return Ok(());
    }
    print!("{}", render_text(&diagram_of(&u.with_sink(None))?));
    println!();
    print!("{}", render_text(&spec));
    println!("rank from right labels: {}", rank_via_cylindric(&u)?);
    println!("xpara {}, ypara {}", xpara(&u)?, ypara(&u)?);

    let small: Configuration = "<0,0,0;*|0,0,1>".parse()?;
    let sets = boundary_sets(&small)?;
    println!("\nboundary sinks of {small}: positive {:?}, negative {:?}", sets.s_plus, sets.s_minus);
    Ok(())
}
