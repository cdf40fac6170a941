//! Sequence and config files, Green's function and Böttcher coordinate.

use orbitport::config::Config;
use orbitport::format::{parse_sequence, write_sequence};
use orbitport::poly::{escape_radius, C64};
use orbitport::Result;

fn main() -> Result<()> {
    let text = "# z² + c, c the rabbit parameter\nbounds {2,1,1}\ngenerator periodic [[-0.122561+0.744862i,0,1]]\n";
    let seq = parse_sequence(text)?;
    print!("{}", write_sequence(&seq));
    println!("escape radius {}", escape_radius(seq.bounds()));

    let z = C64::new(1.0, 1.0);
    let g = seq.green(0, z, 1e-15);
    let b = seq.bottcher(0, z, 1e-15)?;
    let g1 = seq.green(1, seq.poly(1).eval(z), 1e-15);
    println!("G_0(z) = {:.12}, G_1(P(z)) / 2 = {:.12}", g.value, g1.value / 2.0);
    println!("φ_0(z) = {b:.9}, log|φ_0(z)| = {:.12}", b.norm().ln());

    let cfg = Config::parse("land_tol = 1e-8\nseed = 42\n")?;
    print!("{}", cfg.to_text());
    println!("config hash {}", cfg.hash());
    Ok(())
}
