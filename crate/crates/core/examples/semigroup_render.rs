//! Union of filled sets over random {z² − 1, z³} word sequences.

use std::path::PathBuf;

use orbitport::poly::C64;
use orbitport::render::{render_semigroup, semigroup_words, ImageSpec, SEMIGROUP_CONVENTION};
use orbitport::Result;

fn main() -> Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let spec = ImageSpec::new(C64::new(-0.3, 0.0), 3.6, 360, 300)?;
    println!("convention: {SEMIGROUP_CONVENTION}");
    for w in semigroup_words(4, 16, 7) {
        println!("  word {w}");
    }
    let img = render_semigroup(24, &spec, 7)?;
    let out = dir.join("semigroup.png");
    img.save(&out)?;
    println!("wrote {}", out.display());
    Ok(())
}
