//! Escape-time picture of the basilica and the cubic with four rays drawn.
//! Output goes to the directory given as the first argument (default: temp).

use std::path::PathBuf;

use orbitport::catalog::cubic_sequence;
use orbitport::poly::{Polynomial, PolynomialSequence, SequenceBounds, C64};
use orbitport::rays::RayConfig;
use orbitport::render::{render_escape, render_rays, ImageSpec, INTERIOR};
use orbitport::Result;

fn main() -> Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let basilica = PolynomialSequence::constant(Polynomial::unicritical(2, C64::new(-1.0, 0.0)), SequenceBounds::new(2, 1.0, 1.0)?)?;
    let spec = ImageSpec::new(C64::new(0.0, 0.0), 4.0, 480, 320)?;
    let img = render_escape(&basilica, &spec);
    let (x, y) = spec.pixel(C64::new(0.0, 0.0)).expect("0 is in frame");
    println!("pixel at 0 interior: {}", img.get(x, y) == INTERIOR);
    let out = dir.join("basilica.png");
    img.save(&out)?;
    println!("wrote {}", out.display());

    let angles: Vec<_> = ["0", "1/2", "1/6", "1/3"].iter().map(|s| s.parse().unwrap()).collect();
    let spec = ImageSpec::new(C64::new(0.0, 0.0), 4.0, 400, 400)?;
    let img = render_rays(&cubic_sequence(), &spec, &angles, &RayConfig::default())?;
    let out = dir.join("cubic_rays.ppm");
    img.save(&out)?;
    println!("wrote {}", out.display());
    Ok(())
}
