//! The rabbit conjugated by a rotation of order three: rays 10/21, 13/21,
//! 19/21 co-land, and the measured portrait links times 0 and 1.

use orbitport::catalog::{get_example, rabbit_alpha, rabbit_rotation_sequence};
use orbitport::poly::C64;
use orbitport::rays::{angle_grid, coland_clusters, measure_matching, measured_portrait, RayConfig};
use orbitport::Result;

fn main() -> Result<()> {
    let seq = rabbit_rotation_sequence();
    let cfg = RayConfig::default();
    let w = C64::from_polar(1.0, std::f64::consts::TAU / 3.0);
    let angles = ["10/21", "13/21", "19/21"].map(|s| s.parse().unwrap());
    let cl = coland_clusters(&seq, 0, &angles, &cfg)?;
    println!("{} cluster(s); point {:.9}, ω·α = {:.9}", cl.len(), cl[0].point, w * rabbit_alpha());

    let mp = measured_portrait(&seq, &[0, 1], &angle_grid(&[21]), &cfg)?;
    for (ti, a, b) in &mp.links {
        let (c0, c1) = (&mp.clusters[*ti][*a], &mp.clusters[ti + 1][*b]);
        if c0.multiplicity() > 1 {
            let s = |c: &orbitport::rays::Cluster| c.angles.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            println!("time {}: {{{}}} -> {{{}}}", mp.times[*ti], s(c0), s(c1));
        }
    }
    println!("largest multiplicity {}", mp.max_multiplicity());

    let entry = get_example("rabbit_rotation")?;
    for chords in measure_matching(&seq, &entry.portrait, 0, &cfg)? {
        println!("measured matching: {}", chords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "));
    }
    Ok(())
}
