//! External rays of z³ + 3z/2: landing points, co-landing clusters and the
//! sector covering counts.

use orbitport::catalog::cubic_sequence;
use orbitport::portrait::FormalPortrait;
use orbitport::rays::{angle_grid, coland_clusters, landing_point, trace_ray, RayConfig};
use orbitport::verify::sector_theorem_check;
use orbitport::{Angle, AngleSet, Result};

fn main() -> Result<()> {
    let seq = cubic_sequence();
    let cfg = RayConfig::default();
    for s in ["0", "1/6", "1/4"] {
        let t: Angle = s.parse()?;
        let l = landing_point(&seq, 0, &t, &cfg)?;
        println!("ray {t:>4} lands at {:.9} (h_final {:.1e})", l.point, l.h_final);
    }

    let trace = trace_ray(&seq, 0, &"1/6".parse()?, 1e-6, &cfg)?;
    println!("ray 1/6 down to potential 1e-6: {} points", trace.points.len());
    for (h, z) in trace.points.iter().step_by(12) {
        println!("  h = {h:9.3e}  z = {z:.6}");
    }

    for c in coland_clusters(&seq, 0, &angle_grid(&[1, 2, 3, 6]), &cfg)? {
        let names: Vec<String> = c.angles.iter().map(|a| a.to_string()).collect();
        println!("{{{}}} land at {:.7}", names.join(", "), c.point);
    }

    let p = FormalPortrait::constant(AngleSet::parse_list("1/6 1/3")?, 3)?;
    let r = sector_theorem_check(&seq, &p, 0, &cfg)?;
    for q in &r.probes {
        println!("probe in image sector {}: preimages per sector {:?}", q.target, q.counts);
    }
    println!("sector check passed: {}", r.passed());
    Ok(())
}
