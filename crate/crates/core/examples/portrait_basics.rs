//! Formal portraits: validation, forward images, eventual periodicity,
//! critical arcs and equivalence.

use orbitport::format::{parse_portrait, write_portrait};
use orbitport::portrait::{unlinked, FormalPortrait};
use orbitport::{AngleSet, Result};

fn main() -> Result<()> {
    let p = parse_portrait("valence: 3\ndegrees: periodic [2]\nA0: 1/14 1/7 2/7\n")?;
    println!("{}", write_portrait(&p).trim_end());
    for m in 0..3 {
        println!("A_{m} = {}", p.extend(m));
    }
    let c = p.detect_preperiodicity();
    println!("valid {}, preperiod {} period {}", p.is_valid(), c.preperiod, c.period);

    let cubic = FormalPortrait::constant(AngleSet::parse_list("1/6 1/3")?, 3)?;
    let cs = cubic.critical_structure(0)?;
    let (arc, k) = &cs.critical_arcs[0];
    println!("cubic: critical arc {arc} covers {} {k} times", cs.critical_value_arcs[0].0);

    let rotated = FormalPortrait::constant(AngleSet::parse_list("10/21 13/21 19/21")?, 2)?;
    let rabbit = FormalPortrait::constant(AngleSet::parse_list("1/7 2/7 4/7")?, 2)?;
    if let Some((theta, m1, m2)) = rotated.equivalent(&rabbit, 8) {
        println!("rotated rabbit = rabbit + {theta} (shifts {m1}, {m2})");
    }
    println!("A_0, A_1 unlinked: {}", unlinked(&rotated.extend(0), &rotated.extend(1))?);

    let broken = FormalPortrait::constant(AngleSet::parse_list("0 1/2")?, 2)?;
    println!("{{0, 1/2}} under doubling: {:?}", broken.validate());
    Ok(())
}
