//! Pulling back the critical value arc under a degree-6 map and grouping a
//! noncrossing matching into preimage components.

use orbitport::lamination::{catalan, check_lamination, enumerate_matchings, face_groups, parse_chords, pullback_endpoints};
use orbitport::{Arc, Result};

fn main() -> Result<()> {
    let crit = Arc::new("11/36".parse()?, "7/36".parse()?)?;
    let value = Arc::new("5/6".parse()?, "1/6".parse()?)?;
    let (alphas, betas) = pullback_endpoints(&crit, 6, &value)?;
    let show = |v: &[orbitport::Angle]| v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ");
    println!("α preimages: {}", show(&alphas));
    println!("β preimages: {}", show(&betas));

    let all = enumerate_matchings(&alphas, &betas)?;
    println!("{} noncrossing matchings (Catalan number {})", all.len(), catalan(6));

    let matching = parse_chords("{7/36,11/36},{13/36,17/36},{19/36,5/36},{23/36,31/36},{25/36,29/36},{35/36,1/36}")?;
    let lam = face_groups(&matching, 6, &crit, &value)?;
    println!("{lam}");
    println!("degrees {:?}", lam.groups.iter().map(|g| g.degree).collect::<Vec<_>>());
    check_lamination(&lam, 6, 6)?;
    Ok(())
}
