//! Sequences built from z² − 1 and z³ by a binary word: the measured
//! critical arc before the first differing letter, against the exact angle.

use orbitport::rays::RayConfig;
use orbitport::verify::words::{measure_word, word_angle, word_experiment, SearchOptions};
use orbitport::Result;

fn main() -> Result<()> {
    let cfg = RayConfig::default();
    let opts = SearchOptions::default();
    let r = word_experiment("0110", "1001", 1e-3, &opts, &cfg)?;
    println!("first difference at letter {:?}, measured at time {}", r.first_difference, r.time);
    for m in [&r.first, &r.second] {
        println!(
            "  {}: p = {:.9}, θ = {} ± {:.1e}, degree {}, critical arc {:.6}, value arc {:.6}",
            m.word, m.p, m.theta, m.radius, m.next_degree, m.critical_arc, m.value_arc
        );
    }
    println!("cubic side ok {}, quadratic side ok {}", r.cubic_ok(), r.quadratic_ok());

    for w in ["0", "1", "011", "110"] {
        let m = measure_word(w, 0, &opts, &cfg)?;
        let exact = word_angle(w)?;
        println!("{w:>4}: measured θ {:.9}, exact {exact} = {:.9}", m.theta.to_f64(), exact.to_f64());
    }
    Ok(())
}
