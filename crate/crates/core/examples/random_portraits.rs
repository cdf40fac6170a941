//! Random constant-degree portraits always settle into a cycle.

use orbitport::portrait::random_valid_portrait;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut longest = (0, 0);
    for i in 0..200 {
        let p = random_valid_portrait(&mut rng, 6, 10_000, 6);
        let c = p.detect_preperiodicity();
        if i < 5 {
            println!("A_0 = {} degree {}: preperiod {} period {}", p.initial_set(), p.degrees(), c.preperiod, c.period);
        }
        longest = longest.max((c.preperiod + c.period, c.period));
    }
    println!("longest preperiod + period over 200 portraits: {}", longest.0);
}
