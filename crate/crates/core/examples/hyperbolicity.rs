//! Expansion rate, postcritical distance and the ray-length fit for a few
//! sequences.

use orbitport::catalog::cubic_sequence;
use orbitport::poly::{Polynomial, PolynomialSequence, SequenceBounds, C64};
use orbitport::rays::RayConfig;
use orbitport::verify::words::word_sequence;
use orbitport::verify::{hyperbolicity_estimate, postcritical_distance, ray_length_diagnostic};
use orbitport::Result;

fn main() -> Result<()> {
    let square = PolynomialSequence::constant(Polynomial::unicritical(2, C64::new(0.0, 0.0)), SequenceBounds::new(2, 1.0, 1.0)?)?;
    let h = hyperbolicity_estimate(&square, 0, 12, 200, 1)?;
    println!("z²: μ ≈ {:.5}, C ≈ {:.3}", h.mu_est, h.c_est);

    for w in ["0", "1", "0110"] {
        let seq = word_sequence(w)?;
        let h = hyperbolicity_estimate(&seq, 0, 12, 200, 1)?;
        let pd = postcritical_distance(&seq, 6, 12, 300, 1)?;
        let pc: Vec<String> = pd.postcritical.iter().map(|z| format!("{z:.3}")).collect();
        println!("word {w:>4}: μ ≈ {:.3}, PD ≈ {:.4}, postcritical {{{}}}", h.mu_est, pd.value, pc.join(", "));
    }

    let f = ray_length_diagnostic(&cubic_sequence(), 0, 12, &RayConfig::default())?;
    println!(
        "cubic ray tails: length ≈ {:.3}·G^{:.3} (envelope {:.3}, {} of {} held-out points above it)",
        f.c_fit, f.alpha_fit, f.c_envelope, f.violations, f.held_out
    );
    Ok(())
}
