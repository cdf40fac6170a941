//! Ray-length diagnostic: arclength of ray tails against potential.

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::poly::PolynomialSequence;
use crate::rays::{trace_many, RayConfig};

use super::julia::least_squares;

/// ℓ ≈ C·G^α fitted on half of the rays, checked on the other half.
#[derive(Clone, Debug, PartialEq)]
pub struct JohnFit {
    pub c_fit: f64,
    pub alpha_fit: f64,
    /// Fitted slope's rms residual in log units.
    pub residual: f64,
    /// Envelope constant: smallest C with ℓ ≤ C·G^α on the training rays.
    pub c_envelope: f64,
    pub samples: usize,
    /// Held-out samples above 2·c_envelope·G^α.
    pub violations: usize,
    pub held_out: usize,
}

impl JohnFit {
    pub fn violation_fraction(&self) -> f64 {
        if self.held_out == 0 {
            0.0
        } else {
            self.violations as f64 / self.held_out as f64
        }
    }
}

/// Trace rays at the angles (2k+1)/(2·rays+1), collect (G, tail length) for potentials in
/// [10⁸·h_final, 0.1] and fit.
pub fn ray_length_diagnostic(seq: &PolynomialSequence, m: usize, rays: usize, cfg: &RayConfig) -> Result<JohnFit> {
    if rays < 2 {
        return Err(Error::Config("need at least two rays".into()));
    }
    let angles: Vec<Angle> = (0..rays)
        .map(|k| Angle::new(2 * k as u64 + 1, 2 * rays as u64 + 1))
        .collect::<Result<_>>()?;
    let traces = trace_many(seq, m, &angles, cfg);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (i, r) in traces.into_iter().enumerate() {
        let (t, l) = r?;
        if !l.converged {
            return Err(Error::NonConvergent { h: l.h_final, spread: l.spread });
        }
        let lo = l.h_final * 1e8;
        let bucket = if i % 2 == 0 { &mut train } else { &mut test };
        for &(h, _) in &t.points {
            if h <= 0.1 && h >= lo {
                let len = t.tail_length(h);
                if len > 0.0 {
                    bucket.push((h.ln(), len.ln()));
                }
            }
        }
    }
    if train.len() < 2 {
        return Err(Error::Config("too few ray points below potential 0.1".into()));
    }
    let (alpha, logc, residual) = least_squares(train.iter().copied());
    let env = train.iter().map(|&(x, y)| y - alpha * x).fold(f64::NEG_INFINITY, f64::max);
    let bound = env + 2f64.ln();
    let violations = test.iter().filter(|&&(x, y)| y > bound + alpha * x).count();
    Ok(JohnFit {
        c_fit: logc.exp(),
        alpha_fit: alpha,
        residual,
        c_envelope: env.exp(),
        samples: train.len() + test.len(),
        violations,
        held_out: test.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Polynomial, SequenceBounds, C64};

    fn quad(c: f64) -> PolynomialSequence {
        PolynomialSequence::constant(Polynomial::unicritical(2, C64::new(c, 0.0)), SequenceBounds::new(2, 1.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn straight_rays_have_unit_exponent() {
        let f = ray_length_diagnostic(&quad(0.0), 0, 6, &RayConfig::default()).unwrap();
        assert!((f.alpha_fit - 1.0).abs() < 0.02, "{f:?}");
        assert_eq!(f.violations, 0);
    }

    #[test]
    fn basilica_fit() {
        let f = ray_length_diagnostic(&quad(-1.0), 0, 8, &RayConfig::default()).unwrap();
        assert!(f.alpha_fit > 0.0, "{f:?}");
        assert_eq!(f.violations, 0, "{f:?}");
    }
}
