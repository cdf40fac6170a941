//! Julia-set sampling, postcritical distance and expansion estimates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::{PolynomialSequence, C64};

/// Potential of the returned samples is below this.
const SAMPLE_POTENTIAL: f64 = 1e-12;

fn rng_for(seed: u64, m: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (m as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Approximate points of J_m by random inverse iteration.
///
/// Each sample starts on the circle |w| = 2R at some later time n and is
/// pulled back through P_n, …, P_{m+1} with a random root at every step.
/// The result is an escaping point of potential below 10⁻¹², hence within
/// a tiny distance of J_m. Deterministic in (seed, m).
pub fn julia_sample(seq: &PolynomialSequence, m: usize, count: usize, seed: u64) -> Result<Vec<C64>> {
    if count == 0 {
        return Ok(vec![]);
    }
    let r = 2.0 * seq.escape_radius();
    let mut depth = 0;
    let mut deg = 1.0;
    while r.ln() / deg >= SAMPLE_POTENTIAL {
        depth += 1;
        deg *= seq.degree(m + depth) as f64;
    }
    let mut rng = rng_for(seed, m);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut w = C64::from_polar(r, std::f64::consts::TAU * rng.gen::<f64>());
        for j in (m + 1..=m + depth).rev() {
            let roots = seq.poly(j).preimages(w)?;
            w = roots[rng.gen_range(0..roots.len())];
        }
        out.push(w);
    }
    Ok(out)
}

/// Sampled postcritical distance.
#[derive(Clone, Debug, PartialEq)]
pub struct PDEstimate {
    pub value: f64,
    pub m_max: usize,
    pub n_max: usize,
    pub julia_sample_size: usize,
    /// Distinct critical values of the Q_{m,n} seen (merged within 10⁻¹⁰).
    pub postcritical: Vec<C64>,
}

/// Critical values of Q_{m,n}: Q_{j,n}(P_j(c)) over m < j ≤ n and critical points c of P_j.
pub fn critical_values(seq: &PolynomialSequence, m: usize, n: usize) -> Result<Vec<C64>> {
    let r = seq.escape_radius();
    let mut out = Vec::new();
    for j in m + 1..=n {
        for c in seq.poly(j).critical_points()? {
            let mut w = seq.poly(j).eval(c);
            for (t, i) in (j + 1..=n).enumerate() {
                if w.norm() > r {
                    return Err(Error::EscapingCritical { time: j + t });
                }
                w = seq.poly(i).eval(w);
            }
            if w.norm() > r {
                return Err(Error::EscapingCritical { time: n });
            }
            out.push(w);
        }
    }
    Ok(out)
}

/// min over 0 ≤ m ≤ m_max, m < n ≤ n_max of dist(critical values of Q_{m,n}, sampled J_n).
///
/// J_n samples depend only on (seed, n), so widening the horizon can only
/// lower the estimate.
pub fn postcritical_distance(seq: &PolynomialSequence, m_max: usize, n_max: usize, sample: usize, seed: u64) -> Result<PDEstimate> {
    let mut value = f64::INFINITY;
    let mut post: Vec<C64> = Vec::new();
    for n in 1..=n_max {
        let j = julia_sample(seq, n, sample, seed)?;
        for m in 0..=m_max.min(n - 1) {
            for v in critical_values(seq, m, n)? {
                if !post.iter().any(|p| (p - v).norm() < 1e-10) {
                    post.push(v);
                }
                for z in &j {
                    value = value.min((z - v).norm());
                }
            }
        }
    }
    Ok(PDEstimate { value, m_max, n_max, julia_sample_size: sample, postcritical: post })
}

/// Fit of min_z log|Q'_{m,m+i}(z)| ≈ log C + i·log μ over sampled Julia points.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperbolicityEstimate {
    pub c_est: f64,
    pub mu_est: f64,
    /// Root-mean-square residual of the fit in log units.
    pub residual: f64,
    pub samples: usize,
    pub horizon: usize,
}

pub fn hyperbolicity_estimate(seq: &PolynomialSequence, m: usize, horizon: usize, samples: usize, seed: u64) -> Result<HyperbolicityEstimate> {
    if horizon < 2 || samples == 0 {
        return Err(Error::Config("hyperbolicity fit needs horizon ≥ 2 and samples ≥ 1".into()));
    }
    let pts = julia_sample(seq, m, samples, seed)?;
    let mut minlog = vec![f64::INFINITY; horizon];
    for z in pts {
        let mut w = z;
        let mut logd = 0.0;
        for i in 0..horizon {
            let (v, dv) = seq.poly(m + i + 1).eval_with_derivative(w);
            logd += dv.norm().ln();
            w = v;
            minlog[i] = minlog[i].min(logd);
        }
    }
    let (slope, intercept, residual) = least_squares(minlog.iter().enumerate().map(|(i, &y)| ((i + 1) as f64, y)));
    Ok(HyperbolicityEstimate { c_est: intercept.exp(), mu_est: slope.exp(), residual, samples, horizon })
}

/// Ordinary least squares y ≈ a·x + b; returns (a, b, rms residual).
pub(crate) fn least_squares(pts: impl Iterator<Item = (f64, f64)>) -> (f64, f64, f64) {
    let pts: Vec<(f64, f64)> = pts.collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let a = sxy / sxx;
    let b = my - a * mx;
    let rms = (pts.iter().map(|p| (p.1 - a * p.0 - b).powi(2)).sum::<f64>() / n).sqrt();
    (a, b, rms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Polynomial, SequenceBounds};

    fn constant(c: f64) -> PolynomialSequence {
        PolynomialSequence::constant(
            Polynomial::unicritical(2, C64::new(c, 0.0)),
            SequenceBounds::new(2, 1.0, c.abs().max(1.0)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn circle_samples() {
        let pts = julia_sample(&constant(0.0), 0, 200, 7).unwrap();
        assert_eq!(pts.len(), 200);
        assert!(pts.iter().all(|z| (z.norm() - 1.0).abs() < 1e-6));
        assert!(julia_sample(&constant(0.0), 0, 0, 7).unwrap().is_empty());
    }

    #[test]
    fn basilica_samples_sit_on_the_boundary() {
        let s = constant(-1.0);
        for z in julia_sample(&s, 0, 100, 3).unwrap() {
            let g = s.green(0, z, 1e-14);
            assert!(g.escaped && g.value < 1e-6);
        }
    }

    #[test]
    fn samples_are_deterministic() {
        let s = constant(-1.0);
        assert_eq!(julia_sample(&s, 2, 20, 11).unwrap(), julia_sample(&s, 2, 20, 11).unwrap());
        assert_ne!(julia_sample(&s, 2, 20, 11).unwrap(), julia_sample(&s, 2, 20, 12).unwrap());
    }

    #[test]
    fn basilica_pd_matches_distance_from_its_critical_cycle() {
        let s = constant(-1.0);
        let pd = postcritical_distance(&s, 2, 4, 400, 5).unwrap();
        assert!(pd.value > 0.05, "{}", pd.value);
        assert_eq!(pd.postcritical.len(), 2);
        let j = julia_sample(&s, 4, 400, 5).unwrap();
        let oracle = j
            .iter()
            .map(|z| z.norm().min((z + 1.0).norm()))
            .fold(f64::INFINITY, f64::min);
        assert!(pd.value <= oracle + 1e-12);
    }

    #[test]
    fn pd_is_monotone_in_the_horizon() {
        let s = constant(-1.0);
        let a = postcritical_distance(&s, 1, 3, 200, 9).unwrap().value;
        let b = postcritical_distance(&s, 2, 5, 200, 9).unwrap().value;
        assert!(b <= a);
    }

    #[test]
    fn escaping_critical_orbit() {
        let s = PolynomialSequence::constant(Polynomial::unicritical(2, C64::new(3.0, 0.0)), SequenceBounds::new(2, 1.0, 3.0).unwrap()).unwrap();
        assert!(matches!(postcritical_distance(&s, 1, 4, 10, 1), Err(Error::EscapingCritical { .. })));
    }

    #[test]
    fn expansion_of_z_squared() {
        let h = hyperbolicity_estimate(&constant(0.0), 0, 12, 100, 1).unwrap();
        assert!((h.mu_est - 2.0).abs() < 0.02, "{}", h.mu_est);
    }

    #[test]
    fn basilica_expands() {
        let h = hyperbolicity_estimate(&constant(-1.0), 0, 16, 300, 1).unwrap();
        assert!(h.mu_est > 1.0, "{}", h.mu_est);
    }
}
