//! Sequences built from z²−1 and z³ by a binary word, and measurement of
//! their symmetric portrait {θ_m, 1−θ_m}.
//!
//! P_m = z²−1 at odd m and P_{2k} = z²−1 or z³ according to letter k.
//! Both maps preserve [−1, 0] and the postcritical set {0, −1}. The rays
//! θ_m, 1−θ_m land at the point p_m of (−1, 0) separating the Fatou
//! component of 0 from that of −1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::angle::{Angle, AngleSet};
use crate::error::{Error, Result};
use crate::poly::{Generator, Polynomial, PolynomialSequence, SequenceBounds, C64};
use crate::portrait::{DegreeSequence, FormalPortrait, WordRule};
use crate::rays::{landing_point, RayConfig};

fn check_word(word: &str) -> Result<()> {
    if word.is_empty() || !word.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::Config(format!("word must be a non-empty binary string, got {word:?}")));
    }
    Ok(())
}

pub fn word_sequence(word: &str) -> Result<PolynomialSequence> {
    check_word(word)?;
    let quad = Polynomial::unicritical(2, C64::new(-1.0, 0.0));
    let cube = Polynomial::unicritical(3, C64::new(0.0, 0.0));
    PolynomialSequence::new(
        Generator::Word { word: word.to_string(), zero: quad.clone(), one: cube, odd: Some(quad) },
        SequenceBounds::new(3, 1.0, 1.0)?,
    )
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// θ_0 of the symmetric portrait, exactly.
///
/// Going forward, θ ↦ 1−2θ under z²−1 and θ ↦ 3θ−1 under z³ (the pair
/// {θ, 1−θ} maps to the pair of the next time). One period of the word
/// composes to an affine contraction whose fixed point is θ_0.
pub fn word_angle(word: &str) -> Result<Angle> {
    check_word(word)?;
    // θ_0 = a·θ_{2L} + b, built from the back
    let (mut a, mut b) = (BigRational::one(), BigRational::zero());
    for letter in word.bytes().rev() {
        // θ_{odd} from θ_{even next}
        let (s, t) = if letter == b'0' { (rat(-1, 2), rat(1, 2)) } else { (rat(1, 3), rat(1, 3)) };
        a = &s * &a;
        b = &s * &b + t;
        // θ_{even} from θ_{odd}
        a = rat(-1, 2) * &a;
        b = rat(-1, 2) * &b + rat(1, 2);
    }
    let theta = b / (BigRational::one() - a);
    Ok(Angle::from_rational(theta))
}

pub fn word_portrait(word: &str) -> Result<FormalPortrait> {
    let t = word_angle(word)?;
    let degrees = DegreeSequence::word(WordRule { word: word.to_string(), zero: 2, one: 3, odd: Some(2) })?;
    Ok(FormalPortrait::new(AngleSet::new(vec![t.clone(), t.neg()])?, degrees))
}

/// The point of (−1, 0) where the real orbits stop following 0 and start
/// following −1, to within `tol`.
pub fn real_boundary_point(seq: &PolynomialSequence, m: usize, tol: f64) -> Result<f64> {
    // +1 when the orbit of x settles on the track of 0, −1 for the track of −1
    let classify = |x: f64| -> Result<i8> {
        let (mut x, mut a, mut b) = (C64::new(x, 0.0), C64::new(0.0, 0.0), C64::new(-1.0, 0.0));
        for j in m + 1..m + 4000 {
            let p = seq.poly(j);
            x = p.eval(x);
            a = p.eval(a);
            b = p.eval(b);
            if (x - a).norm() < 1e-6 {
                return Ok(1);
            }
            if (x - b).norm() < 1e-6 {
                return Ok(-1);
            }
        }
        Err(Error::BisectionFailure(format!("orbit of {} follows neither track", x.re)))
    };
    let (mut lo, mut hi) = (-1.0 + 1e-9, -1e-9);
    if classify(lo)? != -1 || classify(hi)? != 1 {
        return Err(Error::BisectionFailure("endpoints do not follow their own tracks".into()));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if classify(mid)? == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Options of the angle search.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchOptions {
    /// log₂ of the starting dyadic denominator.
    pub start_bits: u32,
    pub end_bits: u32,
    pub bisect_tol: f64,
    /// Rays are traced only this deep during the search.
    pub h_min: f64,
    /// Largest accepted distance between the best landing and p_m. Landing
    /// maps are only Hölder near p_m, so nearby dyadic rays can still land
    /// a few 10⁻² away.
    pub accept: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { start_bits: 10, end_bits: 24, bisect_tol: 1e-12, h_min: 1e-30, accept: 0.1 }
    }
}

/// Measured portrait of one word at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct WordMeasurement {
    pub word: String,
    pub time: usize,
    /// p_m on (−1, 0).
    pub p: f64,
    /// Best dyadic angle found and the radius of its uncertainty interval.
    pub theta: Angle,
    pub radius: f64,
    /// |landing(θ) − p_m| for the reported θ.
    pub landing_gap: f64,
    /// Degree of P_{m+1}.
    pub next_degree: usize,
    /// Length of the critical arc (1−θ, θ) under P_{m+1}.
    pub critical_arc: f64,
    pub value_arc: f64,
}

/// Locate p_m, then search dyadic angles in [1/4, 1/2] for the ray landing nearest to it.
pub fn measure_word(word: &str, m: usize, opts: &SearchOptions, cfg: &RayConfig) -> Result<WordMeasurement> {
    let seq = word_sequence(word)?;
    let p = real_boundary_point(&seq, m, opts.bisect_tol)?;
    let target = C64::new(p, 0.0);
    let rcfg = RayConfig { h_min: opts.h_min, ..cfg.clone() };
    let gap = |num: u64, bits: u32| -> Option<f64> {
        let a = Angle::from_big(num.into(), (1u64 << bits).into()).ok()?;
        landing_point(&seq, m, &a, &rcfg).ok().map(|l| (l.point - target).norm())
    };
    let mut bits = opts.start_bits;
    let q = 1u64 << bits;
    let mut best: Option<(u64, f64)> = None;
    for j in q / 4..=q / 2 {
        if let Some(g) = gap(j, bits) {
            if best.map_or(true, |b| g < b.1) {
                best = Some((j, g));
            }
        }
    }
    let (mut num, mut g) = best.ok_or_else(|| Error::AngleSearchFailure("no ray in [1/4, 1/2] landed".into()))?;
    while bits < opts.end_bits {
        bits += 1;
        num *= 2;
        let centre = num;
        for k in -3i64..=3 {
            let j = centre as i64 + k;
            if k == 0 || j <= 0 {
                continue;
            }
            if let Some(h) = gap(j as u64, bits) {
                if h < g {
                    g = h;
                    num = j as u64;
                }
            }
        }
    }
    if g > opts.accept {
        return Err(Error::AngleSearchFailure(format!("closest landing is {g:.3e} from p_{m} = {p}")));
    }
    let theta = Angle::from_big(num.into(), (1u64 << bits).into())?;
    let d = seq.degree(m + 1);
    let crit = 2.0 * theta.to_f64();
    let value = (d as f64 * crit).fract();
    Ok(WordMeasurement {
        word: word.to_string(),
        time: m,
        p,
        theta,
        radius: 2f64.powi(-(bits as i32) + 1),
        landing_gap: g,
        next_degree: d,
        critical_arc: crit,
        value_arc: value,
    })
}

/// Comparison of two words at the time before their first difference.
#[derive(Clone, Debug, PartialEq)]
pub struct WordReport {
    /// 1-based index of the first differing letter (None for equal words).
    pub first_difference: Option<usize>,
    pub time: usize,
    pub first: WordMeasurement,
    pub second: WordMeasurement,
    pub arc_tol: f64,
}

impl WordReport {
    fn sides(&self) -> Option<(&WordMeasurement, &WordMeasurement)> {
        self.first_difference?;
        if self.first.next_degree == 3 {
            Some((&self.first, &self.second))
        } else {
            Some((&self.second, &self.first))
        }
    }

    /// Cubic side: critical arc ≥ 5/6 − tol and value arc ≥ 1/2.
    pub fn cubic_ok(&self) -> bool {
        self.sides().is_some_and(|(c, _)| c.critical_arc >= 5.0 / 6.0 - self.arc_tol && c.value_arc >= 0.5)
    }

    /// Quadratic side: critical arc ≤ 3/4 + tol and value arc < 1/2.
    pub fn quadratic_ok(&self) -> bool {
        self.sides().is_some_and(|(_, q)| q.critical_arc <= 0.75 + self.arc_tol && q.value_arc < 0.5)
    }

    pub fn lengths_differ(&self) -> bool {
        (self.first.critical_arc - self.second.critical_arc).abs() > 1e-6
    }

    pub fn passed(&self) -> bool {
        match self.first_difference {
            Some(_) => self.cubic_ok() && self.quadratic_ok() && self.lengths_differ(),
            None => (self.first.critical_arc - self.second.critical_arc).abs() < 1e-6,
        }
    }
}

/// Words are compared cyclically up to the longer length.
pub fn first_difference(w1: &str, w2: &str) -> Option<usize> {
    let n = w1.len().max(w2.len());
    let (a, b) = (w1.as_bytes(), w2.as_bytes());
    (0..n).find(|&i| a[i % a.len()] != b[i % b.len()]).map(|i| i + 1)
}

pub fn word_experiment(w1: &str, w2: &str, arc_tol: f64, opts: &SearchOptions, cfg: &RayConfig) -> Result<WordReport> {
    check_word(w1)?;
    check_word(w2)?;
    let k = first_difference(w1, w2);
    let time = k.map_or(0, |k| 2 * k - 1);
    let first = measure_word(w1, time, opts, cfg)?;
    let second = measure_word(w2, time, opts, cfg)?;
    Ok(WordReport { first_difference: k, time, first, second, arc_tol })
}

#[cfg(test)]
mod tests {
    use super::*;

    // inverse branches iterated in floating point until they settle
    fn oracle_theta0(word: &str) -> f64 {
        let mut t = 0.3;
        for _ in 0..200 {
            for letter in word.bytes().rev() {
                t = if letter == b'0' { (1.0 - t) / 2.0 } else { (1.0 + t) / 3.0 };
                t = (1.0 - t) / 2.0;
            }
        }
        t
    }

    #[test]
    fn exact_angles() {
        assert_eq!(word_angle("0").unwrap(), "1/3".parse().unwrap());
        assert_eq!(word_angle("1").unwrap(), "2/7".parse().unwrap());
        for w in ["01", "0110", "111000101"] {
            assert!((word_angle(w).unwrap().to_f64() - oracle_theta0(w)).abs() < 1e-14);
        }
    }

    #[test]
    fn word_portraits_are_valid() {
        for w in ["0", "1", "01", "0010111"] {
            assert!(word_portrait(w).unwrap().is_valid(), "{w}");
        }
    }

    #[test]
    fn bad_words() {
        assert!(word_sequence("").is_err());
        assert!(word_sequence("012").is_err());
    }

    #[test]
    fn basilica_boundary_point_is_alpha() {
        let s = word_sequence("0").unwrap();
        let p = real_boundary_point(&s, 0, 1e-12).unwrap();
        assert!((p - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-10, "{p}");
    }

    #[test]
    fn first_differences() {
        assert_eq!(first_difference("0", "1"), Some(1));
        assert_eq!(first_difference("001", "011"), Some(2));
        assert_eq!(first_difference("01", "0101"), None);
    }

    #[test]
    fn search_recovers_a_periodic_angle() {
        let opts = SearchOptions { end_bits: 18, ..SearchOptions::default() };
        let w = measure_word("0", 0, &opts, &RayConfig::default()).unwrap();
        assert!((w.theta.to_f64() - 1.0 / 3.0).abs() <= w.radius, "{w:?}");
    }
}

#[cfg(test)]
mod experiment_tests {
    use super::*;

    #[test]
    fn words_differing_at_the_first_letter() {
        let r = word_experiment("0", "1", 1e-3, &SearchOptions::default(), &RayConfig::default()).unwrap();
        assert_eq!((r.first_difference, r.time), (Some(1), 1));
        assert!(r.passed(), "{r:?}");
        // time-1 angles from the exact portraits
        for m in [&r.first, &r.second] {
            let exact = word_portrait(&m.word).unwrap().labelled(1)[0].centered_f64().abs();
            let exact = exact.min(1.0 - exact);
            assert!((m.theta.to_f64() - exact).abs() <= m.radius, "{m:?} vs {exact}");
        }
    }

    #[test]
    fn a_word_against_itself() {
        let r = word_experiment("0110", "0110", 1e-3, &SearchOptions { end_bits: 14, ..SearchOptions::default() }, &RayConfig::default()).unwrap();
        assert_eq!(r.first_difference, None);
        assert_eq!(r.first, r.second);
        assert!(r.passed());
    }
}
